"""The round machine: game setup, ruled transitions, decision application and terminal detection.

All transition functions mutate the state they are given and return it; callers that
need the old state copy it first.
"""

from __future__ import annotations

from .actions import (
    AssignDefenders, CommitSubset, DeclareAttack, EndPlanning, Pass, PlayCard, TravelTo,
    legal_actions, payers, undefended_target,
)
from .rng import Stream
from .state import (
    DECISION_STAGES, THREAT_LIMIT, Character, EngineError, EnemyInPlay, GameState,
    IllegalAction, LocationInPlay, MissingDecision, Stage, TerminalStatus, in_play,
)

OPENING_HAND = 6


def draw_player_card(state):
    if state.player_deck:
        state.hand.append(state.player_deck.pop())


def init_game(scenario, seed):
    rng = Stream(seed)
    player_deck = list(scenario.player_deck)
    encounter_deck = list(scenario.encounter_deck)
    rng.shuffle(player_deck)
    rng.shuffle(encounter_deck)
    state = GameState(
        round_number=1,
        stage=Stage.Resource,
        threat_level=sum(h.defn.threat_cost for h in scenario.heroes),
        heroes=[Character(h) for h in scenario.heroes],
        allies=[],
        hand=[],
        player_deck=player_deck,
        player_discard=[],
        encounter_deck=encounter_deck,
        encounter_discard=[],
        staging_area=[in_play(c) for c in scenario.pre_staged],
        engagement_area=[],
        active_location=None,
        quest_progress=0,
        quest_target=scenario.quest_target,
        rng=rng,
        pending_defense=None,
        pending_attack=None,
        scenario=scenario,
    )
    for _ in range(OPENING_HAND):
        draw_player_card(state)
    return state


# -- ruled stages ------------------------------------------------------------

def resource_stage(state):
    for h in state.heroes:
        if h.alive:
            h.resources += 1
    draw_player_card(state)
    state.stage = Stage.Planning
    return state


def draw_stage(state):
    draw_player_card(state)
    state.stage = Stage.Planning
    return state


def staging_reveal(state):
    if not state.encounter_deck and state.encounter_discard:
        state.encounter_deck = state.encounter_discard
        state.encounter_discard = []
        state.rng.shuffle(state.encounter_deck)
    if state.encounter_deck:
        state.staging_area.append(in_play(state.encounter_deck.pop()))
    state.stage = Stage.QuestResolution
    return state


def quest_resolution(state):
    willpower = sum(c.card.defn.willpower for c in state.heroes + state.allies if c.committed)
    diff = willpower - state.staging_threat()
    if diff > 0:
        loc = state.active_location
        if loc is not None:
            used = min(diff, loc.card.defn.quest_points - loc.progress)
            loc.progress += used
            diff -= used
            if loc.progress >= loc.card.defn.quest_points:
                state.encounter_discard.append(loc.card)
                state.active_location = None
        state.quest_progress = min(state.quest_target, state.quest_progress + diff)
    elif diff < 0:
        state.threat_level -= diff
    state.stage = Stage.Travel
    return state


def engagement_check(state):
    staying = []
    for x in state.staging_area:
        if isinstance(x, EnemyInPlay) and x.card.defn.engagement_cost <= state.threat_level:
            state.engagement_area.append(x)
        else:
            staying.append(x)
    state.staging_area = staying
    state.stage = Stage.DeclareDefenders
    return state


def resolve_attack(attack, defense=None):
    """Damage dealt by one attack; defense None means undefended (defense ignored)."""
    if attack < 0:
        raise EngineError(f"negative attack {attack}")
    if defense is None:
        return attack
    return max(0, attack - defense)


def resolve_enemy_attacks(state):
    chars = {c.card.uid: c for c in state.heroes + state.allies}
    defenders = dict(state.pending_defense or ())
    for enemy in state.engagement_area:
        atk = enemy.card.defn.attack
        duid = defenders.get(enemy.card.uid)
        if duid is not None:
            d = chars[duid]
            d.damage += resolve_attack(atk, d.card.defn.defense)
            continue
        hero = undefended_target(state.heroes)
        if hero is None:
            break  # every hero is dead; the game is already lost
        hero.damage += resolve_attack(atk)
    state.pending_defense = None
    state.stage = Stage.DeclareAttackers
    return state


def resolve_player_attacks(state):
    if state.pending_attack is not None:
        euid, attackers = state.pending_attack
        enemy = next(e for e in state.engagement_area if e.card.uid == euid)
        total = sum(c.card.defn.attack for c in state.heroes + state.allies if c.card.uid in attackers)
        enemy.damage += resolve_attack(total, enemy.card.defn.defense)
        state.pending_attack = None
    if state.actors() and any(e.alive for e in state.engagement_area):
        state.stage = Stage.DeclareAttackers
    else:
        state.stage = Stage.Refresh
    return state


def refresh(state):
    for zone in (state.heroes, state.allies):
        alive = []
        for c in zone:
            if c.alive:
                c.tapped = False
                c.committed = False
                alive.append(c)
            else:
                state.player_discard.append(c.card)
        zone[:] = alive
    engaged = []
    for e in state.engagement_area:
        if e.alive:
            engaged.append(e)
        else:
            state.encounter_discard.append(e.card)
    state.engagement_area = engaged
    state.threat_level += 1
    state.round_number += 1
    state.stage = Stage.Resource
    return state


RULED = {
    Stage.Resource: resource_stage,
    Stage.Draw: draw_stage,
    Stage.StagingReveal: staging_reveal,
    Stage.QuestResolution: quest_resolution,
    Stage.EncounterCheck: engagement_check,
    Stage.ResolveEnemyAttacks: resolve_enemy_attacks,
    Stage.ResolvePlayerAttacks: resolve_player_attacks,
    Stage.Refresh: refresh,
}


# -- decisions ---------------------------------------------------------------

def _char(state, uid):
    for c in state.heroes:
        if c.card.uid == uid:
            return c
    for c in state.allies:
        if c.card.uid == uid:
            return c
    return None


def play_card(state, action):
    card = next((c for c in state.hand if c.defn.id == action.card_id), None)
    if card is None:
        raise IllegalAction(state.stage, action, "card not in hand")
    eligible = {h.card.uid: h for h in payers(state, card.defn)}
    paid = 0
    for uid, amount in action.payment:
        h = eligible.get(uid)
        if h is None or amount < 1 or amount > h.resources:
            raise IllegalAction(state.stage, action, "payment not covered by matching-sphere heroes")
        paid += amount
    if paid != card.defn.cost:
        raise IllegalAction(state.stage, action, f"payment {paid} != cost {card.defn.cost}")
    for uid, amount in action.payment:
        eligible[uid].resources -= amount
    state.hand.remove(card)
    state.allies.append(Character(card))
    return state


def travel_apply(state, choice):
    """Make `choice` (a staging location uid, or None) the active location."""
    if choice is not None:
        if state.active_location is not None:
            raise IllegalAction(state.stage, TravelTo(choice), "active location already occupied")
        idx = next((i for i, x in enumerate(state.staging_area)
                    if x.card.uid == choice and isinstance(x, LocationInPlay)), None)
        if idx is None:
            raise IllegalAction(state.stage, TravelTo(choice), "location not in staging area")
        state.active_location = state.staging_area.pop(idx)
    state.stage = Stage.EncounterCheck
    return state


def apply_decision(state, action):
    """Apply a decision assumed legal (search and policies only produce legal ones)."""
    stage = state.stage
    if stage == Stage.Planning:
        if type(action) is PlayCard:
            return play_card(state, action)
        state.stage = Stage.CommitCharacters
    elif stage == Stage.CommitCharacters:
        for uid in action.members:
            c = _char(state, uid)
            c.tapped = True
            c.committed = True
        state.stage = Stage.StagingReveal
    elif stage == Stage.Travel:
        travel_apply(state, action.location)
    elif stage == Stage.DeclareDefenders:
        for _, duid in action.pairs:
            if duid is not None:
                _char(state, duid).tapped = True
        state.pending_defense = action.pairs
        state.stage = Stage.ResolveEnemyAttacks
    elif stage == Stage.DeclareAttackers:
        if type(action) is Pass:
            state.stage = Stage.Refresh
        else:
            for uid in action.attackers:
                _char(state, uid).tapped = True
            state.pending_attack = (action.enemy, action.attackers)
            state.stage = Stage.ResolvePlayerAttacks
    return state


_EXPECTED = {
    Stage.Planning: (PlayCard, EndPlanning),
    Stage.CommitCharacters: (CommitSubset,),
    Stage.Travel: (TravelTo,),
    Stage.DeclareDefenders: (AssignDefenders,),
    Stage.DeclareAttackers: (DeclareAttack, Pass),
}


def step(state, action=None):
    """Advance one stage (or one decision), validating the action against the contract."""
    stage = state.stage
    if stage in DECISION_STAGES:
        if action is None:
            raise MissingDecision(stage, None, "missing decision")
        if not isinstance(action, _EXPECTED[stage]) or action not in legal_actions(state):
            raise IllegalAction(stage, action, "illegal action")
        return apply_decision(state, action)
    if action is not None:
        raise IllegalAction(stage, action, "action supplied at a ruled stage")
    return RULED[stage](state)


def terminal_status(state):
    if state.threat_level >= THREAT_LIMIT:
        return TerminalStatus.LossThreat
    if not any(h.damage < h.card.defn.hitpoints for h in state.heroes):
        return TerminalStatus.LossHeroesDead
    if state.quest_progress >= state.quest_target:
        return TerminalStatus.Win
    return TerminalStatus.Ongoing


def advance(state):
    """Run ruled stages until a decision stage or a terminal state; returns the status."""
    while True:
        status = terminal_status(state)
        if status is not TerminalStatus.Ongoing:
            return status
        if state.stage in DECISION_STAGES:
            return status
        RULED[state.stage](state)
