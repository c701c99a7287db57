"""Per-decision policies: constrained random (Agent 1) and expert rules (Agent 2).

Each policy exists twice: `random_choose` / `expert_choose` pick from a supplied action
list, while `random_decision` / `expert_decision` compute the same choice straight from
the state without enumerating the list. Drivers use the latter; tests pin them equal.
"""

from __future__ import annotations

from enum import Enum

from . import actions as A
from .state import Stage

COMMIT_REJECTION_CAP = 32
# The expert quests for a surplus of COMMIT_MARGIN willpower over the visible staging
# threat, to absorb the card revealed after commitment. Without enough willpower it
# settles for any surplus at all.
COMMIT_MARGIN = 6


class PolicyKind(str, Enum):
    Random = "random"
    Expert = "expert"


# -- expert rules ------------------------------------------------------------

def expert_plan(state):
    best = None
    for d in A.hand_defs(state):
        hs = A.payers(state, d)
        split = A.canonical_split([h.resources for h in hs], d.cost)
        if split is None:
            continue
        key = (-d.willpower, d.cost, d.id)
        if best is None or key < best[0]:
            best = (key, d, hs, split)
    if best is None:
        return A.END_PLANNING
    _, d, hs, split = best
    return A.PlayCard(d.id, A._payment(hs, split))


def cheapest_commit_mask(values, threshold):
    """Lowest mask among the subsets with the smallest sum exceeding threshold, or 0."""
    reach = [1]
    for v in values:
        reach.append(reach[-1] | (reach[-1] << v))
    full = reach[-1] >> (threshold + 1)
    if not full:
        return 0
    need = threshold + 1 + ((full & -full).bit_length() - 1)
    mask = 0
    for i in range(len(values) - 1, -1, -1):
        if not (reach[i] >> need) & 1:
            mask |= 1 << i
            need -= values[i]
    return mask


def expert_commit(state):
    actors = state.actors()
    wp = [c.card.defn.willpower for c in actors]
    threat = state.staging_threat()
    if sum(wp) > threat + COMMIT_MARGIN:
        threat += COMMIT_MARGIN
    mask = cheapest_commit_mask(wp, threat)
    if not mask:
        return A.EMPTY_COMMIT
    return A.CommitSubset(frozenset(c.card.uid for i, c in enumerate(actors) if mask >> i & 1))


def expert_travel(state):
    if state.active_location is not None:
        return A.TRAVEL_NONE
    best = None
    for loc in A.staging_locations(state):
        if best is None or loc.card.defn.threat > best.card.defn.threat:
            best = loc
    return A.TravelTo(best.card.uid) if best is not None else A.TRAVEL_NONE


def expert_defend(state):
    enemies = state.engagement_area
    free = state.actors()
    order = sorted(range(len(enemies)), key=lambda i: -enemies[i].card.defn.attack)
    chosen = {}
    for i in order:
        atk = enemies[i].card.defn.attack
        pick = None
        for c in free:
            if A.defender_survives(atk, c) and (pick is None or c.card.defn.defense < pick.card.defn.defense):
                pick = c
        if pick is not None:
            free.remove(pick)
            chosen[i] = pick.card.uid
    return A.AssignDefenders(tuple((e.card.uid, chosen.get(i)) for i, e in enumerate(enemies)))


def expert_attack(state):
    actors = state.actors()
    if not actors:
        return A.PASS
    hitters = sorted(actors, key=lambda c: -c.card.defn.attack)
    enemies = [e for e in state.engagement_area if e.alive]
    enemies.sort(key=lambda e: -e.card.defn.attack)
    for e in enemies:
        need = e.remaining + e.card.defn.defense
        total = 0
        group = []
        for c in hitters:
            if c.card.defn.attack <= 0:
                break
            group.append(c.card.uid)
            total += c.card.defn.attack
            if total >= need:
                return A.DeclareAttack(e.card.uid, frozenset(group))
    return A.PASS


EXPERT_RULES = {
    Stage.Planning: expert_plan,
    Stage.CommitCharacters: expert_commit,
    Stage.Travel: expert_travel,
    Stage.DeclareDefenders: expert_defend,
    Stage.DeclareAttackers: expert_attack,
}


def expert_decision(state):
    return EXPERT_RULES[state.stage](state)


def expert_choose(state, actions):
    """Deterministic rule-table choice; always a member of `actions`."""
    if len(actions) == 1:
        return actions[0]
    choice = expert_decision(state)
    return choice if choice in actions else actions[0]


# -- constrained random ------------------------------------------------------

def random_plan(state, rng):
    options = []
    total = 1  # EndPlanning
    for d in A.hand_defs(state):
        hs = A.payers(state, d)
        caps = [h.resources for h in hs]
        n = A.count_splits(caps, d.cost)
        if n:
            options.append((d, hs, caps, n))
            total += n
    if total == 1:
        return A.END_PLANNING
    idx = rng.below(total)
    for d, hs, caps, n in options:
        if idx < n:
            return A.PlayCard(d.id, A._payment(hs, A.payment_splits(caps, d.cost)[idx]))
        idx -= n
    return A.END_PLANNING


def _draw_commit(actors, threat, rng, accept):
    wp = [c.card.defn.willpower for c in actors]
    if sum(wp) <= threat:
        return A.EMPTY_COMMIT
    k = len(actors)
    minimal_only = k > A.SUBSET_CAP
    for _ in range(COMMIT_REJECTION_CAP):
        mask = rng.bits(k)
        total = 0
        for i in range(k):
            if mask >> i & 1:
                total += wp[i]
        if total <= threat or (minimal_only and not A.is_minimal(wp, mask, threat)):
            continue
        action = A.CommitSubset(frozenset(actors[i].card.uid for i in range(k) if mask >> i & 1))
        if accept is None or action in accept:
            return action
    return A.EMPTY_COMMIT


def random_commit(state, rng):
    return _draw_commit(state.actors(), state.staging_threat(), rng, None)


def random_defend(state, rng):
    enemies = state.engagement_area
    free = state.actors()
    if not enemies or not free:
        return A.AssignDefenders(tuple((e.card.uid, None) for e in enemies))
    pairs = []
    for e in enemies:
        if free:
            pairs.append((e.card.uid, free.pop(rng.below(len(free))).card.uid))
        else:
            pairs.append((e.card.uid, None))
    return A.AssignDefenders(tuple(pairs))


def random_decision(state, rng):
    """Agent 1 at Planning, Commitment and Defense; uniform elsewhere."""
    stage = state.stage
    if stage == Stage.Planning:
        return random_plan(state, rng)
    if stage == Stage.CommitCharacters:
        return random_commit(state, rng)
    if stage == Stage.DeclareDefenders:
        return random_defend(state, rng)
    acts = A.legal_actions(state)
    return acts[0] if len(acts) == 1 else acts[rng.below(len(acts))]


def random_choose(state, actions, rng):
    """Constrained random choice from `actions`, drawing only from `rng`."""
    if len(actions) == 1:
        return actions[0]
    stage = state.stage
    if stage == Stage.CommitCharacters:
        return _draw_commit(state.actors(), state.staging_threat(), rng, set(actions))
    if stage == Stage.DeclareDefenders:
        choice = random_defend(state, rng)
        if choice in actions:
            return choice
    return actions[rng.below(len(actions))]


FIXED_EXPERT_STAGES = frozenset({Stage.Travel, Stage.DeclareAttackers})


def policy_decision(state, policy, rng):
    """Playout/agent decision: the policy at the three configurable stages, expert rules at
    Travel and Declare Attackers (those two stages always use the expert)."""
    if policy is PolicyKind.Expert or state.stage in FIXED_EXPERT_STAGES:
        return expert_decision(state)
    return random_decision(state, rng)
