import pytest

from lotrsim.actions import CommitSubset, END_PLANNING, EMPTY_COMMIT, TravelTo
from lotrsim.cards import Difficulty, Kind, bundled_scenario
from lotrsim.engine import (
    advance, engagement_check, init_game, quest_resolution, refresh, resolve_attack,
    resolve_enemy_attacks, resource_stage, staging_reveal, step, terminal_status, travel_apply,
)
from lotrsim.rng import Stream
from lotrsim.state import EngineError, IllegalAction, MissingDecision, Stage, TerminalStatus

from support import ally, blank_state, card, enemy, hero, location


# -- init -----------------------------------------------------------------------

def test_init_threat_and_hand():
    sc = bundled_scenario(Difficulty.Medium)
    s = init_game(sc, 1)
    assert sorted(h.defn.threat_cost for h in s.heroes) == [9, 10, 11]
    assert s.threat_level == 30
    assert len(s.hand) == 6
    assert (s.stage, s.round_number) == (Stage.Resource, 1)


def test_init_is_deterministic():
    sc = bundled_scenario(Difficulty.Easy)
    a, b = init_game(sc, 77), init_game(sc, 77)
    assert a == b
    assert [c.uid for c in a.hand] == [c.uid for c in b.hand]
    assert a != init_game(sc, 78)


def test_hard_starts_with_two_staged_cards():
    s = init_game(bundled_scenario(Difficulty.Hard), 3)
    assert sorted(x.card.defn.id for x in s.staging_area) == ["forest_spider", "old_forest_road"]


# -- resource / draw -------------------------------------------------------------

def test_resource_gives_one_token_each():
    s = blank_state(Stage.Resource, player_deck=[card(Kind.Ally, cost=1)])
    resource_stage(s)
    assert [h.resources for h in s.heroes] == [1, 1, 1]
    assert len(s.hand) == 1 and s.stage == Stage.Planning


def test_resource_two_survivors():
    s = blank_state(Stage.Resource, heroes=[hero(resources=2), hero(resources=5)])
    resource_stage(s)
    assert [h.resources for h in s.heroes] == [3, 6]


def test_empty_deck_skips_draw():
    s = blank_state(Stage.Resource, hand=[card(Kind.Ally, cost=1)])
    resource_stage(s)
    assert len(s.hand) == 1


# -- staging reveal ----------------------------------------------------------------

def test_reveal_enemy():
    e = enemy()
    s = blank_state(Stage.StagingReveal, encounter_deck=[e.card])
    staging_reveal(s)
    assert [x.card for x in s.staging_area] == [e.card]
    assert s.staging_area[0].damage == 0


def test_reveal_location():
    loc = location()
    s = blank_state(Stage.StagingReveal, encounter_deck=[loc.card])
    staging_reveal(s)
    assert s.staging_area[0].card is loc.card and s.staging_area[0].progress == 0


def test_reveal_reshuffles_discard_with_game_stream():
    cards = [enemy().card for _ in range(5)]
    s = blank_state(Stage.StagingReveal, encounter_discard=list(cards), rng=Stream(11))
    staging_reveal(s)
    expected = list(cards)
    Stream(11).shuffle(expected)
    assert s.staging_area[0].card is expected[-1]
    assert s.encounter_discard == [] and len(s.encounter_deck) == 4


# -- quest resolution ---------------------------------------------------------------

def committed(*willpowers):
    out = []
    for w in willpowers:
        c = ally(willpower=w)
        c.tapped = c.committed = True
        out.append(c)
    return out


def test_quest_positive():
    s = blank_state(Stage.QuestResolution, allies=committed(4), staging_area=[enemy(threat=2)])
    quest_resolution(s)
    assert s.quest_progress == 2 and s.threat_level == 30


def test_quest_negative_raises_threat():
    s = blank_state(Stage.QuestResolution, allies=committed(2), staging_area=[location(threat=5)])
    quest_resolution(s)
    assert s.threat_level == 33 and s.quest_progress == 0


def test_quest_fills_active_location_first():
    loc = location(threat=0, quest_points=4)
    loc.progress = 2
    s = blank_state(Stage.QuestResolution, allies=committed(5), active_location=loc)
    quest_resolution(s)
    assert s.active_location is None
    assert s.encounter_discard == [loc.card]
    assert s.quest_progress == 3


def test_quest_zero_difference_changes_nothing():
    s = blank_state(Stage.QuestResolution, allies=committed(3), staging_area=[enemy(threat=3)])
    quest_resolution(s)
    assert (s.quest_progress, s.threat_level) == (0, 30)


def test_quest_overflow_capped():
    s = blank_state(Stage.QuestResolution, allies=committed(20), quest_progress=5)
    quest_resolution(s)
    assert s.quest_progress == s.quest_target


# -- engagement ----------------------------------------------------------------------

@pytest.mark.parametrize("cost, engaged", [(25, True), (30, True), (35, False)])
def test_engagement_boundary(cost, engaged):
    e = enemy(engagement_cost=cost)
    loc = location()
    s = blank_state(Stage.EncounterCheck, staging_area=[e, loc])
    engagement_check(s)
    assert (e in s.engagement_area) is engaged
    assert loc in s.staging_area


# -- attacks ---------------------------------------------------------------------------

@pytest.mark.parametrize("attack, defense, damage", [(3, 1, 2), (3, 4, 0), (2, None, 2), (0, None, 0)])
def test_resolve_attack(attack, defense, damage):
    assert resolve_attack(attack, defense) == damage


def test_negative_attack_is_an_invariant_violation():
    with pytest.raises(EngineError):
        resolve_attack(-1, 0)


def test_undefended_hit_ignores_hero_defense():
    tank = hero(defense=5, hitpoints=9)
    e = enemy(attack=2)
    s = blank_state(Stage.ResolveEnemyAttacks, heroes=[tank], engagement_area=[e],
                    pending_defense=((e.uid, None),))
    resolve_enemy_attacks(s)
    assert tank.damage == 2


def test_defended_hit():
    guard = ally(defense=1, hitpoints=4)
    e = enemy(attack=3)
    s = blank_state(Stage.ResolveEnemyAttacks, allies=[guard], engagement_area=[e],
                    pending_defense=((e.uid, guard.uid),))
    resolve_enemy_attacks(s)
    assert guard.damage == 2
    assert all(h.damage == 0 for h in s.heroes)


# -- travel ------------------------------------------------------------------------------

def test_travel_to_location():
    loc = location(threat=2)
    s = blank_state(Stage.Travel, staging_area=[enemy(), loc])
    travel_apply(s, loc.uid)
    assert s.active_location is loc and loc not in s.staging_area
    assert s.staging_threat() == 1


def test_travel_none_keeps_zones():
    loc = location()
    s = blank_state(Stage.Travel, staging_area=[loc])
    travel_apply(s, None)
    assert s.active_location is None and s.staging_area == [loc]


def test_travel_while_occupied_is_illegal():
    loc, other = location(), location()
    s = blank_state(Stage.Travel, staging_area=[other], active_location=loc)
    with pytest.raises(IllegalAction):
        travel_apply(s, other.uid)
    with pytest.raises(IllegalAction):
        step(s, TravelTo(other.uid))


# -- refresh / terminal ---------------------------------------------------------------

def test_refresh_threat_and_wrap():
    s = blank_state(Stage.Refresh, threat_level=32, round_number=4)
    refresh(s)
    assert (s.threat_level, s.round_number, s.stage) == (33, 5, Stage.Resource)


def test_refresh_sweeps_the_dead():
    dead = ally(hitpoints=2)
    dead.damage = 3
    dead_enemy = enemy(hitpoints=2)
    dead_enemy.damage = 2
    s = blank_state(Stage.Refresh, allies=[dead], engagement_area=[dead_enemy])
    refresh(s)
    assert s.allies == [] and s.player_discard == [dead.card]
    assert s.engagement_area == [] and s.encounter_discard == [dead_enemy.card]


def test_refresh_untaps_everything():
    s = blank_state(Stage.Refresh, allies=committed(1, 2))
    for h in s.heroes:
        h.tapped = True
    refresh(s)
    assert not any(c.tapped or c.committed for c in s.heroes + s.allies)


@pytest.mark.parametrize("kw, status", [
    (dict(threat_level=50), TerminalStatus.LossThreat),
    (dict(threat_level=49), TerminalStatus.Ongoing),
    (dict(quest_progress=8, threat_level=20), TerminalStatus.Win),
    (dict(quest_progress=8, threat_level=50), TerminalStatus.LossThreat),
    (dict(round_number=3, threat_level=31), TerminalStatus.Ongoing),
    (dict(heroes=[]), TerminalStatus.LossHeroesDead),
])
def test_terminal_status(kw, status):
    assert terminal_status(blank_state(**kw)) is status


def test_dead_heroes_count_as_lost():
    h = hero(hitpoints=2)
    h.damage = 2
    assert terminal_status(blank_state(heroes=[h])) is TerminalStatus.LossHeroesDead


# -- step contract -----------------------------------------------------------------------

def test_step_resource():
    s = blank_state(Stage.Resource, player_deck=[card(Kind.Ally, cost=1)])
    step(s)
    assert s.stage == Stage.Planning and len(s.hand) == 1


def test_step_refresh_wraps():
    s = blank_state(Stage.Refresh)
    step(s)
    assert (s.stage, s.round_number) == (Stage.Resource, 2)


def test_step_missing_decision():
    s = blank_state(Stage.CommitCharacters)
    with pytest.raises(MissingDecision) as err:
        step(s)
    assert err.value.stage == Stage.CommitCharacters


def test_step_action_at_ruled_stage():
    with pytest.raises(IllegalAction):
        step(blank_state(Stage.Refresh), END_PLANNING)


def test_step_rejects_unqualified_commit():
    s = blank_state(Stage.CommitCharacters, staging_area=[enemy(threat=9)])
    with pytest.raises(IllegalAction):
        step(s, CommitSubset(frozenset({s.heroes[0].uid})))
    step(s, EMPTY_COMMIT)
    assert s.stage == Stage.StagingReveal


def test_planning_loops_until_end():
    s = init_game(bundled_scenario(Difficulty.Easy), 5)
    advance(s)
    assert s.stage == Stage.Planning
    step(s, END_PLANNING)
    assert s.stage == Stage.CommitCharacters


def test_copy_is_deep_for_mutable_parts():
    s = init_game(bundled_scenario(Difficulty.Medium), 2)
    c = s.copy()
    advance(c)
    assert s.stage == Stage.Resource and s.heroes[0].resources == 0
    assert c.rng is not s.rng


def test_render_lists_zones():
    text = init_game(bundled_scenario(Difficulty.Hard), 2).render()
    assert "staging:" in text and "forest_spider" in text
