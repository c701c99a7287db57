"""Small builders for hand-made game states used across the test modules."""

import itertools

from lotrsim.cards import Card, CardDef, CardLibrary, DeckSpec, Difficulty, Kind, Scenario, ScenarioConfig, Sphere
from lotrsim.rng import Stream
from lotrsim.state import Character, EnemyInPlay, GameState, LocationInPlay, Stage

_uids = itertools.count(1000)


def card(kind, id=None, **stats):
    if kind in (Kind.Hero, Kind.Ally):
        stats.setdefault("sphere", Sphere.Spirit)
        stats.setdefault("hitpoints", 3)
    if kind is Kind.Enemy:
        stats.setdefault("hitpoints", 3)
    if kind is Kind.Location:
        stats.setdefault("quest_points", 3)
    uid = next(_uids)
    return Card(uid, CardDef(id or f"{kind.value.lower()}_{uid}", id or f"{kind.value} {uid}", kind, **stats))


def hero(willpower=1, attack=1, defense=1, hitpoints=5, resources=0, **kw):
    c = Character(card(Kind.Hero, willpower=willpower, attack=attack, defense=defense,
                       hitpoints=hitpoints, threat_cost=kw.pop("threat_cost", 10), **kw))
    c.resources = resources
    return c


def ally(willpower=1, attack=1, defense=1, hitpoints=2, **kw):
    return Character(card(Kind.Ally, willpower=willpower, attack=attack, defense=defense,
                          hitpoints=hitpoints, cost=kw.pop("cost", 1), **kw))


def enemy(attack=2, defense=0, hitpoints=3, threat=1, engagement_cost=20, id=None):
    return EnemyInPlay(card(Kind.Enemy, id=id, attack=attack, defense=defense, hitpoints=hitpoints,
                            threat=threat, engagement_cost=engagement_cost))


def location(threat=1, quest_points=3, id=None):
    return LocationInPlay(card(Kind.Location, id=id, threat=threat, quest_points=quest_points))


def blank_state(stage=Stage.Planning, heroes=None, **kw):
    fields = dict(
        round_number=1, stage=stage, threat_level=30,
        heroes=heroes if heroes is not None else [hero(), hero(), hero()],
        allies=[], hand=[], player_deck=[], player_discard=[],
        encounter_deck=[], encounter_discard=[], staging_area=[], engagement_area=[],
        active_location=None, quest_progress=0, quest_target=8, rng=Stream(1),
        pending_defense=None, pending_attack=None, scenario=None,
    )
    fields.update(kw)
    return GameState(**fields)


def rigged_scenario():
    """Two-card decks, one meaningful decision.

    The three heroes carry no willpower and start at threat 49, so the game is lost at
    the first Refresh unless the quest completes in round one. The player deck holds a
    useless ally and a willpower-5 ally, both costing the one Spirit resource available,
    so only buying the second ally (and questing with it) wins.
    """
    defs = [
        CardDef("h_spirit", "Spirit Hero", Kind.Hero, Sphere.Spirit, threat_cost=17, hitpoints=3),
        CardDef("h_tactics", "Tactics Hero", Kind.Hero, Sphere.Tactics, threat_cost=16, hitpoints=3),
        CardDef("h_lore", "Lore Hero", Kind.Hero, Sphere.Lore, threat_cost=16, hitpoints=3),
        CardDef("a_dud", "Dud", Kind.Ally, Sphere.Spirit, cost=1, hitpoints=1),
        CardDef("z_sage", "Sage", Kind.Ally, Sphere.Spirit, cost=1, willpower=5, hitpoints=1),
        CardDef("idle_orc", "Idle Orc", Kind.Enemy, engagement_cost=99, attack=1, hitpoints=1),
    ]
    lib = CardLibrary(defs)
    config = ScenarioConfig(Difficulty.Easy, DeckSpec((("a_dud", 1), ("z_sage", 1)), 2),
                            DeckSpec((("idle_orc", 2),), 2), ("h_spirit", "h_tactics", "h_lore"),
                            quest_target=5, name="rigged")
    heroes = tuple(Card(i, lib[h]) for i, h in enumerate(config.heroes))
    player = (Card(3, lib["a_dud"]), Card(4, lib["z_sage"]))
    encounter = (Card(5, lib["idle_orc"]), Card(6, lib["idle_orc"]))
    return Scenario(config, lib, heroes, player, encounter, ())
