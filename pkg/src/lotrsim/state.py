"""Game-state types: stages, cards in play, and the GameState snapshot."""

from __future__ import annotations

from enum import Enum, IntEnum

from .cards import Kind


class Stage(IntEnum):
    Resource = 0
    Draw = 1
    Planning = 2
    CommitCharacters = 3
    StagingReveal = 4
    QuestResolution = 5
    Travel = 6
    EncounterCheck = 7
    DeclareDefenders = 8
    ResolveEnemyAttacks = 9
    DeclareAttackers = 10
    ResolvePlayerAttacks = 11
    Refresh = 12


DECISION_STAGES = frozenset({
    Stage.Planning, Stage.CommitCharacters, Stage.Travel,
    Stage.DeclareDefenders, Stage.DeclareAttackers,
})

THREAT_LIMIT = 50


class TerminalStatus(Enum):
    Ongoing = "ongoing"
    Win = "win"
    LossThreat = "loss:threat"
    LossHeroesDead = "loss:heroes-dead"

    @property
    def is_terminal(self):
        return self is not TerminalStatus.Ongoing

    @property
    def is_loss(self):
        return self is TerminalStatus.LossThreat or self is TerminalStatus.LossHeroesDead


class EngineError(RuntimeError):
    """Internal invariant violation inside the engine (a bug, not bad input)."""


class IllegalAction(ValueError):
    def __init__(self, stage, action, reason):
        self.stage = stage
        self.action = action
        super().__init__(f"{reason} at stage {Stage(stage).name}: {action!r}")


class MissingDecision(IllegalAction):
    pass


class Character:
    __slots__ = ("card", "damage", "tapped", "resources", "committed")

    def __init__(self, card, damage=0, tapped=False, resources=0, committed=False):
        self.card = card
        self.damage = damage
        self.tapped = tapped
        self.resources = resources
        self.committed = committed

    @property
    def defn(self):
        return self.card.defn

    @property
    def uid(self):
        return self.card.uid

    @property
    def is_hero(self):
        return self.card.defn.kind is Kind.Hero

    @property
    def alive(self):
        return self.damage < self.card.defn.hitpoints

    @property
    def remaining(self):
        return self.card.defn.hitpoints - self.damage

    def copy(self):
        return Character(self.card, self.damage, self.tapped, self.resources, self.committed)

    def key(self):
        return (self.card.uid, self.damage, self.tapped, self.resources, self.committed)

    def __repr__(self):
        flags = ("T" if self.tapped else "") + ("Q" if self.committed else "")
        res = f" r{self.resources}" if self.is_hero else ""
        return f"{self.card!r}[dmg {self.damage}{res}{' ' + flags if flags else ''}]"


class EnemyInPlay:
    __slots__ = ("card", "damage")

    def __init__(self, card, damage=0):
        self.card = card
        self.damage = damage

    @property
    def defn(self):
        return self.card.defn

    @property
    def uid(self):
        return self.card.uid

    @property
    def alive(self):
        return self.damage < self.card.defn.hitpoints

    @property
    def remaining(self):
        return self.card.defn.hitpoints - self.damage

    def copy(self):
        return EnemyInPlay(self.card, self.damage)

    def key(self):
        return ("E", self.card.uid, self.damage)

    def __repr__(self):
        return f"{self.card!r}[dmg {self.damage}]"


class LocationInPlay:
    __slots__ = ("card", "progress")

    def __init__(self, card, progress=0):
        self.card = card
        self.progress = progress

    @property
    def defn(self):
        return self.card.defn

    @property
    def uid(self):
        return self.card.uid

    def copy(self):
        return LocationInPlay(self.card, self.progress)

    def key(self):
        return ("L", self.card.uid, self.progress)

    def __repr__(self):
        return f"{self.card!r}[{self.progress}/{self.card.defn.quest_points}]"


def in_play(card):
    if card.defn.kind is Kind.Enemy:
        return EnemyInPlay(card)
    if card.defn.kind is Kind.Location:
        return LocationInPlay(card)
    raise EngineError(f"{card!r} cannot enter the staging area")


class GameState:
    """Full game snapshot. Deck lists are ordered bottom -> top (top is the last item)."""

    __slots__ = (
        "round_number", "stage", "threat_level", "heroes", "allies", "hand",
        "player_deck", "player_discard", "encounter_deck", "encounter_discard",
        "staging_area", "engagement_area", "active_location", "quest_progress",
        "quest_target", "rng", "pending_defense", "pending_attack", "scenario",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw.get(name))

    @property
    def characters(self):
        return self.heroes + self.allies

    def actors(self):
        """Untapped living characters, heroes first then allies in play order."""
        return [c for c in self.heroes + self.allies if not c.tapped and c.damage < c.card.defn.hitpoints]

    def staging_threat(self):
        return sum(x.card.defn.threat for x in self.staging_area)

    def copy(self, rng=None):
        s = GameState.__new__(GameState)
        s.round_number = self.round_number
        s.stage = self.stage
        s.threat_level = self.threat_level
        s.heroes = [c.copy() for c in self.heroes]
        s.allies = [c.copy() for c in self.allies]
        s.hand = list(self.hand)
        s.player_deck = list(self.player_deck)
        s.player_discard = list(self.player_discard)
        s.encounter_deck = list(self.encounter_deck)
        s.encounter_discard = list(self.encounter_discard)
        s.staging_area = [x.copy() for x in self.staging_area]
        s.engagement_area = [x.copy() for x in self.engagement_area]
        s.active_location = self.active_location.copy() if self.active_location else None
        s.quest_progress = self.quest_progress
        s.quest_target = self.quest_target
        s.rng = rng if rng is not None else self.rng.copy()
        s.pending_defense = self.pending_defense
        s.pending_attack = self.pending_attack
        s.scenario = self.scenario
        return s

    def all_cards(self):
        """Every card instance in every zone (used by conservation checks)."""
        cards = [c.card for c in self.heroes]
        cards += [c.card for c in self.allies]
        cards += self.hand + self.player_deck + self.player_discard
        cards += self.encounter_deck + self.encounter_discard
        cards += [x.card for x in self.staging_area]
        cards += [x.card for x in self.engagement_area]
        if self.active_location is not None:
            cards.append(self.active_location.card)
        return cards

    def key(self):
        """Hashable summary of everything observable plus deck order and RNG position."""
        return (
            self.round_number, int(self.stage), self.threat_level,
            tuple(c.key() for c in self.heroes), tuple(c.key() for c in self.allies),
            tuple(c.uid for c in self.hand), tuple(c.uid for c in self.player_deck),
            tuple(c.uid for c in self.player_discard), tuple(c.uid for c in self.encounter_deck),
            tuple(c.uid for c in self.encounter_discard),
            tuple(x.key() for x in self.staging_area), tuple(x.key() for x in self.engagement_area),
            self.active_location.key() if self.active_location else None,
            self.quest_progress, self.quest_target, self.rng.state,
            self.pending_defense, self.pending_attack,
        )

    def __eq__(self, other):
        return isinstance(other, GameState) and self.key() == other.key()

    __hash__ = None

    def render(self):
        """Zone-by-zone text listing for logs and failure reports."""
        def cards(xs):
            return ", ".join(repr(x) for x in xs) or "-"
        lines = [
            f"round {self.round_number}  stage {Stage(self.stage).name}  threat {self.threat_level}"
            f"  quest {self.quest_progress}/{self.quest_target}",
            f"  heroes:     {cards(self.heroes)}",
            f"  allies:     {cards(self.allies)}",
            f"  hand:       {cards(self.hand)}",
            f"  staging:    {cards(self.staging_area)}",
            f"  engaged:    {cards(self.engagement_area)}",
            f"  location:   {self.active_location!r}",
            f"  decks:      player {len(self.player_deck)} (discard {len(self.player_discard)})"
            f"  encounter {len(self.encounter_deck)} (discard {len(self.encounter_discard)})",
        ]
        if self.pending_defense:
            lines.append(f"  defending:  {self.pending_defense}")
        if self.pending_attack:
            lines.append(f"  attacking:  {self.pending_attack}")
        return "\n".join(lines)

    __str__ = render
