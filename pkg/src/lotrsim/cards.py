"""Card definitions, the card-library text format, scenario configs and deck building."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path


class Sphere(str, Enum):
    Spirit = "Spirit"
    Tactics = "Tactics"
    Lore = "Lore"
    Leadership = "Leadership"


class Kind(str, Enum):
    Hero = "Hero"
    Ally = "Ally"
    Enemy = "Enemy"
    Location = "Location"


class Difficulty(str, Enum):
    Easy = "Easy"
    Medium = "Medium"
    Hard = "Hard"


STAT_FIELDS = (
    "cost", "threat_cost", "willpower", "attack", "defense",
    "hitpoints", "engagement_cost", "threat", "quest_points",
)

# Fields (beyond id/name/kind) each kind must carry; any other field is an error.
KIND_FIELDS = {
    Kind.Hero: ("sphere", "threat_cost", "willpower", "attack", "defense", "hitpoints"),
    Kind.Ally: ("sphere", "cost", "willpower", "attack", "defense", "hitpoints"),
    Kind.Enemy: ("engagement_cost", "threat", "attack", "defense", "hitpoints"),
    Kind.Location: ("threat", "quest_points"),
}

# Encounter deck (cards, distinct types) per difficulty.
ENCOUNTER_SHAPE = {
    Difficulty.Easy: (28, 7),
    Difficulty.Medium: (29, 15),
    Difficulty.Hard: (29, 15),
}


class CardDataError(ValueError):
    def __init__(self, record_id, message):
        self.record_id = record_id
        super().__init__(f"record {record_id!r}: {message}")


@dataclass(frozen=True)
class CardDef:
    id: str
    name: str
    kind: Kind
    sphere: Sphere | None = None
    cost: int = 0
    threat_cost: int = 0
    willpower: int = 0
    attack: int = 0
    defense: int = 0
    hitpoints: int = 0
    engagement_cost: int = 0
    threat: int = 0
    quest_points: int = 0

    @property
    def is_character(self):
        return self.kind is Kind.Hero or self.kind is Kind.Ally


@dataclass(frozen=True)
class Card:
    """One physical card instance; uid is unique within a game."""

    uid: int
    defn: CardDef

    def __repr__(self):
        return f"<{self.defn.id}#{self.uid}>"


class CardLibrary(Mapping):
    """Immutable id -> CardDef mapping that keeps file order."""

    def __init__(self, cards=()):
        self._cards = {}
        for c in cards:
            if c.id in self._cards:
                raise CardDataError(c.id, "duplicate id")
            self._cards[c.id] = c

    def __getitem__(self, key):
        return self._cards[key]

    def __iter__(self):
        return iter(self._cards)

    def __len__(self):
        return len(self._cards)

    def __eq__(self, other):
        if isinstance(other, CardLibrary):
            return self._cards == other._cards
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._cards.values()))

    def __repr__(self):
        return f"CardLibrary({len(self)} cards)"


def _records(text):
    """Yield lists of (lineno, line) for each blank-line separated record."""
    block = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            if block:
                yield block
                block = []
            continue
        if line.startswith("#"):
            continue
        block.append((lineno, line))
    if block:
        yield block


def _parse_int(record_id, key, value):
    try:
        n = int(value, 10)
    except ValueError:
        raise CardDataError(record_id, f"field {key} is not a base-10 integer: {value!r}") from None
    if n < 0:
        raise CardDataError(record_id, f"negative stat {key}={n}")
    return n


def parse_card(pairs):
    fields = {}
    for lineno, line in pairs:
        key, sep, value = line.partition("=")
        if not sep:
            rid = fields.get("id", f"<line {lineno}>")
            raise CardDataError(rid, f"line {lineno} is not key=value")
        key, value = key.strip(), value.strip()
        if key in fields:
            raise CardDataError(fields.get("id", f"<line {lineno}>"), f"repeated field {key}")
        fields[key] = value

    rid = fields.get("id")
    if not rid:
        raise CardDataError(f"<line {pairs[0][0]}>", "missing mandatory field id")
    for key in ("name", "kind"):
        if key not in fields:
            raise CardDataError(rid, f"missing mandatory field {key}")
    try:
        kind = Kind(fields["kind"])
    except ValueError:
        raise CardDataError(rid, f"unknown kind {fields['kind']!r}") from None

    allowed = KIND_FIELDS[kind]
    for key in fields:
        if key in ("id", "name", "kind"):
            continue
        if key not in allowed:
            if key == "sphere" or key in STAT_FIELDS:
                raise CardDataError(rid, f"field {key} not applicable to kind {kind.value}")
            raise CardDataError(rid, f"unknown field {key}")
    for key in allowed:
        if key not in fields:
            raise CardDataError(rid, f"missing mandatory field {key} for kind {kind.value}")

    kwargs = {"id": rid, "name": fields["name"], "kind": kind}
    if "sphere" in allowed:
        try:
            kwargs["sphere"] = Sphere(fields["sphere"])
        except ValueError:
            raise CardDataError(rid, f"unknown sphere {fields['sphere']!r}") from None
    for key in allowed:
        if key != "sphere":
            kwargs[key] = _parse_int(rid, key, fields[key])
    if "hitpoints" in allowed and kwargs["hitpoints"] < 1:
        raise CardDataError(rid, "hitpoints must be at least 1")
    if "quest_points" in allowed and kwargs["quest_points"] < 1:
        raise CardDataError(rid, "quest_points must be at least 1")
    return CardDef(**kwargs)


def load_card_library(source):
    """Parse card-library text (not a path) into a CardLibrary."""
    return CardLibrary(parse_card(block) for block in _records(source))


def emit_card_library(library):
    out = []
    for card in library.values():
        lines = [f"id={card.id}", f"name={card.name}", f"kind={card.kind.value}"]
        for key in KIND_FIELDS[card.kind]:
            value = getattr(card, key)
            lines.append(f"{key}={value.value if key == 'sphere' else value}")
        out.append("\n".join(lines))
    return "\n\n".join(out) + ("\n" if out else "")


# -- scenarios ---------------------------------------------------------------

@dataclass(frozen=True)
class DeckSpec:
    entries: tuple[tuple[str, int], ...]
    size: int

    @property
    def total(self):
        return sum(n for _, n in self.entries)


@dataclass(frozen=True)
class ScenarioConfig:
    difficulty: Difficulty
    player_deck: DeckSpec
    encounter_deck: DeckSpec
    heroes: tuple[str, ...]
    pre_staged: tuple[str, ...] = ()
    quest_target: int = 8
    name: str = ""


@dataclass(frozen=True)
class Violation:
    code: str
    card_id: str | None = None
    field: str | None = None
    detail: str = ""

    def __str__(self):
        where = ", ".join(x for x in (self.field, self.card_id) if x)
        return f"{self.code}({where}): {self.detail}" if where else f"{self.code}: {self.detail}"


class ScenarioError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def _check_ids(ids, library, kinds, fieldname, out):
    for cid in ids:
        card = library.get(cid)
        if card is None:
            out.append(Violation("UnknownCard", cid, fieldname, "id not in library"))
        elif card.kind not in kinds:
            out.append(Violation("WrongKind", cid, fieldname,
                                 f"{card.kind.value} not allowed here"))


def validate_scenario(config, library):
    """Return the list of violations; empty iff build_scenario would succeed."""
    out = []
    if len(config.heroes) != 3:
        out.append(Violation("HeroCountViolation", None, "heroes",
                             f"expected 3 heroes, got {len(config.heroes)}"))
    elif len(set(config.heroes)) != 3:
        out.append(Violation("HeroCountViolation", None, "heroes", "hero ids must be distinct"))
    _check_ids(config.heroes, library, (Kind.Hero,), "heroes", out)

    if config.quest_target < 1:
        out.append(Violation("BadQuestTarget", None, "quest_target",
                             f"quest_target must be positive, got {config.quest_target}"))

    encounter_kinds = (Kind.Enemy, Kind.Location)
    decks = (
        ("player_deck", config.player_deck, (Kind.Ally,)),
        ("encounter_deck", config.encounter_deck, encounter_kinds),
    )
    for fieldname, deck, kinds in decks:
        seen = set()
        entry_errors = False
        for cid, count in deck.entries:
            if count < 1:
                out.append(Violation("BadCopyCount", cid, fieldname, f"copy count {count} < 1"))
                entry_errors = True
            if cid in seen:
                out.append(Violation("DuplicateEntry", cid, fieldname, "listed twice"))
                entry_errors = True
            seen.add(cid)
        _check_ids([cid for cid, _ in deck.entries], library, kinds, fieldname, out)
        if entry_errors:
            continue
        if fieldname == "player_deck":
            if deck.total != deck.size:
                out.append(Violation("DeckSizeMismatch", None, fieldname,
                                     f"{deck.total} copies, declared size {deck.size}"))
        else:
            want_cards, want_types = ENCOUNTER_SHAPE[config.difficulty]
            if (deck.total, len(deck.entries)) != (want_cards, want_types):
                out.append(Violation(
                    "EncounterShapeViolation", None, fieldname,
                    f"{deck.total} cards / {len(deck.entries)} types; "
                    f"{config.difficulty.value} requires {want_cards} / {want_types}"))
            elif deck.size != want_cards:
                out.append(Violation("DeckSizeMismatch", None, fieldname,
                                     f"declared size {deck.size}, required {want_cards}"))

    if config.difficulty is Difficulty.Hard:
        if not config.pre_staged:
            out.append(Violation("ScenarioSetupViolation", None, "pre_staged",
                                 "Hard requires a staging-area setup"))
    elif config.pre_staged:
        out.append(Violation("ScenarioSetupViolation", None, "pre_staged",
                             f"{config.difficulty.value} has no staging-area setup"))
    _check_ids(config.pre_staged, library, encounter_kinds, "pre_staged", out)
    return out


@dataclass(frozen=True)
class Scenario:
    """A materialized scenario: unshuffled card instances ready for init_game."""

    config: ScenarioConfig
    library: CardLibrary
    heroes: tuple[Card, ...]
    player_deck: tuple[Card, ...]
    encounter_deck: tuple[Card, ...]
    pre_staged: tuple[Card, ...] = field(default=())

    @property
    def quest_target(self):
        return self.config.quest_target

    @property
    def difficulty(self):
        return self.config.difficulty


def build_scenario(config, library):
    violations = validate_scenario(config, library)
    if violations:
        raise ScenarioError(violations)
    uid = 0

    def make(ids):
        nonlocal uid
        cards = []
        for cid in ids:
            cards.append(Card(uid, library[cid]))
            uid += 1
        return tuple(cards)

    heroes = make(config.heroes)
    player = make([cid for cid, n in config.player_deck.entries for _ in range(n)])
    encounter = make([cid for cid, n in config.encounter_deck.entries for _ in range(n)])
    staged = make(config.pre_staged)
    return Scenario(config, library, heroes, player, encounter, staged)


# -- scenario file -----------------------------------------------------------

class ScenarioFileError(ValueError):
    pass


def _split_ids(value):
    return tuple(x.strip() for x in value.split(",") if x.strip())


def parse_scenario(text):
    """Parse scenario text. Returns (config, library_ref) where library_ref may be None."""
    section = None
    meta = {}
    decks = {"player_deck": [], "encounter_deck": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("scenario", "player_deck", "encounter_deck"):
                raise ScenarioFileError(f"line {lineno}: unknown section [{section}]")
            continue
        if section == "scenario":
            key, sep, value = line.partition("=")
            if not sep:
                raise ScenarioFileError(f"line {lineno}: expected key=value")
            meta[key.strip()] = value.strip()
        elif section in decks:
            parts = line.split()
            if len(parts) != 2 or not parts[1].startswith("x"):
                raise ScenarioFileError(f"line {lineno}: expected 'card_id xN'")
            try:
                count = int(parts[1][1:], 10)
            except ValueError:
                raise ScenarioFileError(f"line {lineno}: bad copy count {parts[1]!r}") from None
            decks[section].append((parts[0], count))
        else:
            raise ScenarioFileError(f"line {lineno}: content outside a section")

    try:
        difficulty = Difficulty(meta["difficulty"])
    except KeyError:
        raise ScenarioFileError("[scenario] is missing difficulty") from None
    except ValueError:
        raise ScenarioFileError(f"unknown difficulty {meta['difficulty']!r}") from None
    try:
        player_size = int(meta.get("player_deck_size", sum(n for _, n in decks["player_deck"])))
        quest_target = int(meta.get("quest_target", "8"))
    except ValueError as exc:
        raise ScenarioFileError(str(exc)) from None
    config = ScenarioConfig(
        difficulty=difficulty,
        player_deck=DeckSpec(tuple(decks["player_deck"]), player_size),
        encounter_deck=DeckSpec(tuple(decks["encounter_deck"]), ENCOUNTER_SHAPE[difficulty][0]),
        heroes=_split_ids(meta.get("heroes", "")),
        pre_staged=_split_ids(meta.get("pre_staged", "")),
        quest_target=quest_target,
        name=meta.get("name", ""),
    )
    return config, meta.get("library")


def emit_scenario(config, library_ref=None):
    lines = ["[scenario]"]
    if config.name:
        lines.append(f"name={config.name}")
    lines.append(f"difficulty={config.difficulty.value}")
    if library_ref:
        lines.append(f"library={library_ref}")
    lines.append(f"heroes={','.join(config.heroes)}")
    lines.append(f"pre_staged={','.join(config.pre_staged)}")
    lines.append(f"quest_target={config.quest_target}")
    lines.append(f"player_deck_size={config.player_deck.size}")
    for name, deck in (("player_deck", config.player_deck), ("encounter_deck", config.encounter_deck)):
        lines.append("")
        lines.append(f"[{name}]")
        lines.extend(f"{cid} x{n}" for cid, n in deck.entries)
    return "\n".join(lines) + "\n"


def load_scenario_file(path):
    """Load a scenario file and its card library (bundled library if none is named)."""
    path = Path(path)
    config, library_ref = parse_scenario(path.read_text(encoding="utf-8"))
    if library_ref:
        library = load_card_library((path.parent / library_ref).read_text(encoding="utf-8"))
    else:
        library = bundled_library()
    return config, library


def _data(name):
    return resources.files("lotrsim.data").joinpath(name).read_text(encoding="utf-8")


def bundled_library():
    return load_card_library(_data("cards.txt"))


def bundled_config(difficulty):
    difficulty = Difficulty(difficulty.capitalize() if isinstance(difficulty, str) else difficulty)
    config, _ = parse_scenario(_data(f"{difficulty.value.lower()}.txt"))
    return config


def bundled_scenario(difficulty):
    return build_scenario(bundled_config(difficulty), bundled_library())
