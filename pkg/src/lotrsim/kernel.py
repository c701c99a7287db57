"""Selects the compiled playout kernel when it is built, else the pure-Python path.

Set LOTRSIM_PURE=1 to force the pure-Python playouts. Both paths consume the random
stream identically, so results do not depend on which one is active.
"""

from __future__ import annotations

import os
from array import array

from . import rng
from .agents import COMMIT_MARGIN
from .cards import Kind, Sphere
from .state import EnemyInPlay, TerminalStatus

try:
    from ._kernel import Kernel as _CompiledKernel
except ImportError:  # extension not built
    _CompiledKernel = None

STATUS = (TerminalStatus.Win, TerminalStatus.LossThreat, TerminalStatus.LossHeroesDead)
KIND_CODE = {Kind.Hero: 0, Kind.Ally: 1, Kind.Enemy: 2, Kind.Location: 3}
SPHERE_CODE = {s: i for i, s in enumerate(Sphere)}

_enabled = _CompiledKernel is not None and not os.environ.get("LOTRSIM_PURE")
_cache = {}


def available():
    return _CompiledKernel is not None


def enabled():
    return _enabled


def set_enabled(flag):
    """Toggle the compiled kernel at runtime (used by tests and the benchmark)."""
    global _enabled
    previous = _enabled
    _enabled = bool(flag) and _CompiledKernel is not None
    rng.fast_shuffle = rng._compiled_shuffle if _enabled else None
    return previous


class CardTable:
    """Dense integer encoding of a library; indices follow ascending card id."""

    def __init__(self, library):
        self.ids = sorted(library)
        self.index = {cid: i for i, cid in enumerate(self.ids)}
        self.rows = []
        for cid in self.ids:
            d = library[cid]
            self.rows.append((
                KIND_CODE[d.kind], SPHERE_CODE[d.sphere] if d.sphere is not None else -1,
                d.cost, d.willpower, d.attack, d.defense, d.hitpoints,
                d.engagement_cost, d.threat, d.quest_points,
            ))


def table_for(library):
    key = id(library)
    hit = _cache.get(key)
    if hit is None or hit[0] is not library:
        table = CardTable(library)
        core = _CompiledKernel(table.rows, COMMIT_MARGIN) if _CompiledKernel is not None else None
        hit = (library, table, core)
        _cache[key] = hit
    return hit


def get(state):
    if not _enabled:
        return None
    return table_for(state.scenario.library)[2]


def pack(state):
    """Flatten a GameState into the kernel's int32 layout."""
    idx = table_for(state.scenario.library)[1].index
    out = [state.round_number, int(state.stage), state.threat_level,
           state.quest_progress, state.quest_target]
    chars = state.heroes + state.allies
    pos = {c.card.uid: i for i, c in enumerate(chars)}
    for group in (state.heroes, state.allies):
        out.append(len(group))
        for c in group:
            out += (idx[c.card.defn.id], c.damage, int(c.tapped), c.resources, int(c.committed))
    for zone in (state.hand, state.player_deck, state.encounter_deck, state.encounter_discard):
        out.append(len(zone))
        out += [idx[c.defn.id] for c in zone]
    out.append(len(state.staging_area))
    for x in state.staging_area:
        out += (idx[x.card.defn.id], x.damage if isinstance(x, EnemyInPlay) else x.progress)
    out.append(len(state.engagement_area))
    for e in state.engagement_area:
        out += (idx[e.card.defn.id], e.damage)
    loc = state.active_location
    out += (idx[loc.card.defn.id], loc.progress) if loc is not None else (-1, 0)
    if state.pending_defense is None:
        out.append(-1)
    else:
        chosen = dict(state.pending_defense)
        out.append(len(state.engagement_area))
        for e in state.engagement_area:
            d = chosen.get(e.card.uid)
            out.append(pos[d] if d is not None else -1)
    if state.pending_attack is None:
        out += (-1, 0)
    else:
        euid, attackers = state.pending_attack
        out.append(next(i for i, e in enumerate(state.engagement_area) if e.card.uid == euid))
        members = sorted(pos[u] for u in attackers)
        out.append(len(members))
        out += members
    return array("i", out)
