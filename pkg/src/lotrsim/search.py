"""Flat Monte-Carlo (Agent 3) and UCT tree search with expert-filtered expansion (Agent 4).

Chance is handled open-loop: every playout / iteration starts from a copy of the real
state whose hidden decks are reshuffled from the search stream, and the tree branches
only on player decisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernel
from .actions import expansion_actions, legal_actions
from .agents import FIXED_EXPERT_STAGES, PolicyKind, expert_decision, policy_decision
from .engine import advance, apply_decision, terminal_status
from .rng import Stream
from .state import TerminalStatus


@dataclass(frozen=True)
class SearchBudget:
    playouts: int

    def __post_init__(self):
        if self.playouts < 1:
            raise ValueError(f"playout budget must be >= 1, got {self.playouts}")


@dataclass
class SearchStats:
    playouts: int = 0
    decisions: int = 0


def _budget(budget):
    return budget.playouts if isinstance(budget, SearchBudget) else SearchBudget(int(budget)).playouts


def uct_value(winrate, parent_visits, visits):
    return winrate + math.sqrt(2.0 * math.log(parent_visits) / visits)


class SearchNode:
    __slots__ = ("action", "parent", "visits", "wins", "children", "untried", "state_snapshot")

    def __init__(self, action=None, parent=None, state=None):
        self.action = action
        self.parent = parent
        self.visits = 0
        self.wins = 0
        self.children = []
        self.untried = []
        self.state_snapshot = state

    @property
    def winrate(self):
        if self.visits == 0:
            raise ZeroDivisionError("winrate of an unvisited node")
        return self.wins / self.visits

    def child_for(self, action):
        for c in self.children:
            if c.action == action:
                return c
        return None

    def __repr__(self):
        return f"SearchNode({self.action!r}, {self.wins}/{self.visits}, {len(self.children)} children)"


def select_child(node, candidates=None):
    """Argmax of the UCT score; ties go to the earliest candidate."""
    cands = node.children if candidates is None else candidates
    if not cands:
        raise ValueError("select_child on a node without children")
    best, best_score = None, -math.inf
    for c in cands:
        score = uct_value(c.wins / c.visits, node.visits, c.visits)
        if score > best_score:
            best, best_score = c, score
    return best


def backpropagate(path, outcome):
    won = 1 if outcome is TerminalStatus.Win or outcome is True else 0
    for node in path:
        node.visits += 1
        node.wins += won
    return path


# -- playouts ------------------------------------------------------------------

def determinize(state, rng):
    """Copy of `state` with both hidden decks reshuffled from a fresh sub-stream of `rng`."""
    s = state.copy(rng=Stream(rng.next_u64()))
    s.rng.shuffle(s.player_deck)
    s.rng.shuffle(s.encounter_deck)
    return s


def python_playout(state, policy):
    """Play `state` (mutated) to the end using its own stream for chance and random choices."""
    rng = state.rng
    while True:
        status = advance(state)
        if status is not TerminalStatus.Ongoing:
            return status
        apply_decision(state, policy_decision(state, policy, rng))


def simulate_playout(state, policy, rng):
    """Outcome of playing a copy of `state` to the end; `rng` is consumed in place."""
    policy = PolicyKind(policy)
    status = terminal_status(state)
    if status is not TerminalStatus.Ongoing:
        return status
    core = kernel.get(state)
    if core is not None:
        code, rng.state = core.playout(kernel.pack(state), policy is PolicyKind.Expert, rng.state, False)
        return kernel.STATUS[code]
    return python_playout(state.copy(rng=rng), policy)


class _Roller:
    """Repeated determinized playouts from one fixed state (packed once for the kernel)."""

    def __init__(self, state, policy):
        self.state = state
        self.policy = policy
        self.status = terminal_status(state)
        self.core = kernel.get(state) if self.status is TerminalStatus.Ongoing else None
        self.packed = kernel.pack(state) if self.core is not None else None

    def run(self, seed):
        if self.status is not TerminalStatus.Ongoing:
            return self.status is TerminalStatus.Win
        if self.core is not None:
            code, _ = self.core.playout(self.packed, self.policy is PolicyKind.Expert, seed, True)
            return code == 0
        s = self.state.copy(rng=Stream(seed))
        s.rng.shuffle(s.player_deck)
        s.rng.shuffle(s.encounter_deck)
        return python_playout(s, self.policy) is TerminalStatus.Win


# -- flat Monte-Carlo ------------------------------------------------------------

def flat_mc_decide(state, budget, policy, rng, stats=None):
    """Depth-one search over the unfiltered legal actions, `budget` playouts per child."""
    policy = PolicyKind(policy)
    n = _budget(budget)
    children = legal_actions(state)
    if len(children) == 1:
        return children[0]
    best, best_wins = None, -1
    for action in children:
        child = state.copy()
        apply_decision(child, action)
        roller = _Roller(child, policy)
        wins = 0
        for _ in range(n):
            wins += roller.run(rng.next_u64())
        if stats is not None:
            stats.playouts += n
        if wins > best_wins:
            best, best_wins = action, wins
    if stats is not None:
        stats.decisions += 1
    return best


# -- UCT tree search -------------------------------------------------------------

def tree_advance(state):
    """Advance to the next branching decision. Returns (status, filtered actions or None).

    Travel and Declare Attackers are always played by the expert rules, and decisions
    with a single remaining option are applied without creating a node.
    """
    while True:
        status = advance(state)
        if status is not TerminalStatus.Ongoing:
            return status, None
        if state.stage in FIXED_EXPERT_STAGES:
            apply_decision(state, expert_decision(state))
            continue
        avail = expansion_actions(state)
        if len(avail) == 1:
            apply_decision(state, avail[0])
            continue
        return status, avail


def mcts_decide(state, budget, policy, rng, stats=None, root_out=None):
    """UCT search from `state`; returns the most visited root action."""
    policy = PolicyKind(policy)
    n = _budget(budget)
    root_actions = expansion_actions(state)
    if len(root_actions) == 1:
        return root_actions[0]
    root = SearchNode(None, None, state.copy())
    root.untried = list(root_actions)
    for _ in range(n):
        s = determinize(state, rng)
        node, path, avail = root, [root], root_actions
        while True:
            by_action = {c.action: c for c in node.children}
            untried = [a for a in avail if a not in by_action]
            node.untried = untried
            if untried:
                action = untried[0]
                apply_decision(s, action)
                tree_advance(s)
                child = SearchNode(action, node, s.copy())
                node.children.append(child)
                node.untried = [a for a in untried if a != action]
                path.append(child)
                break
            child = select_child(node, [by_action[a] for a in avail])
            apply_decision(s, child.action)
            path.append(child)
            node = child
            status, avail = tree_advance(s)
            if avail is None:
                break
        outcome = simulate_playout(s, policy, s.rng)
        backpropagate(path, outcome)
    if stats is not None:
        stats.playouts += n
        stats.decisions += 1
    if root_out is not None:
        root_out.append(root)
    best = None
    for a in root_actions:
        c = root.child_for(a)
        if c is not None and (best is None or c.visits > best.visits):
            best = c
    return best.action
