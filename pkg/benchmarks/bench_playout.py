"""Compiled playout kernel versus the pure-Python fallback.

    python3 benchmarks/bench_playout.py [--states 200] [--repeat 5] [--budget 40]

Reports microseconds per playout for both playout policies and the wall time of one
flat-MC and one MCTS decision, with the kernel on and off. Outcomes are compared as a
side check: both paths must agree playout for playout.
"""

import argparse
import statistics
import sys
import time

from lotrsim import kernel
from lotrsim.agents import PolicyKind, policy_decision
from lotrsim.cards import Difficulty, bundled_scenario
from lotrsim.engine import advance, apply_decision, init_game
from lotrsim.rng import Stream
from lotrsim.search import SearchBudget, flat_mc_decide, mcts_decide, simulate_playout
from lotrsim.state import Stage, TerminalStatus


def sample_states(n):
    sc = bundled_scenario(Difficulty.Medium)
    out, seed = [], 0
    while len(out) < n:
        s = init_game(sc, seed)
        rng = Stream(seed)
        while advance(s) is TerminalStatus.Ongoing and len(out) < n:
            if s.stage in (Stage.Planning, Stage.CommitCharacters, Stage.DeclareDefenders):
                out.append(s.copy())
            apply_decision(s, policy_decision(s, PolicyKind.Random, rng))
        seed += 1
    return out


def time_playouts(states, policy, repeat):
    outcomes = []
    best = float("inf")
    for _ in range(repeat):
        outcomes.clear()
        t0 = time.perf_counter()
        for i, s in enumerate(states):
            outcomes.append(simulate_playout(s, policy, Stream(i)))
        best = min(best, time.perf_counter() - t0)
    return best / len(states) * 1e6, outcomes


def time_decisions(states, decide, budget):
    times = []
    for i, s in enumerate(states):
        t0 = time.perf_counter()
        decide(s, SearchBudget(budget), PolicyKind.Expert, Stream(i))
        times.append(time.perf_counter() - t0)
    return statistics.fmean(times) * 1e3


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--budget", type=int, default=40)
    ap.add_argument("--decisions", type=int, default=10)
    args = ap.parse_args(argv)

    if not kernel.available():
        print("compiled kernel not built; only the pure-Python path can run", file=sys.stderr)
        return 1
    states = sample_states(args.states)
    rows = []
    agree = True
    for policy in PolicyKind:
        kernel.set_enabled(True)
        fast, out_fast = time_playouts(states, policy, args.repeat)
        kernel.set_enabled(False)
        slow, out_slow = time_playouts(states, policy, max(1, args.repeat // 2))
        agree &= out_fast == out_slow
        rows.append((f"playout ({policy.value})", "us", fast, slow))
    few = states[:args.decisions]
    for name, decide in (("flat MC decision", flat_mc_decide), ("MCTS decision", mcts_decide)):
        kernel.set_enabled(True)
        fast = time_decisions(few, decide, args.budget)
        kernel.set_enabled(False)
        slow = time_decisions(few, decide, args.budget)
        rows.append((f"{name} (budget {args.budget})", "ms", fast, slow))
    kernel.set_enabled(True)

    print(f"{'measure':<28} {'compiled':>12} {'pure Python':>12} {'speedup':>8}")
    for name, unit, fast, slow in rows:
        print(f"{name:<28} {fast:>9.1f} {unit} {slow:>9.1f} {unit} {slow / fast:>7.1f}x")
    print(f"outcomes identical on both paths: {agree}")
    return 0 if agree else 2


if __name__ == "__main__":
    sys.exit(main())
