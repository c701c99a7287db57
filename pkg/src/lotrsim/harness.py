"""Seeded game batches, per-stage agent assignment, winrate statistics and result files."""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum

from .agents import PolicyKind, expert_decision, random_decision
from .cards import ScenarioConfig, build_scenario
from .engine import advance, apply_decision, init_game
from .rng import Stream, derive_seed, mix64
from .search import SearchBudget, flat_mc_decide, mcts_decide
from .state import EngineError, Stage, TerminalStatus

AGENT_STREAM_SALT = 0x5EED_A6E7_0000_0001
Z95 = 1.96


class AgentKind(IntEnum):
    Random = 1
    Expert = 2
    FlatMC = 3
    MCTS = 4


@dataclass(frozen=True)
class AgentAssignment:
    planning: AgentKind
    questing: AgentKind
    defense: AgentKind

    @classmethod
    def parse(cls, text):
        """'4-2-4' or (4, 2, 4) -> AgentAssignment."""
        parts = text.split("-") if isinstance(text, str) else list(text)
        if len(parts) != 3:
            raise ValueError(f"expected three agent numbers, got {text!r}")
        return cls(*(AgentKind(int(p)) for p in parts))

    @property
    def label(self):
        return f"{int(self.planning)}-{int(self.questing)}-{int(self.defense)}"

    def for_stage(self, stage):
        if stage == Stage.Planning:
            return self.planning
        if stage == Stage.CommitCharacters:
            return self.questing
        if stage == Stage.DeclareDefenders:
            return self.defense
        return AgentKind.Expert

    @property
    def uses_search(self):
        return any(k >= AgentKind.FlatMC for k in (self.planning, self.questing, self.defense))


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: object  # ScenarioConfig or a built Scenario
    assignment: AgentAssignment
    budget: SearchBudget = SearchBudget(40)
    playout_policy: PolicyKind = PolicyKind.Expert
    trials: int = 1000
    master_seed: int = 0
    workers: int = 1
    label: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class GameRecord:
    seed: int
    outcome: TerminalStatus
    rounds: int
    seconds: float

    @property
    def won(self):
        return self.outcome is TerminalStatus.Win


@dataclass
class Summary:
    wins: int
    trials: int
    mean_game_seconds: float = 0.0
    stdev_game_seconds: float = 0.0
    records: list = field(default_factory=list, repr=False)

    @property
    def winrate(self):
        return self.wins / self.trials

    @property
    def ci_halfwidth(self):
        return confidence_interval(self.winrate, self.trials)

    def render(self):
        return f"{100 * self.winrate:.1f} ± {100 * self.ci_halfwidth:.2f}"


class TrialError(RuntimeError):
    def __init__(self, seed, cause):
        super().__init__(f"trial with seed {seed:#018x} aborted: {cause!r}")
        self.seed = seed
        self.cause = cause


def confidence_interval(p, n):
    """Normal-approximation 95% halfwidth of a binomial proportion."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"winrate {p} outside [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    return Z95 * math.sqrt(p * (1.0 - p) / n)


def _as_scenario(scenario):
    if isinstance(scenario, ScenarioConfig):
        from .cards import bundled_library
        return build_scenario(scenario, bundled_library())
    return scenario


def decide(state, kind, budget, policy, rng):
    if kind is AgentKind.Expert:
        return expert_decision(state)
    if kind is AgentKind.Random:
        return random_decision(state, rng)
    if kind is AgentKind.FlatMC:
        return flat_mc_decide(state, budget, policy, rng)
    return mcts_decide(state, budget, policy, rng)


def run_game(scenario, assignment, budget, playout_policy, seed):
    """Play one full game. The deck shuffles and reveals draw from the game's own stream,
    the agents from a second stream derived from the same seed."""
    scenario = _as_scenario(scenario)
    policy = PolicyKind(playout_policy)
    budget = budget if isinstance(budget, SearchBudget) else SearchBudget(int(budget))
    start = time.perf_counter()
    state = init_game(scenario, seed)
    agent_rng = Stream(mix64(seed ^ AGENT_STREAM_SALT))
    while True:
        status = advance(state)
        if status is not TerminalStatus.Ongoing:
            break
        kind = assignment.for_stage(state.stage)
        apply_decision(state, decide(state, kind, budget, policy, agent_rng))
    return GameRecord(seed, status, state.round_number, time.perf_counter() - start)


_WORKER = {}


def _init_worker(scenario, assignment, budget, policy):
    _WORKER.update(scenario=scenario, assignment=assignment, budget=budget, policy=policy)


def _trial(seed):
    w = _WORKER
    try:
        return run_game(w["scenario"], w["assignment"], w["budget"], w["policy"], seed)
    except EngineError as exc:
        raise TrialError(seed, exc) from exc


def trial_seeds(master_seed, trials):
    return [derive_seed(master_seed, i) for i in range(trials)]


def run_experiment(config):
    """Run all trials; per-trial seeds depend only on (master_seed, index), so the
    records come out identical for any worker count."""
    scenario = _as_scenario(config.scenario)
    setup = (scenario, config.assignment, config.budget, PolicyKind(config.playout_policy))
    seeds = trial_seeds(config.master_seed, config.trials)
    if config.workers == 1 or len(seeds) == 1:
        _init_worker(*setup)
        records = [_trial(s) for s in seeds]
    else:
        chunk = max(1, len(seeds) // (config.workers * 8))
        with ProcessPoolExecutor(max_workers=config.workers, initializer=_init_worker,
                                 initargs=setup) as pool:
            records = list(pool.map(_trial, seeds, chunksize=chunk))
    return summarize_records(records)


def summarize_records(records):
    secs = [r.seconds for r in records]
    return Summary(
        wins=sum(r.won for r in records),
        trials=len(records),
        mean_game_seconds=statistics.fmean(secs) if secs else 0.0,
        stdev_game_seconds=statistics.stdev(secs) if len(secs) > 1 else 0.0,
        records=records,
    )


# -- results ---------------------------------------------------------------------

CSV_COLUMNS = ["label", "planning", "questing", "defense", "difficulty", "budget",
               "playout_policy", "trials", "wins", "winrate_pct", "ci_pct", "mean_s", "stdev_s"]
TIMING_COLUMNS = ("mean_s", "stdev_s")


def _row(label, config, summary):
    a = config.assignment
    return {
        "label": label,
        "planning": int(a.planning),
        "questing": int(a.questing),
        "defense": int(a.defense),
        "difficulty": _as_scenario(config.scenario).difficulty.value,
        "budget": config.budget.playouts,
        "playout_policy": PolicyKind(config.playout_policy).value,
        "trials": summary.trials,
        "wins": summary.wins,
        "winrate_pct": f"{100 * summary.winrate:.1f}",
        "ci_pct": f"{100 * summary.ci_halfwidth:.2f}",
        "mean_s": f"{summary.mean_game_seconds:.6f}",
        "stdev_s": f"{summary.stdev_game_seconds:.6f}",
    }


def summarize(experiments, timing=True):
    """experiments: list of (label, ExperimentConfig, Summary). Returns (csv text, table text)."""
    rows = [_row(label, cfg, s) for label, cfg, s in experiments]
    cols = CSV_COLUMNS if timing else [c for c in CSV_COLUMNS if c not in TIMING_COLUMNS]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)

    ordered = sorted(experiments, key=lambda e: (-e[2].wins / e[2].trials, e[0]))
    width = max([len("label")] + [len(e[0]) for e in ordered])
    lines = [f"{'label':<{width}}  {'winrate':>13}  {'mean s':>9}"]
    for label, _, s in ordered:
        lines.append(f"{label:<{width}}  {s.render():>13}  {s.mean_game_seconds:>9.3f}")
    return buf.getvalue(), "\n".join(lines) + "\n"


# -- presets -----------------------------------------------------------------------

SWEEP_BUDGETS = (1, 5, 10, 20, 40, 80)
TABLE_TRIPLES = (
    "3-2-2", "4-2-2", "4-2-4", "2-2-4", "3-3-2", "2-3-2", "4-4-4",
    "4-4-2", "2-4-4", "2-4-2", "3-2-3", "2-2-3", "2-3-3", "3-3-3",
)
GRID_BASELINES = ("2-2-2", "1-1-1")
FINAL_TRIPLES = ("1-1-1", "2-2-2", "3-3-3", "4-4-4", "3-2-2", "4-2-2", "4-2-4")


def preset(name, scenario_for, trials, master_seed, workers, budget=40, policy=PolicyKind.Expert):
    """List of (label, ExperimentConfig). `scenario_for(difficulty_name)` supplies scenarios."""
    out = []
    if name == "sweep-budget":
        sc = scenario_for("Medium")
        for agent, triple in (("flat", "3-3-3"), ("mcts", "4-4-4")):
            for pol in (PolicyKind.Random, PolicyKind.Expert):
                for b in SWEEP_BUDGETS:
                    label = f"{agent}-{pol.value[0]}-{b}"
                    out.append((label, ExperimentConfig(sc, AgentAssignment.parse(triple), SearchBudget(b),
                                                        pol, trials, master_seed, workers, label)))
    elif name in ("grid-agents", "final-comp"):
        diff = "Medium" if name == "grid-agents" else "Hard"
        sc = scenario_for(diff)
        triples = TABLE_TRIPLES + GRID_BASELINES if name == "grid-agents" else FINAL_TRIPLES
        for t in triples:
            out.append((t, ExperimentConfig(sc, AgentAssignment.parse(t), SearchBudget(budget),
                                            PolicyKind(policy), trials, master_seed, workers, t)))
    else:
        raise ValueError(f"unknown preset {name!r}")
    return out


def run_many(configs, progress=None):
    results = []
    for label, cfg in configs:
        s = run_experiment(cfg)
        results.append((label, cfg, s))
        if progress is not None:
            progress(label, s)
    return results
