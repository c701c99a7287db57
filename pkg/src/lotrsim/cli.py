"""Command-line entry point: `lotrsim simulate | sweep-budget | grid-agents | final-comp | validate`.

Exit codes: 0 success, 1 invalid configuration, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cards import (
    CardDataError, Difficulty, ScenarioError, ScenarioFileError, bundled_scenario,
    build_scenario, load_scenario_file, validate_scenario,
)
from .harness import AgentAssignment, ExperimentConfig, TrialError, preset, run_experiment, run_many, summarize
from .agents import PolicyKind
from .search import SearchBudget
from .state import EngineError

EXIT_OK, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for invariant violations here.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _u64(text):
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed {text} outside the unsigned 64-bit range")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _difficulty(text):
    try:
        return Difficulty(text.capitalize())
    except ValueError:
        raise argparse.ArgumentTypeError(f"difficulty must be easy, medium or hard, got {text!r}") from None


def _common(p):
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--out", type=Path, help="CSV path (default: print CSV to stdout)")
    p.add_argument("--scenario-dir", type=Path,
                   help="directory holding easy.txt/medium.txt/hard.txt to use instead of the bundled scenarios")


def build_parser():
    parser = _Parser(prog="lotrsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="run one agent assignment")
    sim.add_argument("--scenario", type=Path)
    sim.add_argument("--difficulty", type=_difficulty)
    for stage in ("planning", "questing", "defense"):
        sim.add_argument(f"--{stage}", type=int, choices=(1, 2, 3, 4), default=2)
    sim.add_argument("--budget", type=_positive, default=40)
    sim.add_argument("--playouts", choices=("random", "expert"), default="expert")
    _common(sim)

    for name, help_ in (("sweep-budget", "flat MC vs MCTS over playout budgets (medium)"),
                        ("grid-agents", "per-stage agent mixtures (medium)"),
                        ("final-comp", "final strategy comparison (hard)")):
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name != "sweep-budget":
            p.add_argument("--budget", type=_positive, default=40)
            p.add_argument("--playouts", choices=("random", "expert"), default="expert")

    val = sub.add_parser("validate", help="check a scenario file against the deck rules")
    val.add_argument("--scenario", type=Path, required=True)
    return parser


def _load(path):
    config, library = load_scenario_file(path)
    return config, library


def _scenario_for(args):
    def get(difficulty):
        d = Difficulty(difficulty)
        if args.scenario_dir is not None:
            config, library = _load(args.scenario_dir / f"{d.value.lower()}.txt")
            return build_scenario(config, library)
        return bundled_scenario(d)
    return get


def _emit(args, experiments):
    out = sys.stdout
    csv_text, table = summarize(experiments)
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(csv_text, encoding="utf-8")
        out.write(table)
    else:
        out.write(csv_text)
        print(file=sys.stderr)
        sys.stderr.write(table)


def _progress(label, summary):
    print(f"  {label}: {summary.render()}", file=sys.stderr, flush=True)


def cmd_simulate(args):
    if args.scenario is not None:
        config, library = _load(args.scenario)
        if args.difficulty is not None and args.difficulty is not config.difficulty:
            raise ConfigError(f"--difficulty {args.difficulty.value} contradicts the scenario file "
                              f"({config.difficulty.value})")
        scenario = build_scenario(config, library)
    else:
        scenario = bundled_scenario(args.difficulty or Difficulty.Medium)
    assignment = AgentAssignment.parse((args.planning, args.questing, args.defense))
    cfg = ExperimentConfig(scenario, assignment, SearchBudget(args.budget), PolicyKind(args.playouts),
                           args.trials, args.seed, args.workers, assignment.label)
    summary = run_experiment(cfg)
    _emit(args, [(assignment.label, cfg, summary)])
    return EXIT_OK


def cmd_preset(args):
    kwargs = {}
    if args.command != "sweep-budget":
        kwargs = {"budget": args.budget, "policy": PolicyKind(args.playouts)}
    configs = preset(args.command, _scenario_for(args), args.trials, args.seed, args.workers, **kwargs)
    _emit(args, run_many(configs, progress=_progress))
    return EXIT_OK


def cmd_validate(args):
    config, library = _load(args.scenario)
    violations = validate_scenario(config, library)
    for v in violations:
        print(f"{v.code}: {v.detail}" + (f" [{v.card_id}]" if v.card_id else ""))
    if violations:
        return EXIT_CONFIG
    print(f"{args.scenario}: ok")
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "validate": cmd_validate}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        handler = COMMANDS.get(args.command, cmd_preset)
        return handler(args)
    except (ConfigError, ScenarioError, ScenarioFileError, CardDataError, ValueError, OSError) as exc:
        print(f"lotrsim: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TrialError, EngineError) as exc:
        print(f"lotrsim: internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
