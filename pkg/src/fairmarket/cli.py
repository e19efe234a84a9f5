"""Command-line front end.

Subcommands:
  analyze    fairness measures for a salary CSV -> JSON report
  simulate   run the replica-exchange market from a TOML config (or resume a
             final-state JSON) -> trajectory CSV + final-state JSON
  solve      constrained maximum entropy over a salary grid -> solution CSV
             + multipliers JSON
  fit        lognormal fit of a salary CSV -> JSON {mu, sigma, ks}

Exit codes: 0 success (simulate: converged), 2 input/config error,
3 round or iteration limit hit.  Reproducibility is a contract: simulate
requires a seed from the config or --seed, never the wall clock.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, build_ensemble, load_config
from .core import (
    ConstraintSet,
    FairmarketError,
    NegotiationPolicy,
)
from .maxent import NoConvergence, SalaryGrid, solve_maxent
from .reporting import (
    ParseError,
    build_report,
    ensemble_from_final_state,
    final_state_document,
    load_salary_csv,
    render_json,
    report_to_dict,
    trajectory_csv_text,
)
from .simulation import RunStatus, StopRule, run_to_equilibrium

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_LIMIT = 3


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_analyze(args: argparse.Namespace) -> int:
    sample, labels = load_salary_csv(args.csv)
    doc = build_report(
        sample, labels=labels, source_file=str(args.csv), with_fit=args.fit
    )
    _write_text(args.output, render_json(report_to_dict(doc)))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.resume is not None:
        try:
            data = json.loads(Path(args.resume).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ParseError(f"state file not found: {args.resume}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.resume}: {exc}") from exc
        ensemble, alpha, epsilon, max_rounds, quiet_rounds = (
            ensemble_from_final_state(data, seed=args.seed)
        )
        policy = NegotiationPolicy(alpha, epsilon)
        stop = StopRule(max_rounds, quiet_rounds)
    else:
        config = load_config(args.config)
        seed = args.seed if args.seed is not None else config.seed
        if seed is None:
            raise ConfigError(
                "seed: required (set it in the config or pass --seed); "
                "wall-clock seeding is not supported"
            )
        ensemble = build_ensemble(config, seed)
        policy = config.policy
        stop = config.stop
        alpha, epsilon = config.alpha, config.epsilon
        max_rounds, quiet_rounds = config.max_rounds, config.quiet_rounds

    trajectory = run_to_equilibrium(ensemble, policy, stop)
    _write_text(args.trajectory, trajectory_csv_text(trajectory))
    _write_text(
        args.final_state,
        render_json(
            final_state_document(trajectory, alpha, epsilon, max_rounds, quiet_rounds)
        ),
    )
    print(
        f"{trajectory.status.value}: {trajectory.rounds_executed} rounds "
        f"({trajectory.total_trades} trades, last trade in round "
        f"{trajectory.trading_rounds})",
        file=sys.stderr,
    )
    return EXIT_OK if trajectory.status is RunStatus.CONVERGED else EXIT_LIMIT


def cmd_solve(args: argparse.Namespace) -> int:
    grid = SalaryGrid.uniform(args.grid_min, args.grid_max, args.grid_levels)
    constraints = ConstraintSet.of(
        mean_s=args.mean, mean_ln_s=args.mean_ln, mean_ln_s_sq=args.mean_ln_sq
    )
    solution = solve_maxent(grid, constraints, tol=args.tol, max_iter=args.max_iter)

    lines = ["level,probability"]
    for level, p in zip(grid.levels, solution.probabilities):
        lines.append(f"{float(level)!r},{float(p)!r}")
    _write_text(args.output, "\n".join(lines) + "\n")

    payload = {
        "constraints": [
            {"kind": c.kind.value, "target": c.target} for c in constraints
        ],
        "multipliers": [float(x) for x in solution.multipliers],
        "residual_norm": solution.residual_norm,
        "iterations": solution.iterations,
        "entropy_nats": solution.entropy_nats(),
    }
    _write_text(args.multipliers, render_json(payload))
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    sample, _ = load_salary_csv(args.csv)
    doc = build_report(sample, source_file=str(args.csv), with_fit=True)
    assert doc.lognormal is not None
    payload = {
        "input": {"file": str(args.csv), "rows": doc.rows},
        "mu": doc.lognormal.mu,
        "sigma": doc.lognormal.sigma,
        "ks": doc.lognormal.ks,
    }
    _write_text(args.output, render_json(payload))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairmarket",
        description="Salary-market fairness simulator and entropy toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="fairness measures for a salary CSV")
    p.add_argument("csv", help="CSV with a 'salary' column (optional 'category')")
    p.add_argument("--output", "-o", default=None, help="JSON path (default stdout)")
    p.add_argument("--fit", action="store_true", help="include a lognormal fit")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="run the replica-exchange market")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("config", nargs="?", help="TOML config path")
    group.add_argument(
        "--resume", help="final-state JSON to re-ingest as the initial state"
    )
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument(
        "--trajectory", default="trajectory.csv", help="per-round CSV output path"
    )
    p.add_argument(
        "--final-state", default="final_state.json", help="final-state JSON path"
    )
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("solve", help="constrained maximum entropy on a grid")
    p.add_argument("--grid-min", type=float, required=True)
    p.add_argument("--grid-max", type=float, required=True)
    p.add_argument("--grid-levels", type=int, default=512)
    p.add_argument("--mean", type=float, default=None, help="target mean salary")
    p.add_argument("--mean-ln", type=float, default=None, help="target mean of ln S")
    p.add_argument(
        "--mean-ln-sq", type=float, default=None, help="target mean of (ln S)^2"
    )
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument(
        "--output", "-o", default=None, help="solution CSV path (default stdout)"
    )
    p.add_argument(
        "--multipliers", default=None, help="multipliers JSON path (default stdout)"
    )
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("fit", help="lognormal fit of a salary CSV")
    p.add_argument("csv", help="CSV with a 'salary' column")
    p.add_argument("--output", "-o", default=None, help="JSON path (default stdout)")
    p.set_defaults(func=cmd_fit)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoConvergence as exc:
        print(f"error: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except FairmarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def entrypoint() -> None:  # console-script shim
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
