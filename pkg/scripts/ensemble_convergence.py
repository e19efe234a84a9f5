#!/usr/bin/env python3
"""Convergence study: 64 randomized replica companies across many seeds.

For each seed, report rounds to convergence, the final cross-company class
gap, and the rise in mean share entropy from the randomized start to the
equilibrium.  Emits a plot-ready CSV when --output is given.

Usage:
    python scripts/ensemble_convergence.py [--seeds 20] [--companies 64] [--output runs.csv]
"""

import argparse
import csv
import sys
import time

from fairmarket import (
    NegotiationPolicy,
    StopRule,
    max_class_gap,
    randomized_replicas,
    run_to_equilibrium,
)

BUDGET = 60_000_000_00
CLASS_COUNTS = (500, 300, 200)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--companies", type=int, default=64)
    parser.add_argument("--max-rounds", type=int, default=10_000)
    parser.add_argument("--output", default=None, help="per-seed CSV path")
    args = parser.parse_args()

    policy = NegotiationPolicy()
    stop = StopRule(max_rounds=args.max_rounds, quiet_rounds=3)
    rows = []
    started = time.perf_counter()
    for seed in range(args.seeds):
        ensemble = randomized_replicas(args.companies, CLASS_COUNTS, BUDGET, seed)
        trajectory = run_to_equilibrium(ensemble, policy, stop)
        first = trajectory.records[0]
        last = trajectory.records[-1]
        rows.append(
            {
                "seed": seed,
                "status": trajectory.status.value,
                "rounds": trajectory.rounds_executed,
                "trading_rounds": trajectory.trading_rounds,
                "final_gap_minor_units": max_class_gap(trajectory.final),
                "entropy_start": first.mean_share_entropy_nats,
                "entropy_end": last.mean_share_entropy_nats,
            }
        )
        print(
            f"seed {seed:>3}: {trajectory.status.value:<11} "
            f"rounds={trajectory.rounds_executed:<5} gap={rows[-1]['final_gap_minor_units']:<4} "
            f"H {first.mean_share_entropy_nats:.4f} -> {last.mean_share_entropy_nats:.4f}"
        )
    elapsed = time.perf_counter() - started

    converged = sum(1 for r in rows if r["status"] == "CONVERGED")
    print(f"\n{converged}/{len(rows)} converged in {elapsed:.1f}s")

    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.output}")

    if converged < len(rows):
        sys.exit(3)


if __name__ == "__main__":
    main()
