#!/usr/bin/env python3
"""Run the two-company benchmark and print the round-by-round story.

Company 0 starts with every class at the average wage; company 1 pays
30K/30K/180K.  One trading round settles both on the bimodal equilibrium
{800 @ 45000.00, 200 @ 120000.00} with the budget conserved to the cent.

Usage:
    python scripts/run_ab_example.py [--seed N]
"""

import argparse
from pathlib import Path

from fairmarket import money_to_str, run_to_equilibrium
from fairmarket.config import build_ensemble, load_config

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "ab_example.toml"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args()

    config = load_config(CONFIG)
    seed = args.seed if args.seed is not None else config.seed
    ensemble = build_ensemble(config, seed)
    trajectory = run_to_equilibrium(ensemble, config.policy, config.stop)

    print(f"{'round':>5} {'trades':>6} {'mean H (nats)':>14} {'mean ln W':>10}")
    for rec in trajectory.records:
        print(
            f"{rec.round:>5} {rec.trades:>6} "
            f"{rec.mean_share_entropy_nats:>14.6f} "
            f"{rec.mean_log_multiplicity_nats:>10.2f}"
        )
    print(f"\n{trajectory.status.value} after {trajectory.rounds_executed} rounds")
    for company in trajectory.final.companies:
        dist = company.category_distribution()
        cells = ", ".join(
            f"{count} @ {money_to_str(level)}"
            for level, count in zip(dist.levels, dist.counts)
        )
        print(f"  {company.company_id}: {cells}  (budget {money_to_str(company.budget)})")


if __name__ == "__main__":
    main()
