"""Data ingestion and emission: salary CSVs in, JSON reports and trajectory
CSVs out.

Emitted floats use Python's shortest round-trip representation; money fields
are exact two-decimal strings.  All serialization here round-trips losslessly
(parse(render(x)) == x), which is what lets a final-state document be
re-ingested as the initial state of a new run.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence, TextIO

from .core import (
    CompanyState,
    FairmarketError,
    FairnessReport,
    MarketEnsemble,
    Money,
    NonPositiveSalary,
    SalarySample,
    SkillClass,
    money_from_str,
    money_to_str,
)
from .lognormal import fit_lognormal, ks_statistic
from .metrics import (
    TheilDecomposition,
    gini,
    maximin,
    share_entropy,
    theil_decomposition,
    theil_index,
)
from .simulation import Trajectory


class ParseError(FairmarketError):
    """Malformed input data; the message carries the file, row, and column."""


# ---------------------------------------------------------------------------
# CSV ingestion

def load_salary_csv(path: str | Path) -> tuple[SalarySample, list[str] | None]:
    """Read a salary CSV with a required ``salary`` header column and an
    optional ``category`` column.

    Salaries are positive dot-decimal major-unit values.  Returns the sample
    and, when present, the per-row category labels.  Raises ParseError for
    structural problems and NonPositiveSalary (naming the row) for zero or
    negative salaries.
    """
    path = Path(path)
    try:
        handle = open(path, newline="", encoding="utf-8")
    except FileNotFoundError as exc:
        raise ParseError(f"{path}: file not found") from exc
    with handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or "salary" not in reader.fieldnames:
            raise ParseError(f"{path}: missing required 'salary' header column")
        has_category = "category" in reader.fieldnames
        salaries: list[Money] = []
        labels: list[str] = []
        for row_number, row in enumerate(reader, start=2):
            raw = row.get("salary")
            if raw is None or raw.strip() == "":
                raise ParseError(f"{path}:{row_number}: column 'salary' is empty")
            try:
                amount = money_from_str(raw)
            except ValueError as exc:
                raise ParseError(
                    f"{path}:{row_number}: column 'salary': {exc}"
                ) from exc
            if amount <= 0:
                raise NonPositiveSalary(
                    f"{path}:{row_number}: salary must be positive, got {raw.strip()}"
                )
            salaries.append(amount)
            if has_category:
                labels.append((row.get("category") or "").strip())
    if not salaries:
        raise ParseError(f"{path}: no data rows")
    return SalarySample(salaries), (labels if has_category else None)


# ---------------------------------------------------------------------------
# Reports

@dataclass(frozen=True)
class CategoryBreakdown:
    """Category-level statistics for a labelled sample: per-label headcounts,
    their entropy and multiplicity, and the Theil between/within split."""

    labels: tuple[str, ...]
    counts: tuple[int, ...]
    entropy_nats: float
    log_multiplicity_nats: float
    theil: TheilDecomposition


@dataclass(frozen=True)
class LognormalFitSummary:
    mu: float
    sigma: float
    ks: float


@dataclass(frozen=True)
class ReportDocument:
    """A FairnessReport plus optional category and lognormal-fit extras and
    input provenance."""

    report: FairnessReport
    source_file: str | None
    rows: int
    categories: CategoryBreakdown | None = None
    lognormal: LognormalFitSummary | None = None


def _mean_salary(sample: SalarySample) -> Money:
    # round-half-even to a whole minor unit; exactness lives in the total
    return round(Fraction(sample.total, sample.n))


def build_report(
    sample: SalarySample,
    labels: Sequence[str] | None = None,
    source_file: str | None = None,
    with_fit: bool = False,
) -> ReportDocument:
    """Compute every fairness measure for a sample; with labels, add the
    category entropy/multiplicity and Theil decomposition; with ``with_fit``,
    add the lognormal fit and its KS distance."""
    categories = None
    log_w = None
    if labels is not None:
        if len(labels) != sample.n:
            raise ParseError("need one category label per salary row")
        group_names = sorted(set(labels))
        groups = [
            [i for i, lab in enumerate(labels) if lab == name]
            for name in group_names
        ]
        decomposition = theil_decomposition(sample, groups)
        counts = [len(g) for g in groups]
        n = sample.n
        p = [c / n for c in counts]
        entropy = -math.fsum(x * math.log(x) for x in p if x > 0) + 0.0
        log_w = math.lgamma(n + 1) - math.fsum(math.lgamma(c + 1) for c in counts)
        if len(counts) == 1:
            log_w = 0.0
        categories = CategoryBreakdown(
            labels=tuple(group_names),
            counts=tuple(counts),
            entropy_nats=entropy,
            log_multiplicity_nats=max(log_w, 0.0),
            theil=decomposition,
        )
    report = FairnessReport(
        entropy_nats=share_entropy(sample),
        theil=theil_index(sample),
        gini=gini(sample),
        maximin=maximin(sample),
        n=sample.n,
        mean_salary=_mean_salary(sample),
        log_multiplicity_nats=(
            categories.log_multiplicity_nats if categories else None
        ),
    )
    lognormal = None
    if with_fit:
        params = fit_lognormal(sample)
        lognormal = LognormalFitSummary(
            mu=params.mu, sigma=params.sigma, ks=ks_statistic(sample, params)
        )
    return ReportDocument(
        report=report,
        source_file=source_file,
        rows=sample.n,
        categories=categories,
        lognormal=lognormal,
    )


def report_to_dict(doc: ReportDocument) -> dict[str, Any]:
    out: dict[str, Any] = {
        "input": {"file": doc.source_file, "rows": doc.rows},
        "n": doc.report.n,
        "mean_salary": money_to_str(doc.report.mean_salary),
        "maximin": money_to_str(doc.report.maximin),
        "share_entropy_nats": doc.report.entropy_nats,
        "theil": doc.report.theil,
        "gini": doc.report.gini,
    }
    if doc.categories is not None:
        cat = doc.categories
        out["categories"] = {
            "labels": list(cat.labels),
            "counts": list(cat.counts),
            "entropy_nats": cat.entropy_nats,
            "log_multiplicity_nats": cat.log_multiplicity_nats,
            "theil_between": cat.theil.between,
            "theil_within": list(cat.theil.within),
            "theil_weights": list(cat.theil.weights),
        }
    if doc.lognormal is not None:
        out["lognormal_fit"] = {
            "mu": doc.lognormal.mu,
            "sigma": doc.lognormal.sigma,
            "ks": doc.lognormal.ks,
        }
    return out


def render_json(payload: dict[str, Any]) -> str:
    """Canonical JSON text: sorted keys, two-space indent, newline at EOF."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Simulation outputs

def write_trajectory_csv(trajectory: Trajectory, handle: TextIO) -> None:
    """Per-round statistics: round, trades, mean entropy, mean log W."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["round", "trades", "mean_entropy_nats", "mean_log_w_nats"])
    for record in trajectory.records:
        writer.writerow(
            [
                record.round,
                record.trades,
                repr(record.mean_share_entropy_nats),
                repr(record.mean_log_multiplicity_nats),
            ]
        )


def trajectory_csv_text(trajectory: Trajectory) -> str:
    buffer = io.StringIO()
    write_trajectory_csv(trajectory, buffer)
    return buffer.getvalue()


def company_to_dict(company: CompanyState) -> dict[str, Any]:
    return {
        "company_id": company.company_id,
        "budget": money_to_str(company.budget),
        "classes": [
            {
                "class_id": c.class_id,
                "count": c.count,
                "salary": money_to_str(c.salary),
                "value_rank": c.value_rank,
            }
            for c in company.classes
        ],
    }


def company_from_dict(data: dict[str, Any]) -> CompanyState:
    try:
        classes = [
            SkillClass(
                class_id=int(c["class_id"]),
                count=int(c["count"]),
                salary=money_from_str(c["salary"]),
                value_rank=int(c["value_rank"]),
            )
            for c in data["classes"]
        ]
        return CompanyState(
            str(data["company_id"]), classes, money_from_str(data["budget"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed company record: {exc}") from exc


def final_state_document(
    trajectory: Trajectory,
    alpha: Fraction,
    epsilon: Money,
    max_rounds: int,
    quiet_rounds: int,
) -> dict[str, Any]:
    final = trajectory.final
    return {
        "status": trajectory.status.value,
        "rounds": trajectory.rounds_executed,
        "trading_rounds": trajectory.trading_rounds,
        "total_trades": trajectory.total_trades,
        "seed": final.seed,
        "alpha": str(alpha),
        "epsilon": money_to_str(epsilon),
        "max_rounds": max_rounds,
        "quiet_rounds": quiet_rounds,
        "n_per_company": final.n_per_company,
        "budget": money_to_str(final.budget),
        "companies": [company_to_dict(c) for c in final.companies],
    }


def ensemble_from_final_state(
    data: dict[str, Any], seed: int | None = None
) -> tuple[MarketEnsemble, Fraction, Money, int, int]:
    """Rebuild an initial ensemble (round 0) from a final-state document.

    Returns the ensemble plus the alpha/epsilon/max_rounds/quiet_rounds the
    document was produced with; ``seed`` overrides the recorded one.
    """
    try:
        companies = [company_from_dict(c) for c in data["companies"]]
        use_seed = int(data["seed"]) if seed is None else seed
        alpha = Fraction(str(data["alpha"]))
        epsilon = money_from_str(data["epsilon"])
        max_rounds = int(data["max_rounds"])
        quiet_rounds = int(data["quiet_rounds"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed final-state document: {exc}") from exc
    ensemble = MarketEnsemble(companies, round=0, seed=use_seed)
    return ensemble, alpha, epsilon, max_rounds, quiet_rounds
