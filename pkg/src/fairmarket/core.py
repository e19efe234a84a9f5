"""Shared domain model: exact-integer money, salary samples, category
distributions, and replica-company state.

Money lives in integer minor units (cents).  Conservation checks are exact
integer equality, never a float tolerance, and no arithmetic here rounds
silently: any division that could lose a remainder either raises or follows
an explicit remainder-distribution policy (see ``simulation.budget_repair``).

All types are immutable values and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

# ---------------------------------------------------------------------------
# Money

Money = int
"""Minor currency units (cents).  Salaries and budgets are plain ints."""

MINOR_UNITS_PER_MAJOR = 100

AlphaLike = Union[Fraction, int, float, str]


def money_from_str(text: str) -> Money:
    """Parse a dot-decimal money string ("60000.00", "45000", "0.5") to cents.

    Raises ValueError for negatives, malformed input, or amounts that are not
    representable in whole cents.
    """
    try:
        value = Decimal(text.strip())
    except (InvalidOperation, AttributeError) as exc:
        raise ValueError(f"not a money amount: {text!r}") from exc
    cents = value * MINOR_UNITS_PER_MAJOR
    if cents != int(cents):
        raise ValueError(f"{text!r} is not representable in whole cents")
    if cents < 0:
        raise ValueError(f"money amount must be non-negative: {text!r}")
    return int(cents)


def money_to_str(amount: Money) -> str:
    """Render cents as an exact two-decimal string ("45000.00")."""
    if amount < 0:
        raise ValueError(f"money amount must be non-negative: {amount}")
    return f"{amount // MINOR_UNITS_PER_MAJOR}.{amount % MINOR_UNITS_PER_MAJOR:02d}"


def major_units(amount: Money) -> float:
    """Cents to major units (dollars) as a float, for real-valued analytics."""
    return amount / MINOR_UNITS_PER_MAJOR


def as_alpha(value: AlphaLike) -> Fraction:
    """Coerce a surplus-split share to an exact Fraction in [0, 1].

    Strings may be rationals ("1/2") or decimals ("0.3", parsed exactly);
    floats go through their shortest decimal representation so that a literal
    0.3 means 3/10 rather than its binary neighbour.
    """
    if isinstance(value, Fraction):
        alpha = value
    elif isinstance(value, bool):
        raise ValueError("alpha must be a number, not a bool")
    elif isinstance(value, int):
        alpha = Fraction(value)
    elif isinstance(value, float):
        alpha = Fraction(repr(value))
    elif isinstance(value, str):
        alpha = Fraction(value.strip())
    else:
        raise ValueError(f"cannot interpret alpha value {value!r}")
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


# ---------------------------------------------------------------------------
# Errors

class FairmarketError(Exception):
    """Base class for all domain errors raised by this package."""


class NonDivisibleBudget(FairmarketError):
    """Budget does not split into equal whole-cent salaries."""


class EmptySample(FairmarketError):
    """A salary sample must contain at least one employee."""


class EmptyDistribution(FairmarketError):
    """A category distribution with zero total headcount."""


class NonPositiveSalary(FairmarketError):
    """An operation requiring strictly positive salaries saw one <= 0."""


class ZeroTotalIncome(FairmarketError):
    """Total income is zero; shares are undefined."""


class InvalidPartition(FairmarketError):
    """Group indices do not form a partition of the sample."""


class UnmappableSalary(FairmarketError):
    """Exact-match binning saw a salary that is not on any level."""


class NotReplicas(FairmarketError):
    """Interacting companies must share N, budget, and class composition."""


class DegenerateState(FairmarketError):
    """Company payroll collapsed to zero (or cannot be rebalanced)."""


class TooFewCompanies(FairmarketError):
    """A market round needs at least two companies."""


class DegenerateSample(FairmarketError):
    """Lognormal fit needs at least two distinct salaries."""


class NonPositiveSupport(FairmarketError):
    """Lognormal density evaluated at s <= 0."""


# ---------------------------------------------------------------------------
# Salary data

@dataclass(frozen=True)
class SalarySample:
    """A flat list of individual salaries, one per employee (a microstate
    restricted to pay)."""

    salaries: tuple[Money, ...]

    def __init__(self, salaries: Iterable[Money]):
        values = tuple(int(s) for s in salaries)
        if not values:
            raise EmptySample("sample must contain at least one salary")
        if any(s < 0 for s in values):
            raise NonPositiveSalary("salaries must be non-negative")
        object.__setattr__(self, "salaries", values)

    @property
    def n(self) -> int:
        return len(self.salaries)

    @property
    def total(self) -> Money:
        return sum(self.salaries)

    def scaled(self, factor: int) -> "SalarySample":
        """Sample with every salary multiplied by a positive integer."""
        if factor <= 0:
            raise ValueError("scale factor must be a positive integer")
        return SalarySample(s * factor for s in self.salaries)

    def __iter__(self):
        return iter(self.salaries)

    def __len__(self) -> int:
        return len(self.salaries)


@dataclass(frozen=True)
class CategoryDistribution:
    """Counts of employees per salary level (a macrostate).

    Levels are strictly increasing positive money values; counts may be zero
    for inactive categories.
    """

    levels: tuple[Money, ...]
    counts: tuple[int, ...]

    def __init__(self, levels: Iterable[Money], counts: Iterable[int]):
        lv = tuple(int(x) for x in levels)
        ct = tuple(int(c) for c in counts)
        if not lv:
            raise ValueError("distribution needs at least one level")
        if len(lv) != len(ct):
            raise ValueError("levels and counts must have equal length")
        if any(s <= 0 for s in lv):
            raise NonPositiveSalary("levels must be strictly positive")
        if any(a >= b for a, b in zip(lv, lv[1:])):
            raise ValueError("levels must be strictly increasing")
        if any(c < 0 for c in ct):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "counts", ct)

    @property
    def k(self) -> int:
        return len(self.levels)

    @property
    def n(self) -> int:
        return sum(self.counts)

    def shares(self) -> tuple[float, ...]:
        """Headcount shares p_i = counts_i / N (correctly rounded)."""
        n = self.n
        if n == 0:
            raise EmptyDistribution("no employees in any category")
        return tuple(c / n for c in self.counts)

    def to_sample(self) -> SalarySample:
        """Expand to one salary per employee."""
        if self.n == 0:
            raise EmptyDistribution("no employees in any category")
        out: list[Money] = []
        for level, count in zip(self.levels, self.counts):
            out.extend([level] * count)
        return SalarySample(out)


# ---------------------------------------------------------------------------
# Companies and ensembles

@dataclass(frozen=True)
class SkillClass:
    """One skill class inside a company: a headcount at a common salary.

    ``value_rank`` is an ordinal proxy for the class's value contribution;
    it orders classes but carries no numeric value units.  Pre-equilibrium,
    salary order and value order may disagree.
    """

    class_id: int
    count: int
    salary: Money
    value_rank: int

    def __post_init__(self):
        if self.count <= 0:
            raise ValueError("class count must be positive")
        if self.salary < 0:
            raise NonPositiveSalary("class salary must be non-negative")

    @property
    def payroll(self) -> Money:
        return self.count * self.salary


@dataclass(frozen=True)
class CompanyState:
    """A company's classes plus its conserved salary budget.

    Construction re-checks the conservation law sum(count * salary) == budget
    exactly; violation is a constructor error, never a warning.
    """

    company_id: str
    classes: tuple[SkillClass, ...]
    budget: Money

    def __init__(self, company_id: str, classes: Iterable[SkillClass], budget: Money):
        cls = tuple(classes)
        if not cls:
            raise ValueError("company must have at least one class")
        if len({c.class_id for c in cls}) != len(cls):
            raise ValueError("class_id values must be unique")
        ranks = [c.value_rank for c in cls]
        if any(a >= b for a, b in zip(ranks, ranks[1:])):
            raise ValueError("value_rank must be strictly increasing across classes")
        payroll = sum(c.payroll for c in cls)
        if payroll != budget:
            raise ValueError(
                f"company {company_id!r}: payroll {payroll} != budget {budget}"
            )
        object.__setattr__(self, "company_id", company_id)
        object.__setattr__(self, "classes", cls)
        object.__setattr__(self, "budget", int(budget))

    @property
    def n(self) -> int:
        return sum(c.count for c in self.classes)

    @property
    def payroll(self) -> Money:
        return sum(c.payroll for c in self.classes)

    def class_salaries(self) -> tuple[Money, ...]:
        return tuple(c.salary for c in self.classes)

    def with_salaries(self, salaries: Sequence[Money]) -> "CompanyState":
        """Same company with new per-class salaries (must still balance)."""
        if len(salaries) != len(self.classes):
            raise ValueError("need one salary per class")
        classes = tuple(
            SkillClass(c.class_id, c.count, int(s), c.value_rank)
            for c, s in zip(self.classes, salaries)
        )
        return CompanyState(self.company_id, classes, self.budget)

    def salary_sample(self) -> SalarySample:
        """One salary per employee, classes expanded in order."""
        out: list[Money] = []
        for c in self.classes:
            out.extend([c.salary] * c.count)
        return SalarySample(out)

    def category_distribution(self) -> CategoryDistribution:
        """Macrostate: distinct salary levels with merged headcounts."""
        merged: dict[Money, int] = {}
        for c in self.classes:
            merged[c.salary] = merged.get(c.salary, 0) + c.count
        levels = sorted(merged)
        return CategoryDistribution(levels, [merged[s] for s in levels])


@dataclass(frozen=True)
class MarketEnsemble:
    """Replica companies (identical N, budget, and class composition) plus a
    round counter and the seed that drives pairing."""

    companies: tuple[CompanyState, ...]
    round: int
    seed: int

    def __init__(self, companies: Iterable[CompanyState], round: int, seed: int):
        comps = tuple(companies)
        if not comps:
            raise ValueError("ensemble needs at least one company")
        if round < 0:
            raise ValueError("round counter must be non-negative")
        head = comps[0]
        signature = tuple((c.class_id, c.count) for c in head.classes)
        for other in comps[1:]:
            if other.n != head.n or other.budget != head.budget:
                raise NotReplicas(
                    f"company {other.company_id!r} differs in N or budget"
                )
            if tuple((c.class_id, c.count) for c in other.classes) != signature:
                raise NotReplicas(
                    f"company {other.company_id!r} differs in class composition"
                )
        if len({c.company_id for c in comps}) != len(comps):
            raise ValueError("company ids must be unique")
        object.__setattr__(self, "companies", comps)
        object.__setattr__(self, "round", int(round))
        object.__setattr__(self, "seed", int(seed))

    @property
    def n_per_company(self) -> int:
        return self.companies[0].n

    @property
    def budget(self) -> Money:
        return self.companies[0].budget


@dataclass(frozen=True)
class NegotiationPolicy:
    """How a salary gap is settled: alpha is the surplus share conceded
    toward the higher salary, epsilon the smallest gap worth acting on."""

    alpha: Fraction = Fraction(1, 2)
    epsilon: Money = 100

    def __init__(self, alpha: AlphaLike = Fraction(1, 2), epsilon: Money = 100):
        object.__setattr__(self, "alpha", as_alpha(alpha))
        if epsilon < 1:
            raise ValueError("epsilon must be at least one minor unit")
        object.__setattr__(self, "epsilon", int(epsilon))


# ---------------------------------------------------------------------------
# Max-entropy inputs and analytic equilibrium parameters

@dataclass(frozen=True)
class LognormalParams:
    """Parameters of ln S (S in major money units): mu is the mean of ln S,
    sigma its standard deviation."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be positive and finite")


class ConstraintKind(Enum):
    """Moment constraints the maxent solver understands."""

    MEAN_S = "mean_s"
    MEAN_LN_S = "mean_ln_s"
    MEAN_LN_S_SQ = "mean_ln_s_sq"


@dataclass(frozen=True)
class Constraint:
    kind: ConstraintKind
    target: float

    def __post_init__(self):
        if not math.isfinite(self.target):
            raise ValueError(f"{self.kind.value}: target must be finite")
        if self.kind is ConstraintKind.MEAN_S and self.target <= 0:
            raise ValueError("mean_s target must be positive")


@dataclass(frozen=True)
class ConstraintSet:
    """An ordered set of moment constraints with unique kinds."""

    constraints: tuple[Constraint, ...]

    def __init__(self, constraints: Iterable[Constraint] = ()):
        items = tuple(constraints)
        kinds = [c.kind for c in items]
        if len(set(kinds)) != len(kinds):
            raise ValueError("constraint kinds must be unique")
        object.__setattr__(self, "constraints", items)

    @classmethod
    def of(
        cls,
        mean_s: float | None = None,
        mean_ln_s: float | None = None,
        mean_ln_s_sq: float | None = None,
    ) -> "ConstraintSet":
        items = []
        if mean_s is not None:
            items.append(Constraint(ConstraintKind.MEAN_S, float(mean_s)))
        if mean_ln_s is not None:
            items.append(Constraint(ConstraintKind.MEAN_LN_S, float(mean_ln_s)))
        if mean_ln_s_sq is not None:
            items.append(Constraint(ConstraintKind.MEAN_LN_S_SQ, float(mean_ln_s_sq)))
        return cls(items)

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)


# ---------------------------------------------------------------------------
# Reports

@dataclass(frozen=True)
class FairnessReport:
    """The fairness measures of one salary sample, plus basic size stats."""

    entropy_nats: float
    theil: float
    gini: float
    maximin: Money
    n: int
    mean_salary: Money
    log_multiplicity_nats: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        slack = 1e-9
        if not -slack <= self.entropy_nats <= math.log(self.n) + slack:
            raise ValueError("entropy_nats outside [0, ln n]")
        if self.theil < -slack:
            raise ValueError("theil must be non-negative")
        if not -slack <= self.gini < 1:
            raise ValueError("gini outside [0, 1)")
        if self.maximin < 0 or self.mean_salary < 0:
            raise ValueError("money fields must be non-negative")
        if self.log_multiplicity_nats is not None and self.log_multiplicity_nats < -slack:
            raise ValueError("log multiplicity must be non-negative")


# ---------------------------------------------------------------------------
# Constructors

def delta_initial_state(n: int, budget: Money, company_id: str = "A") -> CompanyState:
    """Egalitarian start: a single class of ``n`` employees all paid
    ``budget / n``.

    Raises NonDivisibleBudget when the budget does not split into whole-cent
    equal salaries.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if budget % n != 0:
        raise NonDivisibleBudget(
            f"budget of {budget} minor units does not divide into {n} equal salaries"
        )
    salary = budget // n
    return CompanyState(company_id, [SkillClass(0, n, salary, 0)], budget)
