"""Self-organizing salary exchange among replica companies.

Each round the ensemble is partitioned into random pairs (seeded, so runs
are reproducible).  Paired companies compare per-class salaries; wherever
the gap exceeds the policy's epsilon both adopt the negotiated settlement,
after which an exact budget repair projects each company back onto the
conserved-budget hyperplane.  Trading stops when no class gap is worth
acting on.

Pair interactions within a round touch disjoint companies and derive no
state from one another, so they could run concurrently; the round boundary
is the synchronization point.  Pairing randomness depends only on
(seed, round), which keeps trajectories byte-reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .core import (
    CategoryDistribution,
    CompanyState,
    DegenerateState,
    MarketEnsemble,
    Money,
    NegotiationPolicy,
    NotReplicas,
    SkillClass,
    TooFewCompanies,
)
from .multiplicity import MultiplicityMethod, log_multiplicity


class RunStatus(Enum):
    CONVERGED = "CONVERGED"
    ROUND_LIMIT = "ROUND_LIMIT"


@dataclass(frozen=True)
class TradeEvent:
    """One per-class settlement between two companies, recorded before
    budget repair (so the settled value lies between the prior salaries)."""

    round: int
    company_a: str
    company_b: str
    class_id: int
    salary_a_before: Money
    salary_b_before: Money
    settled: Money


@dataclass(frozen=True)
class RoundRecord:
    round: int
    trades: int
    mean_share_entropy_nats: float
    mean_log_multiplicity_nats: float
    macrostates: tuple[CategoryDistribution, ...]


@dataclass(frozen=True)
class StopRule:
    """Stop after quiet_rounds consecutive zero-trade rounds, or after
    max_rounds regardless."""

    max_rounds: int = 10_000
    quiet_rounds: int = 3

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if self.quiet_rounds < 1:
            raise ValueError("quiet_rounds must be at least 1")


@dataclass(frozen=True)
class Trajectory:
    """Per-round statistics (round 0 is the initial state) plus the final
    ensemble and how the run ended."""

    records: tuple[RoundRecord, ...]
    status: RunStatus
    final: MarketEnsemble

    def __post_init__(self):
        rounds = [r.round for r in self.records]
        if any(a >= b for a, b in zip(rounds, rounds[1:])):
            raise ValueError("round indices must be strictly increasing")

    @property
    def rounds_executed(self) -> int:
        return self.records[-1].round

    @property
    def trading_rounds(self) -> int:
        """Index of the last round that produced any trade (0 if none)."""
        return max((r.round for r in self.records if r.trades > 0), default=0)

    @property
    def total_trades(self) -> int:
        return sum(r.trades for r in self.records)


def negotiate_salary(
    s_a: Money, s_b: Money, policy: NegotiationPolicy
) -> Money | None:
    """Settle two salaries for the same class, or return None when the gap
    is within epsilon and nobody is motivated to act.

    The settlement is low + alpha * gap, rounded half-even to a whole minor
    unit; alpha = 1/2 splits the difference, alpha = 0 or 1 models the
    stalemate where one side's opening offer stands.
    """
    gap = abs(s_a - s_b)
    if gap <= policy.epsilon:
        return None
    return min(s_a, s_b) + round(policy.alpha * gap)


def budget_repair(
    company: CompanyState, salaries: Sequence[Money] | None = None
) -> CompanyState:
    """Project per-class salaries back onto the exact-budget hyperplane.

    With no ``salaries`` argument the company is already balanced (the
    constructor guarantees it) and is returned unchanged.  Otherwise the
    proposed salaries are rebalanced against the company's budget and a new
    state is returned.
    """
    if salaries is None:
        return company
    if len(salaries) != len(company.classes):
        raise ValueError("need one proposed salary per class")
    counts = [c.count for c in company.classes]
    return company.with_salaries(rebalance_salaries(counts, salaries, company.budget))


def rebalance_salaries(
    counts: Sequence[int], salaries: Sequence[Money], budget: Money
) -> tuple[Money, ...]:
    """Scale per-class salaries so the headcount-weighted payroll equals the
    budget exactly.

    The proposal is scaled by budget / payroll in rational arithmetic and
    floored to whole minor units (never below one); a shortfall is granted
    back largest-remainder-first and an overshoot (possible only when the
    one-minor-unit clamp engaged) is taken back from the most-overpaid
    classes, each +-1 to a class costing its headcount.  Count granularity
    can leave a residue no per-class grant fits (counts {2, 3} with one
    cent over need a +1/-1 pair), so a final signed adjustment with the
    smallest possible per-class magnitude lands the payroll exactly on the
    budget; gcd(counts) divides every reachable payroll, the budget
    included, so the equation is always solvable when salaries are free to
    move.

    Total distortion per class is a few minor units in any non-degenerate
    state, so salary order across classes is preserved whenever the scaled
    targets differ by more than that; classes whose targets are minor-unit
    neighbours may tie or swap by a cent.  The result is always exact or an
    error, never approximate: DegenerateState is raised when the proposal
    pays nothing, the budget cannot cover one minor unit per employee, or
    (only under extreme proposal/budget scale mismatch, where the positivity
    clamp binds) no bounded adjustment reaches the budget.
    """
    proposed = [int(s) for s in salaries]
    payroll = sum(n * s for n, s in zip(counts, proposed))
    if payroll <= 0:
        raise DegenerateState("total payroll is zero; nothing to rescale")
    if budget < sum(counts):
        raise DegenerateState("budget cannot pay one minor unit per employee")
    if payroll == budget:
        return tuple(proposed)

    factor = Fraction(budget, payroll)
    exact = [s * factor for s in proposed]
    base = [max(e.numerator // e.denominator, 1) for e in exact]
    remainders = [e - (e.numerator // e.denominator) for e in exact]
    deficit = budget - sum(n * b for n, b in zip(counts, base))

    adjust = [0] * len(counts)
    if deficit > 0:
        # hand the shortfall to the classes rounding lost the most from
        for i in sorted(range(len(counts)), key=lambda i: (-remainders[i], i)):
            grant = deficit // counts[i]
            if grant > 0:
                adjust[i] += grant
                deficit -= grant * counts[i]
    elif deficit < 0:
        # clamping at one minor unit overshot: take back from the classes
        # furthest above their scaled targets, never below one minor unit
        overage = [b - e for b, e in zip(base, exact)]
        for i in sorted(range(len(counts)), key=lambda i: (-overage[i], i)):
            headroom = base[i] + adjust[i] - 1
            take = min((-deficit) // counts[i], headroom)
            if take > 0:
                adjust[i] -= take
                deficit += take * counts[i]
    if deficit != 0:
        floors = [1 - b - a for b, a in zip(base, adjust)]  # keep salaries >= 1
        for i, step in enumerate(_signed_adjustment(counts, deficit, floors)):
            adjust[i] += step

    return tuple(b + a for b, a in zip(base, adjust))


def _signed_adjustment(
    counts: Sequence[int], residual: int, floors: Sequence[int]
) -> list[int]:
    """Per-class salary tweaks (minor units, possibly negative) whose
    headcount-weighted sum equals ``residual``, with delta_i >= floors_i.

    Prefers the solution with the smallest largest single-class tweak, then
    the fewest total tweaked units, then earlier classes; deterministic.
    One- and two-class solutions come from divisibility and the extended
    gcd; a small bounded DP covers residues that only three or more classes
    can split fairly (e.g. counts {6, 10, 15} absorbing one minor unit).
    """
    k = len(counts)
    best: tuple[int, int, tuple[int, ...]] | None = None

    for i in range(k):
        if residual % counts[i] == 0:
            d = residual // counts[i]
            if d >= floors[i]:
                vec = [0] * k
                vec[i] = d
                best = _better(best, (abs(d), abs(d), tuple(vec)))

    for i in range(k):
        for j in range(i + 1, k):
            ci, cj = counts[i], counts[j]
            g = math.gcd(ci, cj)
            if residual % g:
                continue
            x, y = _bezout(ci, cj)
            scale = residual // g
            di0, dj0 = x * scale, y * scale
            si, sj = cj // g, ci // g  # di = di0 + si*t, dj = dj0 - sj*t
            for t in _candidate_shifts(di0, dj0, si, sj, floors[i], floors[j]):
                di, dj = di0 + si * t, dj0 - sj * t
                if di < floors[i] or dj < floors[j]:
                    continue
                vec = [0] * k
                vec[i], vec[j] = di, dj
                best = _better(
                    best, (max(abs(di), abs(dj)), abs(di) + abs(dj), tuple(vec))
                )

    dp_cap = 4 if best is None else min(4, best[0] - 1)
    found = _adjustment_dp(counts, residual, floors, dp_cap)
    if found is not None:
        best = _better(best, found)
    if best is None:
        raise DegenerateState(
            f"cannot rebalance: residual {residual} unreachable from counts "
            f"{list(counts)} without a salary falling below one minor unit"
        )
    return list(best[2])


def _better(held, candidate):
    return candidate if held is None or candidate < held else held


def _bezout(a: int, b: int) -> tuple[int, int]:
    """(x, y) with a*x + b*y == gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_x, old_y


def _candidate_shifts(di0, dj0, si, sj, floor_i, floor_j):
    """Integer shifts t worth trying when minimizing max(|di|, |dj|) along
    di = di0 + si*t, dj = dj0 - sj*t: the per-coordinate minimizers, the
    balance point, and the floor boundaries, each with a +-2 window."""
    anchors = {
        -(di0 // si),
        dj0 // sj,
        (dj0 - di0) // (si + sj),
        -((di0 - floor_i) // si),  # ceil((floor_i - di0) / si)
        (dj0 - floor_j) // sj,
    }
    out: set[int] = set()
    for t in anchors:
        out.update((t - 2, t - 1, t, t + 1, t + 2))
    return sorted(out)


def _adjustment_dp(
    counts: Sequence[int], residual: int, floors: Sequence[int], max_bound: int
) -> tuple[int, int, tuple[int, ...]] | None:
    """Bounded dict DP over reachable headcount-weighted sums; returns the
    best (max_tweak, total_tweaks, vector) with every |delta| <= max_bound,
    or None."""
    if max_bound < 1:
        return None
    k = len(counts)
    suffix = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] + counts[i]
    bound = 1
    while bound <= max_bound:
        table: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}
        for i, cnt in enumerate(counts):
            reach = bound * suffix[i + 1]
            low = max(-bound, floors[i])
            grown: dict[int, tuple[int, tuple[int, ...]]] = {}
            for partial, (cost, vec) in table.items():
                for step in range(low, bound + 1):
                    total = partial + cnt * step
                    if abs(residual - total) > reach:
                        continue
                    candidate = (cost + abs(step), vec + (step,))
                    held = grown.get(total)
                    if held is None or candidate < held:
                        grown[total] = candidate
            table = grown
        if residual in table:
            cost, vec = table[residual]
            return (max(map(abs, vec), default=0), cost, vec)
        bound *= 2
    return None


def interact_pair(
    a: CompanyState,
    b: CompanyState,
    policy: NegotiationPolicy,
    round_index: int = 0,
) -> tuple[CompanyState, CompanyState, list[TradeEvent]]:
    """Negotiate every class whose salaries differ by more than epsilon.

    Both companies adopt the settled salary (the employer matches the rival
    offer while the rival rehires at the settled wage), so headcounts never
    move; budget repair then restores exact conservation on each side.
    """
    _require_replicas(a, b)
    events: list[TradeEvent] = []
    salaries_a: list[Money] = []
    salaries_b: list[Money] = []
    for ca, cb in zip(a.classes, b.classes):
        settled = negotiate_salary(ca.salary, cb.salary, policy)
        if settled is None:
            salaries_a.append(ca.salary)
            salaries_b.append(cb.salary)
        else:
            salaries_a.append(settled)
            salaries_b.append(settled)
            events.append(
                TradeEvent(
                    round=round_index,
                    company_a=a.company_id,
                    company_b=b.company_id,
                    class_id=ca.class_id,
                    salary_a_before=ca.salary,
                    salary_b_before=cb.salary,
                    settled=settled,
                )
            )
    if not events:
        return a, b, []
    return (
        budget_repair(a, salaries_a),
        budget_repair(b, salaries_b),
        events,
    )


def _require_replicas(a: CompanyState, b: CompanyState) -> None:
    if a.budget != b.budget or a.n != b.n:
        raise NotReplicas(
            f"{a.company_id!r} and {b.company_id!r} differ in N or budget"
        )
    sig_a = tuple((c.class_id, c.count) for c in a.classes)
    sig_b = tuple((c.class_id, c.count) for c in b.classes)
    if sig_a != sig_b:
        raise NotReplicas(
            f"{a.company_id!r} and {b.company_id!r} differ in class composition"
        )


def run_round(
    m: MarketEnsemble, policy: NegotiationPolicy
) -> tuple[MarketEnsemble, list[TradeEvent]]:
    """One simultaneous round: shuffle companies into disjoint pairs (the
    odd one sits out), apply interact_pair to each, bump the round counter.

    Identical (ensemble, seed) inputs produce identical outputs.
    """
    if len(m.companies) < 2:
        raise TooFewCompanies("a market round needs at least two companies")
    executed = m.round + 1
    rng = random.Random(f"{m.seed}:{executed}")
    order = rng.sample(range(len(m.companies)), len(m.companies))
    companies = list(m.companies)
    events: list[TradeEvent] = []
    for pair in range(len(order) // 2):
        i, j = order[2 * pair], order[2 * pair + 1]
        new_i, new_j, pair_events = interact_pair(
            companies[i], companies[j], policy, round_index=executed
        )
        companies[i], companies[j] = new_i, new_j
        events.extend(pair_events)
    return MarketEnsemble(companies, executed, m.seed), events


def run_to_equilibrium(
    m: MarketEnsemble,
    policy: NegotiationPolicy,
    stop: StopRule = StopRule(),
) -> Trajectory:
    """Iterate rounds until the market is quiescent (CONVERGED) or
    max_rounds is exhausted (ROUND_LIMIT).

    Quiescence needs quiet_rounds consecutive zero-trade rounds AND no
    class gap above epsilon anywhere in the ensemble.  The global gap check
    makes CONVERGED a true fixed point: random pairing can run quiet for a
    few rounds while two far-apart companies simply never met, and stopping
    there would leave an ensemble that still trades under some pairing.

    The trajectory records round 0 (the initial state) and every executed
    round.  Per-round mean entropy is recorded for inspection; the model
    claims an equilibrium tendency, not per-round monotonicity.
    """
    records = [_round_record(m, trades=0)]
    current = m
    quiet = 0
    status = RunStatus.ROUND_LIMIT
    for _ in range(stop.max_rounds):
        current, events = run_round(current, policy)
        records.append(_round_record(current, trades=len(events)))
        quiet = quiet + 1 if not events else 0
        if quiet >= stop.quiet_rounds and max_class_gap(current) <= policy.epsilon:
            status = RunStatus.CONVERGED
            break
    return Trajectory(tuple(records), status, current)


def _company_share_entropy(c: CompanyState) -> float:
    """Share entropy of a company's employees, grouped by class for speed.

    Same int/int share construction as metrics.share_entropy, so values
    agree with the per-employee computation to float precision.
    """
    total = c.payroll
    return math.fsum(
        -sc.count * (sc.salary / total) * math.log(sc.salary / total)
        for sc in c.classes
    ) + 0.0


def _round_record(m: MarketEnsemble, trades: int) -> RoundRecord:
    entropies = [_company_share_entropy(c) for c in m.companies]
    macrostates = tuple(c.category_distribution() for c in m.companies)
    log_ws = [
        log_multiplicity(d, MultiplicityMethod.EXACT_LOG_GAMMA).log_w_nats
        for d in macrostates
    ]
    k = len(m.companies)
    return RoundRecord(
        round=m.round,
        trades=trades,
        mean_share_entropy_nats=math.fsum(entropies) / k,
        mean_log_multiplicity_nats=math.fsum(log_ws) / k,
        macrostates=macrostates,
    )


def max_class_gap(m: MarketEnsemble) -> Money:
    """Largest per-class salary spread across the ensemble (a converged
    market has no gap above the policy's epsilon)."""
    gap = 0
    for idx in range(len(m.companies[0].classes)):
        salaries = [c.classes[idx].salary for c in m.companies]
        gap = max(gap, max(salaries) - min(salaries))
    return gap


def randomized_replicas(
    n_companies: int,
    class_counts: Sequence[int],
    budget: Money,
    seed: int,
    class_ids: Sequence[int] | None = None,
) -> MarketEnsemble:
    """Replica ensemble with per-class salaries drawn uniformly in
    [S_ave/5, 5*S_ave] (seeded) and budget-repaired onto the exact budget."""
    if n_companies < 1:
        raise ValueError("need at least one company")
    counts = [int(c) for c in class_counts]
    ids = list(class_ids) if class_ids is not None else list(range(len(counts)))
    n = sum(counts)
    s_ave = budget // n
    low, high = max(1, s_ave // 5), max(2, 5 * s_ave)
    companies = []
    for idx in range(n_companies):
        rng = random.Random(f"{seed}:init:{idx}")
        draws = [rng.randint(low, high) for _ in counts]
        salaries = rebalance_salaries(counts, draws, budget)
        companies.append(
            CompanyState(
                f"C{idx:03d}",
                [
                    SkillClass(cid, cnt, s, rank)
                    for rank, (cid, cnt, s) in enumerate(zip(ids, counts, salaries))
                ],
                budget,
            )
        )
    return MarketEnsemble(companies, round=0, seed=seed)
