"""Constrained maximum-entropy solver over a discrete salary grid.

The solution has the exponential-family form p_i proportional to
exp(-sum_j lambda_j phi_j(S_i)) with features phi in {S, ln S, (ln S)^2}.
Multipliers are found by damped Newton iteration on the smooth convex dual

    psi(lambda) = ln Z(lambda) + sum_j lambda_j c_j,

whose gradient is (targets - moments) and whose Hessian is the feature
covariance under the current p.  Features are standardized internally so the
grid's money scale does not poison the Hessian conditioning; reported
multipliers and residuals are in original units.

A mean-salary constraint alone yields the discrete exponential (Boltzmann)
shape; the two log-moment constraints yield a discretized lognormal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConstraintKind, ConstraintSet, FairmarketError


class InfeasibleConstraints(FairmarketError):
    """Constraint targets cannot be met by any distribution on the grid."""


class NoConvergence(FairmarketError):
    """Newton iteration exhausted max_iter above tolerance."""

    def __init__(self, residual_norm: float, iterations: int):
        super().__init__(
            f"residual {residual_norm:.3e} after {iterations} iterations"
        )
        self.residual_norm = residual_norm
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class SalaryGrid:
    """Strictly increasing positive salary levels (major money units)."""

    levels: np.ndarray

    def __init__(self, levels):
        arr = np.asarray(levels, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("grid needs at least two levels")
        if not np.all(arr > 0):
            raise ValueError("grid levels must be positive")
        if not np.all(np.diff(arr) > 0):
            raise ValueError("grid levels must be strictly increasing")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "levels", arr)

    @classmethod
    def uniform(cls, low: float, high: float, k: int = 512) -> "SalaryGrid":
        """k levels spaced uniformly in S over [low, high]."""
        if k < 2:
            raise ValueError("grid needs at least two levels")
        return cls(np.linspace(low, high, k))

    @classmethod
    def around_mean(cls, mean_salary: float, k: int = 512) -> "SalaryGrid":
        """Default working grid: uniform over [mean/50, 50*mean]."""
        if mean_salary <= 0:
            raise ValueError("mean salary must be positive")
        return cls.uniform(mean_salary / 50.0, 50.0 * mean_salary, k)

    @property
    def k(self) -> int:
        return int(self.levels.size)


@dataclass(frozen=True, eq=False)
class MaxentSolution:
    probabilities: np.ndarray
    multipliers: np.ndarray
    residual_norm: float
    iterations: int

    def __post_init__(self):
        p = self.probabilities
        if np.any(p < 0) or abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError("probabilities must be a distribution")

    def entropy_nats(self) -> float:
        p = self.probabilities[self.probabilities > 0]
        return float(-np.sum(p * np.log(p)))


_FEATURES = {
    ConstraintKind.MEAN_S: lambda s: s,
    ConstraintKind.MEAN_LN_S: np.log,
    ConstraintKind.MEAN_LN_S_SQ: lambda s: np.log(s) ** 2,
}


def _check_feasible(grid: SalaryGrid, constraints: ConstraintSet) -> None:
    by_kind = {c.kind: c.target for c in constraints}
    for kind, target in by_kind.items():
        phi = _FEATURES[kind](grid.levels)
        lo, hi = float(phi.min()), float(phi.max())
        if not lo < target < hi:
            raise InfeasibleConstraints(
                f"{kind.value} target {target} outside the grid's open range "
                f"({lo}, {hi})"
            )
    mean_ln = by_kind.get(ConstraintKind.MEAN_LN_S)
    mean_ln_sq = by_kind.get(ConstraintKind.MEAN_LN_S_SQ)
    if mean_ln is not None and mean_ln_sq is not None:
        if mean_ln_sq - mean_ln**2 <= 0:
            raise InfeasibleConstraints(
                "log-moment targets imply non-positive variance of ln S"
            )


def solve_maxent(
    grid: SalaryGrid,
    constraints: ConstraintSet,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> MaxentSolution:
    """Maximize entropy over the grid subject to the given moment targets.

    Residuals are max-norm differences between realized and target moments
    in original units.  Raises InfeasibleConstraints for targets outside the
    grid's reachable range and NoConvergence (with the residual and
    iteration count attached) if Newton stalls above tolerance.
    """
    k = grid.k
    if len(constraints) == 0:
        return MaxentSolution(
            probabilities=np.full(k, 1.0 / k),
            multipliers=np.zeros(0),
            residual_norm=0.0,
            iterations=0,
        )
    _check_feasible(grid, constraints)

    phi = np.vstack([_FEATURES[c.kind](grid.levels) for c in constraints])
    targets = np.array([c.target for c in constraints], dtype=float)

    scale = phi.std(axis=1)
    scale[scale == 0] = 1.0
    center = phi.mean(axis=1)
    phi_s = (phi - center[:, None]) / scale[:, None]
    targets_s = (targets - center) / scale

    lam = np.zeros(len(constraints))

    def dual(l):
        logits = -(l @ phi_s)
        m = logits.max()
        return m + math.log(np.exp(logits - m).sum()) + float(l @ targets_s)

    def distribution(l):
        logits = -(l @ phi_s)
        logits -= logits.max()
        w = np.exp(logits)
        return w / w.sum()

    def residual_norm(p):
        # exactly rounded sums of centered products: the plain dot product
        # carries enough rounding noise at money scale to hide a converged
        # solution from a 1e-10 tolerance
        return max(
            abs(math.fsum(p * (row - target)))
            for row, target in zip(phi, targets)
        )

    psi = dual(lam)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        p = distribution(lam)
        moments_s = phi_s @ p
        residual = residual_norm(p)
        if residual <= tol:
            return _solution(p, lam, scale, residual, iteration - 1)
        grad = targets_s - moments_s
        hess = (phi_s * p) @ phi_s.T - np.outer(moments_s, moments_s)
        hess += 1e-13 * np.eye(len(lam))
        step = np.linalg.solve(hess, -grad)
        slope = float(grad @ step)  # negative along the Newton direction
        slack = 1e-13 * max(1.0, abs(psi))  # dual differences below float noise
        t = 1.0
        accepted = False
        for _ in range(60):
            trial = lam + t * step
            if dual(trial) <= psi + 1e-4 * t * slope + slack:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            t = 1.0  # at the float-resolution plateau the Newton step is right
        lam = lam + t * step
        psi = dual(lam)

    p = distribution(lam)
    residual = residual_norm(p)
    if residual <= tol:
        return _solution(p, lam, scale, residual, max_iter)
    raise NoConvergence(residual, max_iter)


def _solution(p, lam_scaled, scale, residual, iterations) -> MaxentSolution:
    p = np.asarray(p, dtype=float)
    p = p / p.sum()
    return MaxentSolution(
        probabilities=p,
        multipliers=lam_scaled / scale,
        residual_norm=residual,
        iterations=iterations,
    )
