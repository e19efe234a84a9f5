"""fairmarket: replica-company salary exchange simulator with entropy-based
fairness analytics.

The package models a market of identical-budget companies whose per-class
salaries equalize through pairwise negotiation under exact headcount and
budget conservation, measures inequality (share entropy, Theil, Gini,
maximin, multiplicity), and solves constrained maximum-entropy problems
whose log-moment solutions are discretized lognormals.
"""

from .core import (
    CategoryDistribution,
    CompanyState,
    Constraint,
    ConstraintKind,
    ConstraintSet,
    DegenerateSample,
    DegenerateState,
    EmptyDistribution,
    EmptySample,
    FairmarketError,
    FairnessReport,
    InvalidPartition,
    LognormalParams,
    MarketEnsemble,
    Money,
    NegotiationPolicy,
    NonDivisibleBudget,
    NonPositiveSalary,
    NonPositiveSupport,
    NotReplicas,
    SalarySample,
    SkillClass,
    TooFewCompanies,
    UnmappableSalary,
    ZeroTotalIncome,
    delta_initial_state,
    major_units,
    money_from_str,
    money_to_str,
)
from .lognormal import (
    fit_lognormal,
    ks_statistic,
    lognormal_cdf,
    lognormal_entropy,
    lognormal_moments,
    lognormal_pdf,
    sample_lognormal,
)
from .maxent import (
    InfeasibleConstraints,
    MaxentSolution,
    NoConvergence,
    SalaryGrid,
    solve_maxent,
)
from .metrics import (
    ShareVector,
    TheilDecomposition,
    gini,
    maximin,
    normalized_share_entropy,
    shannon_entropy,
    share_entropy,
    theil_decomposition,
    theil_index,
)
from .multiplicity import (
    BinningMode,
    MultiplicityMethod,
    MultiplicityResult,
    entropy_from_multiplicity,
    log_multiplicity,
    macrostate_of,
    stirling_gap,
)
from .simulation import (
    RoundRecord,
    RunStatus,
    StopRule,
    TradeEvent,
    Trajectory,
    budget_repair,
    interact_pair,
    max_class_gap,
    negotiate_salary,
    randomized_replicas,
    rebalance_salaries,
    run_round,
    run_to_equilibrium,
)

__version__ = "0.1.0"
