"""Simulation configuration: a flat commented TOML file.

Money values must be strings ("60000.00") or whole-major-unit ints; floats
are rejected because binary floats cannot represent cents exactly.  The
surplus split ``alpha`` may be a rational string ("1/2"), a decimal string
("0.3", parsed exactly), or an int.

Example::

    companies = 2
    n_per_company = 1000
    budget = "60000000.00"
    alpha = "1/2"
    epsilon = "1.00"
    seed = 7
    max_rounds = 100
    quiet_rounds = 3

    [[classes]]
    count = 500
    salary = "60000.00"     # or "random"

    [[overrides]]           # optional per-company initial salaries
    company = 1
    salaries = ["30000.00", "30000.00", "180000.00"]
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .core import (
    CompanyState,
    FairmarketError,
    MarketEnsemble,
    Money,
    NegotiationPolicy,
    SkillClass,
    as_alpha,
    money_from_str,
)
from .simulation import StopRule, rebalance_salaries

RANDOM_SALARY = "random"


class ConfigError(FairmarketError):
    """A configuration value is missing or invalid; the message names the
    offending field path."""


@dataclass(frozen=True)
class ClassSpec:
    """One skill class: a headcount and either a fixed initial salary or
    None for a seeded random draw."""

    count: int
    salary: Money | None


@dataclass(frozen=True)
class SimConfig:
    companies: int
    n_per_company: int
    budget: Money
    classes: tuple[ClassSpec, ...]
    alpha: Fraction
    epsilon: Money
    max_rounds: int
    quiet_rounds: int
    seed: int | None = None
    overrides: dict[int, tuple[Money, ...]] = field(default_factory=dict)

    @property
    def policy(self) -> NegotiationPolicy:
        return NegotiationPolicy(self.alpha, self.epsilon)

    @property
    def stop(self) -> StopRule:
        return StopRule(self.max_rounds, self.quiet_rounds)


def _money_field(data: dict, key: str, where: str) -> Money:
    if key not in data:
        raise ConfigError(f"{where}.{key}: required")
    value = data[key]
    if isinstance(value, bool):
        raise ConfigError(f"{where}.{key}: must be a money string or int")
    if isinstance(value, int):
        return value * 100
    if isinstance(value, float):
        raise ConfigError(
            f"{where}.{key}: floats are ambiguous for money; use a string like \"60000.00\""
        )
    if isinstance(value, str):
        try:
            return money_from_str(value)
        except ValueError as exc:
            raise ConfigError(f"{where}.{key}: {exc}") from exc
    raise ConfigError(f"{where}.{key}: must be a money string or int")


def _int_field(data: dict, key: str, where: str, minimum: int) -> int:
    if key not in data:
        raise ConfigError(f"{where}.{key}: required")
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key}: must be an integer")
    if value < minimum:
        raise ConfigError(f"{where}.{key}: must be at least {minimum}")
    return value


def parse_config(data: dict[str, Any], where: str = "config") -> SimConfig:
    """Validate a parsed TOML mapping into a SimConfig."""
    companies = _int_field(data, "companies", where, minimum=2)
    n_per_company = _int_field(data, "n_per_company", where, minimum=1)
    budget = _money_field(data, "budget", where)
    max_rounds = _int_field(data, "max_rounds", where, minimum=1)
    quiet_rounds = _int_field(data, "quiet_rounds", where, minimum=1)
    epsilon = _money_field(data, "epsilon", where)
    if epsilon < 1:
        raise ConfigError(f"{where}.epsilon: must be at least one minor unit")

    try:
        alpha = as_alpha(data.get("alpha", "1/2"))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{where}.alpha: {exc}") from exc

    seed = data.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ConfigError(f"{where}.seed: must be an integer")

    raw_classes = data.get("classes")
    if not isinstance(raw_classes, list) or not raw_classes:
        raise ConfigError(f"{where}.classes: at least one class table is required")
    classes: list[ClassSpec] = []
    for i, entry in enumerate(raw_classes):
        path = f"{where}.classes[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}: must be a table")
        count = _int_field(entry, "count", path, minimum=1)
        raw_salary = entry.get("salary", RANDOM_SALARY)
        if isinstance(raw_salary, str) and raw_salary.strip().lower() == RANDOM_SALARY:
            salary = None
        else:
            salary = _money_field(entry, "salary", path)
        classes.append(ClassSpec(count, salary))
    if sum(c.count for c in classes) != n_per_company:
        raise ConfigError(
            f"{where}.classes: counts sum to {sum(c.count for c in classes)}, "
            f"expected n_per_company = {n_per_company}"
        )

    overrides: dict[int, tuple[Money, ...]] = {}
    for i, entry in enumerate(data.get("overrides", [])):
        path = f"{where}.overrides[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}: must be a table")
        idx = _int_field(entry, "company", path, minimum=0)
        if idx >= companies:
            raise ConfigError(f"{path}.company: only {companies} companies configured")
        if idx in overrides:
            raise ConfigError(f"{path}.company: duplicate override for company {idx}")
        raw = entry.get("salaries")
        if not isinstance(raw, list) or len(raw) != len(classes):
            raise ConfigError(f"{path}.salaries: need one salary per class")
        salaries = tuple(
            _money_field({"s": v}, "s", f"{path}.salaries[{j}]")
            for j, v in enumerate(raw)
        )
        overrides[idx] = salaries

    return SimConfig(
        companies=companies,
        n_per_company=n_per_company,
        budget=budget,
        classes=tuple(classes),
        alpha=alpha,
        epsilon=epsilon,
        max_rounds=max_rounds,
        quiet_rounds=quiet_rounds,
        seed=seed,
        overrides=overrides,
    )


def load_config(path: str | Path) -> SimConfig:
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data, where=path.name)


def build_ensemble(config: SimConfig, seed: int) -> MarketEnsemble:
    """Construct the initial replica ensemble a config describes.

    Companies with fully explicit salaries must balance the budget exactly;
    any class marked random is drawn from a per-company seeded RNG and the
    whole company is then budget-repaired.
    """
    counts = [c.count for c in config.classes]
    s_ave = max(config.budget // config.n_per_company, 1)
    low, high = max(1, s_ave // 5), max(2, 5 * s_ave)
    companies: list[CompanyState] = []
    for idx in range(config.companies):
        override = config.overrides.get(idx)
        if override is not None:
            salaries = list(override)
            needs_repair = False
        else:
            rng = random.Random(f"{seed}:init:{idx}")
            salaries = []
            needs_repair = any(c.salary is None for c in config.classes)
            for spec in config.classes:
                if spec.salary is None:
                    salaries.append(rng.randint(low, high))
                else:
                    salaries.append(spec.salary)
        if needs_repair:
            salaries = list(rebalance_salaries(counts, salaries, config.budget))
        else:
            payroll = sum(n * s for n, s in zip(counts, salaries))
            if payroll != config.budget:
                raise ConfigError(
                    f"company {idx}: explicit salaries pay {payroll} minor units, "
                    f"budget is {config.budget}; adjust salaries or mark some random"
                )
        companies.append(
            CompanyState(
                f"C{idx:03d}",
                [
                    SkillClass(rank, cnt, s, rank)
                    for rank, (cnt, s) in enumerate(zip(counts, salaries))
                ],
                config.budget,
            )
        )
    return MarketEnsemble(companies, round=0, seed=seed)
