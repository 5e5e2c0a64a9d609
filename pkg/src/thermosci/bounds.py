"""Closed-form information and efficiency caps, plus regime classification.

These are pure evaluators: they take scalar budget/entropy summaries (a
:class:`BudgetScenario`) and return the corresponding caps. They double as
test oracles for ledgers produced by :mod:`thermosci.cycle_sim`. Caps are
floored at zero: a negative information cap (erasure entropy exceeding the
budget) is vacuous, so it is clamped rather than reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import (
    InvalidParameter,
    MissingPartition,
    NegativeGap,
    ZeroBudget,
    ZeroPriorEntropy,
)

_GAP_TOL = 1e-12
_CONSISTENCY_TOL = 1e-10


@dataclass(frozen=True)
class SubdomainBudget:
    """One subdomain's share: mass, conditional prior entropy, budget, outcome entropy sum."""

    p: float
    h: float
    beta_w: float
    sum_hy: float

    def __post_init__(self):
        if min(self.p, self.h, self.beta_w, self.sum_hy) < 0.0:
            raise InvalidParameter("subdomain fields must all be >= 0")


@dataclass(frozen=True)
class BudgetScenario:
    """Scalar summary of an episode family: prior entropy, total work, outcome entropy.

    ``subdomains``, when present, carries the per-subdomain triples used by
    the federated caps; their mass-weighted budgets must reproduce the
    global ``beta_w``.
    """

    h0: float
    beta_w: float
    sum_hy: float
    subdomains: tuple[SubdomainBudget, ...] | None = None

    def __post_init__(self):
        if min(self.h0, self.beta_w, self.sum_hy) < 0.0:
            raise InvalidParameter("h0, beta_w and sum_hy must all be >= 0")
        if self.subdomains is not None:
            subs = tuple(self.subdomains)
            if not subs:
                raise InvalidParameter("subdomains must be non-empty when present")
            object.__setattr__(self, "subdomains", subs)
            mass = sum(s.p for s in subs)
            if abs(mass - 1.0) > 1e-9:
                raise InvalidParameter(f"subdomain masses sum to {mass!r}, expected 1")
            weighted = sum(s.p * s.beta_w for s in subs)
            if abs(weighted - self.beta_w) > _CONSISTENCY_TOL:
                raise InvalidParameter(
                    f"mass-weighted subdomain budgets {weighted!r} do not reproduce "
                    f"beta_w {self.beta_w!r}"
                )

    def to_json_dict(self) -> dict:
        d = {"h0": self.h0, "beta_w": self.beta_w, "sum_hy": self.sum_hy, "subdomains": None}
        if self.subdomains is not None:
            d["subdomains"] = [
                {"p": s.p, "h": s.h, "beta_w": s.beta_w, "sum_hy": s.sum_hy}
                for s in self.subdomains
            ]
        return d

    @classmethod
    def from_json_dict(cls, data: dict) -> "BudgetScenario":
        try:
            subs = data.get("subdomains")
            subdomains = None
            if subs is not None:
                subdomains = tuple(
                    SubdomainBudget(float(s["p"]), float(s["h"]),
                                    float(s["beta_w"]), float(s["sum_hy"]))
                    for s in subs
                )
            return cls(float(data["h0"]), float(data["beta_w"]), float(data["sum_hy"]),
                       subdomains)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"scenario JSON does not match schema: {exc}") from exc


def unpartitioned_info_cap(s: BudgetScenario) -> float:
    """Largest achievable information gain: min of prior entropy and budget headroom."""
    return max(0.0, min(s.h0, s.beta_w - s.sum_hy))


def unpartitioned_eta_cap(s: BudgetScenario) -> float:
    """Efficiency cap for an unpartitioned strategy; requires a positive budget."""
    if s.beta_w <= 0.0:
        raise ZeroBudget("efficiency cap undefined at zero budget")
    return max(0.0, min(s.h0 / s.beta_w, 1.0 - s.sum_hy / s.beta_w))


def per_subdomain_cap(p: float, h: float, beta_w: float, sum_hy: float) -> float:
    """Information cap for one subdomain's budgeted cycle."""
    if min(p, h, beta_w, sum_hy) < 0.0:
        raise InvalidParameter("subdomain inputs must all be >= 0")
    return max(0.0, min(h, beta_w - sum_hy))


def federated_info_cap(s: BudgetScenario) -> float:
    """Mass-weighted sum of the per-subdomain information caps."""
    if s.subdomains is None:
        raise MissingPartition("federated cap requires subdomain data")
    return sum(sub.p * per_subdomain_cap(sub.p, sub.h, sub.beta_w, sub.sum_hy)
               for sub in s.subdomains)


def federated_eta_cap(s: BudgetScenario) -> float:
    """Efficiency cap for a federated strategy over its subdomain mixture."""
    if s.beta_w <= 0.0:
        raise ZeroBudget("efficiency cap undefined at zero budget")
    if s.subdomains is None:
        raise MissingPartition("federated cap requires subdomain data")
    h_mix = sum(sub.p * sub.h for sub in s.subdomains)
    hy_mix = sum(sub.p * sub.sum_hy for sub in s.subdomains)
    return max(0.0, min(h_mix / s.beta_w, 1.0 - hy_mix / s.beta_w))


def partition_entropy_gap(h_gen: float, h_fed: float) -> float:
    """Entropy removed by conditioning on the partition: ``h_gen - h_fed``, >= 0."""
    if h_fed > h_gen + _GAP_TOL:
        raise NegativeGap(
            f"conditional entropy {h_fed!r} exceeds unconditional {h_gen!r}: "
            "inconsistent partition"
        )
    return max(0.0, h_gen - h_fed)


class Regime(Enum):
    PRIOR_LIMITED = "prior_limited"
    BUDGET_LIMITED = "budget_limited"
    CROSSOVER = "crossover"


@dataclass(frozen=True)
class RegimeResult:
    regime: Regime
    ratio: float


def regime_classify(beta_w: float, h: float,
                    threshold_hi: float = 10.0, threshold_lo: float = 0.1) -> RegimeResult:
    """Classify a budget as prior-limited, budget-limited, or crossover.

    The asymptotic regimes are made deterministic by explicit ratio
    thresholds (defaults 10 and 0.1).
    """
    if h <= 0.0:
        raise ZeroPriorEntropy("regime classification requires prior entropy > 0")
    if beta_w < 0.0:
        raise InvalidParameter("beta_w must be >= 0")
    if threshold_lo >= threshold_hi:
        raise InvalidParameter("threshold_lo must be below threshold_hi")
    ratio = beta_w / h
    if ratio > threshold_hi:
        return RegimeResult(Regime.PRIOR_LIMITED, ratio)
    if ratio < threshold_lo:
        return RegimeResult(Regime.BUDGET_LIMITED, ratio)
    return RegimeResult(Regime.CROSSOVER, ratio)


# ---------------------------------------------------------------------------
# ledger-facing checks


def scenario_from_ledger(ledger, h0: float) -> BudgetScenario:
    """Summarize a work ledger as a scenario: spent work and erased (stored) entropy."""
    return BudgetScenario(
        h0=h0,
        beta_w=ledger.budget_spent,
        sum_hy=float(sum(r.stored_entropy for r in ledger.records)),
    )


@dataclass(frozen=True)
class BoundCheck:
    """One verified inequality: observed value against its limit."""

    name: str
    passed: bool
    observed: float
    limit: float
    detail: str = ""

    def __post_init__(self):
        # numpy scalars would break JSON emission downstream
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "observed", float(self.observed))
        object.__setattr__(self, "limit", float(self.limit))


def bound_report(ledger, h0: float | None = None, tol: float = 1e-10) -> list[BoundCheck]:
    """Check a ledger against every applicable work/information bound.

    Covers the per-round work floor, the cumulative work floor, the
    efficiency cap, and (when ``h0`` is given) the budget-information cap.
    """
    checks: list[BoundCheck] = []
    records = ledger.records

    floors = [r.info_gain + r.stored_entropy for r in records]
    works = [r.work_meas + r.work_erase for r in records]
    if records:
        slacks = [w - f for w, f in zip(works, floors)]
        worst = min(range(len(records)), key=lambda i: slacks[i])
        checks.append(BoundCheck(
            "round_work_floor",
            all(sl >= -tol for sl in slacks),
            works[worst], floors[worst],
            f"worst round {records[worst].round_index}",
        ))
    else:
        checks.append(BoundCheck("round_work_floor", True, 0.0, 0.0, "empty ledger"))

    total_floor = float(sum(floors))
    total_work = float(sum(works))
    checks.append(BoundCheck(
        "total_work_floor", total_work >= total_floor - tol, total_work, total_floor))

    total_info = float(sum(r.info_gain for r in records))
    if ledger.budget_spent > 0.0 and total_floor > 0.0:
        eta = total_info / ledger.budget_spent
        cap = total_info / total_floor
        ok = eta <= cap + tol and cap <= 1.0 + tol
        checks.append(BoundCheck("efficiency_cap", ok, eta, min(cap, 1.0)))
    else:
        checks.append(BoundCheck("efficiency_cap", True, 0.0, 1.0, "no work spent"))

    if h0 is not None:
        cap = unpartitioned_info_cap(scenario_from_ledger(ledger, h0))
        checks.append(BoundCheck("info_cap", total_info <= cap + tol, total_info, cap))

    return checks
