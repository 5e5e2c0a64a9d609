"""Subdomain partitions and the generalist / specialist / federated archetypes.

A partition splits the environment into ``n`` subdomains with masses
``p_i``, per-subdomain conditional priors (or bare entropies ``H_i``), and
per-subdomain work budgets ``W_i``. The three strategy archetypes are just
special partitions: a generalist is the trivial one-subdomain partition, a
specialist concentrates all mass and budget on one subdomain, and a
federated strategy spreads both across several.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import BudgetScenario, SubdomainBudget
from .errors import (
    IndexOutOfRange,
    InvalidParameter,
    ZeroMassSubdomain,
)
from .info_core import DiscreteDistribution, _entropy, _validated_joint

_ENTROPY_TOL = 1e-10
_BUDGET_TOL = 1e-10


@dataclass(frozen=True)
class PartitionSpec:
    """A complete description of one K-partition.

    Either ``conditional_priors`` or ``subdomain_entropies`` must be given;
    when priors are present the entropies are derived from them (and any
    supplied entropies are cross-checked). Zero-mass subdomains may exist
    but must carry zero budget.
    """

    masses: DiscreteDistribution
    budgets: tuple[float, ...]
    conditional_priors: tuple[DiscreteDistribution, ...] | None = None
    subdomain_entropies: tuple[float, ...] | None = None
    total_budget: float | None = None

    def __post_init__(self):
        n = len(self.masses)
        budgets = tuple(float(b) for b in self.budgets)
        if len(budgets) != n:
            raise InvalidParameter(f"{len(budgets)} budgets for {n} subdomains")
        if any(b < 0.0 for b in budgets):
            raise InvalidParameter("budgets must all be >= 0")
        object.__setattr__(self, "budgets", budgets)

        for i, (p, w) in enumerate(zip(self.masses.probs, budgets)):
            if p <= 0.0 and w > 0.0:
                raise ZeroMassSubdomain(
                    f"subdomain {i} has zero mass but positive budget {w!r}"
                )

        if self.conditional_priors is not None:
            priors = tuple(self.conditional_priors)
            if len(priors) != n:
                raise InvalidParameter(f"{len(priors)} conditional priors for {n} subdomains")
            object.__setattr__(self, "conditional_priors", priors)
            derived = tuple(_entropy(pr.probs) for pr in priors)
            if self.subdomain_entropies is not None:
                supplied = tuple(float(h) for h in self.subdomain_entropies)
                if len(supplied) != n or any(
                    abs(a - b) > _ENTROPY_TOL for a, b in zip(supplied, derived)
                ):
                    raise InvalidParameter(
                        "supplied subdomain entropies disagree with conditional priors"
                    )
            object.__setattr__(self, "subdomain_entropies", derived)
        else:
            if self.subdomain_entropies is None:
                raise InvalidParameter(
                    "need conditional_priors or subdomain_entropies"
                )
            entropies = tuple(float(h) for h in self.subdomain_entropies)
            if len(entropies) != n:
                raise InvalidParameter(f"{len(entropies)} entropies for {n} subdomains")
            if any(h < 0.0 for h in entropies):
                raise InvalidParameter("subdomain entropies must all be >= 0")
            object.__setattr__(self, "subdomain_entropies", entropies)

        weighted = sum(p * w for p, w in zip(self.masses.probs, budgets))
        if self.total_budget is None:
            object.__setattr__(self, "total_budget", weighted)
        elif abs(weighted - self.total_budget) > _BUDGET_TOL:
            raise InvalidParameter(
                f"mass-weighted budgets {weighted!r} do not reproduce declared total "
                f"{self.total_budget!r}"
            )

    @property
    def n(self) -> int:
        return len(self.masses)

    def to_json_dict(self) -> dict:
        return {
            "masses": [float(p) for p in self.masses.probs],
            "conditional_priors": None if self.conditional_priors is None else [
                [float(v) for v in pr.probs] for pr in self.conditional_priors
            ],
            "entropies": list(self.subdomain_entropies),
            "budgets": list(self.budgets),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PartitionSpec":
        try:
            masses = DiscreteDistribution(data["masses"])
            priors = data.get("conditional_priors")
            conditional = None
            if priors is not None:
                conditional = tuple(DiscreteDistribution(p) for p in priors)
            entropies = data.get("entropies")
            budgets = tuple(float(b) for b in data["budgets"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"partition JSON does not match schema: {exc}") from exc
        return cls(masses, budgets, conditional,
                   None if entropies is None else tuple(entropies))


def h_fed(part: PartitionSpec) -> float:
    """Mass-weighted conditional prior entropy of the partition, in nats."""
    return sum(p * h for p, h in zip(part.masses.probs, part.subdomain_entropies))


def generalist_partition(prior: DiscreteDistribution, budget: float) -> PartitionSpec:
    """The trivial one-subdomain partition: full prior, full budget."""
    if budget < 0.0:
        raise InvalidParameter("budget must be >= 0")
    return PartitionSpec(
        masses=DiscreteDistribution([1.0]),
        budgets=(float(budget),),
        conditional_priors=(prior,),
        total_budget=float(budget),
    )


def specialist_partition(
    conditional_priors: list[DiscreteDistribution] | tuple[DiscreteDistribution, ...],
    i_star: int,
    budget: float,
) -> PartitionSpec:
    """All mass and budget on subdomain ``i_star``; the others stay unfunded."""
    priors = tuple(conditional_priors)
    n = len(priors)
    if not 0 <= i_star < n:
        raise IndexOutOfRange(f"subdomain index {i_star} outside [0, {n})")
    if budget < 0.0:
        raise InvalidParameter("budget must be >= 0")
    masses = np.zeros(n)
    masses[i_star] = 1.0
    budgets = [0.0] * n
    budgets[i_star] = float(budget)
    return PartitionSpec(
        masses=DiscreteDistribution(masses),
        budgets=tuple(budgets),
        conditional_priors=priors,
        total_budget=float(budget),
    )


def build_partition_from_joint(joint, budgets) -> PartitionSpec:
    """Build a partition from a joint table ``p(state, subdomain)``.

    Masses are the subdomain (column) marginals; conditional priors are the
    normalized columns. Zero-mass columns get a uniform placeholder prior,
    which never enters any mass-weighted aggregate.
    """
    arr = _validated_joint(joint)
    n_states, n_sub = arr.shape
    masses = arr.sum(axis=0)
    priors = []
    for k in range(n_sub):
        if masses[k] > 0.0:
            priors.append(DiscreteDistribution(arr[:, k] / masses[k]))
        else:
            priors.append(DiscreteDistribution.uniform(n_states))
    return PartitionSpec(
        masses=DiscreteDistribution(masses),
        budgets=tuple(float(b) for b in budgets),
        conditional_priors=tuple(priors),
    )


def scenario_from_partition(
    part: PartitionSpec,
    h_gen: float,
    sum_hy: tuple[float, ...] | list[float] | None = None,
) -> BudgetScenario:
    """Assemble the budget scenario a partition induces.

    ``h_gen`` is the unpartitioned prior entropy; ``sum_hy`` gives each
    subdomain's aggregate outcome entropy (zeros when omitted). The global
    outcome-entropy term is the mass-weighted mixture.
    """
    if sum_hy is None:
        sum_hy = (0.0,) * part.n
    sum_hy = tuple(float(v) for v in sum_hy)
    if len(sum_hy) != part.n:
        raise InvalidParameter(f"{len(sum_hy)} outcome-entropy sums for {part.n} subdomains")
    if any(v < 0.0 for v in sum_hy):
        raise InvalidParameter("outcome-entropy sums must all be >= 0")
    subs = tuple(
        SubdomainBudget(float(p), float(h), w, s)
        for p, h, w, s in zip(part.masses.probs, part.subdomain_entropies,
                              part.budgets, sum_hy)
    )
    global_hy = sum(sub.p * sub.sum_hy for sub in subs)
    return BudgetScenario(
        h0=float(h_gen),
        beta_w=part.total_budget,
        sum_hy=global_hy,
        subdomains=subs,
    )
