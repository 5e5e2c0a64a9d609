"""Measure-update-erase episodes under a finite work budget.

An episode is a sequence of rounds. In each round the agent picks an
intervention, anticipates an outcome, updates its belief, and erases the
stored record of the outcome. Work is accounted in beta-normalized nats:

    round cost = kappa_meas * (info_gain + delta_f_mem) + kappa_erase * stored_entropy

with ``kappa >= 1`` modelling irreversibility on top of the reversible floor
and ``stored_entropy`` the entropy of the (optionally compressed) outcome
record. A round executes only if its full expected cost fits in the
remaining budget; partial rounds are never charged. A round whose cost and
information gain are both zero would change nothing, thermodynamically or
epistemically, so it terminates the episode instead of spinning.

Two evaluation modes are supported:

* ``ExpectedMode`` enumerates the full outcome tree and keeps the exact
  mixture of posteriors, so each ledger row is an exact expectation and the
  telescoping identity  sum_t info_t == prior entropy - expected final
  posterior entropy  holds to float precision.
* ``SampledMode`` draws the true state once per trial from the prior,
  simulates outcome draws, and reports trial-averaged ledger rows plus a
  standard error for the cumulative information gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IncompleteMapping,
    IndexOutOfRange,
    InvalidLedger,
    InvalidParameter,
    NoWorkSpent,
    TreeTooLarge,
    ZeroEvidence,
)
from .info_core import (
    LN2,
    LOG_FLOOR,
    DiscreteDistribution,
    InfoQuantity,
    LikelihoodModel,
    Units,
    _entropy,
)

#: rounds whose total expected cost is at or below this are degenerate no-ops
ZERO_ROUND_TOL = 1e-15
#: allowed budget overdraft from float accumulation
BUDGET_SLACK = 1e-12

DEFAULT_NODE_CAP = 1_000_000


# ---------------------------------------------------------------------------
# environment and cost description


@dataclass(frozen=True)
class EnvironmentModel:
    """A discrete environment: state prior, likelihood tensor, intervention count."""

    prior: DiscreteDistribution
    likelihood: LikelihoodModel
    intervention_count: int | None = None

    def __post_init__(self):
        if len(self.prior) != self.likelihood.n_states:
            raise DimensionMismatch(
                f"prior support {len(self.prior)} does not match likelihood states "
                f"{self.likelihood.n_states}"
            )
        if self.intervention_count is None:
            object.__setattr__(self, "intervention_count", self.likelihood.n_interventions)
        elif self.intervention_count != self.likelihood.n_interventions:
            raise DimensionMismatch(
                f"declared {self.intervention_count} interventions but likelihood has "
                f"{self.likelihood.n_interventions}"
            )
        # outcome entropy of each (u, state) row, reused by greedy policies
        table = self.likelihood.table
        row_h = np.array([[_entropy(table[u, s]) for s in range(table.shape[1])]
                          for u in range(table.shape[0])])
        row_h.flags.writeable = False
        object.__setattr__(self, "_row_entropies", row_h)

    @property
    def n_states(self) -> int:
        return self.likelihood.n_states

    @property
    def n_outcomes(self) -> int:
        return self.likelihood.n_outcomes

    def to_json_dict(self) -> dict:
        return {
            "prior": [float(p) for p in self.prior.probs],
            "interventions": self.likelihood.n_interventions,
            "likelihood": [[[float(v) for v in row] for row in self.likelihood.table[u]]
                           for u in range(self.likelihood.n_interventions)],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "EnvironmentModel":
        try:
            prior = DiscreteDistribution(data["prior"])
            lik = LikelihoodModel(data["likelihood"])
            count = int(data["interventions"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DimensionMismatch(f"environment JSON does not match schema: {exc}") from exc
        return cls(prior, lik, count)


@dataclass(frozen=True)
class CostModel:
    """Irreversibility factors and memory free-energy change per round.

    ``kappa_* = 1`` with ``delta_f_mem = 0`` charges exactly the reversible
    floor; larger values model dissipative hardware.
    """

    kappa_meas: float = 1.0
    kappa_erase: float = 1.0
    delta_f_mem: float = 0.0

    def __post_init__(self):
        if self.kappa_meas < 1.0 or self.kappa_erase < 1.0:
            raise InvalidParameter("kappa_meas and kappa_erase must be >= 1")
        if self.delta_f_mem < 0.0:
            raise InvalidParameter("delta_f_mem must be >= 0")


@dataclass(frozen=True)
class CompressionMap:
    """A total map from outcome indices to statistic indices, applied before storage."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(m) for m in self.mapping)
        if len(mapping) < 1 or any(m < 0 for m in mapping):
            raise IncompleteMapping("mapping must be a non-empty tuple of indices >= 0")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, n_outcomes: int) -> "CompressionMap":
        return cls(tuple(range(n_outcomes)))

    @classmethod
    def constant(cls, n_outcomes: int) -> "CompressionMap":
        return cls((0,) * n_outcomes)

    def pushforward(self, outcome_probs: np.ndarray) -> np.ndarray:
        if len(self.mapping) != outcome_probs.size:
            raise IncompleteMapping(
                f"mapping covers {len(self.mapping)} outcomes, distribution has {outcome_probs.size}"
            )
        return np.bincount(np.asarray(self.mapping), weights=outcome_probs)


def stored_entropy(
    outcome_dist: DiscreteDistribution, compression: CompressionMap | None = None
) -> InfoQuantity:
    """Entropy of the stored record: the pushforward of the outcome distribution.

    With no compression map this is just the outcome entropy.
    """
    if compression is None:
        return InfoQuantity(_entropy(outcome_dist.probs))
    return InfoQuantity(_entropy(compression.pushforward(outcome_dist.probs)))


# ---------------------------------------------------------------------------
# policies

History = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class FixedSequence:
    """Play a fixed list of interventions; the episode ends when it runs out."""

    interventions: tuple[int, ...]

    def choose(self, belief: np.ndarray, env: EnvironmentModel, t: int, history: History):
        if t >= len(self.interventions):
            return None
        return int(self.interventions[t])


@dataclass(frozen=True)
class RoundRobin:
    """Cycle through interventions in index order."""

    def choose(self, belief: np.ndarray, env: EnvironmentModel, t: int, history: History):
        return t % env.intervention_count


@dataclass(frozen=True)
class RandomPolicy:
    """Uniformly random intervention, derived deterministically from the history.

    Seeding on ``(seed, round, history)`` makes the choice a function of the
    branch, so expected-mode enumeration and sampled-mode trials agree.
    """

    seed: int = 0

    def choose(self, belief: np.ndarray, env: EnvironmentModel, t: int, history: History):
        material = [self.seed, t]
        for u, y in history:
            material.extend((u, y))
        rng = np.random.default_rng(np.random.SeedSequence(material))
        return int(rng.integers(env.intervention_count))


@dataclass(frozen=True)
class GreedyInfoMax:
    """Pick the intervention with the highest expected information gain.

    Ties are broken by the lowest intervention index.
    """

    def choose(self, belief: np.ndarray, env: EnvironmentModel, t: int, history: History):
        gains = np.empty(env.intervention_count)
        row_h = env._row_entropies
        for u in range(env.intervention_count):
            pred = belief @ env.likelihood.table[u]
            gains[u] = _entropy(pred) - float(belief @ row_h[u])
        return int(np.argmax(gains))


Policy = FixedSequence | RoundRobin | RandomPolicy | GreedyInfoMax


# ---------------------------------------------------------------------------
# modes


@dataclass(frozen=True)
class ExpectedMode:
    """Exhaustive outcome-tree enumeration; ledger rows are exact expectations."""


@dataclass(frozen=True)
class SampledMode:
    """Monte Carlo trials with per-trial deterministic substreams."""

    seed: int = 0
    trials: int = 1000

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParameter("trials must be >= 1")


Mode = ExpectedMode | SampledMode


# ---------------------------------------------------------------------------
# ledger


@dataclass(frozen=True)
class RoundRecord:
    """One executed round: information gained, entropies handled, work charged.

    ``intervention`` is None when branches or trials at this round disagree
    on the choice (adaptive policies in expected mode).
    """

    round_index: int
    intervention: int | None
    info_gain: float
    outcome_entropy: float
    stored_entropy: float
    work_meas: float
    work_erase: float
    belief_entropy_after: float

    def __post_init__(self):
        for name in ("info_gain", "outcome_entropy", "stored_entropy",
                     "work_meas", "work_erase", "belief_entropy_after"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.info_gain < -BUDGET_SLACK:
            raise InvalidLedger(f"round {self.round_index}: negative info gain {self.info_gain!r}")
        if self.work_meas < self.info_gain - BUDGET_SLACK:
            raise InvalidLedger(
                f"round {self.round_index}: measurement work {self.work_meas!r} below "
                f"information gain {self.info_gain!r}"
            )
        if self.work_erase < self.stored_entropy - BUDGET_SLACK:
            raise InvalidLedger(
                f"round {self.round_index}: erasure work {self.work_erase!r} below "
                f"stored entropy {self.stored_entropy!r}"
            )
        if self.stored_entropy > self.outcome_entropy + BUDGET_SLACK:
            raise InvalidLedger(
                f"round {self.round_index}: stored entropy exceeds outcome entropy"
            )
        if self.belief_entropy_after < -BUDGET_SLACK:
            raise InvalidLedger(f"round {self.round_index}: negative belief entropy")


@dataclass(frozen=True)
class WorkLedger:
    """Ordered round records plus budget state for one episode."""

    records: tuple[RoundRecord, ...]
    budget_total: float
    budget_spent: float

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "budget_total", float(self.budget_total))
        object.__setattr__(self, "budget_spent", float(self.budget_spent))
        spent = sum(r.work_meas + r.work_erase for r in self.records)
        if abs(spent - self.budget_spent) > 1e-10:
            raise InvalidLedger(
                f"budget_spent {self.budget_spent!r} does not match record sum {spent!r}"
            )
        if self.budget_spent > self.budget_total + BUDGET_SLACK:
            raise InvalidLedger(
                f"budget_spent {self.budget_spent!r} exceeds budget_total {self.budget_total!r}"
            )

    @property
    def rounds_completed(self) -> int:
        return len(self.records)

    def to_json_dict(self, units: Units | str = Units.NATS) -> dict:
        units = Units(units)
        scale = 1.0 if units == Units.NATS else 1.0 / LN2
        recs = [
            {
                "round": r.round_index,
                "intervention": r.intervention,
                "info_gain": r.info_gain * scale,
                "outcome_entropy": r.outcome_entropy * scale,
                "stored_entropy": r.stored_entropy * scale,
                "work_meas": r.work_meas * scale,
                "work_erase": r.work_erase * scale,
                "belief_entropy_after": r.belief_entropy_after * scale,
            }
            for r in self.records
        ]
        return {
            "units": units.value,
            "budget_total": self.budget_total * scale,
            "budget_spent": self.budget_spent * scale,
            "rounds": self.rounds_completed,
            "records": recs,
            "totals": {
                "cumulative_info": sum(r.info_gain for r in self.records) * scale,
                "work_meas": sum(r.work_meas for r in self.records) * scale,
                "work_erase": sum(r.work_erase for r in self.records) * scale,
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "WorkLedger":
        try:
            units = Units(data.get("units", "nats"))
            scale = 1.0 if units == Units.NATS else LN2
            records = tuple(
                RoundRecord(
                    round_index=int(r["round"]),
                    intervention=None if r["intervention"] is None else int(r["intervention"]),
                    info_gain=float(r["info_gain"]) * scale,
                    outcome_entropy=float(r["outcome_entropy"]) * scale,
                    stored_entropy=float(r["stored_entropy"]) * scale,
                    work_meas=float(r["work_meas"]) * scale,
                    work_erase=float(r["work_erase"]) * scale,
                    belief_entropy_after=float(r["belief_entropy_after"]) * scale,
                )
                for r in data["records"]
            )
            return cls(records, float(data["budget_total"]) * scale,
                       float(data["budget_spent"]) * scale)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidLedger(f"ledger JSON does not match schema: {exc}") from exc


@dataclass(frozen=True)
class EpisodeSummary:
    """Belief-level outcome of an episode, alongside the work ledger."""

    status: str  # "ok" | "budget_exhausted_immediately"
    mode: str  # "expected" | "sampled"
    stop_reason: str  # "budget" | "degenerate" | "max_rounds" | "policy_exhausted" | "mixed"
    prior_entropy: float
    posterior_entropy: float
    cumulative_info: float
    rounds: int
    trials: int | None = None
    cumulative_info_se: float | None = None


def cumulative_information(ledger: WorkLedger) -> InfoQuantity:
    """Total information gained over the episode, in nats."""
    return InfoQuantity(sum(r.info_gain for r in ledger.records))


def efficiency(ledger: WorkLedger) -> float:
    """Information gained per unit of spent work (both in nats)."""
    if ledger.budget_spent <= 0.0:
        raise NoWorkSpent("efficiency undefined: no work was spent")
    total_info = sum(r.info_gain for r in ledger.records)
    eta = total_info / ledger.budget_spent
    floor = sum(r.info_gain + r.stored_entropy for r in ledger.records)
    if floor > 0.0:
        assert eta <= total_info / floor + 1e-10, "efficiency exceeds its work-floor cap"
    return eta


def round_work_lower_bound(record: RoundRecord) -> float:
    """Reversible floor ``info_gain + stored_entropy`` for one round, in nats."""
    bound = record.info_gain + record.stored_entropy
    assert record.work_meas + record.work_erase >= bound - BUDGET_SLACK, (
        f"round {record.round_index} work below its reversible floor"
    )
    return bound


# ---------------------------------------------------------------------------
# episode execution


def _round_quantities(belief: np.ndarray, table_u: np.ndarray,
                      compression: CompressionMap | None):
    """Expected info gain, outcome entropy, stored entropy, predictive, posteriors."""
    pred = belief @ table_u
    expected_post = 0.0
    posts: list[np.ndarray | None] = [None] * table_u.shape[1]
    for y in range(table_u.shape[1]):
        py = float(pred[y])
        if py > LOG_FLOOR:
            post = belief * table_u[:, y] / py
            posts[y] = post
            expected_post += py * _entropy(post)
    info = max(0.0, _entropy(belief) - expected_post)
    hy = _entropy(pred)
    hs = hy if compression is None else _entropy(compression.pushforward(pred))
    return info, hy, hs, pred, posts


def _choose(policy: Policy, belief: np.ndarray, env: EnvironmentModel,
            t: int, history: History):
    u = policy.choose(belief, env, t, history)
    if u is not None and not 0 <= u < env.intervention_count:
        raise IndexOutOfRange(
            f"policy chose intervention {u} outside [0, {env.intervention_count})"
        )
    return u


def _run_expected(env, policy, cost, budget, compression, max_rounds, node_cap):
    table = env.likelihood.table
    h_prior = _entropy(env.prior.probs)
    nodes: list[tuple[float, np.ndarray, History]] = [(1.0, env.prior.probs, ())]
    records: list[RoundRecord] = []
    spent = 0.0
    posterior_entropy = h_prior
    status, reason = "ok", "max_rounds"
    t = 0
    while max_rounds is None or t < max_rounds:
        choices = []
        for _, belief, history in nodes:
            u = _choose(policy, belief, env, t, history)
            if u is None:
                choices = None
                break
            choices.append(u)
        if choices is None:
            reason = "policy_exhausted"
            break

        info_t = hy_t = hs_t = 0.0
        per_node = []
        for (p_node, belief, _), u in zip(nodes, choices):
            info, hy, hs, pred, posts = _round_quantities(belief, table[u], compression)
            info_t += p_node * info
            hy_t += p_node * hy
            hs_t += p_node * hs
            per_node.append((pred, posts))

        work_meas = cost.kappa_meas * (info_t + cost.delta_f_mem)
        work_erase = cost.kappa_erase * hs_t
        round_cost = work_meas + work_erase
        if round_cost <= ZERO_ROUND_TOL:
            reason = "degenerate"
            break
        if round_cost > budget - spent + BUDGET_SLACK:
            reason = "budget"
            if t == 0:
                status = "budget_exhausted_immediately"
            break

        new_nodes: list[tuple[float, np.ndarray, History]] = []
        for (p_node, _, history), u, (pred, posts) in zip(nodes, choices, per_node):
            for y, post in enumerate(posts):
                if post is not None:
                    new_nodes.append((p_node * float(pred[y]), post, history + ((u, y),)))
        if len(new_nodes) > node_cap:
            raise TreeTooLarge(
                f"outcome tree needs {len(new_nodes)} nodes at round {t}, cap is {node_cap}"
            )
        posterior_entropy = sum(p * _entropy(b) for p, b, _ in new_nodes)
        u_rec = choices[0] if all(u == choices[0] for u in choices) else None
        records.append(RoundRecord(t, u_rec, info_t, hy_t, hs_t,
                                   work_meas, work_erase, posterior_entropy))
        spent += round_cost
        nodes = new_nodes
        t += 1

    ledger = WorkLedger(tuple(records), budget, spent)
    cum = sum(r.info_gain for r in records)
    # telescoping identity of the exact enumeration
    assert abs(cum - (h_prior - posterior_entropy)) <= 1e-10, (
        "cumulative information does not telescope to the entropy drop"
    )
    summary = EpisodeSummary(status, "expected", reason, h_prior, posterior_entropy,
                             cum, len(records))
    return ledger, summary


def _run_sampled(env, policy, cost, budget, compression, max_rounds, mode, node_cap):
    table = env.likelihood.table
    h_prior = _entropy(env.prior.probs)
    n_states, n_outcomes = env.n_states, env.n_outcomes
    seeds = np.random.SeedSequence(mode.seed).spawn(mode.trials)

    trial_rows: list[list[tuple]] = []  # per trial: (u, info, hy, hs, wm, we, h_after)
    trial_cum: list[float] = []
    trial_final_h: list[float] = []
    reasons: set[str] = set()

    for k in range(mode.trials):
        rng = np.random.default_rng(seeds[k])
        theta = int(rng.choice(n_states, p=env.prior.probs))
        belief = env.prior.probs
        history: History = ()
        rows: list[tuple] = []
        spent_k = 0.0
        cum_k = 0.0
        t = 0
        reason = "max_rounds"
        while max_rounds is None or t < max_rounds:
            u = _choose(policy, belief, env, t, history)
            if u is None:
                reason = "policy_exhausted"
                break
            info, hy, hs, pred, posts = _round_quantities(belief, table[u], compression)
            work_meas = cost.kappa_meas * (info + cost.delta_f_mem)
            work_erase = cost.kappa_erase * hs
            round_cost = work_meas + work_erase
            if round_cost <= ZERO_ROUND_TOL:
                reason = "degenerate"
                break
            if round_cost > budget - spent_k + BUDGET_SLACK:
                reason = "budget"
                break
            y = int(rng.choice(n_outcomes, p=table[u, theta]))
            post = posts[y]
            if post is None:
                py = float(pred[y])
                if py <= 0.0:
                    raise ZeroEvidence(f"drawn outcome {y} has zero predictive probability")
                post = belief * table[u][:, y] / py
            belief = post
            rows.append((u, info, hy, hs, work_meas, work_erase, _entropy(belief)))
            spent_k += round_cost
            cum_k += info
            history = history + ((u, y),)
            t += 1
        reasons.add(reason)
        trial_rows.append(rows)
        trial_cum.append(cum_k)
        trial_final_h.append(_entropy(belief))

    trials = mode.trials
    tau_max = max(len(rows) for rows in trial_rows)
    records: list[RoundRecord] = []
    for t in range(tau_max):
        active_us: set[int] = set()
        cols = [[] for _ in range(5)]
        h_after_col = []
        for k in range(trials):
            rows = trial_rows[k]
            if t < len(rows):
                u, i_, hy_, hs_, wm_, we_, ha_ = rows[t]
                active_us.add(u)
                vals = (i_, hy_, hs_, wm_, we_)
                h_after_col.append(ha_)
            else:
                vals = (0.0, 0.0, 0.0, 0.0, 0.0)
                h_after_col.append(trial_final_h[k])
            for c, v in zip(cols, vals):
                c.append(v)
        info, hy, hs, wm, we = (math.fsum(c) / trials for c in cols)
        h_after = math.fsum(h_after_col) / trials
        u_rec = active_us.pop() if len(active_us) == 1 else None
        records.append(RoundRecord(t, u_rec, info, hy, hs, wm, we, h_after))

    spent = float(sum(r.work_meas + r.work_erase for r in records))
    ledger = WorkLedger(tuple(records), budget, spent)
    cum_mean = math.fsum(trial_cum) / trials
    if trials > 1:
        var = math.fsum((c - cum_mean) ** 2 for c in trial_cum) / (trials - 1)
        se = math.sqrt(max(var, 0.0) / trials)
    else:
        se = None
    posterior_entropy = math.fsum(trial_final_h) / trials
    status = "ok"
    if tau_max == 0 and reasons == {"budget"}:
        status = "budget_exhausted_immediately"
    reason = reasons.pop() if len(reasons) == 1 else "mixed"
    summary = EpisodeSummary(status, "sampled", reason, h_prior, posterior_entropy,
                             cum_mean, len(records), trials, se)
    return ledger, summary


def run_episode(
    env: EnvironmentModel,
    policy: Policy,
    cost: CostModel | None = None,
    budget: float = 0.0,
    mode: Mode | None = None,
    compression: CompressionMap | None = None,
    max_rounds: int | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> tuple[WorkLedger, EpisodeSummary]:
    """Run one budgeted episode and return its ledger plus a belief summary.

    ``budget`` is the beta-normalized total work available, in nats. The
    episode stops when the next round does not fit the remaining budget
    (status ``budget_exhausted_immediately`` if that happens before round 1),
    when ``max_rounds`` is reached, when a fixed-sequence policy runs out,
    or when a round would be a zero-cost zero-gain no-op.
    """
    cost = cost if cost is not None else CostModel()
    mode = mode if mode is not None else ExpectedMode()
    if budget < 0.0:
        raise InvalidParameter("budget must be >= 0")
    if max_rounds is not None and max_rounds < 0:
        raise InvalidParameter("max_rounds must be >= 0")
    if compression is not None and len(compression.mapping) != env.n_outcomes:
        raise IncompleteMapping(
            f"compression covers {len(compression.mapping)} outcomes, environment has "
            f"{env.n_outcomes}"
        )
    if isinstance(mode, ExpectedMode):
        return _run_expected(env, policy, cost, budget, compression, max_rounds, node_cap)
    return _run_sampled(env, policy, cost, budget, compression, max_rounds, mode, node_cap)
