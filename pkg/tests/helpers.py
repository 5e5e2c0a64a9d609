"""Shared builders and independent oracles for the test suite.

The enumeration oracle below re-derives episode quantities through a
different route than the library (joint-table KL form instead of entropy
differences), so agreement between the two is a real check.
"""

from __future__ import annotations

import numpy as np

from thermosci import DiscreteDistribution, EnvironmentModel, LikelihoodModel


def entropy_of(probs) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 1e-15]
    return float(-(p * np.log(p)).sum()) if p.size else 0.0


def noiseless_binary_env() -> EnvironmentModel:
    return EnvironmentModel(
        DiscreteDistribution([0.5, 0.5]),
        LikelihoodModel([[[1.0, 0.0], [0.0, 1.0]]]),
    )


def asym_binary_env(prior=(0.5, 0.5)) -> EnvironmentModel:
    # p(y=1 | state0) = 0.8, p(y=1 | state1) = 0.4
    return EnvironmentModel(
        DiscreteDistribution(list(prior)),
        LikelihoodModel([[[0.2, 0.8], [0.6, 0.4]]]),
    )


def bsc_env(flip: float = 0.25) -> EnvironmentModel:
    return EnvironmentModel(
        DiscreteDistribution([0.5, 0.5]),
        LikelihoodModel([[[1.0 - flip, flip], [flip, 1.0 - flip]]]),
    )


def constant_likelihood_env() -> EnvironmentModel:
    return EnvironmentModel(
        DiscreteDistribution([0.5, 0.5]),
        LikelihoodModel([[[0.5, 0.5], [0.5, 0.5]]]),
    )


def three_state_env() -> EnvironmentModel:
    return EnvironmentModel(
        DiscreteDistribution([0.5, 0.3, 0.2]),
        LikelihoodModel([
            [[0.7, 0.2, 0.1], [0.2, 0.6, 0.2], [0.1, 0.3, 0.6]],
            [[0.6, 0.3, 0.1], [0.1, 0.8, 0.1], [0.3, 0.1, 0.6]],
        ]),
    )


def enumerate_episode(env: EnvironmentModel, u_of_round, n_rounds: int):
    """Brute-force outcome-tree enumeration for a non-adaptive intervention plan.

    Per-round information gain is computed from the joint table in KL form,
    sum_{s,y} p(s,y) ln[p(s,y) / (p(s) p(y))], independently of the
    library's entropy-difference route. Returns (per-round info gains,
    per-round outcome entropies, expected leaf posterior entropy).
    """
    nodes = [(1.0, np.array(env.prior.probs, dtype=float))]
    infos, outcome_entropies = [], []
    for t in range(n_rounds):
        table = np.array(env.likelihood.table[u_of_round(t)], dtype=float)
        info_t = 0.0
        hy_t = 0.0
        children = []
        for weight, belief in nodes:
            joint = belief[:, None] * table
            pred = joint.sum(axis=0)
            mask = joint > 1e-15
            denom = np.outer(belief, pred)
            info_t += weight * float(
                (joint[mask] * np.log(joint[mask] / denom[mask])).sum()
            )
            hy_t += weight * entropy_of(pred)
            for y in range(pred.size):
                if pred[y] > 1e-15:
                    children.append((weight * float(pred[y]), joint[:, y] / pred[y]))
        infos.append(info_t)
        outcome_entropies.append(hy_t)
        nodes = children
    leaf_entropy = sum(w * entropy_of(b) for w, b in nodes)
    return infos, outcome_entropies, leaf_entropy
