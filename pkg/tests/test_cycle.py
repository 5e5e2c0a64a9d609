import json
import math

import numpy as np
import pytest

from thermosci import (
    CompressionMap,
    CostModel,
    DiscreteDistribution,
    EnvironmentModel,
    ExpectedMode,
    FixedSequence,
    GreedyInfoMax,
    LikelihoodModel,
    RandomPolicy,
    RoundRecord,
    RoundRobin,
    SampledMode,
    Units,
    WorkLedger,
    cumulative_information,
    efficiency,
    round_work_lower_bound,
    run_episode,
    stored_entropy,
)
from thermosci.errors import (
    DimensionMismatch,
    IncompleteMapping,
    InvalidLedger,
    InvalidParameter,
    NoWorkSpent,
    TreeTooLarge,
)
from thermosci.verify import random_environment, random_policy

from helpers import (
    asym_binary_env,
    constant_likelihood_env,
    enumerate_episode,
    entropy_of,
    noiseless_binary_env,
    three_state_env,
)

LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# types


def test_cost_model_validation():
    with pytest.raises(InvalidParameter):
        CostModel(kappa_meas=0.5)
    with pytest.raises(InvalidParameter):
        CostModel(kappa_erase=0.99)
    with pytest.raises(InvalidParameter):
        CostModel(delta_f_mem=-0.1)


def test_environment_consistency():
    with pytest.raises(DimensionMismatch):
        EnvironmentModel(DiscreteDistribution([1.0 / 3] * 3),
                         LikelihoodModel([[[0.5, 0.5], [0.5, 0.5]]]))
    with pytest.raises(DimensionMismatch):
        EnvironmentModel(DiscreteDistribution([0.5, 0.5]),
                         LikelihoodModel([[[0.5, 0.5], [0.5, 0.5]]]),
                         intervention_count=2)


def test_environment_json_round_trip():
    env = three_state_env()
    clone = EnvironmentModel.from_json_dict(env.to_json_dict())
    assert np.allclose(clone.prior.probs, env.prior.probs)
    assert np.allclose(clone.likelihood.table, env.likelihood.table)


def test_round_record_invariants():
    with pytest.raises(InvalidLedger):
        RoundRecord(0, 0, info_gain=0.5, outcome_entropy=0.6, stored_entropy=0.6,
                    work_meas=0.4, work_erase=0.6, belief_entropy_after=0.1)
    with pytest.raises(InvalidLedger):
        RoundRecord(0, 0, info_gain=0.1, outcome_entropy=0.6, stored_entropy=0.6,
                    work_meas=0.2, work_erase=0.5, belief_entropy_after=0.1)
    with pytest.raises(InvalidLedger):
        RoundRecord(0, 0, info_gain=0.1, outcome_entropy=0.3, stored_entropy=0.6,
                    work_meas=0.2, work_erase=0.7, belief_entropy_after=0.1)


def test_ledger_invariants():
    rec = RoundRecord(0, 0, 0.5, 0.6, 0.6, 0.5, 0.6, 0.1)
    with pytest.raises(InvalidLedger):
        WorkLedger((rec,), budget_total=2.0, budget_spent=0.9)  # mismatched sum
    with pytest.raises(InvalidLedger):
        WorkLedger((rec,), budget_total=1.0, budget_spent=1.1)  # overdraft


# ---------------------------------------------------------------------------
# stored entropy and the per-round floor


def test_stored_entropy_identity_map():
    d = DiscreteDistribution([0.25, 0.75])
    expected = entropy_of(d.probs)
    assert stored_entropy(d).value == pytest.approx(expected, abs=1e-15)
    assert stored_entropy(d, CompressionMap.identity(2)).value == pytest.approx(
        expected, abs=1e-15)


def test_stored_entropy_constant_map():
    d = DiscreteDistribution([0.25, 0.75])
    assert stored_entropy(d, CompressionMap.constant(2)).value == 0.0


def test_stored_entropy_pairwise_merge():
    d = DiscreteDistribution([0.25, 0.25, 0.25, 0.25])
    merged = stored_entropy(d, CompressionMap((0, 0, 1, 1))).value
    assert merged == pytest.approx(LN2, abs=1e-12)


def test_stored_entropy_incomplete_mapping():
    d = DiscreteDistribution([0.25, 0.25, 0.25, 0.25])
    with pytest.raises(IncompleteMapping):
        stored_entropy(d, CompressionMap((0, 1)))


def test_round_work_lower_bound_values():
    rec = RoundRecord(0, 0, LN2, LN2, LN2, LN2, LN2, 0.0)
    assert round_work_lower_bound(rec) == pytest.approx(2 * LN2, abs=1e-12)
    assert round_work_lower_bound(rec) == pytest.approx(1.386294, abs=1e-6)
    zero = RoundRecord(0, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    assert round_work_lower_bound(zero) == 0.0
    compressed = RoundRecord(0, 0, 0.3, 0.5, 0.0, 0.3, 0.0, 0.1)
    assert round_work_lower_bound(compressed) == pytest.approx(0.3, abs=1e-15)


# ---------------------------------------------------------------------------
# expected-mode episodes


def test_noiseless_round_ledger():
    env = noiseless_binary_env()
    ledger, summary = run_episode(env, GreedyInfoMax(), CostModel(), 2 * LN2,
                                  ExpectedMode())
    assert ledger.rounds_completed == 1
    rec = ledger.records[0]
    assert rec.info_gain == pytest.approx(LN2, abs=1e-12)
    assert rec.outcome_entropy == pytest.approx(LN2, abs=1e-12)
    assert ledger.budget_spent == pytest.approx(2 * LN2, abs=1e-12)
    assert efficiency(ledger) == pytest.approx(0.5, abs=1e-12)
    assert summary.posterior_entropy == pytest.approx(0.0, abs=1e-12)
    assert cumulative_information(ledger).value == pytest.approx(LN2, abs=1e-12)


def test_noiseless_round_with_dissipation():
    env = noiseless_binary_env()
    ledger, _ = run_episode(env, GreedyInfoMax(), CostModel(2.0, 2.0, 0.0),
                            4 * LN2, ExpectedMode())
    assert ledger.rounds_completed == 1
    assert efficiency(ledger) == pytest.approx(0.25, abs=1e-12)


def test_zero_budget_gives_empty_ledger():
    env = noiseless_binary_env()
    ledger, summary = run_episode(env, RoundRobin(), CostModel(), 0.0, ExpectedMode())
    assert ledger.rounds_completed == 0
    assert summary.status == "budget_exhausted_immediately"
    assert cumulative_information(ledger).value == 0.0
    with pytest.raises(NoWorkSpent):
        efficiency(ledger)


def test_constant_likelihood_gains_nothing():
    env = constant_likelihood_env()
    ledger, summary = run_episode(env, RoundRobin(), CostModel(), 1.0, ExpectedMode())
    assert ledger.rounds_completed == 1  # one ln2 erasure fits in budget 1.0
    assert all(r.info_gain == pytest.approx(0.0, abs=1e-12) for r in ledger.records)
    assert summary.cumulative_info == pytest.approx(0.0, abs=1e-12)
    assert efficiency(ledger) == 0.0


def test_budget_is_never_overdrawn():
    env = asym_binary_env()
    for budget in (0.3, 0.76, 1.2, 1.6, 2.4):
        ledger, _ = run_episode(env, RoundRobin(), CostModel(), budget, ExpectedMode())
        assert ledger.budget_spent <= budget + 1e-12


def test_max_rounds_caps_episode():
    env = asym_binary_env()
    ledger, summary = run_episode(env, RoundRobin(), CostModel(), 100.0,
                                  ExpectedMode(), max_rounds=2)
    assert ledger.rounds_completed == 2
    assert summary.stop_reason == "max_rounds"


def test_fixed_sequence_exhaustion_ends_episode():
    env = asym_binary_env()
    ledger, summary = run_episode(env, FixedSequence((0,)), CostModel(), 100.0,
                                  ExpectedMode())
    assert ledger.rounds_completed == 1
    assert summary.stop_reason == "policy_exhausted"


def test_tree_node_cap():
    env = three_state_env()
    with pytest.raises(TreeTooLarge):
        run_episode(env, RoundRobin(), CostModel(), 100.0, ExpectedMode(),
                    max_rounds=4, node_cap=2)


def test_telescoping_against_enumeration_oracle():
    env = three_state_env()
    ledger, summary = run_episode(env, RoundRobin(), CostModel(), 3.0, ExpectedMode(),
                                  max_rounds=3)
    tau = ledger.rounds_completed
    infos, hys, leaf_entropy = enumerate_episode(env, lambda t: t % 2, tau)
    for rec, info, hy in zip(ledger.records, infos, hys):
        assert rec.info_gain == pytest.approx(info, abs=1e-12)
        assert rec.outcome_entropy == pytest.approx(hy, abs=1e-12)
    assert summary.posterior_entropy == pytest.approx(leaf_entropy, abs=1e-12)
    drop = summary.prior_entropy - leaf_entropy
    assert summary.cumulative_info == pytest.approx(drop, abs=1e-10)


def test_work_model_charges_kappa_and_delta_f():
    env = asym_binary_env()
    cost = CostModel(1.5, 2.0, 0.1)
    ledger, _ = run_episode(env, RoundRobin(), CostModel(), 10.0, ExpectedMode(),
                            max_rounds=2)
    dissipative, _ = run_episode(env, RoundRobin(), cost, 10.0, ExpectedMode(),
                                 max_rounds=2)
    for base, hot in zip(ledger.records, dissipative.records):
        assert hot.work_meas == pytest.approx(1.5 * (base.info_gain + 0.1), abs=1e-12)
        assert hot.work_erase == pytest.approx(2.0 * base.stored_entropy, abs=1e-12)


def test_compression_reduces_work_at_fixed_horizon():
    env = three_state_env()
    merge = CompressionMap((0, 0, 1))
    plain, _ = run_episode(env, RoundRobin(), CostModel(), 50.0, ExpectedMode(),
                           max_rounds=3)
    squeezed, _ = run_episode(env, RoundRobin(), CostModel(), 50.0, ExpectedMode(),
                              compression=merge, max_rounds=3)
    assert squeezed.rounds_completed == plain.rounds_completed
    for a, b in zip(plain.records, squeezed.records):
        assert b.stored_entropy <= a.outcome_entropy + 1e-12
        assert b.info_gain == pytest.approx(a.info_gain, abs=1e-12)
    assert efficiency(squeezed) >= efficiency(plain) - 1e-12


def test_compression_mapping_must_cover_outcomes():
    env = three_state_env()
    with pytest.raises(IncompleteMapping):
        run_episode(env, RoundRobin(), CostModel(), 1.0, ExpectedMode(),
                    compression=CompressionMap((0, 1)))


def test_greedy_beats_every_fixed_choice_at_round_one():
    env = three_state_env()
    greedy, _ = run_episode(env, GreedyInfoMax(), CostModel(), 50.0, ExpectedMode(),
                            max_rounds=1)
    gains = [
        run_episode(env, FixedSequence((u,)), CostModel(), 50.0, ExpectedMode(),
                    max_rounds=1)[0].records[0].info_gain
        for u in range(env.intervention_count)
    ]
    assert greedy.records[0].info_gain >= max(gains) - 1e-12


def test_adaptive_policy_gets_null_intervention_record():
    # greedy diverges across branches from round 2 on in this environment
    env = three_state_env()
    ledger, _ = run_episode(env, GreedyInfoMax(), CostModel(), 50.0, ExpectedMode(),
                            max_rounds=2)
    assert ledger.records[0].intervention is not None
    data = ledger.to_json_dict()
    assert data["records"][0]["intervention"] is not None


# ---------------------------------------------------------------------------
# sampled mode


def test_sampled_mode_is_deterministic():
    env = asym_binary_env()
    mode = SampledMode(seed=11, trials=500)
    a = run_episode(env, RoundRobin(), CostModel(), 1.6, mode)
    b = run_episode(env, RoundRobin(), CostModel(), 1.6, mode)
    assert json.dumps(a[0].to_json_dict()) == json.dumps(b[0].to_json_dict())
    assert a[1] == b[1]


def test_sampled_mode_tracks_expected_mode():
    env = asym_binary_env()
    _, exp = run_episode(env, RoundRobin(), CostModel(), 1.6, ExpectedMode())
    _, smp = run_episode(env, RoundRobin(), CostModel(), 1.6,
                         SampledMode(seed=3, trials=2000))
    assert smp.cumulative_info_se is not None
    assert abs(smp.cumulative_info - exp.cumulative_info) <= 3 * smp.cumulative_info_se + 1e-12


def test_sampled_zero_budget():
    env = asym_binary_env()
    ledger, summary = run_episode(env, RoundRobin(), CostModel(), 0.0,
                                  SampledMode(seed=0, trials=50))
    assert ledger.rounds_completed == 0
    assert summary.status == "budget_exhausted_immediately"


def test_sampled_random_policy_matches_expected():
    env = three_state_env()
    policy = RandomPolicy(seed=5)
    _, exp = run_episode(env, policy, CostModel(), 100.0, ExpectedMode(), max_rounds=2)
    _, smp = run_episode(env, policy, CostModel(), 100.0,
                         SampledMode(seed=9, trials=3000), max_rounds=2)
    assert abs(smp.cumulative_info - exp.cumulative_info) <= 3 * smp.cumulative_info_se + 1e-12


# ---------------------------------------------------------------------------
# randomized families


def test_bounds_hold_across_random_episodes():
    rng = np.random.default_rng(7)
    for _ in range(20):
        env = random_environment(rng)
        policy = random_policy(rng, env)
        cost = CostModel(float(rng.uniform(1, 3)), float(rng.uniform(1, 3)),
                         float(rng.uniform(0, 0.5)))
        budget = float(rng.uniform(0.5, 4.0))
        ledger, summary = run_episode(env, policy, cost, budget, ExpectedMode(),
                                      max_rounds=4)
        for rec in ledger.records:
            assert rec.work_meas + rec.work_erase >= round_work_lower_bound(rec) - 1e-12
        total_floor = sum(r.info_gain + r.stored_entropy for r in ledger.records)
        assert ledger.budget_spent >= total_floor - 1e-10
        if ledger.budget_spent > 0 and total_floor > 0:
            cum = cumulative_information(ledger).value
            assert efficiency(ledger) <= cum / total_floor + 1e-10
            assert cum / total_floor <= 1.0 + 1e-10


# ---------------------------------------------------------------------------
# ledger serialization


def test_ledger_json_round_trip_nats():
    env = asym_binary_env()
    ledger, _ = run_episode(env, RoundRobin(), CostModel(), 1.6, ExpectedMode())
    clone = WorkLedger.from_json_dict(ledger.to_json_dict())
    assert clone == ledger


def test_ledger_json_bits_conversion():
    env = noiseless_binary_env()
    ledger, _ = run_episode(env, RoundRobin(), CostModel(), 2 * LN2, ExpectedMode())
    bits = ledger.to_json_dict(Units.BITS)
    assert bits["units"] == "bits"
    assert bits["records"][0]["info_gain"] == pytest.approx(1.0, abs=1e-12)
    assert bits["budget_spent"] == pytest.approx(2.0, abs=1e-12)
    back = WorkLedger.from_json_dict(bits)
    assert back.budget_spent == pytest.approx(ledger.budget_spent, abs=1e-12)
