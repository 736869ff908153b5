import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparse_eq.game import Game, JointDistribution, KUniformMultiset, SwitchingRule, expected_regret
from sparse_eq.gamegen import dummy_action, gen_dummy_pennies, gen_random_game, gen_rps
from sparse_eq.verify import (
    best_switching_rule,
    brute_force_verify_ce,
    verify_cce,
    verify_ce,
    verify_ce_single_switch,
)

from .conftest import random_distribution

UNIFORM4 = JointDistribution([[0, 0], [0, 1], [1, 0], [1, 1]], [0.25] * 4)


class TestVerifyCCE:
    def test_uniform_pennies_is_exact(self, pennies):
        rep = verify_cce(pennies, UNIFORM4, 0.0)
        assert rep.satisfied and rep.definition_used == "CCE"
        assert rep.worst_value == pytest.approx(0.0, abs=1e-15)

    def test_point_mass_witness(self, matching2):
        rep = verify_cce(matching2, JointDistribution.point_mass((0, 0)), 0.0)
        assert not rep.satisfied
        assert rep.witness == {"player": 1, "action": 1}
        assert rep.worst_value == 1.0

    def test_huge_epsilon_always_passes(self, rps3):
        x = random_distribution(np.random.default_rng(3), rps3)
        assert verify_cce(rps3, x, 2.0).satisfied

    def test_wrong_game(self, rps3):
        with pytest.raises(ValueError):
            verify_cce(rps3, JointDistribution.point_mass((0, 5)), 0.0)


class TestBestSwitchingRule:
    def test_point_mass(self, matching2):
        f = best_switching_rule(matching2, JointDistribution.point_mass((0, 0)), 1)
        assert f.mapping[0] == 1
        # action 1 is never recommended to player 2
        assert f.mapping[1] == 1

    def test_exact_ce_rule_has_no_gain(self, rps3):
        x = JointDistribution.product([np.full(3, 1 / 3)] * 2)
        for i in range(2):
            assert expected_regret(rps3, i, best_switching_rule(rps3, x, i), x) <= 1e-12

    def test_off_support_actions_are_fixed(self):
        g = gen_random_game(2, 4, seed=11)
        x = JointDistribution([[1, 0], [3, 2]], [0.5, 0.5])
        f = best_switching_rule(g, x, 0)
        assert f.mapping[0] == 0 and f.mapping[2] == 2


class TestVerifyCE:
    def test_rps_uniform(self, rps3):
        x = JointDistribution.product([np.full(3, 1 / 3)] * 2)
        assert verify_ce(rps3, x, 0.0).satisfied

    def test_pure_nash(self, coordination):
        assert verify_ce(coordination, JointDistribution.point_mass((1, 1)), 0.0).satisfied

    def test_dummy_pennies_unique_dummy_breaks_ce(self):
        game, _ = gen_dummy_pennies(8)
        # dummy 0 is drawn once, with a mismatch; the rest come in fair blocks
        samples = [(dummy_action(1, 0), dummy_action(-1, 0))]
        for d in (1, 2, 3, 4, 5, 6, 7):
            samples.append((dummy_action(1, d), dummy_action(1, d)))
        ms = KUniformMultiset(samples)
        # oracle: player 1 flips to -1 only on recommendation (+1, dummy 0)
        mapping = list(range(16))
        mapping[dummy_action(1, 0)] = dummy_action(-1, 0)
        gain = expected_regret(game, 0, SwitchingRule(0, mapping), ms)
        assert gain == pytest.approx(1 / 8)  # raw gain 2 with mass 1/8, halved by normalization
        rep = verify_ce(game, ms, 0.05)
        assert not rep.satisfied and rep.worst_value >= gain


class TestSingleSwitch:
    def test_point_mass_off_equilibrium(self, matching2):
        assert not verify_ce_single_switch(matching2, JointDistribution.point_mass((0, 0)), 0.0).satisfied

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**6), k=st.integers(2, 6))
    def test_diagonal_is_one_over_k_equilibrium(self, seed, k):
        g = gen_random_game(2, 6, seed=seed)
        x = JointDistribution([[j, j] for j in range(k)], np.full(k, 1 / k))
        assert verify_ce_single_switch(g, x, 1 / k).satisfied

    def test_single_action_game(self):
        g = Game(2, 1, [0.3, 0.6])
        rep = verify_ce_single_switch(g, JointDistribution.point_mass((0, 0)), 0.0)
        assert rep.satisfied and rep.worst_value == 0.0


class TestBruteForce:
    def test_constant_payoffs(self):
        g = Game(2, 3, np.full(18, 0.4))
        x = random_distribution(np.random.default_rng(0), g)
        assert brute_force_verify_ce(g, x, 0.0).satisfied

    def test_one_action(self):
        g = Game(3, 1, [0.1, 0.2, 0.3])
        assert brute_force_verify_ce(g, JointDistribution.point_mass((0, 0, 0)), 0.0).satisfied

    def test_refuses_large_m(self):
        g = gen_random_game(2, 7, seed=0)
        with pytest.raises(ValueError):
            brute_force_verify_ce(g, JointDistribution.point_mass((0, 0)), 0.0)

    @pytest.mark.parametrize("seed", range(40))
    def test_agrees_with_best_rule(self, seed):
        rng = np.random.default_rng(seed)
        n, m = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        g = gen_random_game(n, m, seed=seed)
        x = random_distribution(rng, g)
        assert verify_ce(g, x, 0.0).worst_value == pytest.approx(brute_force_verify_ce(g, x, 0.0).worst_value, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), eps=st.floats(0, 0.5))
def test_definitional_ordering_and_monotonicity(seed, eps):
    rng = np.random.default_rng(seed)
    g = gen_random_game(2, 3, seed=seed % 1000)
    x = random_distribution(rng, g)
    ce, ss, cce = verify_ce(g, x, eps), verify_ce_single_switch(g, x, eps), verify_cce(g, x, eps)
    assert ce.worst_value >= ss.worst_value - 1e-12
    assert ce.worst_value >= cce.worst_value - 1e-12
    if ce.satisfied:
        assert ss.satisfied and cce.satisfied
        assert verify_ce(g, x, eps + 0.01).satisfied


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), alpha=st.floats(0.05, 1.0), shift=st.floats(0, 1), eps=st.floats(0, 0.3))
def test_affine_invariance(seed, alpha, shift, eps):
    rng = np.random.default_rng(seed)
    g = gen_random_game(2, 3, seed=seed % 1000)
    beta = shift * (1 - alpha)
    h = Game(2, 3, alpha * g.payoffs + beta)
    x = random_distribution(rng, g)
    for check in (verify_cce, verify_ce, verify_ce_single_switch):
        a, b = check(g, x, eps), check(h, x, alpha * eps)
        assert b.worst_value == pytest.approx(alpha * a.worst_value, abs=1e-12)
        if abs(a.worst_value - eps) > 1e-9:
            assert a.satisfied == b.satisfied


def test_exact_case_definitions_coincide():
    rng = np.random.default_rng(5)
    for t in range(60):
        g = gen_random_game(2, 2, seed=t) if t % 2 else gen_rps(3)
        x = random_distribution(rng, g)
        assert verify_ce(g, x, 0.0).satisfied == verify_ce_single_switch(g, x, 0.0).satisfied
