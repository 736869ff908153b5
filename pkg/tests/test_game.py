import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparse_eq.game import (
    Game,
    JointDistribution,
    KUniformMultiset,
    MixedStrategy,
    SwitchingRule,
    expected_regret,
    normalize_payoffs,
    payoff,
    regret_action,
    regret_rule,
)
from sparse_eq.gamegen import gen_random_game

from .conftest import random_distribution


def brute_expected_regret(game, i, f, x):
    """Direct sum over the support using the scalar payoff accessor."""
    total = 0.0
    for prof, p in x.as_dict().items():
        dev = list(prof)
        dev[i] = f(prof[i])
        total += p * (payoff(game, i, dev) - payoff(game, i, prof))
    return total


class TestGame:
    def test_rejects_out_of_range_utilities(self):
        with pytest.raises(ValueError):
            Game(1, 2, [0.5, 1.5])

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            Game(2, 2, np.zeros(7))

    def test_rejects_empty_dimensions(self):
        with pytest.raises(ValueError):
            Game(0, 2, [])

    def test_flat_layout_is_player_major_mixed_radix(self):
        flat = np.linspace(0, 1, 2 * 3 * 3)
        g = Game(2, 3, flat)
        # player 1, profile (2, 0) -> 9 + 2*3 + 0
        assert payoff(g, 1, (2, 0)) == flat[9 + 6]
        assert g.profile_index((2, 1)) == 7
        assert g.profile_at(7) == (2, 1)

    def test_json_round_trip(self):
        g = gen_random_game(3, 2, seed=4)
        back = Game.from_dict(json.loads(json.dumps(g.to_dict())))
        assert back.label == g.label
        np.testing.assert_array_equal(back.payoffs, g.payoffs)

    def test_payoffs_are_read_only(self, pennies):
        with pytest.raises(ValueError):
            pennies.payoffs[0, 0, 0] = 0.3


class TestPayoffAndRegret:
    def test_matching_payoff(self, matching2):
        assert payoff(matching2, 0, (0, 0)) == 1.0

    def test_payoff_is_deterministic(self, rps3):
        assert payoff(rps3, 1, (2, 0)) == payoff(rps3, 1, (2, 0))

    def test_figure1_corner(self, pennies):
        assert payoff(pennies, 0, (1, 1)) == 1.0

    def test_bad_indices(self, pennies):
        with pytest.raises(ValueError):
            payoff(pennies, 2, (0, 0))
        with pytest.raises(ValueError):
            payoff(pennies, 0, (0, 2))
        with pytest.raises(ValueError):
            regret_action(pennies, 0, 5, (0, 0))

    def test_matching_regret_action(self, matching2):
        # u1(1,0) - u1(0,0) = 0 - 1
        assert regret_action(matching2, 0, 1, (0, 0)) == -1.0

    def test_figure1_column_regret(self, pennies):
        # raw u2(1,0) - u2(1,1) = 0 - (-1); normalized scale is 1
        assert regret_action(pennies, 1, 0, (1, 1)) == 1.0

    def test_matching_swap_rule(self, matching2):
        f = SwitchingRule(1, (1, 0))
        assert regret_rule(matching2, 1, f, (0, 0)) == 1.0

    def test_rule_player_mismatch(self, matching2):
        with pytest.raises(ValueError):
            regret_rule(matching2, 0, SwitchingRule(1, (1, 0)), (0, 0))

    @pytest.mark.parametrize("n,m", [(1, 3), (2, 2), (2, 3), (3, 2), (3, 3)])
    def test_constant_rule_matches_action_regret_exhaustively(self, n, m):
        g = gen_random_game(n, m, seed=n * 10 + m)
        for i in range(n):
            for j in range(m):
                f = SwitchingRule.constant(i, m, j)
                for a in itertools.product(range(m), repeat=n):
                    assert regret_rule(g, i, f, a) == regret_action(g, i, j, a)
                    assert -1.0 <= regret_action(g, i, j, a) <= 1.0

    @pytest.mark.parametrize("n,m", [(2, 3), (3, 2)])
    def test_own_action_has_zero_regret(self, n, m):
        g = gen_random_game(n, m, seed=1)
        ident = [SwitchingRule.identity(i, m) for i in range(n)]
        for a in itertools.product(range(m), repeat=n):
            for i in range(n):
                assert regret_action(g, i, a[i], a) == 0.0
                assert regret_rule(g, i, ident[i], a) == 0.0


class TestExpectedRegret:
    def test_identity_rule_is_zero(self, rps3):
        x = random_distribution(np.random.default_rng(0), rps3)
        assert expected_regret(rps3, 0, SwitchingRule.identity(0, 3), x) == 0.0

    def test_point_mass(self, rps3):
        x = JointDistribution.point_mass((1, 2))
        assert expected_regret(rps3, 1, 0, x) == regret_action(rps3, 1, 0, (1, 2))

    def test_uniform_pennies(self, pennies):
        x = JointDistribution.product([np.full(2, 0.5), np.full(2, 0.5)])
        f = SwitchingRule.constant(0, 2, 0)
        assert expected_regret(pennies, 0, 0, x) == pytest.approx(0.0, abs=1e-15)
        assert brute_expected_regret(pennies, 0, f, x) == pytest.approx(0.0, abs=1e-15)

    def test_multiset_is_sample_mean(self, rps3):
        samples = [(0, 1), (0, 1), (2, 2)]
        ms = KUniformMultiset(samples)
        want = np.mean([regret_action(rps3, 0, 1, a) for a in samples])
        assert expected_regret(rps3, 0, 1, ms) == pytest.approx(want)
        assert expected_regret(rps3, 0, 1, ms.to_distribution()) == pytest.approx(want)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10**6), lam=st.floats(0, 1))
    def test_linear_in_distribution(self, seed, lam):
        rng = np.random.default_rng(seed)
        g = gen_random_game(2, 3, seed=seed % 97)
        x, y = random_distribution(rng, g), random_distribution(rng, g)
        mix = lam * x.to_dense(g) + (1 - lam) * y.to_dense(g)
        z = JointDistribution.from_dense(g, mix)
        f = SwitchingRule(1, tuple(rng.integers(0, 3, size=3)))
        want = lam * expected_regret(g, 1, f, x) + (1 - lam) * expected_regret(g, 1, f, y)
        assert expected_regret(g, 1, f, z) == pytest.approx(want, abs=1e-9)
        assert expected_regret(g, 1, f, z) == pytest.approx(brute_expected_regret(g, 1, f, z), abs=1e-12)


class TestDistributions:
    def test_masses_must_sum_to_one(self):
        with pytest.raises(ValueError):
            JointDistribution([[0, 0], [1, 1]], [0.5, 0.4])

    def test_masses_must_be_positive(self):
        with pytest.raises(ValueError):
            JointDistribution([[0, 0], [1, 1]], [1.0, 0.0])

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            JointDistribution([[0, 0], [0, 0]], [0.5, 0.5])

    def test_multiset_collapses_by_multiplicity(self):
        ms = KUniformMultiset([(0, 1), (1, 1), (0, 1), (0, 1)])
        d = ms.to_distribution().as_dict()
        assert d == {(0, 1): 0.75, (1, 1): 0.25}
        assert len(d) <= ms.k

    def test_json_list_round_trip(self):
        x = JointDistribution([[0, 1], [1, 0]], [0.25, 0.75])
        back = JointDistribution.from_list(json.loads(json.dumps(x.to_list())))
        assert back.as_dict() == x.as_dict()

    def test_product_marginals(self):
        x = JointDistribution.product([np.array([0.25, 0.75]), np.array([1.0, 0.0])])
        assert x.support_size == 2
        np.testing.assert_allclose(x.marginal(0, 2), [0.25, 0.75])

    def test_mixed_strategy_support(self):
        s = MixedStrategy(0, [0.5, 0.0, 0.5])
        assert s.support == (0, 2)
        with pytest.raises(ValueError):
            MixedStrategy(0, [0.5, 0.6])

    def test_switching_rule_range(self):
        with pytest.raises(ValueError):
            SwitchingRule(0, (0, 2))


def test_normalize_payoffs_shifts_per_player_with_common_scale():
    raw = np.stack([np.array([[1.0, 0.0], [0.0, 1.0]]), -np.array([[1.0, 0.0], [0.0, 1.0]])])
    u, scale = normalize_payoffs(raw)
    assert scale == 1.0
    np.testing.assert_array_equal(u[0], raw[0])
    np.testing.assert_array_equal(u[1], raw[1] + 1)
