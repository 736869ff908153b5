import numpy as np
import pytest

from sparse_eq.game import Game
from sparse_eq.gamegen import gen_figure1, gen_matching_game, gen_rps


@pytest.fixture
def pennies():
    return gen_figure1(1.0)


@pytest.fixture
def matching2():
    return gen_matching_game(2)


@pytest.fixture
def rps3():
    return gen_rps(3)


@pytest.fixture
def coordination():
    """Two pure Nash equilibria on the diagonal."""
    U = np.array([[1.0, 0.0], [0.0, 0.5]])
    return Game(2, 2, np.stack([U, U]), label="coordination")


def random_distribution(rng, game, size=None):
    from sparse_eq.game import JointDistribution

    N = game.num_profiles
    size = size or int(rng.integers(1, N + 1))
    idx = rng.choice(N, size=size, replace=False)
    w = rng.random(size) + 1e-3
    dense = np.zeros(N)
    dense[idx] = w / w.sum()
    return JointDistribution.from_dense(game, dense)
