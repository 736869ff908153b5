import numpy as np
import pytest
from scipy.optimize import linprog

from sparse_eq.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, solve_lp


def test_textbook_max():
    # max 3x + 2y s.t. 2x + y <= 10, x + y <= 8, x <= 4
    res = solve_lp(LinearProgram([-3, -2], [[2, 1], [1, 1], [1, 0]], [10, 8, 4]))
    assert res.status == OPTIMAL
    np.testing.assert_allclose(res.x, [2, 6])


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule terminates
    c = [-0.75, 150, -1 / 50, 6]
    A = [[0.25, -60, -1 / 25, 9], [0.5, -90, -1 / 50, 3], [0, 0, 1, 0]]
    res = solve_lp(LinearProgram(c, A, [0, 0, 1]))
    assert res.status == OPTIMAL
    assert res.fun == pytest.approx(-1 / 20)


def test_infeasible_and_unbounded():
    assert solve_lp(LinearProgram([1, 1], A_eq=[[1, 1]], b_eq=[-1])).status == INFEASIBLE
    assert solve_lp(LinearProgram([-1, 0], [[0, 1]], [1])).status == UNBOUNDED


def test_redundant_equalities():
    res = solve_lp(LinearProgram([1, 2], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2]))
    assert res.status == OPTIMAL
    np.testing.assert_allclose(res.x, [1, 0])


def test_row_length_mismatch():
    with pytest.raises(ValueError):
        LinearProgram([1, 2], [[1, 2, 3]], [1])


@pytest.mark.parametrize("seed", range(60))
def test_agrees_with_highs(seed):
    rng = np.random.default_rng(seed)
    nv, nu, ne = rng.integers(2, 9), rng.integers(0, 7), rng.integers(0, 3)
    c = rng.normal(size=nv)
    Au, bu = rng.normal(size=(nu, nv)), rng.normal(size=nu) + 1
    Ae, be = rng.normal(size=(ne, nv)), rng.normal(size=ne)
    ref = linprog(c, Au if nu else None, bu if nu else None, Ae if ne else None, be if ne else None,
                  bounds=(0, None), method="highs")
    res = solve_lp(LinearProgram(c, Au, bu, Ae, be))
    assert res.status == {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[ref.status]
    if res.success:
        assert res.fun == pytest.approx(ref.fun, abs=1e-7)
        # basic solution: at most one nonzero per constraint row
        assert np.count_nonzero(res.x > 1e-12) <= nu + ne
