"""Exact and approximate equilibrium computation.

Small games go through a linear program over the whole joint simplex;
two-player zero-sum games additionally get the maxmin LP; larger games can
use regret-matching dynamics. The brute-force sparsest-equilibrium searches
are exponential on purpose and only meant for tiny instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np

from .budget import require
from .game import (
    Game,
    JointDistribution,
    KUniformMultiset,
    MixedStrategy,
)
from .lp import LinearProgram, LPError, solve_lp
from .verify import verify_ce

SUPPORT_TOL = 1e-12
OPTIMAL_TOL = 1e-7
CONDITIONAL_TOL = 1e-6


@dataclass(frozen=True)
class EquilibriumSolution:
    distribution: JointDistribution
    kind: str  # "CE", "CCE" or "NE-product"
    solver: str
    strategies: Optional[tuple[MixedStrategy, ...]] = None

    @property
    def support_size(self) -> int:
        return self.distribution.support_size

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "solver": self.solver,
            "support_size": self.support_size,
            "distribution": self.distribution.to_list(),
        }
        if self.strategies is not None:
            out["strategies"] = [s.probs.tolist() for s in self.strategies]
        return out


def _all_gains(game: Game, i: int) -> np.ndarray:
    """``D[p, j] = u_i(j, a_-i) - u_i(a)`` for every profile ``p`` in flat order."""
    u = np.moveaxis(game.payoffs[i], i, -1)  # (..., a_i)
    dev = u[..., None, :] - u[..., :, None]  # (..., a_i, j)
    dev = np.moveaxis(dev, -2, i)  # a_i back in place, j last
    return dev.reshape(game.num_profiles, game.m)


def ce_constraints(game: Game) -> np.ndarray:
    """The ``n m (m-1)`` rows of ``A x <= 0`` that define correlated equilibria."""
    prof = game.all_profiles()
    rows = []
    for i in range(game.n):
        D = _all_gains(game, i)
        for k in range(game.m):
            mask = prof[:, i] == k
            for j in range(game.m):
                if j != k:
                    rows.append(np.where(mask, D[:, j], 0.0))
    return np.array(rows).reshape(-1, game.num_profiles)


def cce_constraints(game: Game) -> np.ndarray:
    """The ``n m`` rows of ``A x <= 0`` that define coarse correlated equilibria."""
    return np.vstack([_all_gains(game, i).T for i in range(game.n)])


def _solve_polytope(game: Game, A: np.ndarray, c, sense: str, budget, columns=None):
    require(game.num_profiles, budget, "joint-simplex LP")
    N = game.num_profiles if columns is None else len(columns)
    if columns is not None:
        A = A[:, columns]
    if c is None:
        obj = np.zeros(N)
    else:
        obj = np.asarray(c, dtype=float)
        if columns is not None:
            obj = obj[columns]
        if sense == "max":
            obj = -obj
        elif sense != "min":
            raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    lp = LinearProgram(obj, A_ub=A, b_ub=np.zeros(A.shape[0]), A_eq=np.ones((1, N)), b_eq=[1.0])
    return solve_lp(lp)


def _to_solution(game, res, kind, solver) -> EquilibriumSolution:
    if not res.success:
        raise LPError(f"equilibrium LP returned {res.status}; an exact equilibrium always exists")
    x = np.where(res.x > SUPPORT_TOL, res.x, 0.0)
    return EquilibriumSolution(JointDistribution.from_dense(game, x / x.sum()), kind, solver)


def solve_ce_lp(game: Game, c=None, sense: str = "min", budget=None) -> EquilibriumSolution:
    """Exact correlated equilibrium from the joint-simplex LP.

    Parameters
    ----------
    c : array of length ``m^n`` or None
        Linear objective over profile masses (flat order). ``None`` asks for
        any feasible point.
    sense : {"min", "max"}
    budget : int, optional
        Cap on the number of LP variables; ``m^n`` above it raises
        :class:`~sparse_eq.budget.BudgetExceeded`.
    """
    res = _solve_polytope(game, ce_constraints(game), c, sense, budget)
    return _to_solution(game, res, "CE", "simplex")


def solve_cce_lp(game: Game, c=None, sense: str = "min", budget=None) -> EquilibriumSolution:
    res = _solve_polytope(game, cce_constraints(game), c, sense, budget)
    return _to_solution(game, res, "CCE", "simplex")


def find_vertex_ce(game: Game, budget=None) -> EquilibriumSolution:
    """A vertex of the CE polytope; its support is at most ``n m (m-1) + 1``."""
    res = _solve_polytope(game, ce_constraints(game), None, "min", budget)
    sol = _to_solution(game, res, "CE", "simplex-vertex")
    assert sol.support_size <= len(res.basis)
    return sol


def ce_polytope_is_singleton(game: Game, tol: float = OPTIMAL_TOL, budget=None) -> bool:
    A = ce_constraints(game)
    for p in range(game.num_profiles):
        e = np.zeros(game.num_profiles)
        e[p] = 1.0
        lo = _solve_polytope(game, A, e, "min", budget)
        hi = _solve_polytope(game, A, e, "max", budget)
        if hi.fun is None or lo.fun is None:
            raise LPError("coordinate LP failed on a nonempty polytope")
        if -hi.fun - lo.fun > tol:
            return False
    return True


def _require_zero_sum(game: Game) -> float:
    if game.n != 2:
        raise ValueError("maxmin strategies need a two-player game")
    total = game.payoffs[0] + game.payoffs[1]
    if np.ptp(total) > 1e-9:
        raise ValueError("game is not zero-sum (u_1 + u_2 is not constant)")
    return float(total.flat[0])


def _own_matrix(game: Game, i: int) -> np.ndarray:
    """Player ``i``'s payoffs with own actions on rows."""
    return game.payoffs[i] if i == 0 else game.payoffs[i].T


def maxmin_strategy(game: Game, i: int) -> tuple[MixedStrategy, float]:
    """Optimal (maxmin) strategy of player ``i`` and the value it guarantees."""
    _require_zero_sum(game)
    U = _own_matrix(game, i)
    m = game.m
    # variables: sigma_0..sigma_{m-1}, v ; maximize v
    obj = np.zeros(m + 1)
    obj[-1] = -1.0
    A_ub = np.hstack([-U.T, np.ones((m, 1))])
    A_eq = np.concatenate([np.ones(m), [0.0]])[None, :]
    res = solve_lp(LinearProgram(obj, A_ub, np.zeros(m), A_eq, [1.0]))
    if not res.success:
        raise LPError(f"maxmin LP returned {res.status}")
    sigma = res.x[:m] / res.x[:m].sum()
    return MixedStrategy(i, sigma), float(-res.fun)


def _guarantee(U: np.ndarray, sigma: np.ndarray) -> float:
    return float((sigma @ U).min())


def regret_matching(game: Game, rounds: int, seed: int = 0) -> KUniformMultiset:
    """Hart and Mas-Colell's adaptive procedure, recorded as a multiset.

    From its last action ``k`` a player moves to ``j != k`` with probability
    ``max(R[k, j], 0) / (mu * t)``, where ``R[k, j]`` is the cumulative gain
    it would have had from playing ``j`` whenever it played ``k`` and
    ``mu = m`` (utilities lie in [0, 1], so this keeps the stay-probability
    positive). Round one is uniform.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    n, m = game.n, game.m
    rng = np.random.default_rng(seed)
    draws = rng.random((rounds, n))
    mu = float(m)
    regrets = [np.zeros((m, m)) for _ in range(n)]
    history = np.empty((rounds, n), dtype=np.int64)
    profile = [min(int(d * m), m - 1) for d in draws[0]]
    payoffs = [game.payoffs[i] for i in range(n)]
    for t in range(rounds):
        if t > 0:
            for i in range(n):
                k = profile[i]
                p = np.maximum(regrets[i][k], 0.0) / (mu * t)
                p[k] = 0.0
                p[k] = 1.0 - p.sum()
                j = int(np.searchsorted(np.cumsum(p), draws[t, i], side="right"))
                profile[i] = min(j, m - 1)
        history[t] = profile
        for i in range(n):
            idx = list(profile)
            idx[i] = slice(None)
            alt = payoffs[i][tuple(idx)]
            k = profile[i]
            regrets[i][k] += alt - alt[k]
    return KUniformMultiset(history)


def _restricted_feasible(game, A, columns) -> Optional[np.ndarray]:
    res = _solve_polytope(game, A, None, "min", None, columns=list(columns))
    if not res.success:
        return None
    return res.x


def sparsest_ce_bruteforce(
    game: Game, max_support: int, kind: str = "CE", budget=None
) -> Optional[EquilibriumSolution]:
    """Smallest-support exact CE (or CCE) with at most ``max_support`` profiles.

    Supports are tried by size, then lexicographically; the first feasible
    restricted LP wins. Returns None if no support up to ``max_support``
    admits an equilibrium.
    """
    if kind not in ("CE", "CCE"):
        raise ValueError(f"kind must be 'CE' or 'CCE', not {kind!r}")
    N = game.num_profiles
    top = min(max_support, N)
    require(sum(comb(N, s) for s in range(1, top + 1)), budget, "support enumeration")
    A = ce_constraints(game) if kind == "CE" else cce_constraints(game)
    for size in range(1, top + 1):
        for cols in itertools.combinations(range(N), size):
            x = _restricted_feasible(game, A, cols)
            if x is None:
                continue
            dense = np.zeros(N)
            dense[list(cols)] = np.where(x > SUPPORT_TOL, x, 0.0)
            dist = JointDistribution.from_dense(game, dense / dense.sum())
            return EquilibriumSolution(dist, kind, "support-enumeration")
    return None


def _sparsest_optimal(U: np.ndarray, value: float, budget) -> np.ndarray:
    m = U.shape[0]
    require(2**m - 1, budget, "optimal-strategy support enumeration")
    for size in range(1, m + 1):
        for rows in itertools.combinations(range(m), size):
            sub = U[list(rows)]
            lp = LinearProgram(
                np.zeros(size),
                A_ub=-sub.T,
                b_ub=np.full(U.shape[1], -(value - OPTIMAL_TOL)),
                A_eq=np.ones((1, size)),
                b_eq=[1.0],
            )
            res = solve_lp(lp)
            if res.success:
                sigma = np.zeros(m)
                sigma[list(rows)] = np.where(res.x > SUPPORT_TOL, res.x, 0.0)
                return sigma / sigma.sum()
    raise LPError("no optimal strategy found; the maxmin value is inconsistent")


def sparsest_ne_bruteforce(game: Game, budget=None) -> EquilibriumSolution:
    """Nash equilibrium of a zero-sum game with the sparsest strategies.

    Optimal strategies are interchangeable, so each player's sparsest
    optimal strategy is found independently by support enumeration.
    """
    _require_zero_sum(game)
    strategies = []
    for i in range(2):
        _, value = maxmin_strategy(game, i)
        strategies.append(MixedStrategy(i, _sparsest_optimal(_own_matrix(game, i), value, budget)))
    dist = JointDistribution.product([s.probs for s in strategies])
    return EquilibriumSolution(dist, "NE-product", "support-enumeration", tuple(strategies))


def is_optimal_strategy(game: Game, i: int, sigma: Sequence[float], tol: float = CONDITIONAL_TOL) -> bool:
    _, value = maxmin_strategy(game, i)
    return _guarantee(_own_matrix(game, i), np.asarray(sigma, dtype=float)) >= value - tol


def ce_conditional_correspondence_check(game: Game, pi: JointDistribution) -> bool:
    """Whether every conditional of ``pi`` given one player's action is optimal for the other.

    Raises ValueError unless ``pi`` is an exact CE (within 1e-7). The
    shortfall of each conditional is weighted by its mass, so solver noise
    on near-empty cells cannot be amplified by the division.
    """
    _require_zero_sum(game)
    if not verify_ce(game, pi, OPTIMAL_TOL).satisfied:
        raise ValueError("distribution is not an exact correlated equilibrium")
    joint = pi.to_dense(game).reshape(game.m, game.m)
    values = [maxmin_strategy(game, i)[1] for i in range(2)]
    for i in range(2):
        U = _own_matrix(game, i)
        # condition on the opponent's action: columns of joint for player 0, rows for player 1
        cond = joint if i == 0 else joint.T
        for b in range(game.m):
            mass = cond[:, b].sum()
            if mass <= 0:
                continue
            if mass * (values[i] - _guarantee(U, cond[:, b] / mass)) > CONDITIONAL_TOL:
                return False
    return True
