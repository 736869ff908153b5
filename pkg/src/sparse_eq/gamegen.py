"""Game constructions: counterexamples, random games and the X3C reduction.

Raw utilities that leave [0, 1] (zero-sum games with entries in {-1, 0, 1},
the Figure-1 style 2x2 game) are normalized with
:func:`sparse_eq.game.normalize_payoffs`; the resulting scale is written
into the game label as ``scale=...`` so raw gains can be converted back.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .budget import BudgetExceeded, require
from .game import Game, JointDistribution, normalize_payoffs


def _from_raw(raw: np.ndarray, label: str) -> Game:
    u, scale = normalize_payoffs(raw)
    n, m = raw.shape[0], raw.shape[1]
    return Game(n, m, u, label=f"{label} scale={scale:g}")


def game_scale(game: Game) -> float:
    """Normalization scale recorded in the label (1 when absent)."""
    for tok in game.label.split():
        if tok.startswith("scale="):
            return float(tok[len("scale=") :])
    return 1.0


def _zero_sum(U: np.ndarray) -> np.ndarray:
    return np.stack([U, -U])


def gen_figure1(v: float) -> Game:
    """2x2 zero-sum game with cells (v,-v), (0,0) / (0,0), (1,-1).

    Its unique CE is the product of ``(1/(v+1), v/(v+1))`` for both players.
    """
    if v <= 0:
        raise ValueError("v must be positive")
    return _from_raw(_zero_sum(np.array([[v, 0.0], [0.0, 1.0]])), f"figure1(v={v:g})")


MAX_CHAIN_PAIRS = 6


def gen_scaled_pennies_chain(pairs: int) -> Game:
    """``2 * pairs`` players; pair ``i`` (1-based) plays :func:`gen_figure1` with ``v = 2^i - 1``.

    Players are ordered R_1, C_1, R_2, C_2, ...; a pair's payoffs do not
    depend on the other pairs.
    """
    if pairs < 1:
        raise ValueError("need at least one pair")
    if pairs > MAX_CHAIN_PAIRS:
        raise BudgetExceeded(f"chain with {pairs} pairs exceeds the dense limit of {MAX_CHAIN_PAIRS}")
    n = 2 * pairs
    raw = np.zeros((n,) + (2,) * n)
    for p in range(pairs):
        v = 2.0 ** (p + 1) - 1
        U = np.array([[v, 0.0], [0.0, 1.0]])
        r, c = 2 * p, 2 * p + 1
        shape = [1] * n
        shape[r], shape[c] = 2, 2
        block = U.reshape(shape)
        raw[r] = np.broadcast_to(block, (2,) * n)
        raw[c] = -raw[r]
    return _from_raw(raw, f"chain(pairs={pairs})")


def figure1_ce_table(v: float) -> np.ndarray:
    """Cell masses of the unique CE of :func:`gen_figure1`."""
    p = np.array([1.0, v]) / (v + 1)
    return np.outer(p, p)


def gen_matching_game(m: int) -> Game:
    """Player 1 scores 1 on a match, player 2 pays it."""
    if m < 2:
        raise ValueError("matching game needs m >= 2")
    return _from_raw(_zero_sum(np.eye(m)), f"matching(m={m})")


def gen_rps(m: int) -> Game:
    """Cyclic rock-paper-scissors: action ``j`` beats the ``(m-1)/2`` actions before it."""
    if m < 3 or m % 2 == 0:
        raise ValueError("rps needs odd m >= 3")
    diff = (np.arange(m)[:, None] - np.arange(m)[None, :]) % m
    U = np.where(diff == 0, 0.0, np.where(diff <= (m - 1) // 2, 1.0, -1.0))
    return _from_raw(_zero_sum(U), f"rps(m={m})")


def dummy_action(r: int, d: int) -> int:
    """Action index of real action ``r`` in {+1, -1} paired with dummy ``d`` (0-based)."""
    return 2 * d + (0 if r == 1 else 1)


def dummy_parts(action):
    """Inverse of :func:`dummy_action`; works elementwise on arrays."""
    action = np.asarray(action)
    return np.where(action % 2 == 0, 1, -1), action // 2


def gen_dummy_pennies(m: int) -> tuple[Game, JointDistribution]:
    """Matching pennies where each action also carries a payoff-irrelevant dummy in ``[0, m)``.

    Returns the game and the correlated equilibrium that draws one dummy
    uniformly for both players and then independent fair coins.
    """
    if m < 1:
        raise ValueError("m must be positive")
    size = 2 * m
    r, _ = dummy_parts(np.arange(size))
    U = np.outer(r, r).astype(float)
    game = _from_raw(_zero_sum(U), f"dummy-pennies(m={m})")
    prof = [
        (dummy_action(r1, d), dummy_action(r2, d))
        for d in range(m)
        for r1 in (1, -1)
        for r2 in (1, -1)
    ]
    return game, JointDistribution(prof, np.full(len(prof), 1.0 / len(prof)))


def gen_random_game(n: int, m: int, seed: int, budget=None) -> Game:
    require(n * m**n, budget, "random game payoffs")
    rng = np.random.default_rng(seed)
    return Game(n, m, rng.random((n,) + (m,) * n), label=f"random(n={n},m={m},seed={seed})")


def gen_random_zero_sum(m: int, seed: int) -> Game:
    """Two-player game with ``u_1`` uniform on [0, 1] and ``u_2 = 1 - u_1``."""
    rng = np.random.default_rng(seed)
    U = rng.random((m, m))
    return Game(2, m, np.stack([U, 1.0 - U]), label=f"random-zero-sum(m={m},seed={seed})")


@dataclass(frozen=True)
class X3CInstance:
    """Exact cover by 3-sets; elements are 1-based like ``{1, ..., |J|}``."""

    universe_size: int
    sets: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        sets = tuple(tuple(sorted(int(e) for e in s)) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        J = self.universe_size
        if J < 3 or J % 3:
            raise ValueError("universe size must be a positive multiple of 3")
        if not sets:
            raise ValueError("need at least one set")
        for s in sets:
            if len(s) != 3 or len(set(s)) != 3 or s[0] < 1 or s[-1] > J:
                raise ValueError(f"{s} is not a 3-subset of 1..{J}")
        covered = set().union(*map(set, sets))
        if covered != set(range(1, J + 1)):
            raise ValueError(f"elements {sorted(set(range(1, J + 1)) - covered)} are in no set")

    @classmethod
    def from_dict(cls, data) -> "X3CInstance":
        return cls(data["universe"], tuple(tuple(s) for s in data["sets"]))

    def to_dict(self) -> dict:
        return {"universe": self.universe_size, "sets": [list(s) for s in self.sets]}


def has_exact_cover(inst: X3CInstance) -> bool:
    """Brute force over all subcollections of size ``|J| / 3``."""
    need = inst.universe_size // 3
    full = set(range(1, inst.universe_size + 1))
    for combo in itertools.combinations(inst.sets, need):
        if set().union(*map(set, combo)) == full:
            return True
    return False


def x3c_reduce(inst: X3CInstance) -> Game:
    """Cover game: player 1 picks a set, player 2 an element.

    Player 1 gets +1 when the set covers the element and -1 otherwise
    (normalized). When there are fewer sets than elements (or vice versa) the
    short side is padded with copies of its first action, which leaves the
    supports of sparsest optimal strategies over the original actions intact.
    """
    k, J = len(inst.sets), inst.universe_size
    U = np.full((k, J), -1.0)
    for i, s in enumerate(inst.sets):
        for e in s:
            U[i, e - 1] = 1.0
    m = max(k, J)
    if k < m:
        U = np.vstack([U, np.repeat(U[:1], m - k, axis=0)])
    if J < m:
        U = np.hstack([U, np.repeat(U[:, :1], m - J, axis=1)])
    return _from_raw(_zero_sum(U), f"x3c(J={J},sets={k})")


def _subset_sums(values: Sequence[Fraction]) -> set[Fraction]:
    sums = {Fraction(0)}
    for v in values:
        sums |= {s + v for s in sums}
    return sums


def min_partial_sum_generators(targets: Iterable, max_targets: int = 5, budget=None) -> int:
    """Fewest positive numbers whose subset sums include every target.

    Candidates are the targets together with their positive pairwise
    differences and sums (bounded by the largest target), in exact rational
    arithmetic; multisets are tried by increasing size. The targets
    themselves always work, so the answer is at most ``len(targets)``.
    """
    ts = sorted({Fraction(t).limit_denominator(10**12) for t in targets})
    if not ts or ts[0] <= 0:
        raise ValueError("targets must be positive")
    if len(ts) > max_targets:
        raise BudgetExceeded(f"{len(ts)} targets exceeds the search limit of {max_targets}")
    top = ts[-1]
    pool = set(ts)
    for a, b in itertools.combinations(ts, 2):
        pool.add(abs(a - b))
        if a + b <= top:
            pool.add(a + b)
    pool = sorted(p for p in pool if p > 0)
    need = set(ts)
    work = sum(comb(len(pool) + k - 1, k) for k in range(1, len(ts)))
    require(work, budget, "partial-sum candidate search")
    for k in range(1, len(ts)):
        for combo in itertools.combinations_with_replacement(pool, k):
            if sum(combo) < top:
                continue
            if need <= _subset_sums(combo):
                return k
    return len(ts)
