"""Sampling small-support approximate equilibria from exact ones.

Draw ``k`` profiles i.i.d. from an equilibrium, keep the uniform
distribution over the draws, and retry until it verifies. The sample sizes
come from Hoeffding's inequality plus a union bound over the deviations
that have to be controlled:

====================  =============================================  ==================
bound                 k                                              deviations
====================  =============================================  ==================
``cce_exist``         floor(2 (ln m + ln n) / eps^2) + 1             n m
``cce_alg``           floor(2 (ln m + ln n + ln 2) / eps^2) + 1      n m, success >= 1/2
``ce_exist``          floor(264 ln m (ln m + ln n - ln eps + ln 16)  n m^b
                      / eps^4) + 1
``ce_alg``            floor(2 (m ln m + ln n + ln 2) / eps^2) + 1    n m^m, success >= 1/2
====================  =============================================  ==================

with ``b = ceil(32 (ln n + ln m - ln eps + ln 16) / eps^2)`` the per-player
support size of the starting approximate equilibrium.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .game import Game, JointDistribution, KUniformMultiset
from .verify import VerifyReport, verify_cce, verify_ce

DEFAULT_MAX_ATTEMPTS = 64
EXACT_TOL = 1e-7

CCE_EXIST = "CCE_exist"
CCE_ALG = "CCE_alg"
CE_EXIST = "CE_exist"
CE_ALG = "CE_alg"


def _check_eps(eps: float) -> None:
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {eps}")


def _check_nm(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")


def k_bound_cce_exist(n: int, m: int, eps: float) -> int:
    _check_eps(eps)
    _check_nm(n, m)
    return math.floor(2 * (math.log(m) + math.log(n)) / eps**2) + 1


def k_bound_cce_alg(n: int, m: int, eps: float) -> int:
    _check_eps(eps)
    _check_nm(n, m)
    return math.floor(2 * (math.log(m) + math.log(n) + math.log(2)) / eps**2) + 1


def k_bound_ce_exist(n: int, m: int, eps: float) -> tuple[int, int]:
    """Sample size ``k`` and per-player support budget ``b`` for the existence bound.

    Requires ``m >= 2``; at ``m = 1`` the ``ln m`` factor makes the bound 0.
    """
    _check_eps(eps)
    _check_nm(n, m)
    if m < 2:
        raise ValueError("the CE existence bound needs m >= 2")
    inner = math.log(m) + math.log(n) - math.log(eps) + math.log(16)
    k = math.floor(264 * math.log(m) * inner / eps**4) + 1
    b = math.ceil(32 * inner / eps**2)
    return k, b


def k_bound_ce_alg(n: int, m: int, eps: float) -> int:
    _check_eps(eps)
    _check_nm(n, m)
    return math.floor(2 * (m * math.log(m) + math.log(n) + math.log(2)) / eps**2) + 1


@dataclass(frozen=True)
class SampleBound:
    kind: str
    n: int
    m: int
    eps: float
    k: int
    b: Optional[int] = None


def sample_bound(kind: str, n: int, m: int, eps: float) -> SampleBound:
    if kind == CE_EXIST:
        k, b = k_bound_ce_exist(n, m, eps)
        return SampleBound(kind, n, m, eps, k, b)
    fn = {CCE_EXIST: k_bound_cce_exist, CCE_ALG: k_bound_cce_alg, CE_ALG: k_bound_ce_alg}.get(kind)
    if fn is None:
        raise ValueError(f"unknown bound kind {kind!r}")
    return SampleBound(kind, n, m, eps, fn(n, m, eps))


def hoeffding_failure_bound(k: int, eps: float, mean_gap: float = 0.0) -> float:
    """Upper bound on ``P(mean of k regrets >= eps)``.

    Regrets lie in [-1, 1] and have mean at most ``mean_gap`` under the
    sampled distribution, so the bound is ``exp(-k (eps - mean_gap)^2 / 2)``:
    ``exp(-k eps^2 / 2)`` from an exact equilibrium and ``exp(-k eps^2 / 8)``
    from an ``eps/2``-approximate one.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_eps(eps)
    if not 0 <= mean_gap < eps:
        raise ValueError("mean_gap must lie in [0, eps)")
    return math.exp(-k * (eps - mean_gap) ** 2 / 2)


def attempt_seed(seed: int, attempt: int) -> np.random.SeedSequence:
    """Seed material for retry ``attempt`` of a run seeded with ``seed``."""
    return np.random.SeedSequence([int(seed), int(attempt)])


def sample_k_uniform(x: JointDistribution, k: int, seed) -> KUniformMultiset:
    """``k`` i.i.d. draws from ``x`` (in its stored support order)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(seed)
    idx = rng.choice(x.support_size, size=k, p=x.probs)
    return KUniformMultiset(x.profiles[idx])


@dataclass(frozen=True)
class SparsifyOutcome:
    multiset: KUniformMultiset
    attempts: int
    verified: bool
    worst_value: float
    k: int

    @property
    def support_size(self) -> int:
        return self.multiset.to_distribution().support_size

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "attempts": self.attempts,
            "verified": self.verified,
            "worst_value": self.worst_value,
            "support_size": self.support_size,
            "multiset": self.multiset.to_list(),
        }


def _retry(
    game: Game,
    sigma: JointDistribution,
    eps: float,
    k: int,
    seed: int,
    max_attempts: int,
    check: Callable[[Game, KUniformMultiset, float], VerifyReport],
) -> SparsifyOutcome:
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    for t in range(max_attempts):
        ms = sample_k_uniform(sigma, k, attempt_seed(seed, t))
        report = check(game, ms, eps)
        if report.satisfied:
            break
    return SparsifyOutcome(ms, t + 1, report.satisfied, report.worst_value, k)


def sparsify_cce(
    game: Game,
    sigma: JointDistribution,
    eps: float,
    seed: int = 0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    k: Optional[int] = None,
) -> SparsifyOutcome:
    """Resample ``k_bound_cce_alg`` profiles from an exact CCE until the result is an eps-CCE.

    Each attempt succeeds with probability at least 1/2, so two attempts are
    expected. Exhausting ``max_attempts`` returns ``verified=False``.
    """
    _check_eps(eps)
    if not verify_cce(game, sigma, EXACT_TOL).satisfied:
        raise ValueError("sigma is not an exact coarse correlated equilibrium")
    k = k_bound_cce_alg(game.n, game.m, eps) if k is None else k
    return _retry(game, sigma, eps, k, seed, max_attempts, verify_cce)


def sparsify_ce(
    game: Game,
    sigma: JointDistribution,
    eps: float,
    seed: int = 0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    k: Optional[int] = None,
) -> SparsifyOutcome:
    _check_eps(eps)
    if not verify_ce(game, sigma, EXACT_TOL).satisfied:
        raise ValueError("sigma is not an exact correlated equilibrium")
    k = k_bound_ce_alg(game.n, game.m, eps) if k is None else k
    return _retry(game, sigma, eps, k, seed, max_attempts, verify_ce)


def _is_product(game: Game, sigma: JointDistribution) -> bool:
    marginals = [sigma.marginal(i, game.m) for i in range(game.n)]
    rebuilt = JointDistribution.product(marginals)
    return rebuilt.support_size == sigma.support_size and np.allclose(
        rebuilt.to_dense(game), sigma.to_dense(game), atol=1e-9
    )


def sparsify_ce_from_small_support(
    game: Game,
    sigma: JointDistribution,
    eps: float,
    seed: int = 0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    k: Optional[int] = None,
) -> SparsifyOutcome:
    """Sample an eps-CE from a product eps/2-equilibrium with small per-player supports.

    Only switching rules on each player's support matter here, which is what
    lets ``k`` grow with ``b`` rather than ``m``. ``k`` defaults to the
    existence bound; experiments may pass a smaller one. For two-player
    zero-sum games the product of maxmin strategies is a suitable ``sigma``.
    """
    _check_eps(eps)
    if not _is_product(game, sigma):
        raise ValueError("sigma must be a product distribution")
    if not verify_ce(game, sigma, eps / 2 + EXACT_TOL).satisfied:
        raise ValueError("sigma is not an eps/2-correlated equilibrium")
    if game.m >= 2:
        k_exist, b = k_bound_ce_exist(game.n, game.m, eps)
    else:
        k_exist, b = 1, 1
    widest = max(int(np.count_nonzero(sigma.marginal(i, game.m))) for i in range(game.n))
    if widest > b:
        raise ValueError(f"a player's support has {widest} actions, more than b = {b}")
    k = k_exist if k is None else k
    return _retry(game, sigma, eps, k, seed, max_attempts, verify_ce)
