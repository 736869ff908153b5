"""Dense two-phase tableau simplex with Bland's rule.

Solves ``min c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x == b_eq``
and ``x >= 0``. Returned solutions are basic (vertices), which the
equilibrium code relies on for support-size bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPError(RuntimeError):
    """Numerical failure: the returned point does not satisfy its own constraints."""


@dataclass
class LinearProgram:
    objective: np.ndarray
    A_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    A_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).ravel()
        nv = self.objective.size
        for name in ("A_ub", "A_eq"):
            A = getattr(self, name)
            A = np.zeros((0, nv)) if A is None else np.atleast_2d(np.asarray(A, dtype=float))
            if A.shape[1] != nv:
                raise ValueError(f"{name} has {A.shape[1]} columns, expected {nv}")
            setattr(self, name, A)
        self.b_ub = np.zeros(0) if self.b_ub is None else np.asarray(self.b_ub, dtype=float).ravel()
        self.b_eq = np.zeros(0) if self.b_eq is None else np.asarray(self.b_eq, dtype=float).ravel()
        if self.b_ub.size != self.A_ub.shape[0] or self.b_eq.size != self.A_eq.shape[0]:
            raise ValueError("right-hand side length does not match constraint rows")

    @property
    def num_vars(self) -> int:
        return self.objective.size

    def residual(self, x: np.ndarray) -> float:
        """Largest constraint violation at ``x`` (0 when feasible)."""
        r = [0.0, float(max(0.0, -x.min(initial=0.0)))]
        if self.b_ub.size:
            r.append(float(np.max(self.A_ub @ x - self.b_ub, initial=0.0)))
        if self.b_eq.size:
            r.append(float(np.max(np.abs(self.A_eq @ x - self.b_eq))))
        return max(r)


@dataclass
class LPResult:
    status: str
    x: Optional[np.ndarray] = None
    fun: Optional[float] = None
    basis: list = field(default_factory=list)
    iterations: int = 0

    @property
    def success(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run(T: np.ndarray, basis: list, allowed: np.ndarray, max_iter: int) -> tuple[str, int]:
    """Minimize the objective held in the last row of ``T`` (as reduced costs)."""
    m = T.shape[0] - 1
    for it in range(max_iter):
        cost = T[-1, :-1]
        cand = np.flatnonzero((cost < -PIVOT_TOL) & allowed)
        if cand.size == 0:
            return OPTIMAL, it
        c = int(cand[0])
        col = T[:m, c]
        pos = col > PIVOT_TOL
        if not pos.any():
            return UNBOUNDED, it
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + PIVOT_TOL * max(1.0, abs(best)))
        # Bland: leave with the smallest basic variable index among ties
        r = int(ties[np.argmin([basis[t] for t in ties])])
        _pivot(T, r, c)
        basis[r] = c
    raise LPError(f"simplex did not terminate within {max_iter} iterations")


def solve_lp(lp: LinearProgram, max_iter: int = 100_000) -> LPResult:
    nv = lp.num_vars
    n_ub, n_eq = lp.A_ub.shape[0], lp.A_eq.shape[0]
    rows = n_ub + n_eq
    # columns: originals | slacks | artificials | rhs
    A = np.zeros((rows, nv + n_ub))
    A[:n_ub, :nv] = lp.A_ub
    A[:n_ub, nv:] = np.eye(n_ub)
    A[n_ub:, :nv] = lp.A_eq
    b = np.concatenate([lp.b_ub, lp.b_eq])
    flip = b < 0
    A[flip] *= -1
    b = np.where(flip, -b, b)

    width = nv + n_ub
    T = np.zeros((rows + 1, width + rows + 1))
    T[:rows, :width] = A
    T[:rows, width : width + rows] = np.eye(rows)
    T[:rows, -1] = b
    basis = list(range(width, width + rows))
    T[-1, :width] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()

    allowed = np.ones(width + rows, dtype=bool)
    status, it1 = _run(T, basis, allowed, max_iter)
    if status != OPTIMAL:
        raise LPError("phase one reported unbounded")
    if -T[-1, -1] > FEAS_TOL:
        return LPResult(INFEASIBLE, iterations=it1)

    # drive remaining (zero-level) artificials out, dropping redundant rows
    keep = []
    for r in range(rows):
        if basis[r] >= width:
            nz = np.flatnonzero(np.abs(T[r, :width]) > PIVOT_TOL)
            if nz.size == 0:
                continue
            _pivot(T, r, int(nz[0]))
            basis[r] = int(nz[0])
        keep.append(r)
    T = np.vstack([T[keep], T[-1:]])
    basis = [basis[r] for r in keep]
    T = np.delete(T, np.s_[width : width + rows], axis=1)

    cost = np.concatenate([lp.objective, np.zeros(n_ub)])
    T[-1, :width] = cost
    T[-1, -1] = 0.0
    for r, bv in enumerate(basis):
        if T[-1, bv] != 0.0:
            T[-1] -= T[-1, bv] * T[r]
    status, it2 = _run(T, basis, np.ones(width, dtype=bool), max_iter)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=it1 + it2)

    z = np.zeros(width)
    z[basis] = T[:-1, -1]
    x = np.clip(z[:nv], 0.0, None)
    res = lp.residual(x)
    if res > FEAS_TOL:
        raise LPError(f"solution residual {res:.3g} exceeds {FEAS_TOL}")
    return LPResult(OPTIMAL, x, float(lp.objective @ x), [b for b in basis if b < nv], it1 + it2)
