"""Approximate-equilibrium checks with violating witnesses."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .game import (
    Distribution,
    Game,
    KUniformMultiset,
    SwitchingRule,
    conditional_gain_matrix,
    expected_regret,
)

REPORT_TOL = 1e-12
BRUTE_FORCE_MAX_ACTIONS = 6

CCE = "CCE"
CE_RULE = "CE_rule"
CE_SINGLE_SWITCH = "CE_single_switch"


@dataclass(frozen=True)
class VerifyReport:
    satisfied: bool
    worst_value: float
    witness: Optional[dict]
    definition_used: str
    epsilon: float

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "worst_value": self.worst_value,
            "witness": self.witness,
            "definition_used": self.definition_used,
            "epsilon": self.epsilon,
        }


def _report(worst: float, witness: Optional[dict], tag: str, eps: float) -> VerifyReport:
    return VerifyReport(bool(worst <= eps + REPORT_TOL), float(worst), witness, tag, float(eps))


def _check(game: Game, x: Distribution) -> None:
    prof = x.samples if isinstance(x, KUniformMultiset) else x.profiles
    if prof.shape[1] != game.n or prof.min() < 0 or prof.max() >= game.m:
        raise ValueError("distribution is not over this game's profiles")


def verify_cce(game: Game, x: Distribution, eps: float) -> VerifyReport:
    """Check ``E_x[u_i(j, a_-i) - u_i(a)] <= eps`` for every player and action."""
    _check(game, x)
    worst, witness = -np.inf, None
    for i in range(game.n):
        regrets = conditional_gain_matrix(game, i, x).sum(axis=0)
        j = int(np.argmax(regrets))
        if regrets[j] > worst:
            worst, witness = float(regrets[j]), {"player": i, "action": j}
    return _report(worst, witness, CCE, eps)


def best_switching_rule(game: Game, x: Distribution, i: int) -> SwitchingRule:
    """Regret-maximizing switching rule of player ``i`` against ``x``.

    Each recommended action is sent to the alternative with the largest
    conditional gain (smallest index on ties). Actions that ``x`` never
    recommends map to themselves.
    """
    G = conditional_gain_matrix(game, i, x)
    recommended = np.zeros(game.m, dtype=bool)
    _check(game, x)
    prof = x.samples if isinstance(x, KUniformMultiset) else x.profiles
    recommended[np.unique(prof[:, i])] = True
    mapping = np.where(recommended, np.argmax(G, axis=1), np.arange(game.m))
    return SwitchingRule(i, tuple(int(v) for v in mapping))


def verify_ce(game: Game, x: Distribution, eps: float) -> VerifyReport:
    """Check every switching rule at once via each player's best rule."""
    _check(game, x)
    worst, witness = -np.inf, None
    for i in range(game.n):
        G = conditional_gain_matrix(game, i, x)
        rule = best_switching_rule(game, x, i)
        value = float(G[np.arange(game.m), rule.mapping].sum())
        if value > worst:
            worst, witness = value, {"player": i, "rule": list(rule.mapping)}
    return _report(worst, witness, CE_RULE, eps)


def verify_ce_single_switch(game: Game, x: Distribution, eps: float) -> VerifyReport:
    """Check each (player, recommended action, replacement) triple separately.

    With ``m == 1`` there are no triples and the worst value is 0.
    """
    _check(game, x)
    worst, witness = 0.0 if game.m == 1 else -np.inf, None
    off_diag = ~np.eye(game.m, dtype=bool)
    for i in range(game.n):
        if game.m == 1:
            break
        G = np.where(off_diag, conditional_gain_matrix(game, i, x), -np.inf)
        k, j = np.unravel_index(int(np.argmax(G)), G.shape)
        if G[k, j] > worst:
            worst = float(G[k, j])
            witness = {"player": i, "recommended": int(k), "action": int(j)}
    return _report(worst, witness, CE_SINGLE_SWITCH, eps)


def brute_force_verify_ce(
    game: Game, x: Distribution, eps: float, max_actions: int = BRUTE_FORCE_MAX_ACTIONS
) -> VerifyReport:
    """Exhaustive check over all ``m^m`` switching rules of every player.

    Test oracle for :func:`verify_ce`; refuses when ``m > max_actions``.
    """
    if game.m > max_actions:
        raise ValueError(f"brute force over {game.m}^{game.m} rules exceeds the cap (m <= {max_actions})")
    _check(game, x)
    worst, witness = -np.inf, None
    for i in range(game.n):
        for mapping in itertools.product(range(game.m), repeat=game.m):
            value = expected_regret(game, i, SwitchingRule(i, mapping), x)
            if value > worst:
                worst, witness = value, {"player": i, "rule": list(mapping)}
    return _report(worst, witness, CE_RULE, eps)
