"""
Small-support coarse correlated equilibria by sampling
======================================================

Take an exact CCE of a 10-player game, draw k profiles from it and keep the
uniform distribution over the draws. Logarithmically many samples suffice.
"""

from sparse_eq import solve_cce_lp, sparsify_cce, k_bound_cce_alg, hoeffding_failure_bound
from sparse_eq.gamegen import gen_random_game

game = gen_random_game(10, 2, seed=0)
base = solve_cce_lp(game).distribution
print(f"{game.num_profiles} profiles, exact CCE support {base.support_size}")

for eps in (0.5, 0.3, 0.2):
    k = k_bound_cce_alg(game.n, game.m, eps)
    out = sparsify_cce(game, base, eps, seed=1)
    # per-deviation failure probability and the union bound over n*m deviations
    per = hoeffding_failure_bound(k, eps)
    print(f"eps={eps}: k={k}, attempts={out.attempts}, support={out.support_size}, "
          f"worst gain={out.worst_value:.3f}, union bound={game.n * game.m * per:.3f}")
