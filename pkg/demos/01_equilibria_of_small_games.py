"""
Exact equilibria of small games
===============================

Solve the correlated equilibrium LP on a few classic games and check the
answers with the verifiers.
"""

import numpy as np

from sparse_eq import solve_ce_lp, verify_ce, find_vertex_ce, ce_polytope_is_singleton
from sparse_eq.gamegen import gen_figure1, gen_rps, figure1_ce_table

# A 2x2 zero-sum game whose unique CE puts mass 1/(v+1)^2 in the top-left cell
game = gen_figure1(3.0)
sol = solve_ce_lp(game)
print(game.label)
print(sol.distribution.to_dense(game).reshape(2, 2).round(4))
print("closed form:\n", figure1_ce_table(3.0))

# The verifier reports the largest gain any player gets from a switching rule
print(verify_ce(game, sol.distribution, 1e-9))

# Rock-paper-scissors has exactly one CE: uniform over all 9 profiles
rps = gen_rps(3)
print("rps singleton:", ce_polytope_is_singleton(rps))

# A vertex of the CE polytope has support at most n m (m - 1) + 1
vertex = find_vertex_ce(rps)
print("vertex support", vertex.support_size, "<=", rps.n * rps.m * (rps.m - 1) + 1)
