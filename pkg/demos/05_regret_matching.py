"""
Learning a correlated equilibrium by regret matching
====================================================

Players repeatedly switch away from their last action in proportion to the
positive regret they have accumulated. The empirical play approaches the set
of correlated equilibria.
"""

from sparse_eq import regret_matching, verify_ce_single_switch
from sparse_eq.gamegen import gen_rps

game = gen_rps(3)
for rounds in (1_000, 10_000, 100_000):
    play = regret_matching(game, rounds, seed=0)
    rep = verify_ce_single_switch(game, play, 0.05)
    print(f"T={rounds:>7}: largest single-switch gain {rep.worst_value:.4f}")
