"""
Sparsest equilibria and exact cover
===================================

An exact-cover instance becomes a zero-sum game in which player 1 picks a
set and player 2 an element. A cover exists exactly when player 1 has an
optimal strategy supported on |J|/3 sets.
"""

from sparse_eq import sparsest_ne_bruteforce, solve_ce_lp, ce_conditional_correspondence_check
from sparse_eq.gamegen import X3CInstance, x3c_reduce, has_exact_cover, gen_random_zero_sum

for sets in (((1, 2, 3), (4, 5, 6), (2, 3, 4)), ((1, 2, 3), (2, 4, 5), (3, 5, 6))):
    inst = X3CInstance(6, sets)
    ne = sparsest_ne_bruteforce(x3c_reduce(inst))
    chosen = [inst.sets[i] for i in ne.strategies[0].support]
    print(f"cover exists: {has_exact_cover(inst)}; sparsest optimal strategy uses {chosen}")

# In zero-sum games every CE is made of optimal strategies, so a sparse CE
# would give a sparse optimal strategy
g = gen_random_zero_sum(4, seed=3)
print("conditionals optimal:", ce_conditional_correspondence_check(g, solve_ce_lp(g).distribution))
