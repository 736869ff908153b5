"""
Why sparse CE need more samples than sparse CCE
===============================================

Matching pennies with m payoff-irrelevant dummy labels. The shipped CE picks
a shared dummy uniformly. With only k = m samples, about a 1/e fraction of
dummies is drawn exactly once, and on those a player can read off the
opponent's coin.
"""

import math

import numpy as np

from sparse_eq import sample_k_uniform, verify_ce, verify_cce
from sparse_eq.gamegen import gen_dummy_pennies, dummy_parts

m = 200
game, ce = gen_dummy_pennies(m)
ms = sample_k_uniform(ce, m, seed=0)

_, d = dummy_parts(ms.samples[:, 0])
once = np.sum(np.bincount(d, minlength=m) == 1) / m
print(f"dummies seen exactly once: {once:.3f} (1/e = {1 / math.e:.3f})")

# The same sample is still a decent CCE but far from a CE
print("CCE gain:", round(verify_cce(game, ms, 1.0).worst_value, 4))
print("CE gain: ", round(verify_ce(game, ms, 1.0).worst_value, 4))
