"""Small-support correlated and coarse correlated equilibria of normal-form games."""

from .budget import BudgetExceeded
from .game import (
    Game,
    JointDistribution,
    KUniformMultiset,
    MixedStrategy,
    SwitchingRule,
    expected_regret,
    payoff,
    regret_action,
    regret_rule,
)
from .solve import (
    EquilibriumSolution,
    ce_conditional_correspondence_check,
    ce_polytope_is_singleton,
    find_vertex_ce,
    maxmin_strategy,
    regret_matching,
    solve_cce_lp,
    solve_ce_lp,
    sparsest_ce_bruteforce,
    sparsest_ne_bruteforce,
)
from .sparsify import (
    SparsifyOutcome,
    hoeffding_failure_bound,
    k_bound_ce_alg,
    k_bound_ce_exist,
    k_bound_cce_alg,
    k_bound_cce_exist,
    sample_k_uniform,
    sparsify_cce,
    sparsify_ce,
    sparsify_ce_from_small_support,
)
from .verify import (
    VerifyReport,
    best_switching_rule,
    brute_force_verify_ce,
    verify_cce,
    verify_ce,
    verify_ce_single_switch,
)

__version__ = "0.1.0"
