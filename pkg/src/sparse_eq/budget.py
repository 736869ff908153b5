import os

DEFAULT_BUDGET = 20_000
BUDGET_ENV = "SPARSE_EQ_BUDGET"


class BudgetExceeded(RuntimeError):
    """Refusal: the requested problem is larger than the configured budget."""


def get_budget(budget=None) -> int:
    """Cap on LP variable counts and enumeration sizes.

    An explicit argument wins, then ``$SPARSE_EQ_BUDGET``, then 20000.
    """
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def require(size: int, budget, what: str) -> None:
    cap = get_budget(budget)
    if size > cap:
        raise BudgetExceeded(f"{what} needs {size} > budget {cap} (set {BUDGET_ENV} to raise it)")
