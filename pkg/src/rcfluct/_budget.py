"""Enumeration budgets and the errors shared across modules."""

import os

ENV_VAR = "RC_FLUCT_BUDGET"

#: Default cap on brute-force index enumeration.
ENUMERATION_BUDGET = 10**8
#: Default cap for exact expectation/covariance queries (cost measured as n**(2p)).
ORACLE_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """A brute-force enumeration would exceed its configured tuple budget."""

    def __init__(self, what, cost, budget):
        self.what = what
        self.cost = cost
        self.budget = budget
        super().__init__(
            f"{what}: enumeration cost {cost} exceeds budget {budget} "
            f"(raise it with budget=... or ${ENV_VAR})"
        )


class IntegrityError(ArithmeticError):
    """Two computational paths for the same quantity disagree."""


def resolve_budget(budget=None, default=ENUMERATION_BUDGET):
    """Explicit argument wins, then the environment override, then `default`."""
    if budget is not None:
        return budget
    env = os.environ.get(ENV_VAR)
    if env:
        return int(float(env))
    return default


def check_budget(what, cost, budget=None, default=ENUMERATION_BUDGET):
    limit = resolve_budget(budget, default)
    if cost > limit:
        raise BudgetExceeded(what, cost, limit)
    return limit
