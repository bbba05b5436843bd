"""Elementary-product budget guard for the O(N^k) sums."""

import os

from .errors import BudgetError

DEFAULT_BUDGET = 100_000_000


def resolve_budget(budget=None) -> int:
    """Explicit argument wins, then ERGOLAB_BUDGET, then the default cap."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("ERGOLAB_BUDGET", "").strip()
    return int(env) if env else DEFAULT_BUDGET


def charge(cost: int, budget, what: str) -> None:
    cap = resolve_budget(budget)
    if cost > cap:
        raise BudgetError(f"{what} needs ~{cost} elementary products, budget is {cap}")
