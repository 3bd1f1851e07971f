"""Size limits for exhaustive searches and materialized constructions.

The active budget is context-local so that concurrent callers can run with
different limits. Use ``budget_scope`` to install one temporarily.
"""

import logging
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator

from pydantic import BaseModel, field_validator

from .errors import BudgetExceeded

logger = logging.getLogger(__name__)


class Budget(BaseModel):
    """Bounds on search inputs and on the size of built groupoids."""

    max_objects: int = 12
    max_morphisms: int = 64
    max_candidates: int = 200_000
    max_cells: int = 60_000

    @field_validator('max_objects', 'max_morphisms', 'max_candidates', 'max_cells')
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError('Budget bounds must be positive')
        return v

    def scaled(self, factor: float) -> "Budget":
        """Return a copy with every bound multiplied by ``factor``."""
        return Budget(
            max_objects=max(1, int(self.max_objects * factor)),
            max_morphisms=max(1, int(self.max_morphisms * factor)),
            max_candidates=max(1, int(self.max_candidates * factor)),
            max_cells=max(1, int(self.max_cells * factor)),
        )


_active: ContextVar[Budget] = ContextVar("active_budget", default=Budget())


def current_budget() -> Budget:
    return _active.get()


@contextmanager
def budget_scope(budget: Budget) -> Iterator[Budget]:
    token = _active.set(budget)
    try:
        yield budget
    finally:
        _active.reset(token)


def guard_cells(what: str, size: int) -> None:
    """Abort a construction whose object+morphism count is over budget."""
    limit = current_budget().max_cells
    if size > limit:
        logger.warning("Budget exhausted while building %s (%d cells)", what, size)
        raise BudgetExceeded(what, limit, size)


def guard_search_input(what: str, n_objects: int, n_morphisms: int) -> None:
    """Refuse exhaustive searches over groupoids above the object/morphism bounds."""
    budget = current_budget()
    if n_objects > budget.max_objects:
        raise BudgetExceeded(f"{what} objects", budget.max_objects, n_objects)
    if n_morphisms > budget.max_morphisms:
        raise BudgetExceeded(f"{what} morphisms", budget.max_morphisms, n_morphisms)


def guard_candidates(what: str, count: int) -> None:
    limit = current_budget().max_candidates
    if count > limit:
        logger.warning("Budget exhausted enumerating %s (%d candidates)", what, count)
        raise BudgetExceeded(what, limit, count)
