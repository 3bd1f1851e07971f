"""Exception hierarchy shared by the library, the DSL and the CLI."""

from typing import Iterable, List, Optional


class GroupoidError(ValueError):
    """Base class for every error raised by the library."""

    kind = "error"

    def to_dict(self) -> dict:
        return {"error": self.kind, "reason": str(self)}


class InvalidStructureError(GroupoidError):
    """A groupoid, functor or simplicial law is violated."""

    kind = "invalid_structure"

    def __init__(self, message: str, issues: Optional[Iterable[str]] = None):
        self.issues: List[str] = list(issues or [])
        detail = f": {self.issues[0]}" if self.issues else ""
        super().__init__(f"{message}{detail}")

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload["issues"] = self.issues
        return payload


class PreconditionError(GroupoidError):
    """A documented precondition of an operation does not hold."""

    kind = "precondition"


class BudgetExceeded(GroupoidError):
    """A construction or search outgrew the active budget."""

    kind = "budget_exceeded"

    def __init__(self, what: str, limit: int, size: int):
        self.what = what
        self.limit = limit
        self.size = size
        super().__init__(f"{what}: size {size} exceeds budget {limit}")

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload.update({"what": self.what, "limit": self.limit, "size": self.size})
        return payload


class DSLError(GroupoidError):
    """Lexical, syntax, resolution or table error in a model file."""

    kind = "dsl"

    def __init__(self, message: str, line: int, column: int):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload.update({"line": self.line, "column": self.column})
        return payload
