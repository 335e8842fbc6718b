"""Exception types shared across the package."""
from __future__ import annotations

import enum
from typing import Optional


class ErrorKind(enum.Enum):
    """Runtime failure kinds of the evaluator and the step machines."""

    NULL_STORE_ALLOC = "NullStoreAlloc"
    NULL_STORE_READ = "NullStoreRead"
    DANGLING_LOCATION = "DanglingLocation"
    NOT_A_FUNCTION = "NotAFunction"
    NOT_A_PAIR = "NotAPair"
    NOT_A_SUM = "NotASum"
    NOT_A_NAT = "NotANat"
    NOT_A_BOX = "NotABox"
    NOT_A_FIX = "NotAFix"
    NOT_AN_UNTIL_VALUE = "NotAnUntilValue"
    NOT_AN_INTO = "NotAnInto"
    NOT_A_LOCATION = "NotALocation"
    ADV_WITHOUT_TICK = "AdvWithoutTick"
    OPEN_TERM = "OpenTerm"
    FUEL_EXHAUSTED = "FuelExhausted"
    SHAPE_ERROR = "ShapeError"
    BAD_INPUT = "BadInput"


class EvalError(Exception):
    """Evaluation went wrong: the term got stuck, read a missing location or ran out of fuel."""

    def __init__(self, kind: ErrorKind, message: str, path: tuple[str, ...] = ()):
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind
        self.message = message
        self.path = path


class ShapeError(EvalError):
    """A step produced a value of the wrong shape for the driver."""

    def __init__(self, message: str):
        super().__init__(ErrorKind.SHAPE_ERROR, message)


class TypeErrorKind(enum.Enum):
    UNBOUND_VARIABLE = "UnboundVariable"
    VARIABLE_BLOCKED_BY_TOKEN = "VariableBlockedByToken"
    LAMBDA_UNDER_TICK = "LambdaUnderTick"
    MODALITY_MISMATCH = "ModalityMismatch"
    MISSING_LOCK = "MissingLock"
    MISSING_TICK = "MissingTick"
    DUPLICATE_TOKEN = "DuplicateToken"
    STABILITY_REQUIRED = "StabilityRequired"
    LIMIT_REQUIRED = "LimitRequired"
    TYPE_MISMATCH = "TypeMismatch"
    CANNOT_SYNTHESIZE = "CannotSynthesize"


class TypeCheckError(Exception):
    """A typing rule's premise or side condition failed."""

    def __init__(
        self,
        kind: TypeErrorKind,
        rule: str,
        message: str,
        pos=None,
        expected=None,
        actual=None,
        decl: Optional[str] = None,
    ):
        super().__init__(message)
        self.kind = kind
        self.rule = rule
        self.message = message
        self.pos = pos
        self.expected = expected
        self.actual = actual
        self.decl = decl

    def __str__(self) -> str:
        where = f"{self.pos[0]}:{self.pos[1]}: " if self.pos else ""
        decl = f"in {self.decl}: " if self.decl else ""
        return f"{where}{decl}{self.kind.value} ({self.rule}): {self.message}"

    def to_json(self) -> dict:
        return {
            "decl": self.decl,
            "kind": self.kind.value,
            "expected": None if self.expected is None else str(self.expected),
            "actual": None if self.actual is None else str(self.actual),
            "line": self.pos[0] if self.pos else None,
            "col": self.pos[1] if self.pos else None,
        }


class LratSyntaxError(Exception):
    """Lexing or parsing failed."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class DesugarError(LratSyntaxError):
    """Surface sugar that has no core translation, e.g. a misplaced recursive call."""


class LiteralError(Exception):
    """A value literal could not be printed or parsed."""
