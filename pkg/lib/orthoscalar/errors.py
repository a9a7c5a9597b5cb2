"""Error types shared by the orthoscalar library and its command line."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, ClassVar


@dataclass
class OrthoscalarError(RuntimeError):
    detail: str
    context: dict[str, Any] = field(default_factory=dict)

    code: ClassVar[str] = "OrthoscalarError"
    exit_code: ClassVar[int] = 1

    def __post_init__(self) -> None:
        message = f"{self.code}: {self.detail}"
        super().__init__(message)

    def payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "ok": False,
            "error": self.code,
            "message": self.detail,
            "exit_code": self.exit_code,
        }
        payload.update({key: value for key, value in self.context.items() if value not in (None, "", [], {})})
        return payload


class InputError(OrthoscalarError):
    exit_code: ClassVar[int] = 2


class InvalidInput(InputError, ValueError):
    """Malformed user text or arguments: vectors, parameter documents, settings."""

    code: ClassVar[str] = "InvalidInput"


# graph-catalog

class UnknownGraph(InputError):
    code: ClassVar[str] = "UnknownGraph"


class InvalidSize(InputError):
    code: ClassVar[str] = "InvalidSize"


class InvalidQuiver(InputError):
    code: ClassVar[str] = "InvalidQuiver"


# root-lattice

class IndexMismatch(InputError):
    code: ClassVar[str] = "IndexMismatch"


class NoDelta(InputError):
    code: ClassVar[str] = "NoDelta"


class NotPositive(InputError):
    code: ClassVar[str] = "NotPositive"


class InvalidBound(InputError):
    code: ClassVar[str] = "InvalidBound"


class BoundTooLarge(InputError):
    code: ClassVar[str] = "BoundTooLarge"


class NotSingular(InputError):
    code: ClassVar[str] = "NotSingular"


class NotApplicable(InputError):
    code: ClassVar[str] = "NotApplicable"


class NoPathFound(OrthoscalarError):
    code: ClassVar[str] = "NoPathFound"


# hilbert-rep

class InvalidRepresentation(InputError):
    code: ClassVar[str] = "InvalidRepresentation"


class NonPositiveCharacter(InputError):
    code: ClassVar[str] = "NonPositiveCharacter"


class ZeroRepresentation(InputError):
    code: ClassVar[str] = "ZeroRepresentation"


class NotOrthoscalar(OrthoscalarError):
    code: ClassVar[str] = "NotOrthoscalar"


class NumericalFailure(OrthoscalarError):
    code: ClassVar[str] = "NumericalFailure"


# reflection-functors

class CharacterNonpositive(OrthoscalarError):
    code: ClassVar[str] = "CharacterNonpositive"


class FunctorNotApplicable(InputError):
    code: ClassVar[str] = "FunctorNotApplicable"


class NotRealRoot(InputError):
    code: ClassVar[str] = "NotRealRoot"


class PathFailure(OrthoscalarError):
    code: ClassVar[str] = "PathFailure"


# delta-families

class UnknownFamily(InputError):
    code: ClassVar[str] = "UnknownFamily"


class NonPositiveModulus(InputError):
    code: ClassVar[str] = "NonPositiveModulus"


class RecurrenceNegative(InputError):
    code: ClassVar[str] = "RecurrenceNegative"


class DegenerateParameters(InputError):
    code: ClassVar[str] = "DegenerateParameters"


class ConstraintViolated(InputError):
    code: ClassVar[str] = "ConstraintViolated"


class NoSolution(InputError):
    code: ClassVar[str] = "NoSolution"


class CompletionInfeasible(OrthoscalarError):
    code: ClassVar[str] = "CompletionInfeasible"
