from collections.abc import Sequence
from typing import Any

import structlog

logger = structlog.stdlib.get_logger(__name__)

Labels = Sequence[str]


def _fmt(labels: Labels) -> str:
    return "{" + ",".join(labels) + "}"


class MatroidError(Exception):
    """Base class. `exit_code` follows the CLI contract: 2 for invalid input or
    guards, 1 for valid input on which a hypothesis or property fails."""

    exit_code = 2

    def __init__(self, message: str, *sets: Labels) -> None:
        super().__init__(message)
        self.sets = tuple(tuple(s) for s in sets)


# circuit axioms


class EmptyCircuit(MatroidError):
    def __init__(self) -> None:
        super().__init__("the empty set is not a circuit")


class NotAntichain(MatroidError):
    def __init__(self, a: Labels, b: Labels) -> None:
        super().__init__(f"circuit {_fmt(a)} properly contains circuit {_fmt(b)}", a, b)


class EliminationFails(MatroidError):
    def __init__(self, a: Labels, b: Labels, e: str) -> None:
        super().__init__(
            f"no circuit inside ({_fmt(a)} ∪ {_fmt(b)}) - {e}", a, b, (e,)
        )
        self.element = e


class DuplicateCircuit(MatroidError):
    def __init__(self, a: Labels) -> None:
        super().__init__(f"circuit {_fmt(a)} listed twice", a)


# ground sets and parameters


class ElementNotInGround(MatroidError):
    def __init__(self, labels: Labels) -> None:
        super().__init__(f"not in the ground set: {_fmt(labels)}", labels)


class InvalidParameters(MatroidError):
    pass


class InvalidVertex(MatroidError):
    def __init__(self, vertex: Any, vertices: int) -> None:
        super().__init__(f"vertex {vertex!r} is not in range(0, {vertices})")


class FiberOverlap(MatroidError):
    def __init__(self, labels: Labels) -> None:
        super().__init__(f"fibers overlap in {_fmt(labels)}", labels)


class EmptyFiber(MatroidError):
    def __init__(self, label: str) -> None:
        super().__init__(f"element {label} has an empty fiber", (label,))


class GroundMismatch(MatroidError):
    pass


class SizeMismatch(MatroidError):
    pass


class EmptyGround(MatroidError):
    def __init__(self) -> None:
        super().__init__("ground maps between empty ground sets are not supported")


class UnknownName(MatroidError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown matroid name {name!r}")


class SpecTooLarge(MatroidError):
    pass


class DocumentError(MatroidError):
    pass


# hypotheses and verification


class NotConnected(MatroidError):
    exit_code = 1

    def __init__(self) -> None:
        super().__init__("matroid is not connected")


class HasColoops(MatroidError):
    exit_code = 1

    def __init__(self, coloops: Labels) -> None:
        super().__init__(f"matroid has coloops {_fmt(coloops)}", coloops)


class PreconditionViolated(MatroidError):
    exit_code = 1


class NotCR2(PreconditionViolated):
    def __init__(self) -> None:
        super().__init__("matroid is not CR2 (connected of co-rank 2)")


class NoSuchCircuit(MatroidError):
    exit_code = 1


class InternalTheoremViolation(MatroidError):
    """A post-check failed: an implementation bug or a falsifying instance."""

    exit_code = 1

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class NoCoveringCircuit(InternalTheoremViolation):
    pass


class NoSuchB(InternalTheoremViolation):
    pass


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, MatroidError):
        return exc.exit_code
    if isinstance(exc, OSError):
        return 2
    logger.exception("Unexpected error", exc_info=exc)
    return 2


def describe(exc: BaseException) -> str:
    return f"{type(exc).__name__}: {exc}"
