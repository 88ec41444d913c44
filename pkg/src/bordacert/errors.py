"""Exception hierarchy shared by every module."""

from __future__ import annotations


class BordaCertError(Exception):
    """Base class for all package errors."""


class DomainError(BordaCertError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ParseError(BordaCertError, ValueError):
    """Malformed textual input. Carries a location when one is known."""

    def __init__(self, message: str, *, line: int | None = None, offset: int | None = None):
        self.line = line
        self.offset = offset
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class CapacityError(BordaCertError):
    """An enumeration would exceed its documented size guard."""


class PreconditionError(DomainError):
    """A table constructor was called outside its hypothesis region."""


class InconsistencyError(BordaCertError):
    """Inference hit a clash between facts that no consistent function allows."""


class IncompleteFactsError(BordaCertError):
    """Inference needs a fact that the fact base does not contain."""


class ProofSearchError(BordaCertError):
    """The certificate generator could not find a derivation."""
