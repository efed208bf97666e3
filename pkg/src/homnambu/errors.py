"""Exception hierarchy shared by every module."""

from __future__ import annotations


class HomNambuError(Exception):
    """Base class for all errors raised by the package."""


class DivisionByZeroScalar(HomNambuError, ZeroDivisionError):
    pass


class ParseError(HomNambuError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class UndeclaredParameter(HomNambuError):
    def __init__(self, name: str):
        super().__init__(f"undeclared parameter {name!r}")
        self.name = name


class DenominatorVanishes(HomNambuError):
    pass


class DimensionMismatch(HomNambuError, ValueError):
    pass


class NotAnEndomorphism(HomNambuError):
    pass


class AlreadyTwisted(HomNambuError):
    pass


class IncompatibleTriple(HomNambuError):
    pass


class DegenerateTriple(HomNambuError):
    pass


class NotDegenerate(HomNambuError):
    pass


class HypothesisFailure(HomNambuError):
    pass


class NotUnimodular(HomNambuError):
    pass


class UnknownName(HomNambuError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown name"


class DocumentError(HomNambuError):
    """Invalid algebra document; ``location`` points at the offending field."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
