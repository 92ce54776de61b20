"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
exit-code contract: 1 for bad input data, 2 for schema/config problems.
"""
from __future__ import annotations


class PhonfrontError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConstraintViolationError(PhonfrontError):
    """A feature bundle or bit vector combines mutually exclusive features."""

    def __init__(self, message: str, pairs=()):
        super().__init__(message)
        self.pairs = tuple(pairs)


class SchemaError(PhonfrontError):
    """A data file or config file does not match its documented schema."""

    exit_code = 2

    def __init__(self, message: str, *, path=None, line=None):
        ctx = ""
        if path is not None:
            ctx += f"{path}"
        if line is not None:
            ctx += f":{line}"
        super().__init__(f"{ctx}: {message}" if ctx else message)
        self.path = path
        self.line = line


class InventoryInvariantError(PhonfrontError):
    """An inventory file violates structural invariants; lists every failure."""

    exit_code = 2

    def __init__(self, failures):
        self.failures = tuple(failures)
        super().__init__(
            "inventory invariant violations:\n  " + "\n  ".join(self.failures)
        )


class ConfigError(PhonfrontError):
    exit_code = 2


class ShapeMismatchError(PhonfrontError):
    """Projection weights or encoded matrices have the wrong dimensions."""

    exit_code = 2


class UnknownSymbolError(PhonfrontError):
    """Lookup of a symbol that is not in the inventory."""

    def __init__(self, symbol: str, suggestions=()):
        self.symbol = symbol
        self.suggestions = tuple(suggestions)
        msg = f"unknown symbol {symbol!r}"
        if self.suggestions:
            msg += " (close matches: " + ", ".join(self.suggestions) + ")"
        super().__init__(msg)


class ParseError(PhonfrontError):
    """Base class for transcription-input errors."""


class UnknownTokenError(ParseError):
    def __init__(self, token: str, position: int):
        super().__init__(f"unknown token {token!r} at position {position}")
        self.token = token
        self.position = position


class MalformedStressError(ParseError):
    def __init__(self, token: str, position: int):
        super().__init__(
            f"stress digit on non-vowel label {token!r} at position {position}"
        )
        self.token = token
        self.position = position


class IllegalSyllableError(ParseError):
    def __init__(self, text: str, offset: int):
        super().__init__(
            f"no legal syllable at byte offset {offset}: {text[offset:offset + 12]!r}"
        )
        self.offset = offset


class AmbiguousSegmentationError(ParseError):
    def __init__(self, text: str, offset: int, parses):
        self.offset = offset
        self.parses = tuple(parses)
        super().__init__(
            f"greedy syllabification fails at byte offset {offset} but "
            f"{len(self.parses)} backtracked parse(s) exist; refusing to guess"
        )


class DecompositionGapError(ParseError):
    """A legal syllable spelling has no segmental decomposition (e.g. bad erhua)."""

    def __init__(self, syllable: str, reason: str):
        super().__init__(f"cannot decompose {syllable!r}: {reason}")
        self.syllable = syllable


class SerializationError(PhonfrontError):
    """Malformed serialized utterance data (bad magic, truncation, version)."""
