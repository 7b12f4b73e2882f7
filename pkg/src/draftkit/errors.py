"""Exception hierarchy shared across the package.

Every error raised by draftkit derives from DraftKitError so callers can
catch the whole family at an API boundary.
"""

from __future__ import annotations


class DraftKitError(Exception):
    """Base class for all draftkit errors."""


# --- card database ---------------------------------------------------------

class FileNotReadableError(DraftKitError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"cannot read {path}: {reason}")


class MalformedRecordError(DraftKitError):
    def __init__(self, index: int | None, reason: str):
        self.index = index
        self.reason = reason
        where = "file" if index is None else f"record {index}"
        super().__init__(f"malformed {where}: {reason}")


class DuplicateNameError(DraftKitError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate card name (case-insensitive): {name!r}")


class CardNotFoundError(DraftKitError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no such card: {name!r}")


# --- draft state machine ---------------------------------------------------

class CardNotInPackError(DraftKitError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"card not in pack: {name!r}")


class DraftCompleteError(DraftKitError):
    def __init__(self, message: str = "draft is already complete"):
        super().__init__(message)


class InsufficientCardsError(DraftKitError):
    def __init__(self, rarity: str, needed: int, available: int):
        self.rarity = rarity
        super().__init__(
            f"not enough {rarity} cards: need {needed}, have {available}"
        )


class UnknownCardError(DraftKitError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown card: {name!r}")


# --- draft log ingestion ---------------------------------------------------

class MissingColumnError(DraftKitError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"required CSV column missing: {name!r}")


class EmptyFileError(DraftKitError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"empty file: {path}")


class InsufficientDataError(DraftKitError):
    pass


# --- prompt building -------------------------------------------------------

class EmptyPackError(DraftKitError):
    def __init__(self):
        super().__init__("cannot build a prompt for an empty pack")


class NotAPromptError(DraftKitError):
    def __init__(self, reason: str):
        super().__init__(f"not a recognizable prompt: {reason}")


# --- agents / LLM transport ------------------------------------------------

class EndpointUnreachableError(DraftKitError):
    def __init__(self, url: str, attempts: int, last_error: str):
        self.url = url
        self.attempts = attempts
        super().__init__(
            f"endpoint {url} unreachable after {attempts} attempts: {last_error}"
        )


class AuthFailedError(DraftKitError):
    def __init__(self, url: str, status: int):
        self.url = url
        self.status = status
        super().__init__(f"authentication failed against {url} (HTTP {status})")


# --- evaluation ------------------------------------------------------------

class NoEventsError(DraftKitError):
    def __init__(self):
        super().__init__("cannot evaluate an empty event collection")


class InvalidArgumentsError(DraftKitError):
    pass


# --- low-rank adaptation kit -----------------------------------------------

class RankOutOfRangeError(DraftKitError):
    def __init__(self, rank: int, limit: int):
        self.rank = rank
        super().__init__(f"rank {rank} outside valid range 1..{limit}")


class DimensionMismatchError(DraftKitError):
    pass


class EmptyDatasetError(DraftKitError):
    def __init__(self, which: str):
        super().__init__(f"{which} dataset is empty")


class DivergenceError(DraftKitError):
    def __init__(self, step: int):
        self.step = step
        super().__init__(f"training diverged (non-finite loss) at step {step}")
