"""Toolkit-specific exception types.

Plain ``ValueError`` is used for domain and contract violations (bad
arguments, broken invariants); the classes here cover failures that
callers may want to handle separately, such as corrupt files or a
misbehaving scorer backend.
"""


class Cod3sError(Exception):
    """Base class for toolkit-specific failures."""


class FormatError(Cod3sError):
    """A binary or text artifact does not match its documented layout."""


class AlignmentError(Cod3sError):
    """Paired artifacts disagree on row count or signature width."""


class NotFoundError(Cod3sError, LookupError):
    """A requested key (fixture entry, bin signature) does not exist."""


class GatewayError(Cod3sError):
    """A scorer backend failed or replied with something unparseable."""

    def __init__(self, message: str, raw_reply: str | None = None):
        super().__init__(message)
        self.raw_reply = raw_reply
