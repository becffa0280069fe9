"""Exception types shared across the package.

The CLI maps these onto exit codes: malformed input (bad JSON, unknown
files, uncoverable text) exits 1, violated invariants (invalid rule
tables, out-of-range frames) exit 2.
"""


class BdspellError(Exception):
    """Base class for all package errors."""


class RulesetError(BdspellError):
    """A rule table violates one of its invariants (duplicate label,
    dangling reference, bad trigger binding, ...)."""


class RulesetParseError(BdspellError):
    """The ruleset file is not readable as the documented JSON schema."""


class UnknownLabelError(BdspellError):
    """A sign label is not present in the loaded alphabet."""


class FrameError(BdspellError):
    """A detection frame violates the wire invariants (confidence or bbox
    out of range, timestamp going backwards)."""


class PlanError(BdspellError):
    """Target text contains a character no rule path can produce."""

    def __init__(self, message: str, char: str = "", offset: int = -1):
        super().__init__(message)
        self.char = char
        self.offset = offset


class WireError(BdspellError):
    """A wire message or JSONL line does not match the documented schema."""

    def __init__(self, message: str, line_no: int | None = None):
        super().__init__(message)
        self.line_no = line_no
