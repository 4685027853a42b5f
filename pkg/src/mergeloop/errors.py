"""Exception hierarchy shared across the package."""


class MergeloopError(Exception):
    """Base class for all domain errors."""


# --- sample / automaton construction ---

class EmptySampleError(MergeloopError):
    pass


class SymbolOutOfAlphabetError(MergeloopError):
    pass


class InconsistentSampleError(MergeloopError):
    """The sample contradicts itself (label clash or output clash on one prefix)."""


# --- trace file parsing ---

class TraceParseError(MergeloopError):
    """Base for trace-file format errors; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class HeaderMismatchError(TraceParseError):
    pass


class BadLabelError(TraceParseError):
    pass


class LengthMismatchError(TraceParseError):
    pass


class MalformedSymbolPairError(TraceParseError):
    pass


# --- merge engine ---

class NotBlueError(MergeloopError):
    pass


class StaleRecordError(MergeloopError):
    """Undo/redo was attempted with a record that is not the top of history."""


# --- session commands ---

class CommandError(MergeloopError):
    """Base for rejected session commands; `cause` is the stable error name."""

    cause = "command-error"


class InvalidStatePairError(CommandError):
    """A state pair with the wrong colors, unknown ids, or equal ids."""

    cause = "invalid-state-pair"


class BadCommandSyntaxError(MergeloopError):
    pass


class UnknownRankError(CommandError):
    cause = "unknown-rank"


class NotACandidateError(CommandError):
    cause = "not-a-candidate"


class EmptyHistoryError(CommandError):
    cause = "empty-history"


class UnknownParamError(CommandError):
    cause = "unknown-param"


class InvalidValueError(CommandError):
    cause = "invalid-value"


class ReplayError(MergeloopError):
    """A command log failed during replay; carries the failing 0-based index."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"command {index} failed: {cause}")
        self.index = index
        self.cause = cause


# --- generator ---

class GenerationFailedError(MergeloopError):
    pass
