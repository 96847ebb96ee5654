class WordrepError(ValueError):
    """Base class for every error raised by the wordrep library."""


class GraphError(WordrepError):
    """Invalid graph construction or vertex reference."""


class FormatError(WordrepError):
    """Malformed graph6, edge-list, orientation or word text."""


class OrientationError(WordrepError):
    """An orientation does not meet an operation's precondition."""


class TranscriptError(WordrepError):
    """Transcript grammar or copy bookkeeping violation."""


class AssetError(WordrepError):
    """A bundled data file is missing, altered or fails validation."""


class SearchLimitError(WordrepError):
    """An input exceeds the documented bound of an exhaustive routine."""
