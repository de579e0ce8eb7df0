"""Exception types shared across the toolkit."""


class QualkitError(Exception):
    """Base class for all toolkit errors."""


class EmptyTranscript(QualkitError):
    """Raised when a transcript contains no usable text."""


class LemmatizerUnavailable(QualkitError):
    """Raised when an external lemmatizer hook fails."""


class EmptyVocabulary(QualkitError):
    """Raised when a corpus has no lemmas left to model."""


class AlignmentError(QualkitError):
    """Raised when precomputed embeddings do not line up with the corpus."""


class FormatError(QualkitError):
    """Raised on malformed embedding payloads (bad dims, non-finite values)."""


class ProviderUnavailable(QualkitError):
    """Raised when a remote embedding endpoint cannot be reached."""


class TooFewDocuments(QualkitError):
    """Raised when a model asks for more topics than there are units."""


class MetricUndefined(QualkitError):
    """Raised when a metric has no defined value for the given input."""


class NoTopics(QualkitError):
    """Raised when clustering yields nothing but noise."""


class StageError(QualkitError):
    """Wraps an error raised inside a pipeline stage with the stage name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
