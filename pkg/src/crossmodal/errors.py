"""Exception types shared across the pipeline."""


class CrossmodalError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(CrossmodalError):
    """Invalid or unsupported configuration: bad language tag, unknown
    backend, missing fixture path, modality mismatch."""


class TransportError(CrossmodalError):
    """A call to an external endpoint failed.

    ``retryable`` distinguishes transient failures (timeouts, 5xx) from
    permanent ones (malformed request).
    """

    def __init__(self, message: str, *, retryable: bool = True):
        super().__init__(message)
        self.retryable = retryable


class NotFoundError(CrossmodalError):
    """A knowledge-base id, job id, or resource does not exist."""


class NoCandidateError(CrossmodalError):
    """Candidate selection was asked to pick from an empty list, or a
    label could not be resolved to any knowledge-base entry."""


class FormatError(CrossmodalError):
    """Payload bytes could not be decoded as the expected format
    (corrupt image, wrong content type)."""


class ExtractionEmptyError(CrossmodalError):
    """Article extraction produced neither body text nor a main image."""


class SamplingExhaustedError(CrossmodalError):
    """No catalog entity satisfies the tampering strategy's constraint."""

    def __init__(self, message: str, *, constraint: str):
        super().__init__(message)
        self.constraint = constraint
