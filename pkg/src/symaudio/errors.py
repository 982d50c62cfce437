"""Exception hierarchy shared across the package."""


class SymaudioError(Exception):
    """Base class for all package errors."""


class InvalidBundle(SymaudioError):
    """A feature bundle failed invariant validation.

    Carries the validation report so callers can inspect individual
    violations.
    """

    def __init__(self, report):
        self.report = report
        codes = ", ".join(v.code for v in report)
        super().__init__(f"invalid bundle: {codes}")


class OutOfRange(SymaudioError):
    """A numeric input fell outside its documented range."""


class BadFrameParams(SymaudioError):
    """Frame size / hop parameters violate the analysis preconditions."""


class ClipUnreadable(SymaudioError):
    """Audio clip could not be read or decoded."""


class AllExtractorsFailed(SymaudioError):
    """Every registered extractor failed for a clip."""


class ParseError(SymaudioError):
    """Input file or payload could not be parsed."""


class SchemaVersionMismatch(ParseError):
    """Feature JSON declares an unsupported schema_version."""


class UnknownFormat(SymaudioError):
    """Benchmark format name is not recognized."""


class UnresolvableGold(SymaudioError):
    """Gold answer text matches zero or multiple options."""


class DuplicateSampleId(SymaudioError):
    """Two results (or samples) share a sample_id."""


class EmptyQuestion(SymaudioError):
    """Question text is empty."""


class EmptyCaption(SymaudioError):
    """Caption text is empty."""


class LlmError(SymaudioError):
    """Base class for LLM transport and protocol failures."""


class Unauthorized(LlmError):
    """Endpoint rejected the credential (401/403)."""


class RateLimitedExhausted(LlmError):
    """Retries exhausted while the endpoint kept returning 429."""


class TransportFailure(LlmError):
    """Transport-level failure (connection errors, 5xx) after retries."""


class MalformedResponse(LlmError):
    """Endpoint returned a payload that does not match the wire protocol."""


class AnswerUnparseable(SymaudioError):
    """No parsing rule matched the raw LLM answer.

    The raw text is kept for the error-analysis log.
    """

    def __init__(self, raw: str, reason: str = "no rule matched"):
        self.raw = raw
        self.reason = reason
        super().__init__(f"unparseable answer ({reason}): {raw!r}")


class SelectionUnparseable(SymaudioError):
    """Agent feature-selection reply could not be mapped to known layers."""

    def __init__(self, raw: str):
        self.raw = raw
        super().__init__(f"unparseable layer selection: {raw!r}")
