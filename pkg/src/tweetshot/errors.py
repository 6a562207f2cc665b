"""
Exception hierarchy for tweetshot
"""
from typing import Optional


class TweetshotError(Exception):
    """Base class for every error raised by tweetshot"""
    pass


class ConfigError(TweetshotError):
    """Raised when an environment or CLI setting cannot be interpreted"""
    pass


# OCR

class OcrError(TweetshotError):
    """Base class for OCR adapter failures"""
    pass


class EngineNotFound(OcrError):
    """The OCR command could not be executed"""
    pass


class EngineFailed(OcrError):
    """The OCR command exited non-zero or timed out"""

    def __init__(self, message: str, stderr: str = "", returncode: Optional[int] = None):
        super().__init__(message)
        self.stderr = stderr
        self.returncode = returncode


class EmptyOutput(OcrError):
    """The OCR engine produced no text (unreadable or blank image)"""
    pass


class OcrTextDecodeError(OcrError):
    """An OCR text file is not valid UTF-8"""

    def __init__(self, path: str, offset: int, reason: str):
        super().__init__(f"{path}: invalid UTF-8 at byte offset {offset}: {reason}")
        self.path = path
        self.offset = offset


# Extraction

class ExtractionError(TweetshotError):
    """
    Base class for per-field extraction failures

    Each subclass names the claim flag it is folded into by extract_claim.
    """
    flag: str = ""


class NoTimestampFound(ExtractionError):
    flag = "NoTimestampFound"


class RelativeTimestampOnly(NoTimestampFound):
    """Only an elapsed-time marker such as `27m` was found"""
    flag = "RelativeTimestampOnly"


class NoHandleFound(ExtractionError):
    flag = "NoHandleFound"


class EmptyBody(ExtractionError):
    flag = "EmptyBody"


# Archive access

class ArchiveError(TweetshotError):
    """Base class for archive search failures"""
    pass


class NetworkError(ArchiveError):
    """Retries exhausted on timeouts, connection failures or 5xx responses"""

    def __init__(self, message: str, url: Optional[str] = None):
        super().__init__(message)
        self.url = url


class HttpError(ArchiveError):
    """Non-retryable HTTP status"""

    def __init__(self, status: int, url: Optional[str] = None):
        super().__init__(f"HTTP {status} for {url}" if url else f"HTTP {status}")
        self.status = status
        self.url = url


class RateLimited(HttpError):
    """HTTP 429 still returned after the final retry"""

    def __init__(self, url: Optional[str] = None):
        super().__init__(429, url)


class MissingField(ArchiveError):
    """A claim lacks a field needed for archive search"""

    def __init__(self, field: str, reason: str = ""):
        message = f"claim has no usable {field}"
        if reason:
            message = f"{message} ({reason})"
        super().__init__(message)
        self.field = field


class TruncatedHandleRejected(MissingField):
    """A handle cut off with `...` cannot address archived tweets"""

    def __init__(self, handle: str):
        super().__init__("handle", f"@{handle} is truncated")
        self.handle = handle


# Evaluation

class EvaluationError(TweetshotError):
    """Base class for evaluation failures"""
    pass


class SchemaError(EvaluationError):
    """A manifest entry is invalid"""

    def __init__(self, item_id: Optional[str], reason: str):
        label = item_id if item_id is not None else "<manifest>"
        super().__init__(f"{label}: {reason}")
        self.item_id = item_id
        self.reason = reason


class ManifestEmpty(EvaluationError):
    def __init__(self):
        super().__init__("manifest empty")
