"""
Compose the field extractors into an ExtractedClaim
"""
import logging
from typing import Optional, Set

from ..errors import EmptyBody, ExtractionError
from ..ocr import OcrText
from .body import extract_body
from .handles import extract_handle
from .models import ClaimFlag, ExtractedClaim, Handle, Method, Timestamp
from .timestamps import extract_timestamp

logger = logging.getLogger(__name__)


def extract_claim(text: OcrText, method: Method, reference: Timestamp) -> ExtractedClaim:
    """
    Extract handle, timestamp and body; per-field failures become flags
    """
    flags: Set[ClaimFlag] = set()

    handle: Optional[Handle] = None
    try:
        handle = extract_handle(text)
        if handle.truncated:
            flags.add(ClaimFlag.TRUNCATED_HANDLE)
    except ExtractionError as e:
        flags.add(ClaimFlag(e.flag))

    timestamp: Optional[Timestamp] = None
    try:
        timestamp = extract_timestamp(text, method, reference)
    except ExtractionError as e:
        flags.add(ClaimFlag(e.flag))

    body: Optional[str] = None
    try:
        if handle is None:
            raise EmptyBody("no handle line to anchor the body")
        candidate = timestamp.resolved_from if timestamp is not None else None
        body = extract_body(text, handle, candidate)
    except ExtractionError as e:
        flags.add(ClaimFlag(e.flag))

    if flags:
        logger.info(f"Partial extraction for {text.image_ref or 'input'}: {sorted(f.value for f in flags)}")
    return ExtractedClaim(
        handle=handle,
        timestamp=timestamp,
        body=body,
        flags=frozenset(flags),
        source=text
    )
