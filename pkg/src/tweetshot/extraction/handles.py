"""
Twitter handle extraction
"""
import logging
import re
from typing import Optional, Tuple

from ..errors import NoHandleFound
from ..ocr import OcrText
from .models import HANDLE_MAX_LENGTH, Handle

logger = logging.getLogger(__name__)

_HANDLE_RUN = re.compile(r"[A-Za-z0-9_]+")
TRUNCATION_MARKERS = ("...", "…")


def match_handle_token(token: str) -> Optional[Tuple[str, bool]]:
    """
    Match a single whitespace-delimited token against the handle rule

    Returns:
        (name, truncated) or None. A bare `@` (the OCR rendering of the
        verified check mark) and `@` followed by glyph noise do not match.
    """
    if not token.startswith("@"):
        return None
    run = _HANDLE_RUN.match(token, 1)
    if run is None:
        return None
    name = run.group(0)
    if len(name) > HANDLE_MAX_LENGTH:
        logger.debug(f"Skipping {token!r}: longer than {HANDLE_MAX_LENGTH} characters")
        return None
    truncated = token.startswith(TRUNCATION_MARKERS, run.end())
    return name, truncated


def extract_handle(text: OcrText) -> Handle:
    """
    Return the first `@`-token in reading order that carries a handle

    Raises:
        NoHandleFound: If no token qualifies
    """
    for line_index, line in enumerate(text.lines):
        for token in line.split():
            matched = match_handle_token(token)
            if matched is None:
                continue
            name, truncated = matched
            if truncated:
                logger.info(f"Handle @{name} on line {line_index} is truncated")
            return Handle(name=name, line_index=line_index, truncated=truncated)
    raise NoHandleFound("no @handle token found")
