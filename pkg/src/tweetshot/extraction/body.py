"""
Tweet body extraction

The body is the block of lines between the handle line (header) and the
first footer line: the timestamp line, an engagement-count line, or a
client string such as `Twitter for iPhone`.
"""
import logging
import re
from typing import Optional

from ..errors import EmptyBody
from ..ocr import OcrText
from .models import DateCandidate, Handle

logger = logging.getLogger(__name__)

ENGAGEMENT_PATTERN = re.compile(
    r"(?<![A-Za-z])\d[\d,.]*[KkMm]?(?![\w:/])\W*.*?\b(?:Retweets?|Quotes?|Likes?|Views?)\b",
    re.IGNORECASE
)
CLIENT_PATTERN = re.compile(r"Twitter\s+for\b|Twitter\s+Web\s+App", re.IGNORECASE)


def is_engagement_line(line: str) -> bool:
    return ENGAGEMENT_PATTERN.search(line) is not None


def is_client_line(line: str) -> bool:
    return CLIENT_PATTERN.search(line) is not None


def find_footer_start(text: OcrText, header_end: int, timestamp_candidate: Optional[DateCandidate] = None) -> int:
    """Index of the first footer line after the header, or len(lines)"""
    footer = len(text.lines)
    if timestamp_candidate is not None and timestamp_candidate.line_index > header_end:
        footer = min(footer, timestamp_candidate.line_index)
    for index in range(header_end + 1, footer):
        line = text.lines[index]
        if is_engagement_line(line) or is_client_line(line):
            footer = index
            break
    return footer


def extract_body(text: OcrText, handle: Handle, timestamp_candidate: Optional[DateCandidate] = None) -> str:
    """
    Return the tweet text between the header and the footer as one line

    Raises:
        EmptyBody: If no non-blank lines lie between the boundaries
    """
    header_end = handle.line_index
    footer_start = find_footer_start(text, header_end, timestamp_candidate)
    words = " ".join(text.lines[header_end + 1:footer_start]).split()
    if not words:
        raise EmptyBody(f"no text between header line {header_end} and footer line {footer_start}")
    logger.debug(f"Body spans lines {header_end + 1}..{footer_start - 1}")
    return " ".join(words)
