"""
Rule-based extraction of handle, timestamp and tweet text from OCR output
"""
from .body import extract_body
from .claim import extract_claim
from .handles import extract_handle
from .models import ClaimFlag, DateCandidate, ExtractedClaim, Handle, Method, Timestamp
from .timestamps import (
    extract_timestamp,
    filter_dates_m2,
    find_candidates,
    find_date_candidates_m1,
    select_candidate,
)

__all__ = [
    'ClaimFlag',
    'DateCandidate',
    'ExtractedClaim',
    'Handle',
    'Method',
    'Timestamp',
    'extract_body',
    'extract_claim',
    'extract_handle',
    'extract_timestamp',
    'filter_dates_m2',
    'find_candidates',
    'find_date_candidates_m1',
    'select_candidate',
]
