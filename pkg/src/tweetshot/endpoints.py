"""
Archive endpoint configuration
"""
from dataclasses import dataclass
from typing import Dict, Optional

from .errors import ConfigError

WAYBACK_REPLAY_BASE = 'https://web.archive.org/web/'


@dataclass(frozen=True)
class ArchiveEndpoint:
    cdx_url: str
    replay_base: str = WAYBACK_REPLAY_BASE


ENDPOINTS = {
    # Wayback Machine CDX server over plain http, as in the documented curl lookup
    'wayback': ArchiveEndpoint('http://web.archive.org/cdx/search/cdx'),

    # Same server over TLS
    'wayback-https': ArchiveEndpoint('https://web.archive.org/cdx/search/cdx'),
}

ENDPOINT_DESCRIPTIONS = {
    'wayback': 'Internet Archive Wayback Machine (http)',
    'wayback-https': 'Internet Archive Wayback Machine (https)',
}

DEFAULT_ENDPOINT = 'wayback'


def get_endpoint(name_or_url: Optional[str] = None) -> ArchiveEndpoint:
    """
    Resolve an endpoint name or a raw CDX URL

    Args:
        name_or_url: Registry name (e.g. 'wayback') or an http(s) URL;
            None selects the default

    Returns:
        ArchiveEndpoint; raw URLs replay through the Wayback Machine

    Raises:
        ConfigError: If the value is neither a known name nor a URL
    """
    value = (name_or_url or DEFAULT_ENDPOINT).strip()
    if value.startswith(('http://', 'https://')):
        return ArchiveEndpoint(value.rstrip('?'))
    endpoint = ENDPOINTS.get(value.lower())
    if endpoint is None:
        raise ConfigError(f"unknown CDX endpoint {value!r}; expected one of {sorted(ENDPOINTS)} or a URL")
    return endpoint


def list_endpoints() -> Dict[str, str]:
    """
    Get a dictionary of named endpoints and their descriptions
    """
    return ENDPOINT_DESCRIPTIONS.copy()
