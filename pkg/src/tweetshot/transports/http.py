"""
requests-backed transport for live archive access
"""
import logging
from typing import Optional

import requests
from requests.adapters import HTTPAdapter
from urllib3.util.retry import Retry

from .base import Transport, TransportError, TransportResponse

logger = logging.getLogger(__name__)

USER_AGENT = "tweetshot/0.1 (+screenshot provenance lookup)"


class RequestsTransport(Transport):
    """
    Live HTTP transport over a pooled requests Session

    Attributes:
        pool_size: Connections kept per host
    """

    def __init__(self, pool_size: int = 2, session: Optional[requests.Session] = None):
        self.pool_size = pool_size
        self.session = session or self.create_session()

    def create_session(self) -> requests.Session:
        """Create a Session; retries are left to the rate limiter"""
        session = requests.Session()
        adapter = HTTPAdapter(
            pool_connections=self.pool_size,
            pool_maxsize=self.pool_size,
            max_retries=Retry(total=0, raise_on_status=False)
        )
        session.mount("https://", adapter)
        session.mount("http://", adapter)
        session.headers.update({"User-Agent": USER_AGENT})
        return session

    def get(self, url: str, timeout: float) -> TransportResponse:
        try:
            response = self.session.get(url, timeout=timeout)
        except requests.exceptions.RequestException as e:
            raise TransportError(f"GET {url} failed: {e}") from e

        logger.debug(f"GET {url} -> {response.status_code} ({len(response.content)} bytes)")
        return TransportResponse(
            status_code=response.status_code,
            text=response.text,
            headers=response.headers
        )

    def close(self) -> None:
        self.session.close()
