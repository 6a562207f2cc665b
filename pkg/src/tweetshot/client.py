"""
Archive HTTP client
"""
import logging
from typing import Optional

from .endpoints import ArchiveEndpoint, get_endpoint
from .errors import ArchiveError
from .rate_limiting import DEFAULT_MAX_CONCURRENT, PolitenessGate, RateLimitHandler
from .transports import FixtureTransport, RecordingTransport, RequestsTransport, Transport

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 30.0


class ArchiveClient:
    def __init__(
        self,
        transport: Optional[Transport] = None,
        endpoint: Optional[ArchiveEndpoint] = None,
        timeout: float = DEFAULT_TIMEOUT,
        max_retries: int = 3,
        min_backoff: float = 1.0,
        max_backoff: float = 60.0,
        jitter: bool = False,
        gate: Optional[PolitenessGate] = None
    ):
        """
        Initialize an archive client

        Args:
            transport: HTTP transport (defaults to a live requests transport)
            endpoint: CDX endpoint and replay base (defaults to the Wayback Machine)
            timeout: Per-request timeout in seconds
            max_retries: Maximum number of retry attempts (default: 3)
            min_backoff: Backoff before the first retry in seconds (default: 1.0)
            max_backoff: Maximum backoff time in seconds (default: 60.0)
            jitter: Whether to add jitter to backoff times (default: False)
            gate: Politeness gate (defaults to the process-wide gate)
        """
        self.transport = transport or RequestsTransport()
        self.endpoint = endpoint or get_endpoint()
        self.timeout = timeout
        self.rate_limiter = RateLimitHandler(
            max_retries=max_retries,
            min_backoff=min_backoff,
            max_backoff=max_backoff,
            jitter=jitter,
            gate=gate
        )

    @classmethod
    def from_fixtures(cls, directory: str, **kwargs) -> 'ArchiveClient':
        """
        Create a client that replays recorded responses from `directory`

        Replay is local, so unless a gate is given requests are not spaced out.
        """
        kwargs.setdefault("gate", PolitenessGate(max_concurrent=DEFAULT_MAX_CONCURRENT, min_interval=0.0))
        return cls(transport=FixtureTransport(directory), **kwargs)

    @classmethod
    def recording(cls, directory: str, **kwargs) -> 'ArchiveClient':
        """Create a live client that records every response into `directory`"""
        return cls(transport=RecordingTransport(RequestsTransport(), directory), **kwargs)

    def get(self, url: str) -> str:
        """
        Fetch a URL and return the response body

        Raises:
            HttpError: For 4xx responses
            RateLimited: If 429 persists
            NetworkError: If retries are exhausted
        """
        try:
            response = self.rate_limiter.handle_request(url, self.transport, self.timeout)
        except ArchiveError as e:
            logger.error(f"Request failed: {e}")
            raise
        logger.debug(f"Full response for {url}: {response.text}")
        return response.text

    def close(self) -> None:
        self.transport.close()

    def __enter__(self) -> 'ArchiveClient':
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
