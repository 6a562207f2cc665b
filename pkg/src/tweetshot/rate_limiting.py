"""
Politeness limiting and retry/backoff for archive requests
"""
import logging
import random
import time
from contextlib import contextmanager
from threading import BoundedSemaphore, Lock
from typing import Iterator, Optional

from .errors import HttpError, NetworkError, RateLimited
from .transports.base import Transport, TransportError, TransportResponse

logger = logging.getLogger(__name__)

DEFAULT_MAX_CONCURRENT = 2
DEFAULT_MIN_INTERVAL = 0.5


class PolitenessGate:
    """
    Caps concurrent requests and spaces out request starts

    Attributes:
        max_concurrent: Requests allowed in flight at once
        min_interval: Minimum seconds between two request starts
    """

    def __init__(self, max_concurrent: int = DEFAULT_MAX_CONCURRENT, min_interval: float = DEFAULT_MIN_INTERVAL):
        self.max_concurrent = max_concurrent
        self.min_interval = min_interval
        self._slots = BoundedSemaphore(max_concurrent)
        self._lock = Lock()
        self._last_start: Optional[float] = None

    @contextmanager
    def slot(self) -> Iterator[None]:
        with self._slots:
            with self._lock:
                now = time.monotonic()
                if self._last_start is not None:
                    wait = self.min_interval - (now - self._last_start)
                    if wait > 0:
                        logger.debug(f"Politeness delay {wait:.2f}s")
                        time.sleep(wait)
                        now = time.monotonic()
                self._last_start = now
            yield


# shared by every client in the process
_shared_gate = PolitenessGate()


def shared_gate() -> PolitenessGate:
    return _shared_gate


class RateLimitHandler:
    """
    Retries transient failures with exponential backoff

    5xx responses, timeouts and connection errors are retried; 429 is
    retried honouring Retry-After; other 4xx fail immediately.

    Attributes:
        max_retries: Maximum number of retry attempts
        min_backoff: Backoff before the first retry in seconds
        max_backoff: Upper bound on a single backoff
        jitter: Whether to randomize backoff times
    """

    RETRY_AFTER_HEADER = 'Retry-After'

    def __init__(
        self,
        max_retries: int = 3,
        min_backoff: float = 1.0,
        max_backoff: float = 60.0,
        jitter: bool = False,
        gate: Optional[PolitenessGate] = None
    ):
        self.max_retries = max_retries
        self.min_backoff = min_backoff
        self.max_backoff = max_backoff
        self.jitter = jitter
        self.gate = gate or shared_gate()

    def _calculate_backoff(self, retry_count: int) -> float:
        """Backoff before retry number `retry_count` (1-based): 1s, 2s, 4s, ..."""
        backoff = min(self.max_backoff, self.min_backoff * (2 ** (retry_count - 1)))
        if self.jitter:
            backoff = backoff * (0.5 + random.random())
        return backoff

    def _retry_after(self, response: TransportResponse) -> float:
        value = response.headers.get(self.RETRY_AFTER_HEADER)
        if value is None:
            return 0.0
        try:
            return min(self.max_backoff, max(0.0, float(value)))
        except ValueError:
            logger.warning(f"Ignoring unparseable {self.RETRY_AFTER_HEADER} header: {value!r}")
            return 0.0

    def handle_request(self, url: str, transport: Transport, timeout: float) -> TransportResponse:
        """
        GET a URL through the politeness gate, retrying transient failures

        Returns:
            The successful (2xx) response

        Raises:
            HttpError: For non-retryable statuses
            RateLimited: If 429 persists after the final retry
            NetworkError: If timeouts, connection errors or 5xx persist
        """
        retry_count = 0
        while True:
            status = None
            wait_hint = 0.0
            try:
                with self.gate.slot():
                    response = transport.get(url, timeout)
            except TransportError as e:
                failure = str(e)
            else:
                if response.ok:
                    return response
                status = response.status_code
                if status == 429:
                    wait_hint = self._retry_after(response)
                elif status < 500:
                    raise HttpError(status, url)
                failure = f"HTTP {status}"

            retry_count += 1
            if retry_count > self.max_retries:
                logger.error(f"Giving up on {url} after {self.max_retries} retries: {failure}")
                if status == 429:
                    raise RateLimited(url)
                raise NetworkError(f"{failure} for {url} after {self.max_retries} retries", url)

            backoff = max(self._calculate_backoff(retry_count), wait_hint)
            logger.warning(
                f"Request failed for {url} ({failure}), "
                f"attempt {retry_count}/{self.max_retries}, "
                f"backing off for {backoff:.1f} seconds"
            )
            time.sleep(backoff)
