"""
Base interface for HTTP transports
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Mapping


class TransportError(Exception):
    """Connection failure or timeout below the HTTP layer"""
    pass


@dataclass(frozen=True)
class TransportResponse:
    status_code: int
    text: str
    headers: Mapping[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return 200 <= self.status_code < 300


class Transport(ABC):
    @abstractmethod
    def get(self, url: str, timeout: float) -> TransportResponse:
        """
        Perform a GET request

        Raises:
            TransportError: On connection failures and timeouts
        """
        pass

    def close(self) -> None:
        """Release pooled resources"""
        pass
