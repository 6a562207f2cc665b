"""
Runtime configuration: environment-derived defaults and per-run settings
"""
import os
from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from .client import DEFAULT_TIMEOUT
from .endpoints import DEFAULT_ENDPOINT
from .errors import ConfigError
from .extraction.models import Method, Timestamp
from .ocr import DEFAULT_JOBS, DEFAULT_OCR_CMD

ENV_PREFIX = "TWEETSHOT_"

COMMANDS = ("extract", "search", "verify", "eval")
OUTPUT_FORMATS = ("json", "text")


@dataclass(frozen=True)
class Settings:
    """Defaults that can be overridden through TWEETSHOT_* environment variables"""
    ocr_cmd: str = DEFAULT_OCR_CMD
    cdx_endpoint: str = DEFAULT_ENDPOINT
    jobs: int = DEFAULT_JOBS
    timeout: float = DEFAULT_TIMEOUT

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None, prefix: str = ENV_PREFIX) -> 'Settings':
        env = os.environ if environ is None else environ

        def lookup(name: str) -> Optional[str]:
            value = env.get(f"{prefix}{name}")
            return value if value and value.strip() else None

        ocr_cmd = lookup("OCR_CMD") or cls.ocr_cmd
        if "{input}" not in ocr_cmd:
            raise ConfigError(f"{prefix}OCR_CMD must contain an {{input}} placeholder")

        jobs = cls.jobs
        raw_jobs = lookup("JOBS")
        if raw_jobs is not None:
            try:
                jobs = int(raw_jobs)
            except ValueError:
                raise ConfigError(f"{prefix}JOBS must be an integer, got {raw_jobs!r}")
            if jobs < 1:
                raise ConfigError(f"{prefix}JOBS must be >= 1, got {jobs}")

        timeout = cls.timeout
        raw_timeout = lookup("TIMEOUT")
        if raw_timeout is not None:
            try:
                timeout = float(raw_timeout)
            except ValueError:
                raise ConfigError(f"{prefix}TIMEOUT must be a number, got {raw_timeout!r}")

        return cls(
            ocr_cmd=ocr_cmd,
            cdx_endpoint=lookup("CDX_ENDPOINT") or cls.cdx_endpoint,
            jobs=jobs,
            timeout=timeout
        )


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs, after flags and environment are merged"""
    command: str
    inputs: Tuple[str, ...]
    method: Method = Method.M2
    reference: Optional[Timestamp] = None
    cdx_endpoint: str = DEFAULT_ENDPOINT
    window_days: int = 1
    fetch_pages: bool = False
    fixtures_dir: Optional[str] = None
    record_dir: Optional[str] = None
    jobs: int = DEFAULT_JOBS
    output_format: str = "json"
    output_path: Optional[str] = None
    ocr_cmd: str = DEFAULT_OCR_CMD
    timeout: float = DEFAULT_TIMEOUT
    show_candidates: bool = False
    include_body: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.window_days < 1:
            raise ConfigError(f"--window-days must be >= 1, got {self.window_days}")
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {self.jobs}")
        if self.fixtures_dir and self.record_dir:
            raise ConfigError("--fixtures and --record cannot be combined")

    @property
    def effective_reference(self) -> Timestamp:
        """The --reference value, or today at midnight"""
        return self.reference or Timestamp.today()
