"""
Offline transports: replay recorded responses, or record live ones

A fixtures directory holds verbatim response bodies plus an `index.json`:

    {"responses": [{"url": "...", "status": 200, "body_file": "cdx.txt"}]}
"""
import errno
import fcntl
import hashlib
import json
import logging
import os
import tempfile
import time
from contextlib import contextmanager
from typing import Dict, Iterator, Optional

from ..errors import ConfigError
from .base import Transport, TransportError, TransportResponse

logger = logging.getLogger(__name__)

INDEX_FILE = "index.json"


class FixtureLockTimeout(TransportError):
    """Raised when the fixture index lock cannot be acquired in time"""
    pass


class FixtureStore:
    """
    A directory of recorded responses

    Writes are serialized with an exclusive lock on `index.json.lock` and
    land through temp-file + rename, so readers never see partial files.
    """

    def __init__(self, directory: str):
        self.directory = os.path.abspath(directory)
        self.index_path = os.path.join(self.directory, INDEX_FILE)
        self._lock_path = f"{self.index_path}.lock"

    @contextmanager
    def lock(self, timeout: Optional[float] = 10.0) -> Iterator[None]:
        os.makedirs(self.directory, exist_ok=True)
        with open(self._lock_path, "w") as lock_file:
            deadline = None if timeout is None else time.monotonic() + timeout
            while True:
                try:
                    fcntl.flock(lock_file.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
                    break
                except OSError as e:
                    if e.errno not in (errno.EAGAIN, errno.EACCES):
                        raise
                    if deadline is not None and time.monotonic() > deadline:
                        raise FixtureLockTimeout(f"timed out waiting for {self._lock_path}")
                    time.sleep(0.05)
            try:
                yield
            finally:
                fcntl.flock(lock_file.fileno(), fcntl.LOCK_UN)

    def _atomic_write(self, path: str, data: str) -> None:
        fd, tmp_path = tempfile.mkstemp(dir=self.directory, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as tmp:
                tmp.write(data)
                tmp.flush()
                os.fsync(tmp.fileno())
            os.replace(tmp_path, path)
        except BaseException:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
            raise

    def load_index(self) -> Dict[str, dict]:
        """Map url -> index entry; later entries for the same url win"""
        if not os.path.exists(self.index_path):
            return {}
        with open(self.index_path, encoding="utf-8") as f:
            try:
                data = json.load(f)
                return {entry["url"]: entry for entry in data.get("responses", [])}
            except (ValueError, KeyError, TypeError, AttributeError) as e:
                raise ConfigError(f"malformed fixture index {self.index_path}: {e}") from e

    def read_body(self, entry: dict) -> str:
        with open(os.path.join(self.directory, entry["body_file"]), encoding="utf-8", newline="") as f:
            return f.read()

    def add(self, url: str, response: TransportResponse) -> None:
        body_file = hashlib.sha1(url.encode("utf-8")).hexdigest()[:16] + ".txt"
        with self.lock():
            index = self.load_index()
            self._atomic_write(os.path.join(self.directory, body_file), response.text)
            index[url] = {"url": url, "status": response.status_code, "body_file": body_file}
            payload = {"responses": list(index.values())}
            self._atomic_write(self.index_path, json.dumps(payload, indent=2) + "\n")
        logger.info(f"Recorded {url} -> {body_file}")


class FixtureTransport(Transport):
    """
    Replay responses from a fixtures directory

    URLs that were never recorded replay as 404, like a missing resource.
    """

    def __init__(self, directory: str):
        if not os.path.isdir(directory):
            raise ConfigError(f"fixtures directory not found: {directory}")
        self.store = FixtureStore(directory)
        self._index = self.store.load_index()
        if not self._index:
            logger.warning(f"No recorded responses in {self.store.directory}")

    def get(self, url: str, timeout: float) -> TransportResponse:
        entry = self._index.get(url)
        if entry is None:
            logger.warning(f"No recorded response for {url}; replaying 404")
            return TransportResponse(status_code=404, text="")
        return TransportResponse(status_code=int(entry["status"]), text=self.store.read_body(entry))


class RecordingTransport(Transport):
    """Pass requests through to another transport and record every response"""

    def __init__(self, inner: Transport, directory: str):
        self.inner = inner
        self.store = FixtureStore(directory)

    def get(self, url: str, timeout: float) -> TransportResponse:
        response = self.inner.get(url, timeout)
        self.store.add(url, response)
        return response

    def close(self) -> None:
        self.inner.close()
