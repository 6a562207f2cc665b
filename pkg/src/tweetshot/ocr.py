"""
OCR adapter: obtain line-structured text from a tweet screenshot
"""
import logging
import os
import shlex
import subprocess
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import EmptyOutput, EngineFailed, EngineNotFound, OcrTextDecodeError

logger = logging.getLogger(__name__)

DEFAULT_OCR_CMD = "tesseract {input} stdout"
DEFAULT_OCR_TIMEOUT = 30.0
DEFAULT_JOBS = 4

_REPLACEMENT = "\ufffd"
_REPLACEMENT_BYTES = _REPLACEMENT.encode("utf-8")


class OcrSource(str, Enum):
    ENGINE_RUN = "EngineRun"
    TEXT_FILE = "TextFile"


@dataclass(frozen=True)
class OcrText:
    """
    Ordered, line-preserving text recovered from a screenshot

    Attributes:
        lines: Text lines in top-to-bottom reading order, no line breaks inside
        source: Whether the text came from an engine run or a text file
        image_ref: Path of the source image, when known
        replacement_count: Number of undecodable byte sequences replaced
    """
    lines: Tuple[str, ...]
    source: OcrSource
    image_ref: Optional[str] = None
    replacement_count: int = 0

    def __post_init__(self):
        for line in self.lines:
            if "\n" in line or "\r" in line:
                raise ValueError(f"OCR line contains a line break: {line!r}")

    @classmethod
    def from_text(
        cls,
        text: str,
        source: OcrSource,
        image_ref: Optional[str] = None,
        replacement_count: int = 0,
        strip_trailing: bool = False
    ) -> 'OcrText':
        """
        Split raw text into an OcrText

        Text is NFC-normalized; trailing blank lines are dropped so that
        joining the lines and re-reading gives back the same value.
        """
        text = unicodedata.normalize("NFC", text)
        # only CRLF, CR and LF end a line; form feeds, U+2028 and the like stay in the line
        lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
        if strip_trailing:
            lines = [line.rstrip() for line in lines]
        while lines and not lines[-1].strip():
            lines.pop()
        return cls(
            lines=tuple(lines),
            source=source,
            image_ref=image_ref,
            replacement_count=replacement_count
        )

    @property
    def text(self) -> str:
        return "\n".join(self.lines)

    def __len__(self) -> int:
        return len(self.lines)


def _build_command(engine_cmd: str, image_path: str) -> List[str]:
    if "{input}" not in engine_cmd:
        raise ValueError(f"OCR command template has no {{input}} placeholder: {engine_cmd!r}")
    return [part.replace("{input}", image_path) for part in shlex.split(engine_cmd)]


def _decode_engine_output(raw: bytes) -> Tuple[str, int]:
    """Decode engine stdout, replacing bad bytes and counting replacements"""
    text = raw.decode("utf-8", errors="replace")
    replaced = text.count(_REPLACEMENT) - raw.count(_REPLACEMENT_BYTES)
    # tesseract terminates each page with a form feed
    return text.replace("\x0c", ""), replaced


def run_ocr(
    image_path: str,
    engine_cmd: str = DEFAULT_OCR_CMD,
    timeout: float = DEFAULT_OCR_TIMEOUT
) -> OcrText:
    """
    Run the external OCR engine on an image

    Args:
        image_path: Path of the screenshot image
        engine_cmd: Command template containing an `{input}` placeholder
        timeout: Seconds before the engine is killed

    Returns:
        OcrText with source EngineRun

    Raises:
        FileNotFoundError: If the image does not exist
        EngineNotFound: If the command cannot be executed
        EngineFailed: On non-zero exit or timeout
        EmptyOutput: If the engine printed no text
    """
    if not os.path.isfile(image_path):
        raise FileNotFoundError(f"image not found: {image_path}")

    cmd = _build_command(engine_cmd, image_path)
    logger.debug(f"Running OCR: {cmd}")
    try:
        proc = subprocess.run(cmd, capture_output=True, timeout=timeout, check=False)
    except (FileNotFoundError, PermissionError) as e:
        raise EngineNotFound(f"cannot execute OCR engine {cmd[0]!r}: {e}") from e
    except subprocess.TimeoutExpired as e:
        raise EngineFailed(f"OCR engine timed out after {timeout:.0f}s on {image_path}") from e

    stderr = proc.stderr.decode("utf-8", errors="replace")
    if proc.returncode != 0:
        raise EngineFailed(
            f"OCR engine exited with status {proc.returncode} on {image_path}: {stderr.strip()}",
            stderr=stderr,
            returncode=proc.returncode
        )

    text, replaced = _decode_engine_output(proc.stdout)
    if replaced:
        logger.warning(f"Replaced {replaced} undecodable byte sequence(s) in OCR output of {image_path}")
    if not text.strip():
        raise EmptyOutput(f"OCR engine produced no text for {image_path}")

    return OcrText.from_text(
        text,
        source=OcrSource.ENGINE_RUN,
        image_ref=image_path,
        replacement_count=replaced,
        strip_trailing=True
    )


def run_ocr_many(
    image_paths: Sequence[str],
    engine_cmd: str = DEFAULT_OCR_CMD,
    timeout: float = DEFAULT_OCR_TIMEOUT,
    jobs: int = DEFAULT_JOBS
) -> List[OcrText]:
    """
    Run OCR over several images with at most `jobs` engine processes at once

    Results are returned in input order; the first failure is re-raised.
    """
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        return list(executor.map(lambda p: run_ocr(p, engine_cmd, timeout), image_paths))


def load_ocr_text(text_path: str, image_ref: Optional[str] = None) -> OcrText:
    """
    Load pre-extracted OCR text from a UTF-8 file

    Raises:
        OSError: If the file cannot be read
        OcrTextDecodeError: If the file is not valid UTF-8
    """
    with open(text_path, "rb") as f:
        raw = f.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise OcrTextDecodeError(text_path, e.start, e.reason) from e
    return OcrText.from_text(text, source=OcrSource.TEXT_FILE, image_ref=image_ref)


def is_text_input(path: str) -> bool:
    """Inputs ending in .txt are treated as pre-extracted OCR text"""
    return path.lower().endswith(".txt")


def read_inputs(
    paths: Iterable[str],
    engine_cmd: str = DEFAULT_OCR_CMD,
    timeout: float = DEFAULT_OCR_TIMEOUT,
    jobs: int = DEFAULT_JOBS
) -> List[OcrText]:
    """Load text inputs directly and OCR the image inputs, preserving order"""
    paths = list(paths)
    images = [p for p in paths if not is_text_input(p)]
    recognized = dict(zip(images, run_ocr_many(images, engine_cmd, timeout, jobs))) if images else {}
    return [load_ocr_text(p) if is_text_input(p) else recognized[p] for p in paths]
