"""
Evaluation of extraction methods against a labelled corpus
"""
import json
import logging
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Union

from .errors import EvaluationError, ExtractionError, ManifestEmpty, SchemaError, TweetshotError
from .extraction import Method, Timestamp, extract_claim, extract_handle, extract_timestamp
from .ocr import OcrText, load_ocr_text
from .verifier import normalize_text

logger = logging.getLogger(__name__)

BUNDLED_CORPUS_DIR = os.path.join(os.path.dirname(__file__), "data", "corpus")
BUNDLED_MANIFEST = os.path.join(BUNDLED_CORPUS_DIR, "manifest.json")

HANDLE_METHOD = "first-at-token"
BODY_METHOD = "header-footer"

_LABEL_KEYS = {"item_id", "ocr_text_path", "gold_handle", "gold_timestamp", "gold_body", "notes"}


class Field(str, Enum):
    TIMESTAMP = "timestamp"
    HANDLE = "handle"
    BODY = "body"


class Outcome(str, Enum):
    TP = "TP"
    FP = "FP"
    FN = "FN"
    TN = "TN"


@dataclass(frozen=True)
class GoldLabel:
    item_id: str
    ocr_text_path: str
    gold_handle: Optional[str] = None
    gold_timestamp: Optional[str] = None
    gold_body: Optional[str] = None
    notes: Optional[str] = None

    def gold_for(self, field: Field) -> Optional[str]:
        return {
            Field.TIMESTAMP: self.gold_timestamp,
            Field.HANDLE: self.gold_handle,
            Field.BODY: self.gold_body,
        }[Field(field)]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @classmethod
    def from_outcomes(cls, outcomes: Iterable[Outcome]) -> 'ConfusionCounts':
        tally = Counter(outcomes)
        return cls(tp=tally[Outcome.TP], fp=tally[Outcome.FP], fn=tally[Outcome.FN], tn=tally[Outcome.TN])

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self) -> Dict[str, int]:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    return numerator / denominator if denominator else None


@dataclass(frozen=True)
class MetricsReport:
    """
    Accuracy, precision, recall and F1 for one field and method

    Undefined ratios (zero denominators) are None rather than 0.
    """
    field: Field
    method: str
    counts: ConfusionCounts

    @property
    def accuracy(self) -> Optional[float]:
        c = self.counts
        return _ratio(c.tp + c.tn, c.total)

    @property
    def precision(self) -> Optional[float]:
        return _ratio(self.counts.tp, self.counts.tp + self.counts.fp)

    @property
    def recall(self) -> Optional[float]:
        return _ratio(self.counts.tp, self.counts.tp + self.counts.fn)

    @property
    def f1(self) -> Optional[float]:
        p, r = self.precision, self.recall
        if p is None or r is None:
            return None
        return _ratio(2 * p * r, p + r)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": self.field.value,
            "method": self.method,
            "counts": self.counts.to_dict(),
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def _require_str(item_id: Optional[str], entry: Dict[str, Any], key: str, optional: bool = True) -> Optional[str]:
    value = entry.get(key)
    if value is None and optional:
        return None
    if not isinstance(value, str) or (not optional and not value):
        raise SchemaError(item_id, f"{key} must be a {'string' if optional else 'non-empty string'}")
    return value


def load_manifest(path: str) -> List[GoldLabel]:
    """
    Load and validate a manifest: a JSON array of label objects

    Relative `ocr_text_path` values resolve against the manifest directory.

    Raises:
        SchemaError: On malformed entries, duplicate ids or missing text files
        OSError: If the manifest cannot be read
    """
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(None, f"invalid JSON: {e}") from e
    if not isinstance(data, list):
        raise SchemaError(None, "manifest must be a JSON array")

    base_dir = os.path.dirname(os.path.abspath(path))
    labels: List[GoldLabel] = []
    seen = set()
    for position, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise SchemaError(None, f"entry {position} is not an object")
        item_id = _require_str(None, entry, "item_id", optional=False)
        if item_id in seen:
            raise SchemaError(item_id, "duplicate item_id")
        seen.add(item_id)
        unknown = set(entry) - _LABEL_KEYS
        if unknown:
            raise SchemaError(item_id, f"unknown keys {sorted(unknown)}")

        text_path = _require_str(item_id, entry, "ocr_text_path", optional=False)
        resolved = text_path if os.path.isabs(text_path) else os.path.join(base_dir, text_path)
        if not os.path.isfile(resolved):
            raise SchemaError(item_id, f"ocr_text_path not found: {resolved}")

        gold_timestamp = _require_str(item_id, entry, "gold_timestamp")
        if gold_timestamp is not None:
            try:
                Timestamp.parse(gold_timestamp)
            except ValueError as e:
                raise SchemaError(item_id, f"gold_timestamp: {e}") from e

        labels.append(GoldLabel(
            item_id=item_id,
            ocr_text_path=resolved,
            gold_handle=_require_str(item_id, entry, "gold_handle"),
            gold_timestamp=gold_timestamp,
            gold_body=_require_str(item_id, entry, "gold_body"),
            notes=_require_str(item_id, entry, "notes")
        ))
    logger.info(f"Loaded {len(labels)} label(s) from {path}")
    return labels


def timestamps_equal(predicted: str, gold: str) -> bool:
    return Timestamp.parse(predicted).canonical() == Timestamp.parse(gold).canonical()


def handles_equal(predicted: str, gold: str) -> bool:
    return predicted.lstrip("@").casefold() == gold.lstrip("@").casefold()


def bodies_equal(predicted: str, gold: str) -> bool:
    return normalize_text(predicted) == normalize_text(gold)


EQUIVALENCE: Dict[Field, Callable[[str, str], bool]] = {
    Field.TIMESTAMP: timestamps_equal,
    Field.HANDLE: handles_equal,
    Field.BODY: bodies_equal,
}


def score_item(predicted: Optional[str], gold: Optional[str], equal: Callable[[str, str], bool]) -> Outcome:
    """Classify one prediction against its gold value"""
    if predicted is not None:
        if gold is not None and equal(predicted, gold):
            return Outcome.TP
        return Outcome.FP
    return Outcome.FN if gold is not None else Outcome.TN


def predict(text: OcrText, field: Field, method: Union[Method, str], reference: Timestamp) -> Optional[str]:
    """Run the extractor for one field and return its value as a string, or None"""
    field = Field(field)
    try:
        if field is Field.TIMESTAMP:
            return extract_timestamp(text, Method(method), reference).canonical()
        if field is Field.HANDLE:
            return extract_handle(text).name
        return extract_claim(text, Method.M2, reference).body
    except ExtractionError:
        return None


def _method_label(field: Field, method: Union[Method, str]) -> str:
    if field is Field.TIMESTAMP:
        return Method(method).value
    return HANDLE_METHOD if field is Field.HANDLE else BODY_METHOD


def evaluate(
    manifest: List[GoldLabel],
    field: Field,
    method: Union[Method, str] = Method.M2,
    reference: Optional[Timestamp] = None,
    jobs: int = 1
) -> MetricsReport:
    """
    Score one extractor over a manifest

    Raises:
        ManifestEmpty: If the manifest has no items
        EvaluationError: If an item cannot be read; the message names its item_id
    """
    if not manifest:
        raise ManifestEmpty()
    field = Field(field)
    if reference is None:
        raise ValueError("evaluation needs a fixed reference timestamp")
    equal = EQUIVALENCE[field]

    def run(label: GoldLabel) -> Outcome:
        try:
            text = load_ocr_text(label.ocr_text_path)
        except (TweetshotError, OSError) as e:
            raise EvaluationError(f"{label.item_id}: {e}") from e
        outcome = score_item(predict(text, field, method, reference), label.gold_for(field), equal)
        logger.debug(f"{label.item_id} {field.value}: {outcome.value}")
        return outcome

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        outcomes = list(executor.map(run, manifest))

    report = MetricsReport(field=field, method=_method_label(field, method), counts=ConfusionCounts.from_outcomes(outcomes))
    logger.info(f"{field.value}/{report.method}: {report.counts.to_dict()}")
    return report


def format_table(reports: List[MetricsReport]) -> str:
    """Render reports as an aligned table with Accuracy/Precision/Recall/F1 columns"""
    header = ("Field", "Method", "Accuracy", "Precision", "Recall", "F1 Score")
    rows = [header]
    for report in reports:
        cells = [report.accuracy, report.precision, report.recall, report.f1]
        rows.append((report.field.value, report.method) + tuple(
            "n/a" if value is None else f"{value * 100:.0f}%" for value in cells
        ))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) if i < 2 else cell.rjust(widths[i]) for i, cell in enumerate(row))
             for row in rows]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(line.rstrip() for line in lines)
