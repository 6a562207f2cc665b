"""
Unit tests for corpus evaluation
"""
import json
import os
import random

import pytest

from tweetshot.errors import EvaluationError, ManifestEmpty, SchemaError
from tweetshot.evaluation import (
    BUNDLED_MANIFEST,
    EQUIVALENCE,
    ConfusionCounts,
    Field,
    GoldLabel,
    MetricsReport,
    Outcome,
    evaluate,
    format_table,
    load_manifest,
    predict,
    score_item,
)
from tweetshot.extraction import Method
from tweetshot.ocr import load_ocr_text


@pytest.fixture
def bundled():
    return load_manifest(BUNDLED_MANIFEST)


def _write_manifest(tmp_path, entries, texts=None):
    for name, content in (texts or {}).items():
        (tmp_path / name).write_text(content, encoding="utf-8")
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(entries), encoding="utf-8")
    return str(path)


def _oracle(manifest, field, method, reference):
    """Count outcomes item by item"""
    counts = {outcome: 0 for outcome in Outcome}
    for label in manifest:
        predicted = predict(load_ocr_text(label.ocr_text_path), field, method, reference)
        gold = label.gold_for(field)
        if predicted is None:
            counts[Outcome.TN if gold is None else Outcome.FN] += 1
        elif gold is not None and EQUIVALENCE[field](predicted, gold):
            counts[Outcome.TP] += 1
        else:
            counts[Outcome.FP] += 1
    return ConfusionCounts(tp=counts[Outcome.TP], fp=counts[Outcome.FP], fn=counts[Outcome.FN], tn=counts[Outcome.TN])


def _oracle_metrics(c):
    """Accuracy, precision, recall and F1 straight from the counts; None when undefined"""
    accuracy = (c.tp + c.tn) / c.total if c.total else None
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else None
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else None
    if precision is None or recall is None or c.tp == 0:
        f1 = None
    else:
        f1 = 2 * c.tp / (2 * c.tp + c.fp + c.fn)
    return {"accuracy": accuracy, "precision": precision, "recall": recall, "f1": f1}


@pytest.mark.parametrize("predicted,gold,expected", [
    ("a", "a", Outcome.TP),
    ("a", "b", Outcome.FP),
    ("a", None, Outcome.FP),
    (None, "a", Outcome.FN),
    (None, None, Outcome.TN),
])
def test_score_item(predicted, gold, expected):
    assert score_item(predicted, gold, lambda p, g: p == g) is expected


def test_equivalences():
    assert EQUIVALENCE[Field.HANDLE]("@NASA", "nasa")
    assert EQUIVALENCE[Field.TIMESTAMP]("2022-06-24 15:17:00", "2022-06-24 15:17:00")
    assert not EQUIVALENCE[Field.TIMESTAMP]("2022-06-24 15:17:00", "2022-06-24 15:17:01")
    assert EQUIVALENCE[Field.BODY]("Hello,  world!", "hello world")


def test_metrics_arithmetic():
    report = MetricsReport(Field.TIMESTAMP, "m2", ConfusionCounts(tp=6, fp=2, fn=1, tn=1))
    assert report.accuracy == pytest.approx(0.7)
    assert report.precision == pytest.approx(0.75)
    assert report.recall == pytest.approx(6 / 7)
    assert report.f1 == pytest.approx(0.8)


@pytest.mark.parametrize("counts,undefined", [
    (ConfusionCounts(), {"accuracy", "precision", "recall", "f1"}),
    (ConfusionCounts(fn=3, tn=1), {"precision", "f1"}),
    (ConfusionCounts(fp=2, tn=1), {"recall", "f1"}),
])
def test_undefined_metrics_are_none(counts, undefined):
    report = MetricsReport(Field.HANDLE, "first-at-token", counts)
    for name in ("accuracy", "precision", "recall", "f1"):
        assert (getattr(report, name) is None) is (name in undefined), name


def test_f1_undefined_when_nothing_correct():
    report = MetricsReport(Field.HANDLE, "first-at-token", ConfusionCounts(fp=2, fn=2))
    assert report.precision == 0.0
    assert report.recall == 0.0
    assert report.f1 is None


def test_bundled_manifest_loads(bundled):
    assert len(bundled) == 20
    assert len({label.item_id for label in bundled}) == 20
    assert all(os.path.isabs(label.ocr_text_path) for label in bundled)


@pytest.mark.parametrize("field,method", [
    (Field.TIMESTAMP, Method.M1),
    (Field.TIMESTAMP, Method.M2),
    (Field.HANDLE, Method.M2),
    (Field.BODY, Method.M2),
])
def test_evaluate_matches_oracle(field, method, bundled, reference):
    report = evaluate(bundled, field, method, reference)
    counts = _oracle(bundled, field, method, reference)
    assert report.counts == counts
    assert report.counts.total == len(bundled)
    expected = _oracle_metrics(counts)
    for name, value in expected.items():
        actual = getattr(report, name)
        if value is None:
            assert actual is None, name
        else:
            assert actual == pytest.approx(value, abs=1e-9), name


@pytest.mark.parametrize("counts", [
    ConfusionCounts(),
    ConfusionCounts(tn=3),
    ConfusionCounts(fn=2, tn=1),
    ConfusionCounts(fp=2),
    ConfusionCounts(tp=1),
    ConfusionCounts(tp=5, fp=3, fn=2, tn=7),
])
def test_metrics_match_formulas(counts):
    report = MetricsReport(Field.TIMESTAMP, Method.M2.value, counts)
    for name, value in _oracle_metrics(counts).items():
        actual = getattr(report, name)
        if value is None:
            assert actual is None, name
        else:
            assert actual == pytest.approx(value, abs=1e-9), name


def test_timestamp_counts_on_bundled_corpus(bundled, reference):
    m1 = evaluate(bundled, Field.TIMESTAMP, Method.M1, reference)
    m2 = evaluate(bundled, Field.TIMESTAMP, Method.M2, reference)
    assert m1.counts == ConfusionCounts(tp=12, fp=6, fn=1, tn=1)
    assert m2.counts == ConfusionCounts(tp=12, fp=1, fn=1, tn=6)


def test_filtered_method_wins_on_bundled_corpus(bundled, reference):
    m1 = evaluate(bundled, Field.TIMESTAMP, Method.M1, reference)
    m2 = evaluate(bundled, Field.TIMESTAMP, Method.M2, reference)
    assert m2.recall >= m1.recall
    assert m2.precision > m1.precision
    assert m2.f1 > m1.f1
    assert m2.accuracy > m1.accuracy


def test_handle_and_body_counts(bundled, reference):
    assert evaluate(bundled, Field.HANDLE, reference=reference).counts == ConfusionCounts(tp=18, fp=1, tn=1)
    assert evaluate(bundled, Field.BODY, reference=reference).counts == ConfusionCounts(tp=19, tn=1)


def test_report_labels(bundled, reference):
    assert evaluate(bundled, Field.TIMESTAMP, "m1", reference).method == "m1"
    assert evaluate(bundled, Field.HANDLE, reference=reference).method == "first-at-token"
    assert evaluate(bundled, Field.BODY, reference=reference).method == "header-footer"


def test_counts_independent_of_order_and_jobs(bundled, reference):
    expected = evaluate(bundled, Field.TIMESTAMP, Method.M2, reference).counts
    rng = random.Random(11)
    for _ in range(100):
        shuffled = list(bundled)
        rng.shuffle(shuffled)
        counts = evaluate(shuffled, Field.TIMESTAMP, Method.M2, reference, jobs=rng.randint(1, 8)).counts
        assert counts == expected
        assert counts.total == len(bundled)


def test_perfect_manifest(tmp_path, reference):
    texts = {"a.txt": "Nick Hanauer\n@NickHanauer\nWages matter.\n6:00 AM · May 25, 2022\n"}
    path = _write_manifest(tmp_path, [{
        "item_id": "a",
        "ocr_text_path": "a.txt",
        "gold_handle": "nickhanauer",
        "gold_timestamp": "2022-05-25 06:00:00",
        "gold_body": "wages matter",
    }], texts)
    manifest = load_manifest(path)
    for field in Field:
        report = evaluate(manifest, field, Method.M2, reference)
        assert (report.accuracy, report.precision, report.recall, report.f1) == (1.0, 1.0, 1.0, 1.0)


def test_empty_manifest(tmp_path, reference):
    with pytest.raises(ManifestEmpty, match="manifest empty"):
        evaluate(load_manifest(_write_manifest(tmp_path, [])), Field.TIMESTAMP, Method.M2, reference)


def test_evaluate_requires_reference(bundled):
    with pytest.raises(ValueError):
        evaluate(bundled, Field.TIMESTAMP, Method.M2)


def test_unreadable_item_names_its_id(tmp_path, reference):
    (tmp_path / "bad.txt").write_bytes(b"ok\xff\n")
    label = GoldLabel(item_id="broken", ocr_text_path=str(tmp_path / "bad.txt"))
    with pytest.raises(EvaluationError, match="broken"):
        evaluate([label], Field.HANDLE, reference=reference)


@pytest.mark.parametrize("entries,reason", [
    ({"item_id": "x"}, "must be a JSON array"),
    ([{"item_id": "x", "ocr_text_path": "missing.txt"}], "not found"),
    ([{"item_id": "x", "ocr_text_path": "a.txt"}, {"item_id": "x", "ocr_text_path": "a.txt"}], "duplicate"),
    ([{"item_id": "x", "ocr_text_path": "a.txt", "gold_author": "y"}], "unknown keys"),
    ([{"item_id": "x", "ocr_text_path": "a.txt", "gold_timestamp": "2022-06-24"}], "gold_timestamp"),
    ([{"item_id": "x", "ocr_text_path": "a.txt", "gold_handle": 7}], "gold_handle"),
    ([{"ocr_text_path": "a.txt"}], "item_id"),
    (["a.txt"], "not an object"),
])
def test_manifest_schema_errors(entries, reason, tmp_path):
    path = _write_manifest(tmp_path, entries, {"a.txt": "text\n"})
    with pytest.raises(SchemaError, match=reason):
        load_manifest(path)


def test_manifest_invalid_json(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text("[{", encoding="utf-8")
    with pytest.raises(SchemaError, match="invalid JSON"):
        load_manifest(str(path))


def test_format_table():
    reports = [
        MetricsReport(Field.TIMESTAMP, "m2", ConfusionCounts(tp=6, fp=2, fn=1, tn=1)),
        MetricsReport(Field.HANDLE, "first-at-token", ConfusionCounts(tn=3)),
    ]
    lines = format_table(reports).splitlines()
    assert lines[0].split() == ["Field", "Method", "Accuracy", "Precision", "Recall", "F1", "Score"]
    assert set(lines[1].replace(" ", "")) == {"-"}
    assert lines[2].split() == ["timestamp", "m2", "70%", "75%", "86%", "80%"]
    assert lines[3].split() == ["handle", "first-at-token", "100%", "n/a", "n/a", "n/a"]
    assert len({len(line) for line in lines[:2]}) == 1


def test_report_to_dict():
    report = MetricsReport(Field.BODY, "header-footer", ConfusionCounts(tp=1, tn=1))
    assert report.to_dict() == {
        "field": "body",
        "method": "header-footer",
        "counts": {"tp": 1, "fp": 0, "fn": 0, "tn": 1},
        "accuracy": 1.0,
        "precision": 1.0,
        "recall": 1.0,
        "f1": 1.0,
    }
