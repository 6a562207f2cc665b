"""
Command-line entry point: extract, search, verify and eval
"""
import argparse
import json
import logging
import os
import sys
import tempfile
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

from . import __version__
from .archive import search_archives
from .client import ArchiveClient
from .config import OUTPUT_FORMATS, RunConfig, Settings
from .endpoints import get_endpoint
from .errors import (
    ArchiveError,
    ConfigError,
    EvaluationError,
    ExtractionError,
    MissingField,
    OcrError,
    TweetshotError,
)
from .evaluation import BUNDLED_MANIFEST, Field, evaluate, format_table, load_manifest
from .extraction import ExtractedClaim, Method, Timestamp, extract_claim, filter_dates_m2, find_date_candidates_m1
from .ocr import OcrText, read_inputs
from .verifier import Verdict, VerdictStatus, verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARTIAL = 2


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; route them to exit 1 instead"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _reference_arg(value: str) -> Timestamp:
    try:
        return Timestamp.parse(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected 'YYYY-MM-DD HH:MM:SS': {e}")


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {number}")
    return number


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--method", choices=[m.value for m in Method], default=Method.M2.value,
                        help="timestamp method (default: m2)")
    common.add_argument("--reference", type=_reference_arg,
                        help="reference time for filling missing fields, 'YYYY-MM-DD HH:MM:SS' "
                             "(default: today at midnight; required by eval)")
    common.add_argument("--cdx-endpoint", help="endpoint name or CDX URL (default: wayback)")
    common.add_argument("--window-days", type=_positive_int, default=1,
                        help="search window in days around the claimed date (default: 1)")
    common.add_argument("--fetch-pages", action="store_true", help="fetch replay pages and match the tweet text")
    replay = common.add_mutually_exclusive_group()
    replay.add_argument("--fixtures", metavar="DIR", help="replay HTTP responses recorded in DIR")
    replay.add_argument("--record", metavar="DIR", help="record live HTTP responses into DIR")
    common.add_argument("--jobs", type=_positive_int, help="parallel OCR runs, page fetches and eval items")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default="json", help="output format (default: json)")
    common.add_argument("--output", metavar="PATH", help="write the result to PATH instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")

    parser = _ArgumentParser(prog="tweetshot", description="Check tweet screenshots against web archives")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    extract = commands.add_parser("extract", parents=[common], help="extract handle, timestamp and text")
    extract.add_argument("inputs", nargs="+", metavar="INPUT", help="screenshot image or .txt OCR text")
    extract.add_argument("--candidates", action="store_true", help="include Method 1 candidates and Method 2 survivors")

    search = commands.add_parser("search", parents=[common], help="list archived captures for a screenshot")
    search.add_argument("inputs", nargs=1, metavar="INPUT", help="claim .json, screenshot image or .txt OCR text")

    verify_cmd = commands.add_parser("verify", parents=[common], help="extract, search and verify")
    verify_cmd.add_argument("inputs", nargs=1, metavar="INPUT", help="screenshot image or .txt OCR text")

    eval_cmd = commands.add_parser("eval", parents=[common], help="score extraction against a labelled manifest")
    eval_cmd.add_argument("inputs", nargs="?", metavar="MANIFEST", help="manifest JSON (default: bundled corpus)")
    eval_cmd.add_argument("--include-body", action="store_true", help="also score tweet text extraction")
    return parser


def build_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    """Merge parsed flags over environment settings"""
    inputs = args.inputs
    if inputs is None:
        inputs = [BUNDLED_MANIFEST]
    elif isinstance(inputs, str):
        inputs = [inputs]
    return RunConfig(
        command=args.command,
        inputs=tuple(inputs),
        method=Method(args.method),
        reference=args.reference,
        cdx_endpoint=args.cdx_endpoint or settings.cdx_endpoint,
        window_days=args.window_days,
        fetch_pages=args.fetch_pages,
        fixtures_dir=args.fixtures,
        record_dir=args.record,
        jobs=args.jobs or settings.jobs,
        output_format=args.format,
        output_path=args.output,
        ocr_cmd=settings.ocr_cmd,
        timeout=settings.timeout,
        show_candidates=getattr(args, "candidates", False),
        include_body=getattr(args, "include_body", False),
    )


def create_client(config: RunConfig) -> ArchiveClient:
    endpoint = get_endpoint(config.cdx_endpoint)
    if config.fixtures_dir:
        return ArchiveClient.from_fixtures(config.fixtures_dir, endpoint=endpoint, timeout=config.timeout)
    if config.record_dir:
        return ArchiveClient.recording(config.record_dir, endpoint=endpoint, timeout=config.timeout)
    return ArchiveClient(endpoint=endpoint, timeout=config.timeout)


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_output(text: str, path: Optional[str]) -> None:
    """Print to stdout, or replace `path` atomically"""
    if not path:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tweetshot-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    logger.info(f"Wrote result to {path}")


def _stage_of(error: BaseException) -> str:
    if isinstance(error, OcrError):
        return "ocr"
    if isinstance(error, ExtractionError):
        return "extract"
    if isinstance(error, ArchiveError):
        return "search"
    if isinstance(error, EvaluationError):
        return "eval"
    if isinstance(error, ConfigError):
        return "config"
    return "input"


def error_payload(error: BaseException) -> Dict[str, Any]:
    return {"error": {"stage": _stage_of(error), "type": type(error).__name__, "message": str(error)}}


# extract

def _candidates_payload(text: OcrText, reference: Timestamp) -> Dict[str, Any]:
    m1 = find_date_candidates_m1(text, reference)
    return {
        Method.M1.value: [dict(c.to_dict(), resolved=ts.canonical()) for c, ts in m1],
        Method.M2.value: [dict(c.to_dict(), resolved=ts.canonical()) for c, ts in filter_dates_m2(m1)],
    }


def _claim_text(claim: ExtractedClaim) -> str:
    handle = None
    if claim.handle is not None:
        handle = f"@{claim.handle.name}" + ("..." if claim.handle.truncated else "")
    rows = [
        ("handle", handle),
        ("timestamp", claim.timestamp.canonical() if claim.timestamp else None),
        ("body", claim.body),
        ("flags", ", ".join(sorted(f.value for f in claim.flags)) or None),
    ]
    return "\n".join(f"{name}: {'-' if value is None else value}" for name, value in rows)


def cmd_extract(config: RunConfig) -> Tuple[str, int]:
    reference = config.effective_reference
    texts = read_inputs(config.inputs, config.ocr_cmd, config.timeout, config.jobs)
    claims = [extract_claim(text, config.method, reference) for text in texts]
    exit_code = EXIT_OK if all(c.is_complete for c in claims) else EXIT_PARTIAL

    if config.output_format == "text":
        return "\n\n".join(_claim_text(c) for c in claims) + "\n", exit_code

    payloads = []
    for text, claim in zip(texts, claims):
        payload = claim.to_dict()
        if config.show_candidates:
            payload["candidates"] = _candidates_payload(text, reference)
        payloads.append(payload)
    return to_json(payloads[0] if len(payloads) == 1 else payloads), exit_code


# search

def load_claim(path: str, config: RunConfig) -> ExtractedClaim:
    """Read a claim from `extract` JSON output, or extract one from an image/text input"""
    if path.lower().endswith(".json"):
        with open(path, encoding="utf-8") as f:
            try:
                return ExtractedClaim.from_dict(json.load(f))
            except (ValueError, KeyError, TypeError) as e:
                raise ConfigError(f"{path}: not a claim document: {e}") from e
    text = read_inputs([path], config.ocr_cmd, config.timeout, 1)[0]
    return extract_claim(text, config.method, config.effective_reference)


def cmd_search(config: RunConfig) -> Tuple[str, int]:
    claim = load_claim(config.inputs[0], config)
    with create_client(config) as client:
        snapshots = search_archives(claim, client, config.window_days)
    if config.output_format == "text":
        return "".join(f"{s.replay_url}\n" for s in snapshots), EXIT_OK
    return to_json([s.to_dict() for s in snapshots]), EXIT_OK


# verify

def run_verify(claim: ExtractedClaim, client: ArchiveClient, config: RunConfig) -> Verdict:
    try:
        snapshots = search_archives(claim, client, config.window_days)
    except MissingField as e:
        return Verdict(VerdictStatus.INCONCLUSIVE, notes=(f"archive search not possible: {e}",))
    return verify(claim, snapshots, client, fetch_pages=config.fetch_pages, jobs=config.jobs)


def cmd_verify(config: RunConfig) -> Tuple[str, int]:
    claim = load_claim(config.inputs[0], config)
    with create_client(config) as client:
        verdict = run_verify(claim, client, config)
    if config.output_format == "text":
        lines = [f"{verdict.status.value} (score {verdict.score}, {verdict.to_dict()['score_model']})"]
        if verdict.matched_snapshot is not None:
            lines.append(f"matched: {verdict.matched_snapshot.replay_url}")
        lines.extend(f"- {note}" for note in verdict.notes)
        return "\n".join(lines) + "\n", EXIT_OK
    return to_json(verdict.to_dict()), EXIT_OK


# eval

def cmd_eval(config: RunConfig) -> Tuple[str, int]:
    if config.reference is None:
        raise ConfigError("eval requires --reference for reproducible metrics")
    manifest_path = config.inputs[0]
    manifest = load_manifest(manifest_path)

    runs = [(Field.TIMESTAMP, Method.M1), (Field.TIMESTAMP, Method.M2), (Field.HANDLE, Method.M2)]
    if config.include_body:
        runs.append((Field.BODY, Method.M2))
    reports = [evaluate(manifest, field, method, config.reference, config.jobs) for field, method in runs]

    if config.output_format == "text":
        return format_table(reports) + "\n", EXIT_OK
    payload = {
        "manifest": manifest_path,
        "items": len(manifest),
        "reference": config.reference.canonical(),
        "reports": [r.to_dict() for r in reports],
    }
    return to_json(payload), EXIT_OK


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig], Tuple[str, int]]] = {
    "extract": cmd_extract,
    "search": cmd_search,
    "verify": cmd_verify,
    "eval": cmd_eval,
}


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code (0 ok, 1 error, 2 partial extraction)"""
    output_path = None
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as e:
            # --help and --version
            return EXIT_OK if e.code in (None, 0) else EXIT_ERROR
        _configure_logging(args.verbose)
        output_path = args.output
        config = build_config(args, Settings.from_env())
        text, exit_code = COMMAND_HANDLERS[config.command](config)
        write_output(text, config.output_path)
        return exit_code
    except (TweetshotError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        try:
            write_output(to_json(error_payload(e)), output_path)
        except OSError:
            sys.stdout.write(to_json(error_payload(e)))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
