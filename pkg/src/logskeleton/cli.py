"""Command line interface.

Subcommands: ``build`` renders the skeleton of a log as DOT or as a
JSON graph document, ``classify`` labels test traces against a training
log, ``serve`` starts the HTTP service.  Exit codes: 0 success, 1 usage
error, 2 input/parse error, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from pathlib import Path

from .classify import ClassifierConfig, classify_batch
from .ingest import (
    ParseError,
    canonical_json,
    detect_format,
    load_log,
    parse_trace_list,
    report_json,
    write_report,
)
from .model import FilterSpec, regular
from .render import ViewConfig, parse_relation_tokens, resolve_activity_token, view_dot, view_payload

DATA_DIR_ENV = "LOGSKELETON_DATA_DIR"
UI_DIR_ENV = "LOGSKELETON_UI_DIR"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 1 instead of argparse's 2
        raise _UsageError(message)


def _csv_names(value: str | None) -> list[str]:
    if not value:
        return []
    return [token for token in value.split(",") if token != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logskeleton", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    build = sub.add_parser("build", help="render the skeleton of a log")
    build.add_argument("log", help="log file (trace-lines, csv, or xes)")
    build.add_argument("--format", choices=("trace-lines", "csv", "xes-subset"), default=None)
    output = build.add_mutually_exclusive_group()
    output.add_argument("--dot", action="store_true", help="DOT output (default)")
    output.add_argument("--json", action="store_true", help="JSON graph document")
    build.add_argument("--relations", default=None, help="comma-separated relation kinds (or eq/aa/ab/nt/df)")
    build.add_argument("--required", default=None, help="comma-separated required activities")
    build.add_argument("--forbidden", default=None, help="comma-separated forbidden activities")
    build.add_argument("--activities", default=None, help="comma-separated visible activities")
    build.add_argument("--hyper", action="store_true", help="group parallel edges into hyper arcs")
    build.add_argument("--out", default=None, help="output file (default stdout)")
    build.set_defaults(func=_cmd_build)

    classify = sub.add_parser("classify", help="classify test traces against a training log")
    classify.add_argument("training", help="training log file")
    classify.add_argument("tests", help="test traces (trace-lines; other formats classify in sorted order)")
    classify.add_argument("--format", choices=("trace-lines", "csv", "xes-subset"), default=None)
    classify.add_argument("--max-filter-size", type=int, default=3)
    classify.add_argument("--df-support", type=int, default=16)
    classify.add_argument("--negative-cap", type=int, default=None)
    classify.add_argument("--strict-empty", action="store_true", help="do not skip filters that empty the training log")
    classify.add_argument("--json", action="store_true", help="machine-readable report")
    classify.add_argument("--report", default=None, help="report file (default stdout)")
    classify.set_defaults(func=_cmd_classify)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--data-dir", default=os.environ.get(DATA_DIR_ENV))
    serve.add_argument("--ui-dir", default=os.environ.get(UI_DIR_ENV))
    serve.add_argument("--max-upload", type=int, default=None, help="upload size limit in bytes")
    serve.add_argument("--timeout", type=float, default=None, help="classification timeout in seconds")
    serve.add_argument("--no-cors", action="store_true")
    serve.set_defaults(func=_cmd_serve)

    return parser


def _cmd_build(args: argparse.Namespace) -> int:
    log = load_log(args.log, args.format)
    spec = FilterSpec(
        frozenset(regular(n) for n in _csv_names(args.required)),
        frozenset(regular(n) for n in _csv_names(args.forbidden)),
    )
    relation_tokens = _csv_names(args.relations)
    view = ViewConfig(
        activities=(
            frozenset(resolve_activity_token(t) for t in _csv_names(args.activities))
            if args.activities
            else None
        ),
        relations=parse_relation_tokens(relation_tokens) if relation_tokens else ViewConfig().relations,
        hyper=args.hyper,
    )
    name = Path(args.log).name
    if args.json:
        text = canonical_json(view_payload(log, spec, view, log_name=name))
    else:
        text = view_dot(log, spec, view, log_name=name)
    _write_output(args.out, text)
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    training = load_log(args.training, args.format)
    test_format = args.format or detect_format(args.tests)
    if test_format == "trace-lines":
        tests = parse_trace_list(Path(args.tests).read_bytes())
    else:
        test_log = load_log(args.tests, test_format)
        tests = [trace for trace, mult in test_log.sorted_traces() for _ in range(mult)]
    config = ClassifierConfig(
        max_filter_size=args.max_filter_size,
        df_support_min=args.df_support,
        negative_cap=args.negative_cap,
        skip_empty_training=not args.strict_empty,
    )
    verdicts = classify_batch(training, tests, config)
    text = report_json(verdicts) if args.json else write_report(verdicts)
    _write_output(args.report, text)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import ServiceConfig, run

    kwargs: dict = {
        "data_dir": Path(args.data_dir) if args.data_dir else None,
        "ui_dir": Path(args.ui_dir) if args.ui_dir else None,
        "cors": not args.no_cors,
    }
    if args.max_upload is not None:
        kwargs["max_upload_bytes"] = args.max_upload
    if args.timeout is not None:
        kwargs["classify_timeout_s"] = args.timeout
    run(ServiceConfig(**kwargs), host=args.host, port=args.port)
    return 0


def _write_output(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (None, 0) else 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
