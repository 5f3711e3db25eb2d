"""Log parsing and report serialization.

Three input formats produce activity logs:

* ``trace-lines`` — one trace per line, activities separated by a
  delimiter (default comma) with csv-style double-quote quoting, and an
  optional space-separated trailing frequency suffix ``×k``.  A line
  consisting only of ``×k`` encodes the empty trace.  Blank lines and
  lines starting with ``#`` are ignored.  Activity names containing the
  delimiter, quotes, whitespace at either end, the ``×`` sign, or a
  leading ``#`` must be quoted.  The marker tokens ``|>`` and ``[]`` are
  reserved and rejected as activity names.
* ``csv`` — columns case id / activity / ordering index (header names
  ``case``/``case-id``/``case_id``, ``activity``, ``index``/``idx``/
  ``order``); rows are grouped by case and sorted by index.
* ``xes-subset`` — XML with ``trace`` elements containing ``event``
  elements; only the ``concept:name`` string attribute of each event is
  used, everything else is ignored.

Classification reports are tab-separated rows (id, label, reason,
witness pair, required set, forbidden set), with a JSON variant; both
round-trip.
"""

from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path
from typing import Iterable, Sequence
from xml.etree import ElementTree

from .classify import ClassificationVerdict, NEGATIVE, POSITIVE, Violation
from .model import (
    Activity,
    ActivityLog,
    ActivityTrace,
    END_DISPLAY,
    FilterSpec,
    START_DISPLAY,
    regular,
)
from .render import resolve_activity_token

FORMATS = ("trace-lines", "csv", "xes-subset")

_FREQ_SUFFIX = re.compile(r"(?:^|\s)×(\d+)$")
_RESERVED = {START_DISPLAY, END_DISPLAY}


class ParseError(ValueError):
    """Input could not be parsed; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    return data


def _split_lines(data: bytes | str) -> list[str]:
    # split on real newlines only; csv quoting cannot protect a line-based
    # format from stray unicode line separators inside names
    return re.split(r"\r?\n", _decode(data))


def _check_name(name: str, line: int | None) -> str:
    if not name:
        raise ParseError("empty activity token", line)
    if name in _RESERVED:
        raise ParseError(f"activity name {name!r} is reserved for the trace markers", line)
    return name


# ---------------------------------------------------------------------------
# trace-lines
# ---------------------------------------------------------------------------


def _needs_quoting(name: str, delimiter: str) -> bool:
    return (
        delimiter in name
        or '"' in name
        or name != name.strip()
        or name.startswith("#")
        or "×" in name
    )


def _quote_field(name: str, delimiter: str) -> str:
    if "\n" in name or "\r" in name:
        # the format is line-based; such names only fit the other formats
        raise ValueError(f"activity name with a line break is not representable: {name!r}")
    if _needs_quoting(name, delimiter):
        return '"' + name.replace('"', '""') + '"'
    return name


def _split_fields(body: str, delimiter: str, line: int | None) -> list[str]:
    rows = list(csv.reader([body], delimiter=delimiter, quotechar='"'))
    if len(rows) != 1:
        raise ParseError("malformed line", line)
    return rows[0]


def parse_trace_line(raw: str, delimiter: str = ",", line: int | None = None) -> tuple[ActivityTrace, int] | None:
    """One line to (trace, cardinality); ``None`` for blanks and comments."""
    text = raw.strip()
    if not text or text.startswith("#"):
        return None
    mult = 1
    if not text.endswith('"'):
        m = _FREQ_SUFFIX.search(text)
        if m:
            mult = int(m.group(1))
            if mult <= 0:
                raise ParseError("frequency suffix must be positive", line)
            text = text[: m.start()].strip()
    if not text:
        return ActivityTrace(), mult
    names = [_check_name(f, line) for f in _split_fields(text, delimiter, line)]
    return ActivityTrace(tuple(regular(n) for n in names)), mult


def parse_trace_lines(data: bytes | str, delimiter: str = ",") -> ActivityLog:
    """Parse a trace-lines document into an activity log."""
    counts: dict[ActivityTrace, int] = {}
    for lineno, raw in enumerate(_split_lines(data), start=1):
        parsed = parse_trace_line(raw, delimiter, lineno)
        if parsed is None:
            continue
        trace, mult = parsed
        counts[trace] = counts.get(trace, 0) + mult
    return ActivityLog.build(counts)


def parse_trace_list(data: bytes | str, delimiter: str = ",") -> list[ActivityTrace]:
    """Parse a trace-lines document into an ordered trace list.

    Frequency suffixes expand to consecutive copies; intended for test
    traces fed to the classifier, where order and duplicates matter.
    """
    traces: list[ActivityTrace] = []
    for lineno, raw in enumerate(_split_lines(data), start=1):
        parsed = parse_trace_line(raw, delimiter, lineno)
        if parsed is None:
            continue
        trace, mult = parsed
        traces.extend([trace] * mult)
    return traces


def write_trace_lines(log: ActivityLog, delimiter: str = ",") -> str:
    """Serialize a log; ``parse_trace_lines`` inverts this exactly."""
    lines = []
    for trace, mult in log.sorted_traces():
        body = delimiter.join(_quote_field(a.name, delimiter) for a in trace)
        if len(trace) == 0:
            lines.append(f"×{mult}")
        elif mult != 1:
            lines.append(f"{body} ×{mult}")
        else:
            lines.append(body)
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# csv (case id / activity / index)
# ---------------------------------------------------------------------------

_CSV_HEADERS = {
    "case": "case",
    "case-id": "case",
    "case_id": "case",
    "activity": "activity",
    "index": "index",
    "idx": "index",
    "order": "index",
}


def parse_csv(data: bytes | str) -> ActivityLog:
    reader = csv.reader(io.StringIO(_decode(data)))
    try:
        header = next(reader)
    except StopIteration:
        return ActivityLog.build([])
    columns: dict[str, int] = {}
    for i, name in enumerate(header):
        canonical = _CSV_HEADERS.get(name.strip().lower())
        if canonical is not None and canonical not in columns:
            columns[canonical] = i
    missing = {"case", "activity", "index"} - set(columns)
    if missing:
        raise ParseError(f"missing columns: {sorted(missing)}", line=1)

    events: dict[str, dict[int, str]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(columns.values()):
            raise ParseError("row has too few columns", lineno)
        case = row[columns["case"]]
        name = _check_name(row[columns["activity"]], lineno)
        try:
            index = int(row[columns["index"]])
        except ValueError:
            raise ParseError(f"ordering index is not an integer: {row[columns['index']]!r}", lineno) from None
        per_case = events.setdefault(case, {})
        if index in per_case:
            raise ParseError(f"duplicate ordering index {index} for case {case!r}", lineno)
        per_case[index] = name

    traces = [
        ActivityTrace(tuple(regular(per_case[i]) for i in sorted(per_case)))
        for _, per_case in sorted(events.items())
    ]
    return ActivityLog.build(traces)


# ---------------------------------------------------------------------------
# xes subset
# ---------------------------------------------------------------------------


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def parse_xes(data: bytes | str) -> ActivityLog:
    """Minimal XES reader: traces of events, activity = ``concept:name``."""
    try:
        root = ElementTree.fromstring(_decode(data))
    except ElementTree.ParseError as exc:
        line, column = exc.position
        raise ParseError(f"malformed XML at column {column}: {exc.msg}", line) from None
    traces: list[ActivityTrace] = []
    trace_elements = [el for el in root.iter() if _localname(el.tag) == "trace"]
    for trace_index, trace_el in enumerate(trace_elements, start=1):
        names: list[str] = []
        for event_el in trace_el:
            if _localname(event_el.tag) != "event":
                continue
            name = None
            for attr in event_el:
                if _localname(attr.tag) == "string" and attr.get("key") == "concept:name":
                    name = attr.get("value")
                    break
            if name is None:
                raise ParseError(f"trace {trace_index}: event without a concept:name attribute")
            names.append(_check_name(name, None))
        traces.append(ActivityTrace(tuple(regular(n) for n in names)))
    return ActivityLog.build(traces)


# ---------------------------------------------------------------------------
# format dispatch
# ---------------------------------------------------------------------------


def parse_log(data: bytes | str, fmt: str) -> ActivityLog:
    if fmt == "trace-lines":
        return parse_trace_lines(data)
    if fmt == "csv":
        return parse_csv(data)
    if fmt in ("xes-subset", "xes"):
        return parse_xes(data)
    raise ValueError(f"unknown log format: {fmt!r}")


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".xes":
        return "xes-subset"
    if suffix == ".csv":
        return "csv"
    return "trace-lines"


def load_log(path: str | Path, fmt: str | None = None) -> ActivityLog:
    data = Path(path).read_bytes()
    return parse_log(data, fmt or detect_format(path))


# ---------------------------------------------------------------------------
# classification reports
# ---------------------------------------------------------------------------


def _join_names(activities: Iterable[Activity]) -> str:
    return ",".join(_quote_field(a.display, ",") for a in activities)


def _split_names(field: str) -> list[Activity]:
    if not field:
        return []
    return [resolve_activity_token(token) for token in _split_fields(field, ",", None)]


def verdict_to_row(v: ClassificationVerdict) -> list[str]:
    witness = v.witness
    return [
        str(v.index + 1),
        v.label,
        v.reason,
        _join_names(witness.pair) if witness else "",
        _join_names(sorted(witness.spec.required)) if witness and witness.spec else "",
        _join_names(sorted(witness.spec.forbidden)) if witness and witness.spec else "",
    ]


def write_report(verdicts: Sequence[ClassificationVerdict]) -> str:
    """Tab-separated report, one row per trace."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    writer.writerow(["id", "label", "reason", "witness", "required", "forbidden"])
    for v in verdicts:
        writer.writerow(verdict_to_row(v))
    return out.getvalue()


def parse_report(text: str) -> list[ClassificationVerdict]:
    reader = csv.reader(io.StringIO(text), delimiter="\t")
    rows = list(reader)
    verdicts = []
    for row in rows[1:]:
        if not row:
            continue
        trace_id, label, reason, witness, required, forbidden = row
        index = int(trace_id) - 1
        if label == POSITIVE:
            verdicts.append(ClassificationVerdict(index, POSITIVE, "+"))
            continue
        pair_list = _split_names(witness)
        if len(pair_list) != 2:
            raise ParseError(f"witness of row {trace_id} is not an activity pair")
        spec = FilterSpec(frozenset(_split_names(required)), frozenset(_split_names(forbidden)))
        violation = Violation(reason, (pair_list[0], pair_list[1]), spec)
        verdicts.append(ClassificationVerdict(index, NEGATIVE, reason, violation))
    return verdicts


def verdict_to_dict(v: ClassificationVerdict) -> dict:
    data: dict = {"id": v.index + 1, "label": v.label, "reason": v.reason}
    if v.witness is not None:
        data["witness"] = [a.display for a in v.witness.pair]
        spec = v.witness.spec
        data["required"] = sorted(a.display for a in spec.required) if spec else []
        data["forbidden"] = sorted(a.display for a in spec.forbidden) if spec else []
    else:
        data["witness"] = None
        data["required"] = []
        data["forbidden"] = []
    return data


def report_json(verdicts: Sequence[ClassificationVerdict]) -> str:
    return canonical_json({"verdicts": [verdict_to_dict(v) for v in verdicts]})


def canonical_json(payload: object) -> str:
    """The one JSON rendering used everywhere (CLI and service byte-parity)."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
