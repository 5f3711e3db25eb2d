"""Shared test fixtures: the tabular example log and random log generators."""

from __future__ import annotations

import random

from logskeleton import ActivityLog, ActivityTrace, regular
from logskeleton.ingest import parse_trace_lines

# The running example log: 14 distinct traces, 20 in total.
L1_TEXT = """\
a1,a2,a4,a5,a6,a2,a4,a5,a6,a4,a2,a5,a7
a1,a2,a4,a5,a6,a3,a4,a5,a6,a4,a3,a5,a6,a2,a4,a5,a7
a1,a2,a4,a5,a6,a3,a4,a5,a7
a1,a2,a4,a5,a6,a3,a4,a5,a8 ×2
a1,a2,a4,a5,a6,a4,a3,a5,a7
a1,a2,a4,a5,a8 ×4
a1,a3,a4,a5,a6,a4,a3,a5,a7
a1,a3,a4,a5,a6,a4,a3,a5,a8
a1,a3,a4,a5,a8
a1,a4,a2,a5,a6,a4,a2,a5,a6,a3,a4,a5,a6,a2,a4,a5,a8
a1,a4,a2,a5,a7 ×3
a1,a4,a2,a5,a8
a1,a4,a3,a5,a7
a1,a4,a3,a5,a8
"""

SIGMA_1 = ActivityTrace.of(*"a1 a2 a4 a5 a6 a2 a4 a5 a6 a4 a2 a5 a7".split())


def l1() -> ActivityLog:
    return parse_trace_lines(L1_TEXT)


def a(name: str):
    return regular(name)


def tr(*names: str) -> ActivityTrace:
    return ActivityTrace.of(*names)


def l1_as_xes() -> str:
    """The same log encoded as a minimal XES document."""
    rows = []
    for trace, mult in l1().sorted_traces():
        events = "".join(
            f'<event><string key="concept:name" value="{act.name}"/>'
            f'<string key="lifecycle:transition" value="complete"/></event>'
            for act in trace
        )
        rows.extend([f"<trace>{events}</trace>"] * mult)
    body = "".join(rows)
    return (
        '<?xml version="1.0" encoding="UTF-8"?>'
        '<log xmlns="http://www.xes-standard.org/">'
        '<string key="concept:name" value="L1"/>'
        f"{body}</log>"
    )


def random_log(
    rng: random.Random,
    max_activities: int = 6,
    max_distinct: int = 8,
    max_len: int = 10,
    allow_empty_log: bool = True,
    allow_unused_activity: bool = True,
) -> ActivityLog:
    """A small random log with explicit alphabet, reproducible from ``rng``."""
    n = rng.randint(1, max_activities)
    names = [chr(ord("a") + i) for i in range(n)]
    alphabet = [regular(x) for x in names]
    low = 0 if allow_empty_log else 1
    counts: dict[ActivityTrace, int] = {}
    for _ in range(rng.randint(low, max_distinct)):
        length = rng.randint(0, max_len)
        trace = ActivityTrace(tuple(rng.choice(alphabet) for _ in range(length)))
        counts[trace] = counts.get(trace, 0) + rng.randint(1, 3)
    declared = list(alphabet)
    if allow_unused_activity and rng.random() < 0.3:
        declared.append(regular("unused"))
    return ActivityLog.build(counts, alphabet=declared)


def random_trace(rng: random.Random, log: ActivityLog, max_len: int = 10) -> ActivityTrace:
    alphabet = sorted(log.alphabet)
    length = rng.randint(0, max_len)
    return ActivityTrace(tuple(rng.choice(alphabet) for _ in range(length)))
