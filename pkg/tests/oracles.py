"""Independent brute-force evaluations the implementation is checked against.

Everything here works directly off the defining formulas using only
trace projection, subtrace counting, and first/last lookups; none of the
position-index bookkeeping or bitmask machinery of the package's own
skeleton builder and classifier is reused.
"""

from __future__ import annotations

from itertools import chain, combinations

from logskeleton import (
    ActivityLog,
    ActivityTrace,
    END,
    FilterSpec,
    START,
    filter_log,
    first_last,
    occurrence_count,
    project_trace,
)
from logskeleton.model import extend_trace


def naive_facts(log: ActivityLog) -> dict:
    """All relations and counters evaluated formula by formula."""
    alphabet = [START] + sorted(log.alphabet) + [END]
    rows = [(extend_trace(trace), mult) for trace, mult in log.sorted_traces()]

    def occ(trace, a):
        return len(project_trace(trace, {a}))

    eq = set()
    aa = set()
    ab = set()
    nt = set()
    df = set()
    for x in alphabet:
        for y in alphabet:
            if x == y:
                continue
            if all(occ(t, x) == occ(t, y) for t, _ in rows):
                eq.add((x, y))
            if all(
                occ(t, x) == 0 or first_last(project_trace(t, {x, y}))[1] == y
                for t, _ in rows
            ):
                aa.add((x, y))
            if all(
                occ(t, x) == 0 or first_last(project_trace(t, {x, y}))[0] == y
                for t, _ in rows
            ):
                ab.add((x, y))
            if all(occ(t, x) == 0 or occ(t, y) == 0 for t, _ in rows):
                nt.add((x, y))

    # directly-follows is the one relation that may hold reflexively
    for x in alphabet:
        for y in alphabet:
            if any(occurrence_count(t, ActivityTrace((x, y))) > 0 for t, _ in rows):
                df.add((x, y))

    cdf = {
        (x, y): sum(mult * occurrence_count(t, ActivityTrace((x, y))) for t, mult in rows)
        for x in alphabet
        for y in alphabet
    }
    csum = {x: sum(mult * occ(t, x) for t, mult in rows) for x in alphabet}
    cmin = {x: (min(occ(t, x) for t, _ in rows) if rows else 0) for x in alphabet}
    cmax = {x: (max(occ(t, x) for t, _ in rows) if rows else 0) for x in alphabet}
    return {
        "alphabet": alphabet,
        "eq": eq,
        "aa": aa,
        "ab": ab,
        "nt": nt,
        "df": df,
        "cdf": cdf,
        "csum": csum,
        "cmin": cmin,
        "cmax": cmax,
    }


def naive_subsumes(subsuming: ActivityLog, subsumed: ActivityLog) -> bool:
    left = naive_facts(subsuming)
    right = naive_facts(subsumed)
    return (
        left["eq"] <= right["eq"]
        and left["aa"] <= right["aa"]
        and left["ab"] <= right["ab"]
        and right["df"] <= left["df"]
    )


def all_filter_specs(alphabet) -> list[FilterSpec]:
    """Every disjoint required/forbidden pair over the alphabet, unbounded."""
    acts = sorted(alphabet)
    specs = []
    for support_size in range(len(acts) + 1):
        for support in combinations(acts, support_size):
            for req_size in range(len(support) + 1):
                for req in combinations(support, req_size):
                    fbd = frozenset(support) - frozenset(req)
                    specs.append(FilterSpec(frozenset(req), fbd))
    return specs


def exhaustive_subsumes_trace(
    log: ActivityLog,
    trace: ActivityTrace,
    df_support_min: int = 16,
    skip_empty_training: bool = True,
) -> bool:
    """Filtered subsumption with every filter, naive facts throughout."""
    singleton = ActivityLog(log.alphabet, {trace: 1})
    for spec in all_filter_specs(log.alphabet):
        if not spec.admits(trace):
            continue
        filtered = filter_log(log, spec)
        if filtered.total == 0 and skip_empty_training:
            continue
        left = naive_facts(filtered)
        right = naive_facts(filter_log(singleton, spec))
        if not (left["eq"] <= right["eq"] and left["aa"] <= right["aa"] and left["ab"] <= right["ab"]):
            return False
        if filtered.total >= df_support_min and not right["df"] <= left["df"]:
            return False
    return True


def brute_closure(pairs) -> frozenset:
    """Transitive closure by iterated composition."""
    closure = set(pairs)
    while True:
        extra = {
            (a, d)
            for a, b in closure
            for c, d in closure
            if b == c and (a, d) not in closure
        }
        if not extra:
            return frozenset(closure)
        closure |= extra


def powerset(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))
