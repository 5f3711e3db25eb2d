"""Log skeleton construction and relation/counter queries.

A log skeleton summarises an activity log by five behavioural relations
and four counters, all computed over the marker-extended log:

* equivalence       — two activities occur equally often in every trace;
* always-after      — after any occurrence of the first activity, the
                      second occurs later in the same trace;
* always-before     — before any occurrence of the first activity, the
                      second occurs earlier in the same trace;
* never-together    — no trace contains both activities;
* directly-follows  — some trace contains the second immediately after
                      the first;
* counters          — per-pair directly-follows counts, and per-activity
                      total / per-trace-minimum / per-trace-maximum
                      occurrence counts.

The always relations are transitive and non-reflexive; on an empty log
every universally quantified relation holds vacuously, so equivalence
collapses to a single class and the always/never relations become total.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence, TypeVar

from .model import (
    Activity,
    ActivityLog,
    END,
    START,
    extend_trace,
)

Pair = tuple[Activity, Activity]


@dataclass(frozen=True)
class LogSkeleton:
    """The relations and counters of one activity log, over its extended alphabet."""

    alphabet: tuple[Activity, ...]
    classes: tuple[frozenset[Activity], ...]
    class_index: Mapping[Activity, int]
    always_after: frozenset[Pair]
    always_before: frozenset[Pair]
    never_together: frozenset[Pair]
    df_count: Mapping[Pair, int]
    sum_count: Mapping[Activity, int]
    min_count: Mapping[Activity, int]
    max_count: Mapping[Activity, int]
    trace_count: int

    def _require(self, *activities: Activity) -> None:
        for a in activities:
            if a not in self.class_index:
                raise ValueError(f"unknown activity: {a.display!r}")

    def are_equivalent(self, a: Activity, b: Activity) -> bool:
        self._require(a, b)
        return self.class_index[a] == self.class_index[b]

    def always_after_holds(self, a: Activity, b: Activity) -> bool:
        self._require(a, b)
        return (a, b) in self.always_after

    def always_before_holds(self, a: Activity, b: Activity) -> bool:
        self._require(a, b)
        return (a, b) in self.always_before

    def never_together_holds(self, a: Activity, b: Activity) -> bool:
        self._require(a, b)
        return (min(a, b), max(a, b)) in self.never_together

    def directly_follows_holds(self, a: Activity, b: Activity) -> bool:
        self._require(a, b)
        return self.df_count.get((a, b), 0) > 0

    @property
    def directly_follows(self) -> frozenset[Pair]:
        return frozenset(pair for pair, n in self.df_count.items() if n > 0)

    def equivalence_class(self, a: Activity) -> frozenset[Activity]:
        self._require(a)
        return self.classes[self.class_index[a]]

    def representative(self, a: Activity) -> Activity:
        """Smallest member of ``a``'s equivalence class under the activity order."""
        return min(self.equivalence_class(a))

    def to_doc(self) -> dict:
        """Canonical plain-data form: stable ordering, counts as integers."""
        act = _activity_doc
        return {
            "alphabet": [act(a) for a in self.alphabet],
            "trace_count": self.trace_count,
            "equivalence": [sorted(act(a) for a in cls) for cls in self.classes],
            "always_after": sorted([act(a), act(b)] for a, b in self.always_after),
            "always_before": sorted([act(a), act(b)] for a, b in self.always_before),
            "never_together": sorted([act(a), act(b)] for a, b in self.never_together),
            "df_count": sorted([act(a), act(b), n] for (a, b), n in self.df_count.items() if n > 0),
            "sum_count": [[act(a), self.sum_count[a]] for a in self.alphabet],
            "min_count": [[act(a), self.min_count[a]] for a in self.alphabet],
            "max_count": [[act(a), self.max_count[a]] for a in self.alphabet],
        }


def _activity_doc(a: Activity) -> str:
    return a.display


def build_skeleton(log: ActivityLog) -> LogSkeleton:
    """Compute the full skeleton of ``log`` (the log is extended internally)."""
    alphabet = tuple([START] + sorted(log.alphabet) + [END])
    distinct = [
        (extend_trace(trace), mult)
        for trace, mult in log.sorted_traces()
    ]

    # Per distinct trace: occurrence counts, first/last positions, adjacency.
    per_trace_counts: list[dict[Activity, int]] = []
    first_pos: list[dict[Activity, int]] = []
    last_pos: list[dict[Activity, int]] = []
    df_count: Counter[Pair] = Counter()
    for trace, mult in distinct:
        counts: dict[Activity, int] = {}
        first: dict[Activity, int] = {}
        last: dict[Activity, int] = {}
        prev: Activity | None = None
        for pos, a in enumerate(trace.elements):
            counts[a] = counts.get(a, 0) + 1
            first.setdefault(a, pos)
            last[a] = pos
            if prev is not None:
                df_count[(prev, a)] += mult
            prev = a
        per_trace_counts.append(counts)
        first_pos.append(first)
        last_pos.append(last)

    sum_count = {a: 0 for a in alphabet}
    min_count = {a: 0 for a in alphabet}
    max_count = {a: 0 for a in alphabet}
    for a in alphabet:
        occs = [counts.get(a, 0) for counts in per_trace_counts]
        sum_count[a] = sum(n * mult for n, (_, mult) in zip(occs, distinct))
        min_count[a] = min(occs) if occs else 0
        max_count[a] = max(occs) if occs else 0

    # Equivalence: identical occurrence profile across all distinct traces.
    profiles: dict[tuple[int, ...], list[Activity]] = {}
    for a in alphabet:
        profile = tuple(counts.get(a, 0) for counts in per_trace_counts)
        profiles.setdefault(profile, []).append(a)
    classes = tuple(sorted((frozenset(members) for members in profiles.values()), key=min))
    class_index = {a: i for i, members in enumerate(classes) for a in members}

    always_after: set[Pair] = set()
    always_before: set[Pair] = set()
    never_together: set[Pair] = set()
    for a in alphabet:
        for b in alphabet:
            if a == b:
                continue
            aa = True
            ab = True
            for last, first in zip(last_pos, first_pos):
                if a not in last:
                    continue
                if aa and (b not in last or last[b] <= last[a]):
                    aa = False
                if ab and (b not in first or first[b] >= first[a]):
                    ab = False
                if not aa and not ab:
                    break
            if aa:
                always_after.add((a, b))
            if ab:
                always_before.add((a, b))
            if a < b and not any(a in counts and b in counts for counts in per_trace_counts):
                never_together.add((a, b))

    return LogSkeleton(
        alphabet=alphabet,
        classes=classes,
        class_index=class_index,
        always_after=frozenset(always_after),
        always_before=frozenset(always_before),
        never_together=frozenset(never_together),
        df_count=dict(df_count),
        sum_count=sum_count,
        min_count=min_count,
        max_count=max_count,
        trace_count=log.total,
    )


N = TypeVar("N", bound=Hashable)


def transitive_reduction(relation: Iterable[tuple[N, N]]) -> frozenset[tuple[N, N]]:
    """Minimal sub-relation whose transitive closure equals that of the input.

    The input is expected to be transitive; cycles (which the always
    relations form only among mutually vacuous activities) are handled by
    condensing strongly connected components, reducing the acyclic
    condensation, and re-expanding: each multi-member component becomes a
    cycle through its sorted members, and each kept cross edge connects
    the smallest members of its two components.
    """
    edges = set(relation)
    nodes = sorted({n for pair in edges for n in pair})
    succ: dict[N, list[N]] = {n: [] for n in nodes}
    for u, v in sorted(edges):
        succ[u].append(v)

    comp = _strongly_connected_components(nodes, succ)
    comp_of = {n: i for i, members in enumerate(comp) for n in members}
    rep = [min(members) for members in comp]

    cond: dict[int, set[int]] = {i: set() for i in range(len(comp))}
    for u, v in edges:
        cu, cv = comp_of[u], comp_of[v]
        if cu != cv:
            cond[cu].add(cv)

    reduced: set[tuple[N, N]] = set()
    for members in comp:
        ring = sorted(members)
        if len(ring) > 1:
            for x, y in zip(ring, ring[1:] + ring[:1]):
                reduced.add((x, y))
        elif (ring[0], ring[0]) in edges:
            reduced.add((ring[0], ring[0]))
    for cu, targets in cond.items():
        for cv in targets:
            # The condensation of a transitive relation is transitively
            # closed, so a 2-step detour certifies redundancy.
            if not any(w != cv and cv in cond[w] for w in targets):
                reduced.add((rep[cu], rep[cv]))
    return frozenset(reduced)


def transitive_closure(relation: Iterable[tuple[N, N]]) -> frozenset[tuple[N, N]]:
    """All pairs connected by a path of length >= 1."""
    succ: dict[N, set[N]] = {}
    for u, v in relation:
        succ.setdefault(u, set()).add(v)
        succ.setdefault(v, set())
    closure: set[tuple[N, N]] = set()
    for source in succ:
        reached: set[N] = set()
        pending = list(succ[source])
        while pending:
            current = pending.pop()
            if current in reached:
                continue
            reached.add(current)
            pending.extend(succ[current])
        closure.update((source, t) for t in reached)
    return frozenset(closure)


def _strongly_connected_components(nodes: Sequence[N], succ: Mapping[N, Sequence[N]]) -> list[list[N]]:
    """Tarjan's algorithm, iterative to avoid recursion limits."""
    index: dict[N, int] = {}
    lowlink: dict[N, int] = {}
    on_stack: set[N] = set()
    stack: list[N] = []
    components: list[list[N]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work: list[tuple[N, int]] = [(root, 0)]
        while work:
            node, child_i = work[-1]
            if child_i == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            children = succ[node]
            while child_i < len(children):
                child = children[child_i]
                child_i += 1
                if child not in index:
                    work[-1] = (node, child_i)
                    work.append((child, 0))
                    advanced = True
                    break
                if child in on_stack:
                    lowlink[node] = min(lowlink[node], index[child])
            if advanced:
                continue
            work.pop()
            if lowlink[node] == index[node]:
                members: list[N] = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    members.append(member)
                    if member == node:
                        break
                components.append(members)
            if work:
                parent, _ = work[-1]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
    return components
