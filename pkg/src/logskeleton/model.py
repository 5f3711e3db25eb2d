"""Core data model: activities, traces, bags of traces, and trace filters.

An activity log is a bag (multiset) of activity traces over a finite
alphabet.  Distinct traces are stored once with an integer cardinality,
which is the natural shape both for tabular log fixtures and for the
frequency-weighted counters computed downstream.

Every trace can be wrapped with an artificial start marker (displayed
``|>``) and an artificial end marker (displayed ``[]``); the wrapped
forms are :class:`ExtendedTrace` / :class:`ExtendedLog`.  The artificial
activities are distinct from every regular activity by construction
(their ``kind`` differs), even if a regular activity happens to share
the display string.

Activities are totally ordered: the artificial start sorts before all
regular activities, regular activities sort lexicographically by name,
and the artificial end sorts last.  This order drives equivalence-class
representatives and every deterministic enumeration in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Iterator, Mapping

KIND_REGULAR = "regular"
KIND_START = "start"
KIND_END = "end"

START_DISPLAY = "|>"
END_DISPLAY = "[]"

_KIND_RANK = {KIND_START: 0, KIND_REGULAR: 1, KIND_END: 2}


@total_ordering
@dataclass(frozen=True)
class Activity:
    """A named activity; ``kind`` separates the artificial trace markers."""

    name: str
    kind: str = KIND_REGULAR

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("activity name must be non-empty")
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown activity kind: {self.kind!r}")

    @property
    def is_regular(self) -> bool:
        return self.kind == KIND_REGULAR

    @property
    def sort_key(self) -> tuple[int, str]:
        return (_KIND_RANK[self.kind], self.name if self.is_regular else "")

    @property
    def display(self) -> str:
        return self.name

    def __lt__(self, other: "Activity") -> bool:
        if not isinstance(other, Activity):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return f"Activity({self.name!r})" if self.is_regular else f"Activity({self.name!r}, {self.kind!r})"


START = Activity(START_DISPLAY, KIND_START)
END = Activity(END_DISPLAY, KIND_END)


def regular(name: str) -> Activity:
    """Shorthand constructor for a regular activity."""
    return Activity(name)


@dataclass(frozen=True)
class ActivityTrace:
    """A finite ordered sequence of activities; may be empty."""

    elements: tuple[Activity, ...] = ()

    @classmethod
    def of(cls, *names: str) -> "ActivityTrace":
        return cls(tuple(regular(n) for n in names))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Activity]:
        return iter(self.elements)

    def __getitem__(self, i: int) -> Activity:
        return self.elements[i]

    def activities(self) -> frozenset[Activity]:
        return frozenset(self.elements)

    def __repr__(self) -> str:
        return "<" + ",".join(a.display for a in self.elements) + ">"


@dataclass(frozen=True)
class ExtendedTrace(ActivityTrace):
    """A trace wrapped as ``<|>, ..., []>``; built via :func:`extend_trace`."""

    def __post_init__(self) -> None:
        elems = self.elements
        if len(elems) < 2 or elems[0] != START or elems[-1] != END:
            raise ValueError("extended trace must start with |> and end with []")
        if any(not a.is_regular for a in elems[1:-1]):
            raise ValueError("artificial activities may only appear at the trace ends")


def project_trace(trace: ActivityTrace, keep: Iterable[Activity]) -> ActivityTrace:
    """Subsequence of the elements that are members of ``keep``, order preserved."""
    keep = frozenset(keep)
    return ActivityTrace(tuple(a for a in trace if a in keep))


def occurrence_count(trace: ActivityTrace, pattern: ActivityTrace) -> int:
    """How often ``pattern`` occurs as a contiguous (possibly overlapping) subtrace."""
    if len(pattern) == 0:
        raise ValueError("occurrence pattern must be non-empty")
    n, m = len(trace), len(pattern)
    return sum(1 for i in range(n - m + 1) if trace.elements[i : i + m] == pattern.elements)


def first_last(trace: ActivityTrace) -> tuple[Activity, Activity]:
    """First and last element of a non-empty trace."""
    if len(trace) == 0:
        raise ValueError("trace is empty")
    return trace.elements[0], trace.elements[-1]


def extend_trace(trace: ActivityTrace) -> ExtendedTrace:
    """Wrap a regular trace with the artificial start and end markers."""
    if any(not a.is_regular for a in trace):
        raise ValueError("trace already contains artificial activities")
    return ExtendedTrace((START,) + trace.elements + (END,))


@dataclass(frozen=True)
class ActivityLog:
    """A bag of activity traces with an explicit alphabet.

    ``traces`` maps each distinct trace to its cardinality.  The alphabet
    may contain activities that occur in no trace, but every occurring
    activity must be a member.  Instances are immutable; do not mutate
    the mapping after construction.
    """

    alphabet: frozenset[Activity]
    traces: Mapping[ActivityTrace, int] = field(default_factory=dict)

    _allow_artificial = False

    def __post_init__(self) -> None:
        occurring: set[Activity] = set()
        for trace, mult in self.traces.items():
            if mult <= 0:
                raise ValueError("trace cardinalities must be positive")
            occurring.update(trace.elements)
        if not occurring <= self.alphabet:
            missing = sorted(a.display for a in occurring - self.alphabet)
            raise ValueError(f"activities outside the alphabet: {missing}")
        if not self._allow_artificial and any(not a.is_regular for a in self.alphabet):
            raise ValueError("alphabet of a plain activity log must be regular-only")

    @classmethod
    def build(
        cls,
        traces: Iterable[ActivityTrace] | Mapping[ActivityTrace, int],
        alphabet: Iterable[Activity] | None = None,
    ) -> "ActivityLog":
        """Build a log from traces; the alphabet defaults to the occurring activities."""
        counts: dict[ActivityTrace, int] = {}
        if isinstance(traces, Mapping):
            for trace, mult in traces.items():
                counts[trace] = counts.get(trace, 0) + mult
        else:
            for trace in traces:
                counts[trace] = counts.get(trace, 0) + 1
        if alphabet is None:
            alpha = frozenset(a for trace in counts for a in trace)
        else:
            alpha = frozenset(alphabet)
        return cls(alpha, counts)

    @property
    def total(self) -> int:
        """|L|: the number of traces counting multiplicity."""
        return sum(self.traces.values())

    @property
    def distinct(self) -> int:
        return len(self.traces)

    def sorted_traces(self) -> list[tuple[ActivityTrace, int]]:
        """Distinct traces with cardinalities, in deterministic element order."""
        return sorted(self.traces.items(), key=lambda item: tuple(a.sort_key for a in item[0]))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.distinct} distinct, {self.total} total)"


@dataclass(frozen=True)
class ExtendedLog(ActivityLog):
    """An activity log whose traces all carry the artificial markers."""

    _allow_artificial = True

    def __post_init__(self) -> None:
        super().__post_init__()
        if START not in self.alphabet or END not in self.alphabet:
            raise ValueError("extended alphabet must contain both artificial activities")
        for trace in self.traces:
            if not isinstance(trace, ExtendedTrace):
                raise ValueError("extended log may only contain extended traces")


def extended_alphabet(alphabet: Iterable[Activity]) -> frozenset[Activity]:
    return frozenset(alphabet) | {START, END}


def extend_log(log: ActivityLog) -> ExtendedLog:
    """Wrap every trace of the log; cardinalities carry over unchanged."""
    if any(not a.is_regular for a in log.alphabet):
        raise ValueError("log alphabet already contains artificial activities")
    traces = {extend_trace(trace): mult for trace, mult in log.traces.items()}
    return ExtendedLog(extended_alphabet(log.alphabet), traces)


def strip_extension(log: ExtendedLog) -> ActivityLog:
    """Inverse of :func:`extend_log` (drops the markers from every trace)."""
    traces = {ActivityTrace(t.elements[1:-1]): mult for t, mult in log.traces.items()}
    return ActivityLog(frozenset(a for a in log.alphabet if a.is_regular), traces)


def project_log(log: ActivityLog, keep: Iterable[Activity]) -> ActivityLog:
    """Project every trace onto ``keep``; cardinalities of now-equal traces accumulate."""
    keep = frozenset(keep)
    counts: dict[ActivityTrace, int] = {}
    for trace, mult in log.traces.items():
        image = project_trace(trace, keep)
        counts[image] = counts.get(image, 0) + mult
    return ActivityLog(log.alphabet & keep, counts)


@dataclass(frozen=True)
class FilterSpec:
    """A pair of disjoint sets of regular activities: required and forbidden."""

    required: frozenset[Activity] = frozenset()
    forbidden: frozenset[Activity] = frozenset()

    def __post_init__(self) -> None:
        if self.required & self.forbidden:
            raise ValueError("required and forbidden sets must be disjoint")
        if any(not a.is_regular for a in self.required | self.forbidden):
            raise ValueError("filters may only name regular activities")

    @classmethod
    def of(cls, required: Iterable[str] = (), forbidden: Iterable[str] = ()) -> "FilterSpec":
        return cls(frozenset(regular(n) for n in required), frozenset(regular(n) for n in forbidden))

    @property
    def size(self) -> int:
        return len(self.required) + len(self.forbidden)

    @property
    def is_empty(self) -> bool:
        return not self.required and not self.forbidden

    def admits(self, trace: ActivityTrace) -> bool:
        """Does the trace contain every required and no forbidden activity?"""
        support = trace.activities()
        return self.required <= support and not (self.forbidden & support)

    def sort_key(self) -> tuple:
        return (
            self.size,
            tuple(sorted(a.sort_key for a in self.required | self.forbidden)),
            tuple(sorted(a.sort_key for a in self.forbidden)),
        )

    def __repr__(self) -> str:
        req = ",".join(sorted(a.display for a in self.required))
        fbd = ",".join(sorted(a.display for a in self.forbidden))
        return f"FilterSpec(required={{{req}}}, forbidden={{{fbd}}})"


EMPTY_FILTER = FilterSpec()


def filter_log(log: ActivityLog, spec: FilterSpec) -> ActivityLog:
    """Sub-bag of traces admitted by ``spec``; the alphabet is kept unchanged.

    Keeping the alphabet means relations over a filtered log still range
    over the same (extended) activity set as the original, which is what
    the filtered-subsumption checks require.
    """
    unknown = (spec.required | spec.forbidden) - log.alphabet
    if unknown:
        raise ValueError(f"filter names unknown activities: {sorted(a.display for a in unknown)}")
    traces = {trace: mult for trace, mult in log.traces.items() if spec.admits(trace)}
    return ActivityLog(log.alphabet, traces)
