"""Subsumption checks and trace classification.

A log subsumes another log over the same alphabet when every
equivalence / always-after / always-before fact of the subsuming log
also holds in the subsumed log, and every directly-follows fact of the
subsumed log already occurs in the subsuming log.  A log subsumes a
single trace when this holds for the pair of filtered logs under every
bounded required/forbidden activity filter; traces subsumed by a
training log classify as positive, all others as negative with the
violated relation as the reason code.

Witness determinism.  A failed check reports the first violation under
a fixed scan order: relations in the order eq, aa, ab, df; filter specs
in enumeration order (sizes ascending).  For aa/ab the ordered pairs of
the subsuming relation are scanned ascending, for df the pairs of the
subsumed relation.  For eq the scan walks activities in ascending order
and compares each against the largest member of its equivalence class
in the subsuming log, so a broken class is reported as (low member,
largest splitting member).

The batch classifier avoids rebuilding skeletons per filter: for every
activity pair it precomputes a bitmask over the distinct training
traces marking which traces violate each relation, after which a
relation holds in a filtered log iff the violation mask is disjoint
from the surviving-trace mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .model import (
    Activity,
    ActivityLog,
    ActivityTrace,
    EMPTY_FILTER,
    END,
    FilterSpec,
    START,
    extend_trace,
)
from .skeleton import LogSkeleton, build_skeleton

RELATION_ORDER = ("eq", "aa", "ab", "df")

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True)
class Violation:
    """The relation, activity pair, and filter under which a check failed."""

    relation: str
    pair: tuple[Activity, Activity]
    spec: FilterSpec | None = None


@dataclass(frozen=True)
class SubsumptionVerdict:
    holds: bool
    violation: Violation | None = None

    def __post_init__(self) -> None:
        if self.holds == (self.violation is not None):
            raise ValueError("a verdict holds exactly when there is no violation")


@dataclass(frozen=True)
class ClassifierConfig:
    """Bounds for filtered subsumption.

    ``max_filter_size`` caps |required| + |forbidden| per filter.  A
    directly-follows violation only counts when the filtered training
    log still contains at least ``df_support_min`` traces.  With
    ``negative_cap`` set, classification stops handing out negatives
    once the cap is reached at a tier boundary.  ``skip_empty_training``
    ignores filters that empty the training log entirely (an empty
    training sub-log carries no evidence); switch it off for the strict
    reading under which an emptied training log fails almost any trace.
    """

    max_filter_size: int = 3
    df_support_min: int = 16
    negative_cap: int | None = None
    skip_empty_training: bool = True

    def __post_init__(self) -> None:
        if self.max_filter_size < 0:
            raise ValueError("max_filter_size must be >= 0")
        if self.df_support_min < 1:
            raise ValueError("df_support_min must be >= 1")
        if self.negative_cap is not None and self.negative_cap < 0:
            raise ValueError("negative_cap must be >= 0 when set")

    @classmethod
    def pdc_mode(cls) -> "ClassifierConfig":
        """Contest settings: bound 3, support 16, stop after 10 negatives."""
        return cls(negative_cap=10)


@dataclass(frozen=True)
class ClassificationVerdict:
    """Per-trace decision; ``reason`` is "+" or the violated relation."""

    index: int
    label: str
    reason: str
    witness: Violation | None = None

    def __post_init__(self) -> None:
        if (self.label == POSITIVE) != (self.reason == "+"):
            raise ValueError("positive verdicts carry reason '+', negatives a relation code")


@dataclass
class ClassifyStats:
    """Optional instrumentation collected by :func:`classify_batch`."""

    tiers_executed: list[int] = field(default_factory=list)
    spec_checks: dict[int, int] = field(default_factory=dict)
    negatives_by_tier: dict[int, int] = field(default_factory=dict)
    stopped_after_tier: int | None = None


def enumerate_filters(alphabet: Iterable[Activity], max_size: int) -> Iterator[FilterSpec]:
    """All filters with |required| + |forbidden| <= ``max_size``.

    Yields the empty filter first, then ascending by total size; within a
    size, support sets follow the activity order, and for each support
    set the all-required assignment comes before variants that move
    members to the forbidden side.
    """
    if max_size < 0:
        raise ValueError("max_size must be >= 0")
    acts = sorted(alphabet)
    if any(not a.is_regular for a in acts):
        raise ValueError("filters may only name regular activities")
    yield EMPTY_FILTER
    for size in range(1, max_size + 1):
        for support in combinations(acts, size):
            for to_forbidden in product((False, True), repeat=size):
                required = frozenset(a for a, fbd in zip(support, to_forbidden) if not fbd)
                forbidden = frozenset(a for a, fbd in zip(support, to_forbidden) if fbd)
                yield FilterSpec(required, forbidden)


# ---------------------------------------------------------------------------
# Skeleton-level subsumption (public log-vs-log check)
# ---------------------------------------------------------------------------


def _skeleton_violation(
    subsuming: LogSkeleton,
    subsumed: LogSkeleton,
    relations: Sequence[str] = RELATION_ORDER,
    spec: FilterSpec | None = None,
) -> Violation | None:
    for rel in relations:
        if rel == "eq":
            for a in subsuming.alphabet:
                m = max(subsuming.equivalence_class(a))
                if m != a and not subsumed.are_equivalent(a, m):
                    return Violation("eq", (a, m), spec)
        elif rel == "aa":
            for pair in sorted(subsuming.always_after):
                if pair not in subsumed.always_after:
                    return Violation("aa", pair, spec)
        elif rel == "ab":
            for pair in sorted(subsuming.always_before):
                if pair not in subsumed.always_before:
                    return Violation("ab", pair, spec)
        elif rel == "df":
            for pair in sorted(subsumed.directly_follows):
                if pair not in subsuming.directly_follows:
                    return Violation("df", pair, spec)
        else:
            raise ValueError(f"unknown relation: {rel!r}")
    return None


def subsumes_log(subsuming: ActivityLog, subsumed: ActivityLog) -> SubsumptionVerdict:
    """Does every universal fact of ``subsuming`` carry over to ``subsumed``
    (and every directly-follows fact of ``subsumed`` occur in ``subsuming``)?"""
    if subsuming.alphabet != subsumed.alphabet:
        raise ValueError("subsumption requires a shared alphabet")
    violation = _skeleton_violation(build_skeleton(subsuming), build_skeleton(subsumed))
    return SubsumptionVerdict(violation is None, violation)


# ---------------------------------------------------------------------------
# Bitmask index over the training log
# ---------------------------------------------------------------------------


class _TrainingIndex:
    """Per-pair violation masks over the distinct traces of a training log."""

    def __init__(self, log: ActivityLog):
        self.log = log
        self.acts: list[Activity] = [START] + sorted(log.alphabet) + [END]
        self.n = len(self.acts)
        self.index = {a: i for i, a in enumerate(self.acts)}
        self.regular_acts = self.acts[1:-1]

        rows = log.sorted_traces()
        self.mult = [m for _, m in rows]
        self.trace_total = sum(self.mult)
        t = len(rows)
        self.full_mask = (1 << t) - 1

        n = self.n
        counts = [[0] * t for _ in range(n)]
        firsts = [[-1] * t for _ in range(n)]
        lasts = [[-1] * t for _ in range(n)]
        for ti, (trace, _) in enumerate(rows):
            for pos, a in enumerate(extend_trace(trace).elements):
                ai = self.index[a]
                counts[ai][ti] += 1
                if firsts[ai][ti] < 0:
                    firsts[ai][ti] = pos
                lasts[ai][ti] = pos

        self.has = [0] * n
        for ai in range(n):
            mask = 0
            col = counts[ai]
            for ti in range(t):
                if col[ti]:
                    mask |= 1 << ti
            self.has[ai] = mask

        # viol_*[a][b]: traces in which the relation (a, b) fails.
        self.viol_eq = [[0] * n for _ in range(n)]
        self.viol_aa = [[0] * n for _ in range(n)]
        self.viol_ab = [[0] * n for _ in range(n)]
        self.adj = [[0] * n for _ in range(n)]
        for a in range(n):
            ca, fa, la = counts[a], firsts[a], lasts[a]
            for b in range(n):
                if a == b:
                    continue
                cb, fb, lb = counts[b], firsts[b], lasts[b]
                eq_m = aa_m = ab_m = 0
                for ti in range(t):
                    bit = 1 << ti
                    if ca[ti] != cb[ti]:
                        eq_m |= bit
                    if ca[ti]:
                        if lb[ti] <= la[ti]:  # covers b absent (lb == -1)
                            aa_m |= bit
                        if fb[ti] < 0 or fb[ti] >= fa[ti]:
                            ab_m |= bit
                self.viol_eq[a][b] = eq_m
                self.viol_aa[a][b] = aa_m
                self.viol_ab[a][b] = ab_m
        for ti, (trace, _) in enumerate(rows):
            bit = 1 << ti
            ext = extend_trace(trace).elements
            for x, y in zip(ext, ext[1:]):
                self.adj[self.index[x]][self.index[y]] |= bit

        self._weight_cache: dict[int, int] = {self.full_mask: self.trace_total, 0: 0}
        self._pair_cache: dict[str, dict[int, list[tuple[int, int]]]] = {
            "eq": {},
            "aa": {},
            "ab": {},
        }

    def filter_mask(self, spec: FilterSpec) -> int:
        mask = self.full_mask
        for a in spec.required:
            mask &= self.has[self.index[a]]
        for a in spec.forbidden:
            mask &= ~self.has[self.index[a]]
        return mask & self.full_mask

    def weighted_count(self, mask: int) -> int:
        """Total trace count (with multiplicities) of the surviving sub-bag."""
        cached = self._weight_cache.get(mask)
        if cached is not None:
            return cached
        total = 0
        m = mask
        while m:
            low = m & -m
            total += self.mult[low.bit_length() - 1]
            m ^= low
        self._weight_cache[mask] = total
        return total

    def eq_star_pairs(self, mask: int) -> list[tuple[int, int]]:
        """Per activity, the largest member of its class in the filtered log.

        The pairs (a, class max) cover the equivalence relation: all of
        them holding in another log implies (by transitivity there) that
        every equivalent pair does.  Scanned ascending, they make the
        witness of a broken class (low member, largest splitting member).
        """
        cache = self._pair_cache["eq"]
        pairs = cache.get(mask)
        if pairs is None:
            pairs = []
            n = self.n
            for a in range(n):
                row = self.viol_eq[a]
                m = a
                for b in range(a + 1, n):
                    if row[b] & mask == 0:
                        m = b
                if m != a:
                    pairs.append((a, m))
            cache[mask] = pairs
        return pairs

    def relation_pairs(self, rel: str, mask: int) -> list[tuple[int, int]]:
        """Ordered pairs of the always relation holding in the filtered log."""
        cache = self._pair_cache[rel]
        pairs = cache.get(mask)
        if pairs is None:
            viol = self.viol_aa if rel == "aa" else self.viol_ab
            n = self.n
            pairs = [
                (a, b)
                for a in range(n)
                for b in range(n)
                if a != b and viol[a][b] & mask == 0
            ]
            cache[mask] = pairs
        return pairs


class _TraceFacts:
    """Occurrence profile of one candidate trace, in index space."""

    def __init__(self, index: _TrainingIndex, trace: ActivityTrace):
        n = index.n
        self.counts = [0] * n
        self.first = [-1] * n
        self.last = [-1] * n
        adj: set[tuple[int, int]] = set()
        prev = -1
        for pos, a in enumerate(extend_trace(trace).elements):
            ai = index.index[a]
            self.counts[ai] += 1
            if self.first[ai] < 0:
                self.first[ai] = pos
            self.last[ai] = pos
            if prev >= 0:
                adj.add((prev, ai))
            prev = ai
        self.support = frozenset(i for i in range(n) if self.counts[i])
        self.adj = sorted(adj)


def _eq_violation(index: _TrainingIndex, mask: int, tf: _TraceFacts) -> tuple[int, int] | None:
    counts = tf.counts
    for a, m in index.eq_star_pairs(mask):
        if counts[a] != counts[m]:
            return (a, m)
    return None


def _aa_violation(index: _TrainingIndex, mask: int, tf: _TraceFacts) -> tuple[int, int] | None:
    last = tf.last
    for a, b in index.relation_pairs("aa", mask):
        la = last[a]
        if la >= 0 and last[b] <= la:  # covers b absent (last == -1)
            return (a, b)
    return None


def _ab_violation(index: _TrainingIndex, mask: int, tf: _TraceFacts) -> tuple[int, int] | None:
    first = tf.first
    for a, b in index.relation_pairs("ab", mask):
        fa = first[a]
        if fa < 0:
            continue
        fb = first[b]
        if fb < 0 or fb >= fa:
            return (a, b)
    return None


def _df_violation(index: _TrainingIndex, mask: int, tf: _TraceFacts) -> tuple[int, int] | None:
    for a, b in tf.adj:
        if index.adj[a][b] & mask == 0:
            return (a, b)
    return None


_CHECKS = {"eq": _eq_violation, "aa": _aa_violation, "ab": _ab_violation, "df": _df_violation}


def _spec_violation(
    index: _TrainingIndex,
    spec: FilterSpec,
    mask: int,
    tf: _TraceFacts,
    relations: Sequence[str],
    config: ClassifierConfig,
) -> Violation | None:
    for rel in relations:
        if rel == "df" and index.weighted_count(mask) < config.df_support_min:
            continue
        hit = _CHECKS[rel](index, mask, tf)
        if hit is not None:
            return Violation(rel, (index.acts[hit[0]], index.acts[hit[1]]), spec)
    return None


def _check_unknown(log: ActivityLog, trace: ActivityTrace) -> set[Activity]:
    return set(trace.activities()) - set(log.alphabet)


def subsumes_trace(
    log: ActivityLog,
    trace: ActivityTrace,
    config: ClassifierConfig = ClassifierConfig(),
) -> SubsumptionVerdict:
    """Filtered subsumption of one trace by a log, under the config bounds.

    Equivalent to checking, for every enumerated filter admitting the
    trace, that the filtered log subsumes the filtered singleton log;
    filters that empty the training log are skipped unless configured
    strict, and a directly-follows violation needs the configured
    support in the filtered training log.
    """
    unknown = _check_unknown(log, trace)
    if unknown:
        raise ValueError(f"trace uses unknown activities: {sorted(a.display for a in unknown)}")
    index = _TrainingIndex(log)
    tf = _TraceFacts(index, trace)
    support = tf.support
    for spec in enumerate_filters(index.regular_acts, config.max_filter_size):
        if not _admits(index, spec, support):
            continue
        mask = index.filter_mask(spec)
        if mask == 0 and config.skip_empty_training:
            continue
        violation = _spec_violation(index, spec, mask, tf, RELATION_ORDER, config)
        if violation is not None:
            return SubsumptionVerdict(False, violation)
    return SubsumptionVerdict(True)


def _admits(index: _TrainingIndex, spec: FilterSpec, support: frozenset[int]) -> bool:
    return all(index.index[a] in support for a in spec.required) and not any(
        index.index[a] in support for a in spec.forbidden
    )


# Tier schedule: relations checked per tier and the filter sizes scanned.
_TIERS = (
    (("eq", "aa", "ab"), 0, 0),
    (("eq",), 1, None),
    (("aa", "ab"), 1, None),
    (("df",), 1, None),
)


def classify_batch(
    training: ActivityLog,
    tests: Sequence[ActivityTrace],
    config: ClassifierConfig = ClassifierConfig(),
    stats: ClassifyStats | None = None,
) -> list[ClassificationVerdict]:
    """Classify test traces against a training log, strongest relations first.

    Tiers: (1) eq/aa/ab on the unfiltered log, (2) eq under filters of
    size 1..max, (3) aa/ab under filters, (4) df under filters with the
    support threshold.  Every still-unlabelled trace is scanned per
    tier; with a negative cap, the cap is evaluated at tier boundaries
    and all remaining traces become positive once it is reached.  Traces
    using activities outside the training alphabet are negative with
    reason eq and a synthetic witness pairing the start marker with the
    smallest unknown activity.
    """
    index = _TrainingIndex(training)
    verdicts: list[ClassificationVerdict | None] = [None] * len(tests)
    facts: list[_TraceFacts | None] = [None] * len(tests)
    negatives = 0

    for i, trace in enumerate(tests):
        unknown = _check_unknown(training, trace)
        if unknown:
            witness = Violation("eq", (START, min(unknown)), EMPTY_FILTER)
            verdicts[i] = ClassificationVerdict(i, NEGATIVE, "eq", witness)
            negatives += 1
        else:
            facts[i] = _TraceFacts(index, trace)

    specs = [
        (spec, index.filter_mask(spec))
        for spec in enumerate_filters(index.regular_acts, config.max_filter_size)
    ]

    for tier_no, (relations, lo, hi) in enumerate(_TIERS, start=1):
        hi = config.max_filter_size if hi is None else hi
        tier_specs = [
            (spec, mask)
            for spec, mask in specs
            if lo <= spec.size <= hi and (mask or not config.skip_empty_training)
        ]
        if stats is not None:
            stats.tiers_executed.append(tier_no)
            stats.spec_checks.setdefault(tier_no, 0)
            stats.negatives_by_tier.setdefault(tier_no, 0)
        for i, tf in enumerate(facts):
            if tf is None or verdicts[i] is not None:
                continue
            for spec, mask in tier_specs:
                if not _admits(index, spec, tf.support):
                    continue
                if stats is not None:
                    stats.spec_checks[tier_no] += 1
                violation = _spec_violation(index, spec, mask, tf, relations, config)
                if violation is not None:
                    verdicts[i] = ClassificationVerdict(i, NEGATIVE, violation.relation, violation)
                    negatives += 1
                    if stats is not None:
                        stats.negatives_by_tier[tier_no] += 1
                    break
        if config.negative_cap is not None and negatives >= config.negative_cap:
            if stats is not None:
                stats.stopped_after_tier = tier_no
            break

    result = [
        v if v is not None else ClassificationVerdict(i, POSITIVE, "+")
        for i, v in enumerate(verdicts)
    ]
    return result
