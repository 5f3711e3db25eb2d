"""Graph views of a log skeleton.

Nodes carry the activity name plus a summary line: the smallest
equivalent activity, the total occurrence count, and the per-trace
occurrence interval (collapsed to one number when min equals max).
Node colours index equivalence classes; the textual representative
stays authoritative when the palette wraps.

Edges follow fixed conventions:

* always relations are drawn from their transitive reductions; an open
  box marks the point of view (tail for always-after, head for
  always-before), and a pair related both ways collapses into a single
  arc with boxes at both ends;
* never-together pairs are undirected dashed edges;
* directly-follows arcs carry their counts; opposite directions merge
  into one arc whose first count belongs to the triangular head and
  second to the vee tail; a directly-follows arc is dropped when a
  visible always relation covers the same ordered pair (the always
  relation has priority).

The default view shows all activities and only the two always
relations.  Output formats: a deterministic DOT text and an equivalent
plain-data graph document for the explorer UI.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import (
    Activity,
    ActivityLog,
    END,
    END_DISPLAY,
    FilterSpec,
    START,
    START_DISPLAY,
    filter_log,
    regular,
)
from .skeleton import LogSkeleton, Pair, build_skeleton, transitive_reduction

RELATION_KINDS = (
    "equivalence",
    "always_after",
    "always_before",
    "never_together",
    "directly_follows",
)
DEFAULT_RELATIONS = frozenset({"always_after", "always_before"})

_RELATION_ALIASES = {
    "eq": "equivalence",
    "aa": "always_after",
    "ab": "always_before",
    "nt": "never_together",
    "df": "directly_follows",
}

# Light fills for equivalence classes; wraps when exhausted.
PALETTE = (
    "#ffffff",
    "#ffe0b3",
    "#c6e2ff",
    "#d5f5c6",
    "#f5c6f0",
    "#fff3b3",
    "#ffc6c6",
    "#c6f5ea",
    "#e0d4f5",
    "#f0e6c6",
    "#d4f5f0",
    "#e6e6e6",
)

_KIND_RANK = {"always": 0, "never_together": 1, "directly_follows": 2}


@dataclass(frozen=True)
class ViewConfig:
    """Which activities and relations to draw; ``activities=None`` means all."""

    activities: frozenset[Activity] | None = None
    relations: frozenset[str] = DEFAULT_RELATIONS
    hyper: bool = False

    def __post_init__(self) -> None:
        unknown = self.relations - set(RELATION_KINDS)
        if unknown:
            raise ValueError(f"unknown relations: {sorted(unknown)}")


@dataclass(frozen=True)
class GraphNode:
    activity: Activity
    label_lines: tuple[str, str]
    class_index: int


@dataclass(frozen=True)
class GraphEdge:
    sources: tuple[Activity, ...]
    targets: tuple[Activity, ...]
    kind: str
    tail: str  # "obox" | "vee" | "none"
    head: str  # "obox" | "arrow" | "none"
    label: str = ""

    def sort_key(self) -> tuple:
        return (
            _KIND_RANK[self.kind],
            tuple(a.sort_key for a in self.sources),
            tuple(a.sort_key for a in self.targets),
            self.tail,
            self.head,
            self.label,
        )


@dataclass(frozen=True)
class SkeletonGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]


def parse_relation_tokens(tokens: Iterable[str]) -> frozenset[str]:
    """Map relation names (canonical or eq/aa/ab/nt/df shorthands) to kinds."""
    kinds = set()
    for token in tokens:
        name = token.strip().replace("-", "_")
        name = _RELATION_ALIASES.get(name, name)
        if name not in RELATION_KINDS:
            raise ValueError(f"unknown relation: {token!r}")
        kinds.add(name)
    return frozenset(kinds)


def resolve_activity_token(token: str) -> Activity:
    """Decode an activity selection token; ``|>`` and ``[]`` name the markers."""
    if token == START_DISPLAY:
        return START
    if token == END_DISPLAY:
        return END
    return regular(token)


def node_label(skel: LogSkeleton, a: Activity) -> tuple[str, str]:
    """The two label lines of a node: the name, and rep | total | interval."""
    mn, mx = skel.min_count[a], skel.max_count[a]
    interval = str(mn) if mn == mx else f"{mn}..{mx}"
    summary = f"{skel.representative(a).display} | {skel.sum_count[a]} | {interval}"
    return (a.display, summary)


def emit_graph(skel: LogSkeleton, view: ViewConfig = ViewConfig()) -> SkeletonGraph:
    """Build the graph for a view; hyper-arc grouping is applied separately."""
    if view.activities is None:
        visible = set(skel.alphabet)
    else:
        unknown = view.activities - set(skel.alphabet)
        if unknown:
            raise ValueError(f"activities outside the alphabet: {sorted(a.display for a in unknown)}")
        visible = set(view.activities)

    nodes = tuple(
        GraphNode(a, node_label(skel, a), skel.class_index[a])
        for a in skel.alphabet
        if a in visible
    )

    def restrict(pairs: Iterable[Pair]) -> set[Pair]:
        return {(a, b) for a, b in pairs if a in visible and b in visible}

    edges: list[GraphEdge] = []

    show_aa = "always_after" in view.relations
    show_ab = "always_before" in view.relations
    reduced_aa = transitive_reduction(restrict(skel.always_after)) if show_aa else frozenset()
    reduced_ab = transitive_reduction(restrict(skel.always_before)) if show_ab else frozenset()
    flow: dict[Pair, list[bool]] = {}
    for a, b in reduced_aa:
        flow.setdefault((a, b), [False, False])[0] = True
    for a, b in reduced_ab:
        # (a, b) in always-before means b precedes a: drawn b -> a.
        flow.setdefault((b, a), [False, False])[1] = True
    for (u, v), (after, before) in sorted(flow.items()):
        edges.append(
            GraphEdge(
                sources=(u,),
                targets=(v,),
                kind="always",
                tail="obox" if after else "none",
                head="obox" if before else "arrow",
            )
        )

    if "never_together" in view.relations:
        for a, b in sorted(restrict(skel.never_together)):
            edges.append(GraphEdge((a,), (b,), "never_together", "none", "none"))

    if "directly_follows" in view.relations:
        df = restrict(skel.directly_follows)

        def covered_by_always(u: Activity, v: Activity) -> bool:
            return (show_aa and (u, v) in skel.always_after) or (
                show_ab and (v, u) in skel.always_before
            )

        shown = {pair for pair in df if not covered_by_always(*pair)}
        done: set[Pair] = set()
        for u, v in sorted(shown):
            if (u, v) in done:
                continue
            forward = skel.df_count[(u, v)]
            if (v, u) in shown:
                done.add((v, u))
                reverse = skel.df_count[(v, u)]
                edges.append(
                    GraphEdge((u,), (v,), "directly_follows", "vee", "arrow", f"{forward} / {reverse}")
                )
            else:
                edges.append(GraphEdge((u,), (v,), "directly_follows", "none", "arrow", str(forward)))

    return SkeletonGraph(nodes, tuple(sorted(edges, key=GraphEdge.sort_key)))


def group_hyper_arcs(graph: SkeletonGraph) -> SkeletonGraph:
    """Merge identically-decorated parallel edges into hyper edges.

    Two greedy passes: edges sharing decorations and target set merge
    their sources, then edges sharing decorations and source set merge
    their targets.  Expanding the result reproduces exactly the original
    edge set.
    """

    def merge(edges: Iterable[GraphEdge], by_targets: bool) -> list[GraphEdge]:
        groups: dict[tuple, list[GraphEdge]] = {}
        for e in edges:
            fixed = e.targets if by_targets else e.sources
            groups.setdefault((e.kind, e.tail, e.head, e.label, fixed), []).append(e)
        merged = []
        for (kind, tail, head, label, _), members in groups.items():
            union: set[Activity] = set()
            for e in members:
                union.update(e.sources if by_targets else e.targets)
            sources = tuple(sorted(union)) if by_targets else members[0].sources
            targets = members[0].targets if by_targets else tuple(sorted(union))
            merged.append(GraphEdge(sources, targets, kind, tail, head, label))
        return merged

    edges = merge(merge(graph.edges, by_targets=True), by_targets=False)
    return SkeletonGraph(graph.nodes, tuple(sorted(edges, key=GraphEdge.sort_key)))


def expand_edges(graph: SkeletonGraph) -> list[tuple[Activity, Activity, str, str, str, str]]:
    """Flatten (hyper) edges back to decorated activity pairs, for checks."""
    flat = []
    for e in graph.edges:
        for s in e.sources:
            for t in e.targets:
                flat.append((s, t, e.kind, e.tail, e.head, e.label))
    return sorted(flat, key=lambda x: (x[0].sort_key, x[1].sort_key, x[2:]))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


_HEAD_ATTR = {"obox": "obox", "arrow": "normal", "none": "none"}
_TAIL_ATTR = {"obox": "obox", "vee": "vee", "none": "none"}


def to_dot(graph: SkeletonGraph, comments: Iterable[str] = ()) -> str:
    """Deterministic DOT text: stable node numbering and edge order."""
    lines = []
    for comment in comments:
        lines.append(f"// {comment}")
    lines.append("digraph log_skeleton {")
    lines.append("  rankdir=TB;")
    lines.append('  node [shape=box, style="rounded,filled", fontname="Helvetica"];')
    lines.append('  edge [fontname="Helvetica"];')
    node_id = {node.activity: f"n{i}" for i, node in enumerate(graph.nodes)}
    for node in graph.nodes:
        label = _quote("\n".join(node.label_lines)).replace("\n", "\\n")
        color = PALETTE[node.class_index % len(PALETTE)]
        lines.append(f'  {node_id[node.activity]} [label={label}, fillcolor="{color}"];')

    def edge_attrs(e: GraphEdge, tail: str, head: str) -> str:
        attrs = []
        if tail != "none":
            attrs.append("dir=both")
            attrs.append(f"arrowtail={_TAIL_ATTR[tail]}")
        elif head == "none":
            attrs.append("dir=none")
        attrs.append(f"arrowhead={_HEAD_ATTR[head]}")
        if e.kind == "never_together":
            attrs.append("style=dashed")
        if e.kind == "directly_follows":
            attrs.append('color="#606060"')
        if e.label:
            attrs.append(f"label={_quote(e.label)}")
        return ", ".join(attrs)

    hyper_count = 0
    for e in graph.edges:
        if len(e.sources) == 1 and len(e.targets) == 1:
            src, dst = node_id[e.sources[0]], node_id[e.targets[0]]
            lines.append(f"  {src} -> {dst} [{edge_attrs(e, e.tail, e.head)}];")
        else:
            # DOT has no hyper edges; join the bundle through a point node.
            joint = f"h{hyper_count}"
            hyper_count += 1
            lines.append(f"  {joint} [shape=point, width=0.06, fillcolor=\"#000000\"];")
            for s in e.sources:
                lines.append(f"  {node_id[s]} -> {joint} [{edge_attrs(e, e.tail, 'none')}];")
            for t in e.targets:
                lines.append(f"  {joint} -> {node_id[t]} [{edge_attrs(e, 'none', e.head)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_doc(graph: SkeletonGraph) -> dict:
    """Plain-data form of a graph; edges reference node list indices."""
    node_index = {node.activity: i for i, node in enumerate(graph.nodes)}
    return {
        "nodes": [
            {
                "name": node.activity.display,
                "kind": node.activity.kind,
                "label": list(node.label_lines),
                "class_index": node.class_index,
                "color": PALETTE[node.class_index % len(PALETTE)],
            }
            for node in graph.nodes
        ],
        "edges": [
            {
                "sources": [node_index[a] for a in e.sources],
                "targets": [node_index[a] for a in e.targets],
                "kind": e.kind,
                "tail": e.tail,
                "head": e.head,
                "label": e.label,
            }
            for e in graph.edges
        ],
    }


# ---------------------------------------------------------------------------
# View assembly shared by the CLI and the HTTP service
# ---------------------------------------------------------------------------


def build_view(
    log: ActivityLog,
    spec: FilterSpec = FilterSpec(),
    view: ViewConfig = ViewConfig(),
    log_name: str = "log",
) -> tuple[SkeletonGraph, dict]:
    """Filter, build the skeleton, and emit the graph plus provenance data.

    The provenance mirrors what a browser footer needs to reconstruct the
    view: source log, filter sets, selected activities and relations, and
    an equivalent CLI invocation.
    """
    filtered = filter_log(log, spec)
    skel = build_skeleton(filtered)
    graph = emit_graph(skel, view)
    if view.hyper:
        graph = group_hyper_arcs(graph)
    visible = sorted(view.activities) if view.activities is not None else list(skel.alphabet)
    provenance = {
        "log": log_name,
        "required": sorted(a.display for a in spec.required),
        "forbidden": sorted(a.display for a in spec.forbidden),
        "activities": [a.display for a in visible],
        "relations": sorted(view.relations),
        "hyper": view.hyper,
        "trace_count": filtered.total,
        "source_trace_count": log.total,
        "cli": _cli_line(log_name, spec, view),
    }
    return graph, provenance


def _cli_line(log_name: str, spec: FilterSpec, view: ViewConfig) -> str:
    parts = ["logskeleton", "build", log_name]
    parts.append("--relations " + ",".join(sorted(view.relations)))
    if spec.required:
        parts.append("--required " + ",".join(sorted(a.display for a in spec.required)))
    if spec.forbidden:
        parts.append("--forbidden " + ",".join(sorted(a.display for a in spec.forbidden)))
    if view.activities is not None:
        parts.append("--activities " + ",".join(a.display for a in sorted(view.activities)))
    if view.hyper:
        parts.append("--hyper")
    return " ".join(parts)


def view_payload(
    log: ActivityLog,
    spec: FilterSpec = FilterSpec(),
    view: ViewConfig = ViewConfig(),
    log_name: str = "log",
) -> dict:
    graph, provenance = build_view(log, spec, view, log_name)
    return {"graph": graph_doc(graph), "provenance": provenance}


def provenance_comments(provenance: Mapping[str, object]) -> list[str]:
    return [
        f"log: {provenance['log']}",
        f"required: {','.join(provenance['required']) or '-'}",
        f"forbidden: {','.join(provenance['forbidden']) or '-'}",
        f"relations: {','.join(provenance['relations'])}",
        f"cli: {provenance['cli']}",
    ]


def view_dot(
    log: ActivityLog,
    spec: FilterSpec = FilterSpec(),
    view: ViewConfig = ViewConfig(),
    log_name: str = "log",
) -> str:
    graph, provenance = build_view(log, spec, view, log_name)
    return to_dot(graph, provenance_comments(provenance))
