"""Graph emission: labels, edge conventions, hyper arcs, DOT output."""

import random
from pathlib import Path

import pytest

from fixtures import a, l1, random_log
from logskeleton import (
    FilterSpec,
    START,
    ViewConfig,
    build_skeleton,
    emit_graph,
    expand_edges,
    group_hyper_arcs,
    node_label,
    to_dot,
    transitive_closure,
    view_dot,
    view_payload,
)
from logskeleton.render import GraphEdge, SkeletonGraph, parse_relation_tokens

GOLDEN = Path(__file__).parent / "golden" / "l1_default.dot"

ALL_RELATIONS = frozenset(
    {"equivalence", "always_after", "always_before", "never_together", "directly_follows"}
)


def edge_map(graph):
    return {(e.sources, e.targets, e.kind): e for e in graph.edges}


class TestNodeLabels:
    def setup_method(self):
        self.skel = build_skeleton(l1())

    def test_start_marker_label(self):
        assert node_label(self.skel, START) == ("|>", "|> | 20 | 1")

    def test_interval_label(self):
        assert node_label(self.skel, a("a4")) == ("a4", "a4 | 34 | 1..4")

    def test_interval_collapses_when_min_equals_max(self):
        assert node_label(self.skel, a("a1"))[1] == "|> | 20 | 1"

    def test_equivalent_activities_share_class_index(self):
        graph = emit_graph(self.skel)
        by_name = {n.activity.display: n for n in graph.nodes}
        assert by_name["a4"].class_index == by_name["a5"].class_index
        assert by_name["|>"].class_index == by_name["a1"].class_index == by_name["[]"].class_index
        assert by_name["a2"].class_index != by_name["a3"].class_index


class TestDefaultView:
    def setup_method(self):
        self.graph = emit_graph(build_skeleton(l1()))

    def test_only_always_edges(self):
        assert {e.kind for e in self.graph.edges} == {"always"}

    def test_combined_arc_a4_a5(self):
        edge = edge_map(self.graph)[((a("a4"),), (a("a5"),), "always")]
        assert edge.tail == "obox" and edge.head == "obox"

    def test_one_sided_arcs(self):
        edges = edge_map(self.graph)
        # a1 always precedes a2 but a2 does not always follow a1
        before_only = edges[((a("a1"),), (a("a2"),), "always")]
        assert before_only.tail == "none" and before_only.head == "obox"
        # a5 always follows a2 but a2 does not always precede a5
        after_only = edges[((a("a2"),), (a("a5"),), "always")]
        assert after_only.tail == "obox" and after_only.head == "arrow"

    def test_transitive_edges_are_dropped(self):
        assert ((a("a1"),), (a("a5"),), "always") not in edge_map(self.graph)


class TestRelationSelection:
    def setup_method(self):
        self.skel = build_skeleton(l1())

    def test_never_together_only(self):
        graph = emit_graph(self.skel, ViewConfig(relations=frozenset({"never_together"})))
        assert len(graph.edges) == 1
        (edge,) = graph.edges
        assert edge.kind == "never_together"
        assert (edge.sources, edge.targets) == ((a("a7"),), (a("a8"),))

    def test_df_suppressed_under_always(self):
        graph = emit_graph(self.skel, ViewConfig(relations=ALL_RELATIONS))
        df_pairs = {
            (e.sources[0], e.targets[0])
            for e in graph.edges
            if e.kind == "directly_follows"
        }
        assert (a("a1"), a("a4")) not in df_pairs  # covered by always-after
        assert (a("a1"), a("a2")) not in df_pairs  # covered by always-before
        assert (a("a2"), a("a4")) in df_pairs  # no always relation in that direction

    def test_df_alone_shows_counts_and_merged_directions(self):
        graph = emit_graph(self.skel, ViewConfig(relations=frozenset({"directly_follows"})))
        edges = edge_map(graph)
        one_way = edges[((a("a1"),), (a("a2"),), "directly_follows")]
        assert one_way.label == "10" and one_way.head == "arrow" and one_way.tail == "none"
        two_way = edges[((a("a2"),), (a("a4"),), "directly_follows")]
        assert two_way.label == "13 / 7" and two_way.tail == "vee"
        assert ((a("a4"),), (a("a2"),), "directly_follows") not in edges

    def test_priority_completeness(self):
        rng = random.Random(31)
        for _ in range(25):
            skel = build_skeleton(random_log(rng))
            graph = emit_graph(skel, ViewConfig(relations=ALL_RELATIONS))
            df_drawn = {
                (s, t)
                for e in graph.edges
                if e.kind == "directly_follows"
                for s in e.sources
                for t in e.targets
            }
            reverse = {(t, s) for e in graph.edges if e.kind == "directly_follows" and e.tail == "vee" for s in e.sources for t in e.targets}
            df_drawn |= reverse
            for pair in skel.directly_follows:
                u, v = pair
                covered = (u, v) in skel.always_after or (v, u) in skel.always_before
                assert ((u, v) in df_drawn) == (not covered)

    def test_restriction_before_reduction_reexposes_edges(self):
        # hiding a4 re-exposes the a1 -> a5 always chain
        visible = frozenset(build_skeleton(l1()).alphabet) - {a("a4")}
        graph = emit_graph(self.skel, ViewConfig(activities=visible))
        assert ((a("a1"),), (a("a5"),), "always") in edge_map(graph)

    def test_unknown_visible_activity_rejected(self):
        with pytest.raises(ValueError):
            emit_graph(self.skel, ViewConfig(activities=frozenset({a("zz")})))

    def test_unknown_relation_rejected(self):
        with pytest.raises(ValueError):
            ViewConfig(relations=frozenset({"sometimes_after"}))

    def test_relation_token_aliases(self):
        assert parse_relation_tokens(["aa", "never-together"]) == frozenset(
            {"always_after", "never_together"}
        )


class TestReductionSoundness:
    def test_rendered_always_closure_matches_relation(self):
        rng = random.Random(32)
        for _ in range(25):
            skel = build_skeleton(random_log(rng))
            graph = emit_graph(skel, ViewConfig(relations=frozenset({"always_after"})))
            drawn = {
                (s, t)
                for e in graph.edges
                for s in e.sources
                for t in e.targets
                if e.kind == "always"
            }
            assert transitive_closure(drawn) == transitive_closure(skel.always_after)


class TestHyperArcs:
    def test_minimal_biclique(self):
        x, y, z = a("x"), a("y"), a("z")
        graph = SkeletonGraph(
            nodes=(),
            edges=(
                GraphEdge((x,), (z,), "always", "obox", "arrow"),
                GraphEdge((y,), (z,), "always", "obox", "arrow"),
            ),
        )
        grouped = group_hyper_arcs(graph)
        assert len(grouped.edges) == 1
        assert grouped.edges[0].sources == (x, y)
        assert grouped.edges[0].targets == (z,)

    def test_distinct_decorations_stay_apart(self):
        x, y, z = a("x"), a("y"), a("z")
        graph = SkeletonGraph(
            nodes=(),
            edges=(
                GraphEdge((x,), (z,), "always", "obox", "arrow"),
                GraphEdge((y,), (z,), "always", "none", "obox"),
            ),
        )
        assert len(group_hyper_arcs(graph).edges) == 2

    def test_grouping_is_lossless_on_random_graphs(self):
        rng = random.Random(33)
        acts = [a(c) for c in "abcdef"]
        kinds = [("always", "obox", "arrow", ""), ("always", "none", "obox", ""), ("directly_follows", "none", "arrow", "3")]
        for _ in range(50):
            edges = []
            seen = set()
            for _ in range(rng.randint(0, 14)):
                kind, tail, head, label = rng.choice(kinds)
                s, t = rng.choice(acts), rng.choice(acts)
                if (s, t, kind) in seen:
                    continue
                seen.add((s, t, kind))
                edges.append(GraphEdge((s,), (t,), kind, tail, head, label))
            graph = SkeletonGraph((), tuple(edges))
            grouped = group_hyper_arcs(graph)
            assert expand_edges(grouped) == expand_edges(graph)

    def test_l1_groups_parallel_always_arcs(self):
        graph = group_hyper_arcs(emit_graph(build_skeleton(l1())))
        multi = [e for e in graph.edges if len(e.sources) > 1 or len(e.targets) > 1]
        assert multi, "expected at least one hyper arc in the default view"
        assert expand_edges(graph) == expand_edges(emit_graph(build_skeleton(l1())))


class TestDotOutput:
    def test_golden_default_view(self):
        assert view_dot(l1(), log_name="l1.txt") == GOLDEN.read_text()

    def test_deterministic(self):
        first = view_dot(l1(), FilterSpec.of(forbidden=["a2"]), ViewConfig(relations=ALL_RELATIONS))
        second = view_dot(l1(), FilterSpec.of(forbidden=["a2"]), ViewConfig(relations=ALL_RELATIONS))
        assert first == second

    def test_empty_relation_view_has_nodes_only(self):
        dot = to_dot(emit_graph(build_skeleton(l1()), ViewConfig(relations=frozenset())))
        assert "->" not in dot
        assert '"|>' in dot and '"[]' in dot.replace("\\n", "\n")

    def test_hyper_arcs_render_via_point_nodes(self):
        dot = view_dot(l1(), view=ViewConfig(hyper=True))
        assert "shape=point" in dot

    def test_quoting_of_odd_names(self):
        from logskeleton import ActivityLog, ActivityTrace, regular

        log = ActivityLog.build([ActivityTrace((regular('say "hi"'),))])
        dot = view_dot(log)
        assert '\\"hi\\"' in dot


class TestViewPayload:
    def test_filtered_payload_merges_classes(self):
        payload = view_payload(l1(), FilterSpec.of(forbidden=["a2"]), log_name="L1")
        nodes = {n["name"]: n for n in payload["graph"]["nodes"]}
        assert nodes["a3"]["class_index"] == nodes["a5"]["class_index"] == nodes["a4"]["class_index"]
        assert payload["provenance"]["forbidden"] == ["a2"]
        assert payload["provenance"]["trace_count"] == 5
        assert payload["provenance"]["source_trace_count"] == 20
        assert "--forbidden a2" in payload["provenance"]["cli"]

    def test_graph_doc_edges_reference_node_indices(self):
        payload = view_payload(l1())
        node_count = len(payload["graph"]["nodes"])
        for edge in payload["graph"]["edges"]:
            for i in edge["sources"] + edge["targets"]:
                assert 0 <= i < node_count

    def test_equivalence_is_node_level_only(self):
        skel = build_skeleton(l1())
        graph = emit_graph(skel, ViewConfig(relations=frozenset({"equivalence"})))
        assert graph.edges == ()
        assert len(graph.nodes) == 10

    def test_filtering_to_empty_log_still_renders_markers(self):
        payload = view_payload(l1(), FilterSpec.of(required=["a7", "a8"]))
        assert payload["provenance"]["trace_count"] == 0
        names = {n["name"] for n in payload["graph"]["nodes"]}
        assert {"|>", "[]"} <= names
