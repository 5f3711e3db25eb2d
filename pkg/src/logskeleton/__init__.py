"""Log skeletons: behavioural relations over activity logs, trace
classification by filtered subsumption, and graph views."""

from .model import (
    Activity,
    ActivityLog,
    ActivityTrace,
    EMPTY_FILTER,
    END,
    ExtendedLog,
    ExtendedTrace,
    FilterSpec,
    START,
    extend_log,
    extend_trace,
    filter_log,
    first_last,
    occurrence_count,
    project_log,
    project_trace,
    regular,
    strip_extension,
)
from .skeleton import LogSkeleton, build_skeleton, transitive_closure, transitive_reduction
from .classify import (
    ClassificationVerdict,
    ClassifierConfig,
    ClassifyStats,
    SubsumptionVerdict,
    Violation,
    classify_batch,
    enumerate_filters,
    subsumes_log,
    subsumes_trace,
)
from .render import (
    DEFAULT_RELATIONS,
    RELATION_KINDS,
    SkeletonGraph,
    ViewConfig,
    emit_graph,
    expand_edges,
    graph_doc,
    group_hyper_arcs,
    node_label,
    to_dot,
    view_dot,
    view_payload,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
