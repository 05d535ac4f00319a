from .diagram import (
    EType,
    VType,
    ZXDiagram,
    fuse,
    graph_like_violations,
    is_graph_like,
    native_to_diagram,
    reduce_vertex,
    to_graph_like,
)
from .evaluate import MAX_DENSE_VERTICES, EvaluationCapError, evaluate, evaluate_dense

__all__ = [
    "EType",
    "VType",
    "ZXDiagram",
    "fuse",
    "graph_like_violations",
    "is_graph_like",
    "native_to_diagram",
    "reduce_vertex",
    "to_graph_like",
    "MAX_DENSE_VERTICES",
    "EvaluationCapError",
    "evaluate",
    "evaluate_dense",
]
