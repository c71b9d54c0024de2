"""List colouring, precoloring extension and critical graphs for plane graphs of girth five."""

__version__ = "0.1.0"

from .embed import (EmbeddingError, FaceRef, PlaneGraph, Subgraph, Walk, canonical_code,  # noqa: E402
                    cycle_graph, from_coordinates, girth, graph_from_code, parse_pg, dump_pg)
from .lists import (HypothesisError, PrecoloredPath, check_cor2, check_thm1, check_thm3,  # noqa: E402
                    is_valid, parse_lst, dump_lst)
from .solver import (classify_AB, find_coloring, is_critical, is_strongly_critical,  # noqa: E402
                     precolorings, skeleton)

__all__ = [
    "EmbeddingError", "FaceRef", "PlaneGraph", "Subgraph", "Walk", "canonical_code", "cycle_graph",
    "from_coordinates", "girth", "graph_from_code", "parse_pg", "dump_pg",
    "HypothesisError", "PrecoloredPath", "check_cor2", "check_thm1", "check_thm3", "is_valid",
    "parse_lst", "dump_lst",
    "classify_AB", "find_coloring", "is_critical", "is_strongly_critical", "precolorings", "skeleton",
]
