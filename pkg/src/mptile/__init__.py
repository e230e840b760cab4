"""Tiling-theoretic parameters, fractional clique tilings and exact H-tilings of multipartite graphs."""

from .graph import (BlockStructure, Graph, MultipartiteGraph, blow_up, min_multipartite_degree, parse_graph,
                    parse_multipartite)
from .params import ChromaticProfile, chromatic_number, chromatic_profile, enumerate_r_colourings

__all__ = [
    "BlockStructure",
    "ChromaticProfile",
    "Graph",
    "MultipartiteGraph",
    "blow_up",
    "chromatic_number",
    "chromatic_profile",
    "enumerate_r_colourings",
    "min_multipartite_degree",
    "parse_graph",
    "parse_multipartite",
]
