"""Kempe equivalence of graph colorings on plane graphs."""

from .coloring import Coloring, count_colorings, enumerate_colorings, is_4_critical, is_proper
from .critical_pipeline import build_g_star, find_v_good, v_good_certificate, verify_theorem
from .fisk import fisk_reduce, fisk_trace
from .graph_core import AbstractGraph, PlaneGraph, from_faces, load_graph, parse_rotation
from .kempe import Certificate, KempeMove, find_path, kempe_chain, kempe_classes, verify_certificate

__all__ = [
    "AbstractGraph", "Certificate", "Coloring", "KempeMove", "PlaneGraph", "build_g_star", "count_colorings",
    "enumerate_colorings", "find_path", "find_v_good", "fisk_reduce", "fisk_trace", "from_faces",
    "is_4_critical", "is_proper", "kempe_chain", "kempe_classes", "v_good_certificate", "load_graph",
    "parse_rotation", "verify_certificate", "verify_theorem",
]
