# Graph ingestion, serialization and synthetic generators
from src.graphio.json_io import parse_graph_json, read_corpus, write_corpus, write_graph_json
from src.graphio.tu_dataset import parse_tu_dataset
from src.graphio.sbm import SbmParams, sbm_generate
from src.graphio.delaunay import DelaunayParams, delaunay_generate, delaunay_triangulation

__all__ = [
    "parse_graph_json",
    "write_graph_json",
    "read_corpus",
    "write_corpus",
    "parse_tu_dataset",
    "SbmParams",
    "sbm_generate",
    "DelaunayParams",
    "delaunay_generate",
    "delaunay_triangulation",
]
