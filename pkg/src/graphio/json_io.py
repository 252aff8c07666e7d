"""
Graph JSON documents and JSON-lines corpora

Graph document: {n, directed, nodes: [{id, attr}], edges: [{src, dst, attr}]}.
Corpus file: one {"graph": <graph document>, "label": <int>} object per line.
"""

import json
import logging
import os
from typing import Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from src.tensors.graph import Graph
from src.utils.errors import DatasetFormatError, GraphValidationError

logger = logging.getLogger(__name__)


class NodeDocument(BaseModel):
    id: int = Field(..., ge=0)
    attr: Optional[List[float]] = None


class EdgeDocument(BaseModel):
    src: int = Field(..., ge=0)
    dst: int = Field(..., ge=0)
    attr: Optional[List[float]] = None


class GraphDocument(BaseModel):
    n: int = Field(..., ge=1)
    directed: bool = False
    nodes: List[NodeDocument] = Field(default_factory=list)
    edges: List[EdgeDocument] = Field(default_factory=list)


def _attribute_matrix(items, count: int, what: str) -> Optional[np.ndarray]:
    with_attr = [item for item in items if item.attr is not None]
    if not with_attr:
        return None
    if len(with_attr) != count:
        raise GraphValidationError(f"Either every {what} carries attributes or none does")
    widths = {len(item.attr) for item in with_attr}
    if len(widths) != 1:
        raise GraphValidationError(f"All {what} attribute vectors must have the same length")
    return np.array([item.attr for item in with_attr], dtype=np.float64).reshape(count, widths.pop())


def graph_from_document(doc: GraphDocument) -> Graph:
    ids = [node.id for node in doc.nodes]
    if any(i >= doc.n for i in ids):
        raise GraphValidationError(f"Node id outside 0..{doc.n - 1}")
    if len(set(ids)) != len(ids):
        raise GraphValidationError("Duplicate node id")
    for e in doc.edges:
        if e.src == e.dst:
            raise GraphValidationError(f"Self-loop on node {e.src} is not allowed")

    node_attrs = None
    ordered = sorted(doc.nodes, key=lambda node: node.id)
    if any(node.attr is not None for node in ordered):
        if len(ordered) != doc.n:
            raise GraphValidationError("Node attributes need an entry for every node")
        node_attrs = _attribute_matrix(ordered, doc.n, "node")
    edge_attrs = _attribute_matrix(doc.edges, len(doc.edges), "edge")
    return Graph.build(
        n=doc.n,
        edges=[(e.src, e.dst) for e in doc.edges],
        node_attrs=node_attrs,
        edge_attrs=edge_attrs,
        directed=doc.directed,
    )


def graph_to_document(graph: Graph) -> dict:
    nodes = [{"id": i} for i in range(graph.n)]
    if graph.d_node:
        for i, row in enumerate(graph.node_attrs):
            nodes[i]["attr"] = [float(x) for x in row]
    edges = []
    for idx, (i, j) in enumerate(graph.edges):
        edge = {"src": i, "dst": j}
        if graph.d_edge:
            edge["attr"] = [float(x) for x in graph.edge_attrs[idx]]
        edges.append(edge)
    return {"n": graph.n, "directed": graph.directed, "nodes": nodes, "edges": edges}


def parse_graph_json(text: str) -> Graph:
    try:
        doc = GraphDocument.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise DatasetFormatError(f"Malformed graph JSON: {e}") from e
    except ValidationError as e:
        raise DatasetFormatError(f"Graph document does not match the schema: {e}") from e
    return graph_from_document(doc)


def write_graph_json(graph: Graph) -> str:
    return json.dumps(graph_to_document(graph))


def read_graph_file(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_graph_json(f.read())


def write_graph_file(graph: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(write_graph_json(graph))


def read_corpus(path: str) -> List[Tuple[Graph, int]]:
    """Load (graph, label) records from a JSON-lines corpus"""
    if not os.path.exists(path):
        raise DatasetFormatError(f"Corpus file not found: {path}")
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                doc = GraphDocument.model_validate(record["graph"])
                label = int(record.get("label", 0))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise DatasetFormatError(f"{path}:{line_no}: invalid corpus record ({e})") from e
            records.append((graph_from_document(doc), label))
    logger.info(f"✅ Loaded {len(records)} graphs from {path}")
    return records


def write_corpus(path: str, records: Iterable[Tuple[Graph, int]], append: bool = False) -> int:
    """Write (graph, label) records as JSON lines; returns the number written"""
    count = 0
    with open(path, "a" if append else "w", encoding="utf-8") as f:
        for graph, label in records:
            f.write(json.dumps({"graph": graph_to_document(graph), "label": int(label)}) + "\n")
            count += 1
    logger.info(f"✅ Wrote {count} graphs to {path}{' (appended)' if append else ''}")
    return count
