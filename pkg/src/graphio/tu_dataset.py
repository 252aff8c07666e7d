"""
Loader for the TU graph benchmark flat-file layout

DIR/NAME_A.txt                 "i, j" per line, 1-indexed global node ids
DIR/NAME_graph_indicator.txt   graph id of every node
DIR/NAME_graph_labels.txt      class label of every graph
DIR/NAME_node_labels.txt       optional, one-hot encoded into node attributes
DIR/NAME_node_attributes.txt   optional, appended after the one-hot channels
DIR/NAME_edge_attributes.txt   optional, one row per line of NAME_A.txt
"""

import logging
import os
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.tensors.graph import Graph
from src.utils.errors import DatasetFormatError

logger = logging.getLogger(__name__)


def _path(directory: str, name: str, suffix: str) -> str:
    return os.path.join(directory, f"{name}_{suffix}.txt")


def _load(directory: str, name: str, suffix: str, required: bool, dtype=np.float64) -> Optional[np.ndarray]:
    path = _path(directory, name, suffix)
    if not os.path.exists(path):
        if required:
            raise DatasetFormatError(f"Missing mandatory TU file {path}")
        return None
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2, dtype=dtype)
    except ValueError as e:
        raise DatasetFormatError(f"Cannot parse {path}: {e}") from e


def parse_tu_dataset(directory: str, name: str) -> List[Tuple[Graph, int]]:
    """Read a TU dataset into (graph, label) pairs, graphs ordered by indicator value"""
    edges = _load(directory, name, "A", required=True, dtype=np.int64)
    indicator = _load(directory, name, "graph_indicator", required=True, dtype=np.int64)[:, 0]
    graph_labels = _load(directory, name, "graph_labels", required=True, dtype=np.int64)[:, 0]
    node_labels = _load(directory, name, "node_labels", required=False, dtype=np.int64)
    node_values = _load(directory, name, "node_attributes", required=False)
    edge_values = _load(directory, name, "edge_attributes", required=False)

    total_nodes = indicator.size
    if edges.size and edges.shape[1] != 2:
        raise DatasetFormatError(f"{name}_A.txt must hold two node ids per line")
    if edges.size == 0:
        edges = np.zeros((0, 2), dtype=np.int64)
    for label, arr in (("node_labels", node_labels), ("node_attributes", node_values)):
        if arr is not None and arr.shape[0] != total_nodes:
            raise DatasetFormatError(f"{name}_{label}.txt has {arr.shape[0]} rows for {total_nodes} nodes")
    if edge_values is not None and edge_values.shape[0] != edges.shape[0]:
        raise DatasetFormatError(f"{name}_edge_attributes.txt has {edge_values.shape[0]} rows for {edges.shape[0]} edges")

    graph_ids = np.unique(indicator)
    if graph_ids.size != graph_labels.size:
        raise DatasetFormatError(f"{graph_ids.size} graphs in the indicator but {graph_labels.size} graph labels")

    features = []
    if node_labels is not None:
        classes, codes = np.unique(node_labels[:, 0], return_inverse=True)
        features.append(np.eye(classes.size, dtype=np.float64)[codes])
    if node_values is not None:
        features.append(node_values)
    node_features = np.concatenate(features, axis=1) if features else None

    position = np.empty(total_nodes, dtype=np.int64)
    members: Dict[int, List[int]] = {}
    for node, gid in enumerate(indicator):
        group = members.setdefault(int(gid), [])
        position[node] = len(group)
        group.append(node)

    per_graph_edges: Dict[int, Dict[Tuple[int, int], int]] = {int(g): {} for g in graph_ids}
    self_loops = 0
    for row, (src, dst) in enumerate(edges - 1):
        if not (0 <= src < total_nodes and 0 <= dst < total_nodes):
            raise DatasetFormatError(f"{name}_A.txt line {row + 1} references an unknown node")
        if indicator[src] != indicator[dst]:
            raise DatasetFormatError(f"{name}_A.txt line {row + 1} joins nodes of different graphs")
        if src == dst:
            self_loops += 1
            continue
        i, j = int(position[src]), int(position[dst])
        per_graph_edges[int(indicator[src])].setdefault((min(i, j), max(i, j)), row)
    if self_loops:
        logger.warning(f"⚠️ Dropped {self_loops} self-loops while loading {name}")

    records = []
    for gid, label in zip(graph_ids, graph_labels):
        nodes = members[int(gid)]
        pairs = per_graph_edges[int(gid)]
        records.append(
            (
                Graph.build(
                    n=len(nodes),
                    edges=list(pairs.keys()),
                    node_attrs=node_features[nodes] if node_features is not None else None,
                    edge_attrs=edge_values[list(pairs.values())] if edge_values is not None else None,
                ),
                int(label),
            )
        )
    logger.info(f"✅ Loaded TU dataset {name}: {len(records)} graphs, {total_nodes} nodes")
    return records
