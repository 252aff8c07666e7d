# Dense tensors, permutations, set partitions and graph-to-tensor conversion
from src.tensors.partitions import Partition, bell, enumerate_partitions, equality_pattern
from src.tensors.dense import DenseTensor, Permutation, apply_permutation
from src.tensors.graph import Graph, graph_to_tensor, null_graph_tensor

__all__ = [
    "Partition",
    "bell",
    "enumerate_partitions",
    "equality_pattern",
    "DenseTensor",
    "Permutation",
    "apply_permutation",
    "Graph",
    "graph_to_tensor",
    "null_graph_tensor",
]
