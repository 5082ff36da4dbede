"""
Boolean relation matrices for finite partial orders.
Closure, reduction and order-axiom checks over n x n numpy bool arrays.
"""

from typing import Optional, Tuple

import networkx as nx
import numpy as np

from models.errors import CycleDetectedError


def relation_graph(relation: np.ndarray) -> nx.DiGraph:
    """Directed graph with an edge i -> j for every related pair i < j."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(relation)))
    graph.add_edges_from(map(tuple, np.argwhere(relation)))
    return graph


def transitive_closure(relation: np.ndarray) -> np.ndarray:
    """Strict transitive closure of an acyclic relation.

    Rows are packed into bitsets and accumulated in reverse topological
    order, so each node ORs in the reach of its direct successors.
    """
    relation = np.asarray(relation, dtype=bool)
    n = len(relation)
    if relation.shape != (n, n):
        raise ValueError(f"Relation must be square, got shape {relation.shape}")
    if np.any(np.diagonal(relation)):
        i = int(np.flatnonzero(np.diagonal(relation))[0])
        raise CycleDetectedError(f"Element {i} is related to itself")
    graph = relation_graph(relation)
    try:
        order = list(nx.topological_sort(graph))
    except nx.NetworkXUnfeasible as exc:
        cycle = nx.find_cycle(graph)
        raise CycleDetectedError(f"Relation has a cycle through {[u for u, _ in cycle]}") from exc

    packed = np.packbits(relation, axis=1)
    for node in reversed(order):
        successors = np.flatnonzero(relation[node])
        if successors.size:
            packed[node] |= np.bitwise_or.reduce(packed[successors], axis=0)
    return np.unpackbits(packed, axis=1, count=n).astype(bool)


def transitive_reduction(order: np.ndarray) -> np.ndarray:
    """Covering relation of a transitively closed strict order."""
    order = np.asarray(order, dtype=bool)
    if not order.any():
        return order.copy()
    as_float = order.astype(np.float32)
    two_step = (as_float @ as_float) > 0
    return order & ~two_step


def order_axiom_violation(order: np.ndarray) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """First violation of irreflexivity, antisymmetry or transitivity, if any."""
    order = np.asarray(order, dtype=bool)
    diagonal = np.flatnonzero(np.diagonal(order))
    if diagonal.size:
        return "irreflexive", (int(diagonal[0]),)
    both = np.argwhere(order & order.T)
    if both.size:
        return "antisymmetric", tuple(int(v) for v in both[0])
    as_float = order.astype(np.float32)
    missing = np.argwhere(((as_float @ as_float) > 0) & ~order)
    if missing.size:
        return "transitive", tuple(int(v) for v in missing[0])
    return None


def is_strict_order(order: np.ndarray) -> bool:
    return order_axiom_violation(order) is None
