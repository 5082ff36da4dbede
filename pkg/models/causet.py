"""
Causal set models for CausalLab.
A finite strict order with optional embedding coordinates, plus the
regions, slices, diamonds and excisions built on top of it.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from utils.bitmatrix import order_axiom_violation, transitive_reduction

from .spacetime import Event, SpacetimeModel

PointSet = FrozenSet[int]


def point_set(points: Iterable[int]) -> PointSet:
    return frozenset(int(p) for p in points)


class RegionKind(Enum):
    """How a region was produced."""
    CONVEX = "convex"
    DIAMOND = "diamond"
    ARBITRARY = "arbitrary"


@dataclass(frozen=True)
class Region:
    """A subset of causet points."""
    points: PointSet
    kind: RegionKind = RegionKind.ARBITRARY

    def __post_init__(self):
        object.__setattr__(self, 'points', point_set(self.points))

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, item: int) -> bool:
        return item in self.points

    def sorted_points(self) -> List[int]:
        return sorted(self.points)


@dataclass(frozen=True)
class Slice:
    """An antichain used as a discrete Cauchy-surface candidate."""
    points: PointSet
    maximal: bool
    cauchy: Optional[bool] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, 'points', point_set(self.points))

    def sorted_points(self) -> List[int]:
        return sorted(self.points)


@dataclass(frozen=True)
class DiamondSpec:
    """A base subset of a slice together with its domain of dependence."""
    slice: Slice
    base: PointSet
    span: PointSet

    def __post_init__(self):
        object.__setattr__(self, 'base', point_set(self.base))
        object.__setattr__(self, 'span', point_set(self.span))
        if not self.base:
            raise ValueError("Diamond base must be nonempty")
        if not self.base <= self.slice.points:
            raise ValueError("Diamond base must be a subset of its slice")

    @property
    def search_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Smallest span first, then lexicographic base."""
        return len(self.span), tuple(sorted(self.base))

    def as_region(self) -> Region:
        return Region(self.span, RegionKind.DIAMOND)


@dataclass(eq=False)
class Causet:
    """Finite causal set: strict order bit-matrix plus provenance."""
    order: np.ndarray
    coords: Optional[np.ndarray] = None
    seed: Optional[int] = None
    model: Optional[SpacetimeModel] = field(default=None, repr=False)

    def __post_init__(self):
        order = np.array(self.order, dtype=bool)
        if order.ndim != 2 or order.shape[0] != order.shape[1]:
            raise ValueError(f"Order must be a square bit-matrix, got shape {order.shape}")
        violation = order_axiom_violation(order)
        if violation is not None:
            axiom, witness = violation
            raise ValueError(f"Order is not {axiom} at {witness}")
        order.setflags(write=False)
        self.order = order
        if self.coords is not None:
            coords = np.array(self.coords, dtype=float)
            if coords.ndim != 2 or len(coords) != len(order):
                raise ValueError(f"Coordinates of shape {coords.shape} do not match {len(order)} points")
            coords.setflags(write=False)
            self.coords = coords

    @classmethod
    def empty(cls, model: Optional[SpacetimeModel] = None, seed: Optional[int] = None) -> "Causet":
        d = model.d if model is not None else 1
        return cls(np.zeros((0, 0), dtype=bool), np.zeros((0, d + 1)), seed, model)

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def points(self) -> PointSet:
        return frozenset(range(self.n))

    @property
    def has_coords(self) -> bool:
        return self.coords is not None and self.n > 0

    @cached_property
    def hasse(self) -> np.ndarray:
        hasse = transitive_reduction(self.order)
        hasse.setflags(write=False)
        return hasse

    @cached_property
    def comparable(self) -> np.ndarray:
        both = self.order | self.order.T
        both.setflags(write=False)
        return both

    @cached_property
    def hasse_graph(self) -> nx.Graph:
        """Undirected covering graph used for connectivity questions."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from((int(i), int(j)) for i, j in np.argwhere(self.hasse))
        return graph

    @cached_property
    def topological_order(self) -> Tuple[int, ...]:
        """Points sorted by number of predecessors, then id."""
        depth = self.order.sum(axis=0)
        return tuple(int(i) for i in np.lexsort((np.arange(self.n), depth)))

    def precedes(self, a: int, b: int) -> bool:
        return bool(self.order[a, b])

    def cover_edges(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.hasse)]

    def event(self, i: int) -> Event:
        if self.coords is None:
            raise ValueError("Causet has no embedding coordinates")
        return Event.from_sequence(self.coords[i])

    def times(self) -> Optional[np.ndarray]:
        return None if self.coords is None else self.coords[:, 0]

    def mask(self, points: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        ids = list(points)
        if ids:
            m[ids] = True
        return m


@dataclass(frozen=True)
class Excision:
    """Induced subcauset on the points outside J(p), with its id-map."""
    causet: Causet
    point: int
    to_ambient: Tuple[int, ...]

    @cached_property
    def to_local(self) -> Dict[int, int]:
        return {ambient: local for local, ambient in enumerate(self.to_ambient)}

    def ambient_ids(self, local_points: Iterable[int]) -> PointSet:
        return frozenset(self.to_ambient[i] for i in local_points)

    def local_ids(self, ambient_points: Iterable[int]) -> PointSet:
        """Map ambient ids into the excision; ids in J(p) raise KeyError."""
        return frozenset(self.to_local[i] for i in ambient_points)
