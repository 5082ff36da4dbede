"""
Spacetime models for CausalLab.
Represents events, coordinate windows, Minkowski models (plain and causally
excised), double cones and graph surfaces over the spatial slice.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import OutOfWindowError


class ModelKind(Enum):
    """Supported spacetime families."""
    MINKOWSKI = "minkowski"
    EXCISED_MINKOWSKI = "excised_minkowski"


class CausalVerdict(Enum):
    """Causal relation between two events."""
    CHRONOLOGICAL = "chronological"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"
    IDENTICAL = "identical"


class TimeOrientation(Enum):
    """Future/past annotation of a causal relation."""
    FUTURE = "future"
    PAST = "past"
    NONE = "none"


class Regularity(Enum):
    """Regularity flag of a graph surface."""
    CONTINUOUS = "continuous"
    SMOOTH = "smooth"


@dataclass(frozen=True)
class Event:
    """A spacetime point (t, x) in Minkowski coordinates."""
    t: float
    x: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'x', tuple(float(v) for v in self.x))
        object.__setattr__(self, 't', float(self.t))
        if not all(math.isfinite(v) for v in (self.t, *self.x)):
            raise ValueError(f"Event coordinates must be finite: {self}")

    @classmethod
    def from_sequence(cls, coords: Sequence[float]) -> "Event":
        """Build an event from a flat (t, x1, ..., xd) sequence."""
        if len(coords) < 2:
            raise ValueError("An event needs a time and at least one spatial coordinate")
        return cls(coords[0], tuple(coords[1:]))

    @property
    def dimension(self) -> int:
        return len(self.x)

    def as_array(self) -> np.ndarray:
        return np.array((self.t, *self.x), dtype=float)

    def __str__(self) -> str:
        coords = ", ".join(f"{v:g}" for v in (self.t, *self.x))
        return f"({coords})"


@dataclass(frozen=True)
class Window:
    """Closed coordinate box [lower, upper] over (t, x1, ..., xd)."""
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'lower', tuple(float(v) for v in self.lower))
        object.__setattr__(self, 'upper', tuple(float(v) for v in self.upper))
        if len(self.lower) != len(self.upper) or len(self.lower) < 2:
            raise ValueError("Window bounds must have matching length >= 2")
        if any(hi <= lo for lo, hi in zip(self.lower, self.upper)):
            raise ValueError(f"Window must have positive volume: {self.lower} .. {self.upper}")

    @classmethod
    def unit(cls, d: int) -> "Window":
        return cls((0.0,) * (d + 1), (1.0,) * (d + 1))

    @property
    def dimension(self) -> int:
        """Spatial dimension d."""
        return len(self.lower) - 1

    @property
    def volume(self) -> float:
        return float(np.prod([hi - lo for lo, hi in zip(self.lower, self.upper)]))

    @property
    def spatial_lower(self) -> Tuple[float, ...]:
        return self.lower[1:]

    @property
    def spatial_upper(self) -> Tuple[float, ...]:
        return self.upper[1:]

    def contains(self, event: Event) -> bool:
        coords = (event.t, *event.x)
        if len(coords) != len(self.lower):
            return False
        return all(lo <= v <= hi for v, lo, hi in zip(coords, self.lower, self.upper))

    def strictly_contains(self, event: Event) -> bool:
        coords = (event.t, *event.x)
        if len(coords) != len(self.lower):
            return False
        return all(lo < v < hi for v, lo, hi in zip(coords, self.lower, self.upper))

    def contains_array(self, points: np.ndarray) -> np.ndarray:
        """Vectorized membership for an (m, d+1) coordinate array."""
        lower = np.asarray(self.lower)
        upper = np.asarray(self.upper)
        return np.all((points >= lower) & (points <= upper), axis=1)


@dataclass(frozen=True)
class SpacetimeModel:
    """A member of the Minkowski family with its working chart."""
    kind: ModelKind
    d: int
    window: Window
    excision_point: Optional[Event] = None

    def __post_init__(self):
        if not 1 <= self.d <= 3:
            raise ValueError(f"Spatial dimension must be 1..3, got {self.d}")
        if self.window.dimension != self.d:
            raise ValueError("Window dimension does not match the model dimension")
        if self.kind == ModelKind.EXCISED_MINKOWSKI:
            if self.excision_point is None:
                raise ValueError("An excised model needs an excision point")
            if not self.window.strictly_contains(self.excision_point):
                raise ValueError("Excision point must lie strictly inside the window")
        elif self.excision_point is not None:
            raise ValueError("Only excised models carry an excision point")

    @classmethod
    def minkowski(cls, d: int, window: Optional[Window] = None) -> "SpacetimeModel":
        return cls(ModelKind.MINKOWSKI, d, window or Window.unit(d))

    @classmethod
    def excised(cls, d: int, excision_point: Event, window: Optional[Window] = None) -> "SpacetimeModel":
        return cls(ModelKind.EXCISED_MINKOWSKI, d, window or Window.unit(d), excision_point)

    @property
    def is_excised(self) -> bool:
        return self.kind == ModelKind.EXCISED_MINKOWSKI

    def require_inside(self, *events: Event) -> None:
        """Reject any event outside the window."""
        for event in events:
            if event.dimension != self.d or not self.window.contains(event):
                raise OutOfWindowError(f"Event {event} lies outside the window")

    def ambient(self) -> "SpacetimeModel":
        """The un-excised model over the same window."""
        return SpacetimeModel.minkowski(self.d, self.window)

    @classmethod
    def from_label(cls, label: str, window: Optional[Window] = None,
                   excision_point: Optional[Event] = None) -> "SpacetimeModel":
        """Parse short labels such as 'mink2' (1+1) or 'mink4' (1+3)."""
        label = label.strip().lower()
        if not label.startswith("mink") or not label[4:].isdigit():
            raise ValueError(f"Unknown model label '{label}'; expected mink2, mink3 or mink4")
        d = int(label[4:]) - 1
        if excision_point is not None:
            return cls.excised(d, excision_point, window)
        return cls.minkowski(d, window)

    def to_dict(self) -> dict:
        data = {
            'kind': self.kind.value,
            'd': self.d,
            'window': {'lower': list(self.window.lower), 'upper': list(self.window.upper)},
        }
        if self.excision_point is not None:
            data['excision_point'] = list(self.excision_point.as_array())
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SpacetimeModel":
        d = int(data['d'])
        window_data = data.get('window')
        window = Window(window_data['lower'], window_data['upper']) if window_data else Window.unit(d)
        point = data.get('excision_point')
        return cls(ModelKind(data.get('kind', ModelKind.MINKOWSKI.value)), d, window,
                   Event.from_sequence(point) if point is not None else None)


@dataclass(frozen=True)
class BallDiamond:
    """Open double cone over a spatial ball at time slice_time."""
    slice_time: float
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, 'center', tuple(float(v) for v in self.center))
        if not self.radius > 0:
            raise ValueError(f"Diamond radius must be positive, got {self.radius}")

    @property
    def apexes(self) -> Tuple[Event, Event]:
        return (Event(self.slice_time - self.radius, self.center),
                Event(self.slice_time + self.radius, self.center))

    def fits_in(self, window: Window) -> bool:
        """Whether the closed cone lies inside the window."""
        low, high = self.apexes
        if not (window.contains(low) and window.contains(high)):
            return False
        for axis, c in enumerate(self.center):
            if c - self.radius < window.spatial_lower[axis] or c + self.radius > window.spatial_upper[axis]:
                return False
        return True


@dataclass(frozen=True)
class SpatialBall:
    """Open ball in the spatial slice, used as a base set."""
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, 'center', tuple(float(v) for v in self.center))
        if not self.radius > 0:
            raise ValueError(f"Ball radius must be positive, got {self.radius}")

    def closure_inside(self, other: "SpatialBall") -> bool:
        """Closure of self contained in the open ball other."""
        gap = np.linalg.norm(np.subtract(self.center, other.center))
        return gap + self.radius < other.radius

    def contains(self, points: np.ndarray) -> np.ndarray:
        return np.linalg.norm(points - np.asarray(self.center), axis=-1) < self.radius

    def contains_closed(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        return np.linalg.norm(points - np.asarray(self.center), axis=-1) <= self.radius + tol


@dataclass(frozen=True)
class SurfaceGrid:
    """Uniform spatial lattice over a box of the slice."""
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    h: float

    def __post_init__(self):
        object.__setattr__(self, 'lower', tuple(float(v) for v in self.lower))
        object.__setattr__(self, 'upper', tuple(float(v) for v in self.upper))
        if len(self.lower) != len(self.upper) or not self.lower:
            raise ValueError("Grid bounds must have matching nonzero length")
        if not self.h > 0:
            raise ValueError("Grid spacing must be positive")
        for lo, hi in zip(self.lower, self.upper):
            cells = (hi - lo) / self.h
            if hi <= lo or abs(cells - round(cells)) > 1e-9:
                raise ValueError(f"Grid extent {lo}..{hi} is not a multiple of h={self.h}")

    @classmethod
    def cube(cls, half_width: float, d: int, h: float) -> "SurfaceGrid":
        return cls((-half_width,) * d, (half_width,) * d, h)

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(int(round((hi - lo) / self.h)) + 1 for lo, hi in zip(self.lower, self.upper))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def axes(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.linspace(lo, hi, n) for lo, hi, n in zip(self.lower, self.upper, self.shape))

    def points(self) -> np.ndarray:
        """All lattice nodes as an (N, d) array in C order."""
        mesh = np.meshgrid(*self.axes(), indexing='ij')
        return np.stack([m.ravel() for m in mesh], axis=1)

    def refined(self, factor: int = 2) -> "SurfaceGrid":
        """Same box with spacing h / factor; every node stays a node."""
        return SurfaceGrid(self.lower, self.upper, self.h / factor)

    def node_index(self, y: Sequence[float], tol: float = 1e-9) -> Optional[Tuple[int, ...]]:
        """Lattice index of y if y is a node, else None."""
        index = []
        for v, lo, n in zip(y, self.lower, self.shape):
            k = (v - lo) / self.h
            if abs(k - round(k)) > tol or not 0 <= round(k) < n:
                return None
            index.append(int(round(k)))
        return tuple(index)

    def contains(self, y: Sequence[float]) -> bool:
        return all(lo <= v <= hi for v, lo, hi in zip(y, self.lower, self.upper))


SurfaceClosure = Callable[[np.ndarray], np.ndarray]


@dataclass
class SurfaceFunction:
    """Graph surface t = tau(y) sampled on a lattice of the slice."""
    grid: SurfaceGrid
    values: np.ndarray
    regularity: Regularity
    closure: Optional[SurfaceClosure] = field(default=None, repr=False)
    label: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(self.grid.shape)

    @classmethod
    def from_closure(cls, grid: SurfaceGrid, closure: SurfaceClosure,
                     regularity: Regularity, label: str = "") -> "SurfaceFunction":
        values = closure(grid.points()).reshape(grid.shape)
        return cls(grid, values, regularity, closure, label)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate tau on arbitrary slice points (closure or exact nodes)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.closure is not None:
            return np.asarray(self.closure(points), dtype=float)
        result = np.empty(len(points))
        for i, y in enumerate(points):
            index = self.grid.node_index(y)
            if index is None:
                raise ValueError(f"Surface '{self.label}' has no closure and {tuple(y)} is not a node")
            result[i] = self.values[index]
        return result

    def value_at(self, y: Sequence[float]) -> float:
        return float(self.evaluate(np.asarray([y], dtype=float))[0])

    def flat_values(self) -> np.ndarray:
        return self.values.ravel()
