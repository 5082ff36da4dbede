"""
Continuum causal geometry service for CausalLab.
Exact causal predicates for the Minkowski family, its causal excisions and
double cones, together with the sampling oracles that cross-check them.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

import config
from models.errors import InExcisedShadowError
from models.spacetime import (
    BallDiamond, CausalVerdict, Event, SpacetimeModel, TimeOrientation
)

logger = logging.getLogger(__name__)


@dataclass
class CurveOracleReport:
    """Outcome of sampling endless causal curves through an event."""
    all_meet: bool
    curves: int
    escaping_endpoint: Optional[Tuple[float, ...]] = None
    escaping_velocity: Optional[Tuple[float, ...]] = None


@dataclass
class ConeNestingReport:
    """Sampling-oracle verdicts for an interpolated cone."""
    inner_inside: bool
    inside_outer: bool
    disjoint_from_point: bool
    h: float
    samples: int
    witnesses: List[Tuple[float, ...]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.inner_inside and self.inside_outer and self.disjoint_from_point


def interval(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minkowski interval -dt^2 + |dx|^2 for (..., d+1) coordinate arrays."""
    delta = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    return -delta[..., 0] ** 2 + np.sum(delta[..., 1:] ** 2, axis=-1)


def causal_order_matrix(coords: np.ndarray, tol: float = config.NULL_TOLERANCE) -> np.ndarray:
    """Strict causal order among sprinkled points: M[i, j] iff i precedes j."""
    coords = np.asarray(coords, dtype=float)
    if len(coords) == 0:
        return np.zeros((0, 0), dtype=bool)
    dt = coords[None, :, 0] - coords[:, None, 0]
    dx2 = np.zeros_like(dt)
    for axis in range(1, coords.shape[1]):
        diff = coords[None, :, axis] - coords[:, None, axis]
        dx2 += diff * diff
    return (dt > 0) & (dx2 - dt * dt <= tol)


class ContinuumService:
    """Exact causal predicates on Minkowski models and their excisions."""

    def __init__(self, null_tolerance: float = config.NULL_TOLERANCE,
                 surface_tolerance: float = config.SURFACE_TOLERANCE):
        self.null_tolerance = null_tolerance
        self.surface_tolerance = surface_tolerance

    # ------------------------------------------------------------------
    # Pointwise predicates

    def in_shadow(self, model: SpacetimeModel, q: Event) -> bool:
        """Whether q lies in J(p) of an excised model."""
        if not model.is_excised:
            return False
        return float(interval(model.excision_point.as_array(), q.as_array())) <= self.null_tolerance

    def causal_relation(self, model: SpacetimeModel, a: Event, b: Event) -> CausalVerdict:
        """Classify the pair (a, b) by the sign of the interval.

        On an excised model both events must lie outside J(p). The straight
        segment between causally related events outside J(p) never meets J(p),
        so the excised relation is the ambient one restricted to M_p.
        """
        model.require_inside(a, b)
        for event in (a, b):
            if self.in_shadow(model, event):
                raise InExcisedShadowError(f"Event {event} lies in J(p) of the excised model")
        return self._ambient_verdict(a, b)

    def time_orientation(self, model: SpacetimeModel, a: Event, b: Event) -> TimeOrientation:
        """Future/past annotation of b relative to a."""
        verdict = self.causal_relation(model, a, b)
        if verdict in (CausalVerdict.SPACELIKE, CausalVerdict.IDENTICAL):
            return TimeOrientation.NONE
        return TimeOrientation.FUTURE if b.t > a.t else TimeOrientation.PAST

    def _ambient_verdict(self, a: Event, b: Event) -> CausalVerdict:
        if a == b:
            return CausalVerdict.IDENTICAL
        value = float(interval(a.as_array(), b.as_array()))
        if abs(value) <= self.null_tolerance:
            return CausalVerdict.LIGHTLIKE
        return CausalVerdict.CHRONOLOGICAL if value < 0 else CausalVerdict.SPACELIKE

    def segment_avoids_shadow(self, model: SpacetimeModel, a: Event, b: Event) -> bool:
        """Exact check that the straight segment a -> b misses J(p).

        The interval to p is concave along a causal segment, so for causal
        pairs this reduces to the endpoint test.
        """
        if not model.is_excised:
            return True
        p = model.excision_point.as_array()
        start = a.as_array() - p
        step = b.as_array() - a.as_array()
        # interval(p, a + s * step) = A s^2 + B s + C on s in [0, 1]
        quad = -step[0] ** 2 + np.dot(step[1:], step[1:])
        lin = 2.0 * (-start[0] * step[0] + np.dot(start[1:], step[1:]))
        const = -start[0] ** 2 + np.dot(start[1:], start[1:])
        candidates = [0.0, 1.0]
        if quad > 0:
            vertex = -lin / (2.0 * quad)
            if 0.0 < vertex < 1.0:
                candidates.append(vertex)
        lowest = min(quad * s * s + lin * s + const for s in candidates)
        return lowest > self.null_tolerance

    def excision_membership(self, model: SpacetimeModel, q: Event) -> bool:
        """True iff q lies in the causal excision M_p = M minus J(p)."""
        model.require_inside(q)
        if not model.is_excised:
            return True
        return float(interval(model.excision_point.as_array(), q.as_array())) > 0.0

    def surface_membership_co(self, model: SpacetimeModel, q: Event) -> bool:
        """Membership in the cone surface -4 t^2 + |x|^2 = 0, t > 0."""
        model.require_inside(q)
        radius = float(np.linalg.norm(q.x))
        return q.t > 0 and abs(q.t - radius / 2.0) <= self.surface_tolerance

    def diamond_membership(self, model: SpacetimeModel, dia: BallDiamond, q: Event) -> bool:
        """Closed-form membership in the open double cone (D(G))^o."""
        model.require_inside(q)
        if self.in_shadow(model, q):
            return False
        offset = float(np.linalg.norm(np.subtract(q.x, dia.center)))
        return offset + abs(q.t - dia.slice_time) < dia.radius

    def causally_disjoint_cones(self, model: SpacetimeModel, d1: BallDiamond, d2: BallDiamond) -> bool:
        """Closed-form test that the closures of two cones are causally disjoint."""
        for dia in (d1, d2):
            low, high = dia.apexes
            model.require_inside(low, high)
        gap = float(np.linalg.norm(np.subtract(d1.center, d2.center)))
        return gap > d1.radius + d2.radius + abs(d1.slice_time - d2.slice_time)

    def cone_disjoint_from_point(self, dia: BallDiamond, p: Event) -> bool:
        """Closure of the cone misses J(p)."""
        gap = float(np.linalg.norm(np.subtract(dia.center, p.x)))
        return gap > dia.radius + abs(dia.slice_time - p.t)

    @staticmethod
    def cone_closure_inside(inner: BallDiamond, outer: BallDiamond) -> bool:
        """Closure of inner contained in the open cone outer."""
        gap = float(np.linalg.norm(np.subtract(inner.center, outer.center)))
        return gap + abs(inner.slice_time - outer.slice_time) + inner.radius < outer.radius

    # ------------------------------------------------------------------
    # Sampling oracles

    def diamond_membership_oracle(self, dia: BallDiamond, q: Event,
                                  curves: int = config.ORACLE_CURVES,
                                  segments: int = config.ORACLE_SEGMENTS,
                                  rng: Optional[np.random.Generator] = None) -> CurveOracleReport:
        """Check that every sampled endless causal curve through q meets the base."""
        rng = rng or np.random.default_rng(0)
        center = np.asarray(dia.center)
        duration = abs(q.t - dia.slice_time)
        start = np.asarray(q.x)
        if duration == 0.0:
            inside = float(np.linalg.norm(start - center)) < dia.radius
            return CurveOracleReport(inside, 1, None if inside else tuple(start))

        d = len(start)
        velocities = self._sample_velocities(rng, curves, segments, d)
        cuts = np.sort(rng.uniform(0.0, duration, size=(curves, segments - 1)), axis=1)
        bounds = np.concatenate([np.zeros((curves, 1)), cuts, np.full((curves, 1), duration)], axis=1)
        lengths = np.diff(bounds, axis=1)
        endpoints = start + np.einsum('cs,csd->cd', lengths, velocities)
        distances = np.linalg.norm(endpoints - center, axis=1)
        escaping = np.flatnonzero(distances >= dia.radius)
        if escaping.size == 0:
            return CurveOracleReport(True, curves)
        first = int(escaping[0])
        return CurveOracleReport(False, curves, tuple(endpoints[first]), tuple(velocities[first, 0]))

    @staticmethod
    def _sample_velocities(rng: np.random.Generator, curves: int, segments: int, d: int) -> np.ndarray:
        """Spatial velocities with |v| <= 1; the first curves are straight null lines."""
        directions = rng.normal(size=(curves, segments, d))
        directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
        speeds = rng.uniform(0.0, 1.0, size=(curves, segments, 1)) ** 0.25
        velocities = directions * speeds
        null_lines = min(curves, max(2 * d, curves // 10))
        axis_dirs = np.concatenate([np.eye(d), -np.eye(d)])
        for i in range(null_lines):
            direction = axis_dirs[i] if i < len(axis_dirs) else directions[i, 0]
            velocities[i, :, :] = direction / np.linalg.norm(direction)
        return velocities

    @staticmethod
    def cone_lattice(dia: BallDiamond, h: float) -> np.ndarray:
        """Lattice points (spacing h) of the closed cone plus its apexes and rim."""
        d = len(dia.center)
        ticks = np.arange(-dia.radius, dia.radius + h / 2, h)
        mesh = np.meshgrid(*([ticks] * (d + 1)), indexing='ij')
        offsets = np.stack([m.ravel() for m in mesh], axis=1)
        keep = np.abs(offsets[:, 0]) + np.linalg.norm(offsets[:, 1:], axis=1) <= dia.radius + 1e-12
        points = offsets[keep]
        extras = [np.concatenate([[s * dia.radius], np.zeros(d)]) for s in (-1.0, 1.0)]
        for axis in range(d):
            for sign in (-1.0, 1.0):
                rim = np.zeros(d + 1)
                rim[axis + 1] = sign * dia.radius
                extras.append(rim)
        points = np.vstack([points, np.asarray(extras)])
        return points + np.concatenate([[dia.slice_time], dia.center])

    def cones_disjoint_oracle(self, d1: BallDiamond, d2: BallDiamond,
                              resolution: int = config.CONE_ORACLE_RESOLUTION) -> bool:
        """Sampling oracle: no lattice point pair of the closures is causal."""
        first = self.cone_lattice(d1, 2 * d1.radius / max(resolution - 1, 1))
        second = self.cone_lattice(d2, 2 * d2.radius / max(resolution - 1, 1))
        for chunk in np.array_split(first, max(1, len(first) // 2048)):
            if np.any(interval(chunk[:, None, :], second[None, :, :]) <= 0.0):
                return False
        return True

    def verify_cone_nesting(self, inner: BallDiamond, cone: BallDiamond, outer: BallDiamond,
                            p: Event, h: float) -> ConeNestingReport:
        """Oracle check of closure(inner) in cone, closure(cone) in outer, cone disjoint from p."""
        witnesses: List[Tuple[float, ...]] = []

        def inside(points: np.ndarray, dia: BallDiamond) -> np.ndarray:
            offset = np.linalg.norm(points[:, 1:] - np.asarray(dia.center), axis=1)
            return offset + np.abs(points[:, 0] - dia.slice_time) < dia.radius

        inner_points = self.cone_lattice(inner, h)
        cone_points = self.cone_lattice(cone, h)
        inner_ok = inside(inner_points, cone)
        outer_ok = inside(cone_points, outer)
        spacelike = interval(p.as_array()[None, :], cone_points) > 0.0
        for mask, points in ((inner_ok, inner_points), (outer_ok, cone_points), (spacelike, cone_points)):
            if not mask.all():
                witnesses.append(tuple(points[np.flatnonzero(~mask)[0]]))
        return ConeNestingReport(bool(inner_ok.all()), bool(outer_ok.all()), bool(spacelike.all()),
                                 h, len(inner_points) + len(cone_points), witnesses)
