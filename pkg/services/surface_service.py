"""
Cauchy-surface service for CausalLab.
Graph surfaces over the spatial slice: achronality and spacelike checks,
deformation through a point, the squeeze conditions on nested bases and the
interpolation of cones across a surface through the excision point.
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy import ndimage
from scipy.interpolate import RegularGridInterpolator

import config
from models.errors import (
    NoRoomError, NotAchronalError, PreconditionFailureError, PreconditionNestingError,
    ShadowOverlapError, ToleranceUnachievableError
)
from models.spacetime import (
    BallDiamond, Event, Regularity, SpacetimeModel, SpatialBall, SurfaceFunction, SurfaceGrid
)
from services.continuum_service import ConeNestingReport, ContinuumService
from utils.file_utils import write_csv

logger = logging.getLogger(__name__)

EpsilonSpec = Union[float, np.ndarray, Callable[[np.ndarray], np.ndarray]]


def bump(r: np.ndarray) -> np.ndarray:
    """Smooth compactly supported profile with bump(0) = 1, zero for r >= 1."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
    return out


_PROFILE = np.linspace(0.0, 0.999999, 20001)
BUMP_SLOPE = float(np.max(np.abs(np.gradient(bump(_PROFILE), _PROFILE))))


@dataclass
class AchronalityReport:
    holds: bool
    pairs_checked: int
    exhaustive: bool
    witness: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]] = None


@dataclass
class SurfaceVerification:
    """Postconditions of a deformation, evaluated on one lattice."""
    h: float
    pinned: bool
    pin_error: float
    within_eps: bool
    max_error_ratio: float
    max_gradient: float
    spacelike: bool
    achronality: AchronalityReport

    @property
    def holds(self) -> bool:
        return self.pinned and self.within_eps and self.spacelike and self.achronality.holds


@dataclass
class SqueezeReport:
    cond_a: bool
    cond_b: bool
    h: float
    witnesses: Dict[str, Any] = field(default_factory=dict)


@dataclass
class ConeInterpolation:
    """An interpolating cone together with the surface it is based on."""
    diamond: BallDiamond
    surface: SurfaceFunction
    h: float
    oracle: ConeNestingReport


class SurfaceService:
    """Construction and verification of graph Cauchy surfaces."""

    def __init__(self, margin: float = config.SPACELIKE_MARGIN,
                 refinement: int = config.DEFORMATION_REFINEMENT,
                 continuum: Optional[ContinuumService] = None):
        self.margin = margin
        self.refinement = refinement
        self.continuum = continuum or ContinuumService()

    # ------------------------------------------------------------------
    # Reference surfaces

    @staticmethod
    def half_cone_surface(grid: SurfaceGrid) -> SurfaceFunction:
        """The achronal surface tau(y) = |y| / 2 with its apex at the origin."""
        def closure(points: np.ndarray) -> np.ndarray:
            return np.linalg.norm(np.atleast_2d(points), axis=1) / 2.0
        return SurfaceFunction.from_closure(grid, closure, Regularity.CONTINUOUS, "half-cone")

    @staticmethod
    def flat_surface(grid: SurfaceGrid, t0: float = 0.0) -> SurfaceFunction:
        def closure(points: np.ndarray) -> np.ndarray:
            return np.full(len(np.atleast_2d(points)), float(t0))
        return SurfaceFunction.from_closure(grid, closure, Regularity.SMOOTH, f"flat t={t0:g}")

    @staticmethod
    def refine(surface: SurfaceFunction, factor: int = 2) -> SurfaceFunction:
        """Resample a surface with a closure on the h / factor lattice."""
        if surface.closure is None:
            raise ValueError(f"Surface '{surface.label}' has no closure to refine")
        return SurfaceFunction.from_closure(surface.grid.refined(factor), surface.closure,
                                            surface.regularity, surface.label)

    @staticmethod
    def export_grid_csv(surface: SurfaceFunction, path: Path) -> Path:
        """One row per lattice node: spatial coordinates then tau."""
        d = surface.grid.dimension
        header = [f"y{i + 1}" for i in range(d)] + ["tau"]
        rows = (list(y) + [t] for y, t in zip(surface.grid.points().tolist(), surface.flat_values().tolist()))
        return write_csv(path, rows, header)

    # ------------------------------------------------------------------
    # Checks

    def max_gradient(self, surface: SurfaceFunction) -> float:
        return self._max_gradient(surface.values, surface.grid.h)

    @staticmethod
    def _max_gradient(values: np.ndarray, h: float) -> float:
        if values.size < 2:
            return 0.0
        grads = np.gradient(values, h)
        if values.ndim == 1:
            return float(np.max(np.abs(grads)))
        return float(np.max(np.sqrt(sum(g * g for g in grads))))

    def check_achronal(self, surface: SurfaceFunction, rng: Optional[np.random.Generator] = None,
                       tol: float = 1e-12) -> AchronalityReport:
        """Lipschitz-1 bound |tau(y1) - tau(y2)| <= |y1 - y2| over grid pairs."""
        points = surface.grid.points()
        values = surface.flat_values()
        n = len(points)
        if n <= config.ACHRONALITY_EXHAUSTIVE_POINTS:
            checked = 0
            for start in range(0, n, 512):
                block = slice(start, min(start + 512, n))
                dist = np.linalg.norm(points[block, None, :] - points[None, :, :], axis=-1)
                rise = np.abs(values[block, None] - values[None, :])
                bad = np.argwhere(rise > dist + tol)
                checked += dist.size
                if bad.size:
                    i, j = bad[0]
                    return AchronalityReport(False, checked, True,
                                             (tuple(points[start + i]), tuple(points[j])))
            return AchronalityReport(True, checked, True)
        return self._check_achronal_stencil(surface, rng or np.random.default_rng(0), tol)

    def _check_achronal_stencil(self, surface: SurfaceFunction, rng: np.random.Generator,
                                tol: float) -> AchronalityReport:
        grid = surface.grid
        values = surface.values
        radius = config.ACHRONALITY_STENCIL
        checked = 0
        for offset in product(range(-radius, radius + 1), repeat=grid.dimension):
            if offset <= (0,) * grid.dimension:
                continue
            shifted_a = tuple(slice(max(0, -o), n - max(0, o)) for o, n in zip(offset, grid.shape))
            shifted_b = tuple(slice(max(0, o), n - max(0, -o)) for o, n in zip(offset, grid.shape))
            rise = np.abs(values[shifted_a] - values[shifted_b])
            dist = grid.h * math.sqrt(sum(o * o for o in offset))
            checked += rise.size
            if np.any(rise > dist + tol):
                index = np.unravel_index(int(np.argmax(rise - dist)), rise.shape)
                first = tuple(lo + (i + s.start) * grid.h for lo, i, s in zip(grid.lower, index, shifted_a))
                second = tuple(lo + (i + s.start) * grid.h for lo, i, s in zip(grid.lower, index, shifted_b))
                return AchronalityReport(False, checked, False, (first, second))
        points = grid.points()
        flat = surface.flat_values()
        pairs = config.ACHRONALITY_SAMPLED_PAIRS
        i = rng.integers(0, len(points), size=pairs)
        j = rng.integers(0, len(points), size=pairs)
        dist = np.linalg.norm(points[i] - points[j], axis=1)
        rise = np.abs(flat[i] - flat[j])
        bad = np.flatnonzero(rise > dist + tol)
        checked += pairs
        if bad.size:
            k = bad[0]
            return AchronalityReport(False, checked, False, (tuple(points[i[k]]), tuple(points[j[k]])))
        return AchronalityReport(True, checked, False)

    def verify_deformation(self, deformed: SurfaceFunction, reference: SurfaceFunction, p: Event,
                           eps: EpsilonSpec, grid: Optional[SurfaceGrid] = None) -> SurfaceVerification:
        """Evaluate pinning, eps-closeness, spacelike margin and achronality on a lattice."""
        if grid is not None and grid != deformed.grid:
            deformed = SurfaceFunction.from_closure(grid, deformed.closure, deformed.regularity, deformed.label)
        lattice = deformed.grid
        points = lattice.points()
        ref_values = reference.evaluate(points)
        eps_values = self._eps_values(eps, points, reference.grid)
        errors = np.abs(deformed.flat_values() - ref_values)
        pin_error = abs(deformed.value_at(p.x) - p.t)
        gradient = self.max_gradient(deformed)
        return SurfaceVerification(
            h=lattice.h,
            pinned=pin_error <= config.SURFACE_TOLERANCE,
            pin_error=pin_error,
            within_eps=bool(np.all(errors < eps_values)),
            max_error_ratio=float(np.max(errors / eps_values)),
            max_gradient=gradient,
            spacelike=gradient <= 1.0 - self.margin,
            achronality=self.check_achronal(deformed),
        )

    @staticmethod
    def _eps_values(eps: EpsilonSpec, points: np.ndarray, grid: SurfaceGrid) -> np.ndarray:
        if callable(eps):
            values = np.asarray(eps(points), dtype=float)
        elif np.ndim(eps) == 0:
            values = np.full(len(points), float(eps))
        else:
            eps = np.asarray(eps, dtype=float)
            if eps.size != len(points):
                interp = RegularGridInterpolator(grid.axes(), eps.reshape(grid.shape),
                                                 bounds_error=False, fill_value=None)
                values = interp(points)
            else:
                values = eps.ravel()
        if np.any(values <= 0):
            raise ValueError("Deformation tolerance eps must be strictly positive")
        return values

    # ------------------------------------------------------------------
    # Deformation through a point

    def deform_surface_through_point(self, tau_c: SurfaceFunction, p: Event,
                                     eps: EpsilonSpec) -> SurfaceFunction:
        """Smooth surface through p staying eps-close to tau_c on the grid."""
        grid = tau_c.grid
        if not grid.contains(p.x):
            raise PreconditionFailureError(f"Point {p} is not above the surface grid")
        achronal = self.check_achronal(tau_c)
        if not achronal.holds:
            raise NotAchronalError(f"Surface '{tau_c.label}' is not achronal near {achronal.witness}")
        base_value = tau_c.value_at(p.x)
        if abs(base_value - p.t) > config.SURFACE_TOLERANCE:
            raise PreconditionFailureError(
                f"Point {p} is not on the surface closure (tau = {base_value:g})")

        eps_coarse = self._eps_values(eps, grid.points(), grid)
        if (tau_c.regularity == Regularity.SMOOTH
                and self.max_gradient(tau_c) <= 1.0 - self.margin):
            logger.debug("Surface '%s' already smooth through %s", tau_c.label, p)
            return tau_c

        fine = grid.refined(self.refinement) if tau_c.closure is not None else grid
        fine_points = fine.points()
        fine_values = tau_c.evaluate(fine_points).reshape(fine.shape)
        eps_fine = self._eps_values(eps, fine_points, grid)
        min_width = config.MOLLIFIER_MIN_CELLS * fine.h
        extent = min(hi - lo for lo, hi in zip(grid.lower, grid.upper))
        width = max(min(float(np.min(eps_coarse)), extent / 8.0), min_width)

        for attempt in range(config.MOLLIFIER_MAX_ATTEMPTS):
            candidate = self._pinned_mollification(tau_c, p, fine, fine_values, width)
            if candidate is not None:
                values_fine = candidate.closure(fine_points)
                errors = np.abs(values_fine - fine_values.ravel())
                gradient = self._max_gradient(values_fine.reshape(fine.shape), fine.h)
                pinned = abs(candidate.value_at(p.x) - p.t) <= config.SURFACE_TOLERANCE
                close = bool(np.all(errors < eps_fine))
                spacelike = gradient <= 1.0 - self.margin
                logger.debug("Deformation attempt %d: width=%.4g pinned=%s close=%s grad=%.6f",
                             attempt, width, pinned, close, gradient)
                if pinned and close and spacelike and self.check_achronal(candidate).holds:
                    return candidate
            if width <= min_width:
                break
            width = max(width / 2.0, min_width)
        raise ToleranceUnachievableError(
            f"Grid h={grid.h:g} too coarse for eps down to {float(np.min(eps_coarse)):g}; refine the grid")

    def _pinned_mollification(self, tau_c: SurfaceFunction, p: Event, fine: SurfaceGrid,
                              fine_values: np.ndarray, width: float) -> Optional[SurfaceFunction]:
        """Mollify on the fine lattice, then add a bump that pins the value at p."""
        cells = max(config.MOLLIFIER_MIN_CELLS, int(round(width / fine.h)))
        offsets = np.arange(-cells, cells + 1) * fine.h
        mesh = np.meshgrid(*([offsets] * fine.dimension), indexing='ij')
        radius = np.sqrt(sum(m * m for m in mesh)) / ((cells + 1) * fine.h)
        kernel = bump(radius)
        kernel /= kernel.sum()
        smoothed = ndimage.convolve(fine_values, kernel, mode='nearest')
        gradient = self._max_gradient(smoothed, fine.h)
        slack = 1.0 - self.margin - gradient
        if slack <= 0:
            logger.debug("Mollified surface has slope %.6f; no room for a spacelike pin", gradient)
            return None

        interpolant = RegularGridInterpolator(fine.axes(), smoothed, bounds_error=False, fill_value=None)
        center = np.asarray(p.x, dtype=float)
        offset = p.t - float(interpolant(center[None, :])[0])
        support = max(abs(offset) * BUMP_SLOPE / (0.5 * slack), 2.0 * fine.h)

        def closure(points: np.ndarray) -> np.ndarray:
            points = np.atleast_2d(np.asarray(points, dtype=float))
            base = interpolant(points)
            return base + offset * bump(np.linalg.norm(points - center, axis=1) / support)

        label = f"{tau_c.label} deformed through {p}" if tau_c.label else f"deformed through {p}"
        return SurfaceFunction.from_closure(tau_c.grid, closure, Regularity.SMOOTH, label)

    # ------------------------------------------------------------------
    # Squeeze conditions

    def check_squeeze_conditions(self, tau_c: SurfaceFunction, tau_co: SurfaceFunction,
                                 base: SpatialBall, u1: SpatialBall, u2: SpatialBall) -> SqueezeReport:
        """Evaluate J(G) on C_o inside Phi(U1), and J(closure Phi(U1)) on C inside U2."""
        if not base.closure_inside(u1) or not u1.closure_inside(u2):
            raise PreconditionNestingError("Bases must satisfy closure(G) in U1 and closure(U1) in U2")
        if tau_c.grid != tau_co.grid:
            raise ValueError("Both surfaces must share one grid")

        grid = tau_c.grid
        nodes = grid.points()
        base_points = self._closed_ball_samples(base, nodes)
        u1_points = self._closed_ball_samples(u1, nodes)

        base_times = tau_c.evaluate(base_points)
        reached_a = self._causally_reached(nodes, tau_co.flat_values(), base_points, base_times)
        bad_a = np.flatnonzero(reached_a & ~u1.contains(nodes))

        u1_times = tau_co.evaluate(u1_points)
        reached_b = self._causally_reached(nodes, tau_c.flat_values(), u1_points, u1_times)
        bad_b = np.flatnonzero(reached_b & ~u2.contains(nodes))

        witnesses: Dict[str, Any] = {}
        if bad_a.size:
            y = nodes[bad_a[0]]
            witnesses['cond_a'] = {'y': tuple(y), 't': float(tau_co.flat_values()[bad_a[0]])}
        if bad_b.size:
            y = nodes[bad_b[0]]
            witnesses['cond_b'] = {'y': tuple(y), 't': float(tau_c.flat_values()[bad_b[0]])}
        return SqueezeReport(bad_a.size == 0, bad_b.size == 0, grid.h, witnesses)

    @staticmethod
    def _closed_ball_samples(ball: SpatialBall, nodes: np.ndarray) -> np.ndarray:
        inside = nodes[ball.contains_closed(nodes)]
        d = nodes.shape[1]
        if d == 1:
            rim = np.array([[-1.0], [1.0]])
        else:
            count = config.SQUEEZE_BOUNDARY_SAMPLES
            rim = np.random.default_rng(0).normal(size=(count, d))
            rim /= np.linalg.norm(rim, axis=1, keepdims=True)
        rim = np.asarray(ball.center) + ball.radius * rim
        return np.vstack([inside, rim]) if len(inside) else rim

    @staticmethod
    def _causally_reached(nodes: np.ndarray, node_times: np.ndarray,
                          sources: np.ndarray, source_times: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        reached = np.zeros(len(nodes), dtype=bool)
        for start in range(0, len(nodes), 2048):
            block = slice(start, min(start + 2048, len(nodes)))
            dist = np.linalg.norm(nodes[block, None, :] - sources[None, :, :], axis=-1)
            rise = np.abs(node_times[block, None] - source_times[None, :])
            reached[block] = np.any(rise >= dist - tol, axis=1)
        return reached

    # ------------------------------------------------------------------
    # Cone interpolation across a surface through the excision point

    def interpolate_cone(self, model: SpacetimeModel, inner: BallDiamond, outer: BallDiamond,
                         h: float = config.DEFAULT_GRID_H) -> ConeInterpolation:
        """Cone D_o based on a surface through p with closure(inner) in D_o, closure(D_o) in outer."""
        if not model.is_excised:
            raise ValueError("Cone interpolation needs an excised model")
        p = model.excision_point
        continuum = self.continuum
        for dia, name in ((inner, "inner"), (outer, "outer")):
            if not continuum.cone_disjoint_from_point(dia, p):
                raise ShadowOverlapError(f"The {name} cone meets J(p) for p = {p}")
        if not continuum.cone_closure_inside(inner, outer):
            raise NoRoomError("closure(inner) is not inside the open outer cone")

        t0 = inner.slice_time
        center = np.asarray(inner.center)
        lift = p.t - t0
        outer_room = (outer.radius - abs(t0 - outer.slice_time)
                      - float(np.linalg.norm(center - np.asarray(outer.center))))
        shadow_room = float(np.linalg.norm(center - np.asarray(p.x))) - abs(lift)
        slack = min(outer_room, shadow_room) - inner.radius
        if slack <= 2.0 * h:
            raise NoRoomError(f"Nesting slack {slack:.4g} is below grid resolution h={h:g}")
        r1 = inner.radius + slack / 3.0
        r2 = inner.radius + 2.0 * slack / 3.0

        grid = SurfaceGrid(model.window.spatial_lower, model.window.spatial_upper, h)
        surface = self._surface_through_point(grid, t0, p, slack)

        flat_zone = SpatialBall(inner.center, r2)
        nodes = grid.points()
        zone = flat_zone.contains_closed(nodes)
        if np.any(np.abs(surface.flat_values()[zone] - t0) > 1e-9):
            raise NoRoomError("Deformed surface does not stay on the base slice over U2")

        cone = BallDiamond(t0, inner.center, r1)
        oracle = continuum.verify_cone_nesting(inner, cone, outer, p, h)
        if not oracle.holds:
            raise NoRoomError(f"Oracle rejected the interpolating cone: {oracle.witnesses}")
        logger.debug("Interpolating cone %s based on '%s'", cone, surface.label)
        return ConeInterpolation(cone, surface, h, oracle)

    def _surface_through_point(self, grid: SurfaceGrid, t0: float, p: Event,
                               slack: float) -> SurfaceFunction:
        """Flat slice t = t0 lifted by a spacelike cone onto p, then smoothed."""
        lift = p.t - t0
        if lift == 0.0:
            return self.flat_surface(grid, t0)
        slope = abs(lift) / (abs(lift) + slack / 6.0)
        apex = np.asarray(p.x, dtype=float)

        def closure(points: np.ndarray) -> np.ndarray:
            distance = np.linalg.norm(np.atleast_2d(points) - apex, axis=1)
            return t0 + math.copysign(1.0, lift) * np.maximum(0.0, abs(lift) - slope * distance)

        pinned = SurfaceFunction.from_closure(grid, closure, Regularity.CONTINUOUS, "slice lifted onto p")
        try:
            return self.deform_surface_through_point(pinned, p, slack / 12.0)
        except ToleranceUnachievableError as exc:
            raise NoRoomError(str(exc)) from exc
