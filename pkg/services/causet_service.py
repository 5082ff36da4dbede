"""
Causal set service for CausalLab.
Sprinkling, causal hulls, domains of dependence, slices, diamonds and
excision, with exact checks of the slice and family identities.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

import config
from models.causet import (
    Causet, DiamondSpec, Excision, PointSet, Region, RegionKind, Slice, point_set
)
from models.errors import (
    InExcisedShadowError, NoInterpolantError, NotAntichainError, NotMaximalError,
    PreconditionFailureError, TooDenseError
)
from models.spacetime import CausalVerdict, Event, SpacetimeModel
from services.continuum_service import ContinuumService, causal_order_matrix, interval
from utils.bitmatrix import transitive_closure
from utils.file_utils import write_csv

logger = logging.getLogger(__name__)

STRICT = "strict"
REFLEXIVE = "reflexive"


@dataclass
class Prop33Report:
    """Slice restriction to the excision and its converse."""
    forward: bool
    converse: bool
    excised_points: int
    witnesses: Dict[str, Any] = field(default_factory=dict)


@dataclass
class FamilyComparison:
    """Two region families compared as sets of ambient point sets."""
    equal: bool
    exhaustive: bool
    first_size: int
    second_size: int
    only_first: List[List[int]] = field(default_factory=list)
    only_second: List[List[int]] = field(default_factory=list)
    samples: int = 0


@dataclass
class OrderAgreementReport:
    """Restriction order against the continuum excised order."""
    agree: bool
    pairs_checked: int
    exhaustive: bool
    disagreements: List[Dict[str, Any]] = field(default_factory=list)


class CausetService:
    """Construction of causal sets and the order-theoretic operations on them."""

    def __init__(self, continuum: Optional[ContinuumService] = None,
                 max_points: int = config.MAX_EXPECTED_POINTS,
                 exhaustive_max: int = config.EXHAUSTIVE_MAX_POINTS,
                 sample_budget: int = config.DEFAULT_SAMPLE_BUDGET):
        self.continuum = continuum or ContinuumService()
        self.max_points = max_points
        self.exhaustive_max = exhaustive_max
        self.sample_budget = sample_budget

    # ------------------------------------------------------------------
    # Construction

    def sprinkle(self, model: SpacetimeModel, density: float, seed: int) -> Causet:
        """Poisson sprinkling into the model window, sorted by time."""
        if density < 0:
            raise ValueError(f"Density must be non-negative, got {density}")
        expected = density * model.window.volume
        if expected > self.max_points:
            raise TooDenseError(
                f"Expected {expected:.0f} points exceeds the limit of {self.max_points}")
        rng = np.random.default_rng(seed)
        count = int(rng.poisson(expected)) if expected > 0 else 0
        lower = np.asarray(model.window.lower)
        upper = np.asarray(model.window.upper)
        coords = lower + (upper - lower) * rng.random((count, model.d + 1))
        if model.is_excised and count:
            p = model.excision_point.as_array()
            outside = interval(p[None, :], coords) > 0
            logger.debug("Excision removed %d of %d sprinkled points", count - int(outside.sum()), count)
            coords = coords[outside]
        coords = coords[np.lexsort(coords.T[::-1])]
        logger.debug("Sprinkled %d points (expected %.1f, seed %d)", len(coords), expected, seed)
        return Causet(causal_order_matrix(coords, self.continuum.null_tolerance), coords, seed, model)

    def from_events(self, model: SpacetimeModel, events: Sequence[Event],
                    seed: Optional[int] = None) -> Causet:
        """Causet on injected points, keeping the given ids."""
        model.require_inside(*events)
        if model.is_excised:
            for event in events:
                if self.continuum.in_shadow(model, event):
                    raise InExcisedShadowError(f"Event {event} lies in J(p)")
        coords = np.array([e.as_array() for e in events], dtype=float).reshape(len(events), model.d + 1)
        return Causet(causal_order_matrix(coords, self.continuum.null_tolerance), coords, seed, model)

    @staticmethod
    def from_relations(n: int, edges: Iterable[Tuple[int, int]]) -> Causet:
        """Causet from a raw relation (any generating edges), transitively closed."""
        raw = np.zeros((n, n), dtype=bool)
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"Relation edge ({a}, {b}) out of range for n={n}")
            raw[a, b] = True
        return Causet(transitive_closure(raw))

    # ------------------------------------------------------------------
    # Causal hulls

    @staticmethod
    def future(c: Causet, points: Iterable[int], mode: str = REFLEXIVE) -> PointSet:
        return CausetService._hull(c.order, c, points, mode)

    @staticmethod
    def past(c: Causet, points: Iterable[int], mode: str = REFLEXIVE) -> PointSet:
        return CausetService._hull(c.order.T, c, points, mode)

    @staticmethod
    def _hull(order: np.ndarray, c: Causet, points: Iterable[int], mode: str) -> PointSet:
        if mode not in (STRICT, REFLEXIVE):
            raise ValueError(f"Unknown hull mode '{mode}'")
        ids = sorted(point_set(points))
        if not ids:
            return frozenset()
        reached = order[ids].any(axis=0)
        if mode == REFLEXIVE:
            reached[ids] = True
        return frozenset(int(i) for i in np.flatnonzero(reached))

    def causal_hull(self, c: Causet, points: Iterable[int]) -> PointSet:
        """J(S) = J+(S) | J-(S), reflexive."""
        points = point_set(points)
        return self.future(c, points) | self.past(c, points)

    def causally_disjoint(self, c: Causet, first: Iterable[int], second: Iterable[int]) -> bool:
        second = point_set(second)
        return not (self.causal_hull(c, first) & second)

    @staticmethod
    def hasse_buffer(c: Causet, points: Iterable[int], steps: int = config.BUFFER_STEPS) -> PointSet:
        """Points within the given number of hasse steps (either direction)."""
        mask = c.mask(point_set(points))
        adjacency = c.hasse | c.hasse.T
        for _ in range(steps):
            grown = mask | adjacency[mask].any(axis=0)
            if np.array_equal(grown, mask):
                break
            mask = grown
        return frozenset(int(i) for i in np.flatnonzero(mask))

    # ------------------------------------------------------------------
    # Domains of dependence

    def future_domain(self, c: Causet, points: Iterable[int]) -> PointSet:
        """D+(S): S plus every point with predecessors, all of them in D+(S)."""
        return self._domain(c, c.hasse, c.topological_order, points)

    def past_domain(self, c: Causet, points: Iterable[int]) -> PointSet:
        return self._domain(c, c.hasse.T, tuple(reversed(c.topological_order)), points)

    @staticmethod
    def _domain(c: Causet, cover: np.ndarray, order: Sequence[int], points: Iterable[int]) -> PointSet:
        inside = c.mask(point_set(points))
        for x in order:
            if inside[x]:
                continue
            below = cover[:, x]
            if below.any() and inside[below].all():
                inside[x] = True
        return frozenset(int(i) for i in np.flatnonzero(inside))

    def discrete_domain_of_dependence(self, c: Causet, points: Iterable[int]) -> PointSet:
        points = point_set(points)
        return self.future_domain(c, points) | self.past_domain(c, points)

    def uncovered_chain(self, c: Causet, points: Iterable[int]) -> Optional[List[int]]:
        """An inextendible hasse chain missing S, or None when D(S) is everything."""
        points = point_set(points)
        plus = self.future_domain(c, points)
        minus = self.past_domain(c, points)
        outside = sorted(c.points - plus - minus)
        if not outside:
            return None
        start = outside[0]
        chain = [start]
        current = start
        while True:
            below = [int(i) for i in np.flatnonzero(c.hasse[:, current]) if int(i) not in plus]
            if not below:
                break
            current = below[0]
            chain.insert(0, current)
        current = start
        while True:
            above = [int(i) for i in np.flatnonzero(c.hasse[current]) if int(i) not in minus]
            if not above:
                break
            current = above[0]
            chain.append(current)
        return chain

    # ------------------------------------------------------------------
    # Antichains and slices

    @staticmethod
    def is_antichain(c: Causet, points: Iterable[int]) -> bool:
        ids = sorted(point_set(points))
        return not c.comparable[np.ix_(ids, ids)].any() if ids else True

    @staticmethod
    def is_maximal_antichain(c: Causet, points: Iterable[int]) -> bool:
        ids = sorted(point_set(points))
        if not CausetService.is_antichain(c, ids):
            return False
        if not ids:
            return c.n == 0
        touched = c.comparable[ids].any(axis=0)
        touched[ids] = True
        return bool(touched.all())

    def is_cauchy_slice(self, c: Causet, points: Iterable[int]) -> bool:
        points = point_set(points)
        if not self.is_antichain(c, points):
            raise NotAntichainError(f"Slice {sorted(points)} contains comparable points")
        return self.discrete_domain_of_dependence(c, points) == c.points

    def make_slice(self, c: Causet, points: Iterable[int], label: str = "") -> Slice:
        points = point_set(points)
        cauchy = self.is_cauchy_slice(c, points)
        return Slice(points, self.is_maximal_antichain(c, points), cauchy, label)

    def complete_antichain(self, c: Causet, seed_points: PointSet, key: Callable[[int], Any]) -> PointSet:
        chosen = set(seed_points)
        blocked = c.comparable[sorted(chosen)].any(axis=0) if chosen else np.zeros(c.n, dtype=bool)
        for x in sorted(c.points - chosen, key=key):
            if not blocked[x]:
                chosen.add(x)
                blocked |= c.comparable[x]
        return frozenset(chosen)

    def level_slice(self, c: Causet, t0: float, label: str = "") -> Slice:
        """Greedy maximal antichain nearest the coordinate level t = t0."""
        if c.n == 0:
            raise PreconditionFailureError("Cannot take a slice of an empty causet")
        times = c.times()
        if times is None:
            raise ValueError("Level slices need embedding coordinates")
        points = self.complete_antichain(c, frozenset(), lambda i: (abs(times[i] - t0), i))
        return self.make_slice(c, points, label or f"t={t0:g}")

    def slice_through_point(self, c: Causet, slice_: Slice, p: int) -> Slice:
        """Maximal antichain through p keeping every slice point outside J(p)."""
        if not self.is_antichain(c, slice_.points):
            raise NotAntichainError(f"Slice {slice_.sorted_points()} is not an antichain")
        if not self.is_maximal_antichain(c, slice_.points):
            raise NotMaximalError(f"Slice {slice_.sorted_points()} is not maximal")
        if p in slice_.points:
            return slice_
        retained = frozenset(a for a in slice_.points if not c.comparable[p, a])
        times = c.times()
        if times is not None and slice_.points:
            level = float(np.mean(times[slice_.sorted_points()]))
            key = lambda i: (abs(times[i] - level), i)
        else:
            key = lambda i: (0.0, i)
        points = self.complete_antichain(c, retained | {p}, key)
        result = self.make_slice(c, points, f"{slice_.label} through {p}".strip())
        if not result.cauchy:
            logger.warning("Slice through point %d is maximal but not Cauchy", p)
        return result

    # ------------------------------------------------------------------
    # Excision

    def excise(self, c: Causet, p: int) -> Excision:
        """Induced subcauset on the points causally unrelated to p."""
        if not 0 <= p < c.n:
            raise ValueError(f"Point {p} is not in the causet")
        keep = ~c.comparable[p]
        keep[p] = False
        ids = np.flatnonzero(keep)
        model = c.model
        if c.coords is not None and model is not None and not model.is_excised:
            model = SpacetimeModel.excised(model.d, c.event(p), model.window)
        coords = c.coords[ids] if c.coords is not None else None
        sub = Causet(c.order[np.ix_(ids, ids)], coords, c.seed, model)
        logger.debug("Excision of %d keeps %d of %d points", p, len(ids), c.n)
        return Excision(sub, p, tuple(int(i) for i in ids))

    def prop33_check(self, c: Causet, slice_: Slice, p: int,
                     excised_slice: Optional[Iterable[int]] = None) -> Prop33Report:
        """Restriction of a Cauchy slice through p to the excision, and back."""
        points = slice_.points
        if p not in points:
            raise PreconditionFailureError(f"Point {p} is not on the slice", {'slice': sorted(points)})
        if not self.is_maximal_antichain(c, points):
            raise PreconditionFailureError("Slice is not a maximal antichain", {'slice': sorted(points)})
        if not self.is_cauchy_slice(c, points):
            raise PreconditionFailureError(
                "Slice is not Cauchy", {'uncovered_chain': self.uncovered_chain(c, points)})

        excision = self.excise(c, p)
        witnesses: Dict[str, Any] = {}
        restricted = excision.local_ids(points - {p})
        forward = self.is_cauchy_slice(excision.causet, restricted)
        if not forward:
            chain = self.uncovered_chain(excision.causet, restricted)
            witnesses['forward_chain'] = [excision.to_ambient[i] for i in chain]

        if excised_slice is None:
            local = restricted
        else:
            local = excision.local_ids(excised_slice)
            if not self.is_antichain(excision.causet, local) or not self.is_cauchy_slice(excision.causet, local):
                raise PreconditionFailureError("Supplied excision slice is not a Cauchy antichain",
                                               {'excised_slice': sorted(excision.ambient_ids(local))})
        lifted = excision.ambient_ids(local) | {p}
        converse = self.is_antichain(c, lifted) and self.is_cauchy_slice(c, lifted)
        if not converse:
            if self.is_antichain(c, lifted):
                witnesses['converse_chain'] = self.uncovered_chain(c, lifted)
            else:
                witnesses['converse_comparable'] = sorted(lifted)
        return Prop33Report(forward, converse, excision.causet.n, witnesses)

    # ------------------------------------------------------------------
    # Region families

    def is_convex(self, c: Causet, points: Iterable[int]) -> bool:
        """Order-convexity: everything between two members is a member."""
        mask = c.mask(point_set(points))
        if not mask.any():
            return True
        above = c.order[mask].any(axis=0)
        below = c.order[:, mask].any(axis=1)
        return not np.any(above & below & ~mask)

    @staticmethod
    def is_connected(c: Causet, points: Iterable[int]) -> bool:
        points = point_set(points)
        return bool(points) and nx.is_connected(c.hasse_graph.subgraph(points))

    def is_convex_region(self, c: Causet, points: Iterable[int]) -> bool:
        points = point_set(points)
        return bool(points) and self.is_convex(c, points) and self.is_connected(c, points)

    def convex_hull(self, c: Causet, points: Iterable[int]) -> PointSet:
        """Union of the order intervals spanned by pairs of members."""
        points = point_set(points)
        return (self.future(c, points) & self.past(c, points)) if points else frozenset()

    def convex_region_family(self, c: Causet, region_filter: Optional[Callable[[Region], bool]] = None,
                             sample_budget: Optional[int] = None,
                             rng: Optional[np.random.Generator] = None) -> List[Region]:
        """Connected convex regions: exhaustive for small causets, singletons plus sampled hulls otherwise."""
        found: Set[PointSet] = set()
        if c.n <= self.exhaustive_max:
            for size in range(1, c.n + 1):
                for subset in combinations(range(c.n), size):
                    if self.is_convex_region(c, subset):
                        found.add(frozenset(subset))
        else:
            found.update(frozenset({i}) for i in range(c.n))
            rng = rng or np.random.default_rng(0)
            budget = self.sample_budget if sample_budget is None else sample_budget
            for _ in range(budget):
                size = int(rng.integers(1, 4))
                seeds = rng.choice(c.n, size=min(size, c.n), replace=False)
                hull = self.convex_hull(c, seeds)
                if self.is_connected(c, hull):
                    found.add(hull)
        regions = [Region(points, RegionKind.CONVEX) for points in found]
        if region_filter is not None:
            regions = [r for r in regions if region_filter(r)]
        return sorted(regions, key=lambda r: (len(r), r.sorted_points()))

    def eq35_check(self, c: Causet, p: int, sample_budget: Optional[int] = None,
                   rng: Optional[np.random.Generator] = None) -> FamilyComparison:
        """Convex regions of the excision against ambient convex regions disjoint from p."""
        excision = self.excise(c, p)
        budget = self.sample_budget if sample_budget is None else sample_budget
        if c.n <= self.exhaustive_max:
            excised = {excision.ambient_ids(r.points) for r in self.convex_region_family(excision.causet)}
            ambient = {r.points for r in self.convex_region_family(
                c, lambda r: self.causally_disjoint(c, r.points, {p}))}
            return self._compare_families(excised, ambient, exhaustive=True)

        rng = rng or np.random.default_rng(0)
        only_first: List[List[int]] = []
        only_second: List[List[int]] = []
        excised_sample = self.convex_region_family(excision.causet, sample_budget=budget, rng=rng)
        for region in excised_sample:
            ambient_points = excision.ambient_ids(region.points)
            if not (self.is_convex_region(c, ambient_points) and self.causally_disjoint(c, ambient_points, {p})):
                only_first.append(sorted(ambient_points))
        ambient_sample = self.convex_region_family(
            c, lambda r: self.causally_disjoint(c, r.points, {p}), sample_budget=budget, rng=rng)
        for region in ambient_sample:
            if not self.is_convex_region(excision.causet, excision.local_ids(region.points)):
                only_second.append(region.sorted_points())
        return FamilyComparison(not only_first and not only_second, False,
                                len(excised_sample), len(ambient_sample),
                                only_first, only_second, samples=2 * budget)

    @staticmethod
    def _compare_families(first: Set[PointSet], second: Set[PointSet], exhaustive: bool,
                          samples: int = 0) -> FamilyComparison:
        only_first = sorted(sorted(s) for s in first - second)
        only_second = sorted(sorted(s) for s in second - first)
        return FamilyComparison(first == second, exhaustive, len(first), len(second),
                                only_first, only_second, samples)

    # ------------------------------------------------------------------
    # Diamonds

    def diamond(self, c: Causet, slice_: Slice, base: Iterable[int]) -> DiamondSpec:
        base = point_set(base)
        return DiamondSpec(slice_, base, self.discrete_domain_of_dependence(c, base))

    def diamonds_on_slice(self, c: Causet, slice_: Slice, sample_budget: Optional[int] = None,
                          rng: Optional[np.random.Generator] = None) -> List[DiamondSpec]:
        """One diamond per base subset of the slice whose span is hasse-connected."""
        cauchy = slice_.cauchy if slice_.cauchy is not None else self.is_cauchy_slice(c, slice_.points)
        if not cauchy:
            raise PreconditionFailureError(f"Slice '{slice_.label}' is not Cauchy",
                                           {'uncovered_chain': self.uncovered_chain(c, slice_.points)})
        members = slice_.sorted_points()
        bases: Set[PointSet] = set()
        if len(members) <= self.exhaustive_max:
            for size in range(1, len(members) + 1):
                bases.update(frozenset(b) for b in combinations(members, size))
        else:
            bases.update(frozenset({m}) for m in members)
            rng = rng or np.random.default_rng(0)
            budget = self.sample_budget if sample_budget is None else sample_budget
            for _ in range(budget):
                bases.add(self._grow_base(c, members, rng))

        diamonds = []
        for base in bases:
            spec = self.diamond(c, slice_, base)
            if self.is_connected(c, spec.span):
                diamonds.append(spec)
        return sorted(diamonds, key=lambda d: d.search_key)

    @staticmethod
    def _grow_base(c: Causet, members: List[int], rng: np.random.Generator) -> PointSet:
        """Random start on the slice grown by nearness (coordinates, else hasse distance)."""
        start = members[int(rng.integers(len(members)))]
        size = int(rng.integers(1, len(members) + 1))
        if c.coords is not None:
            spatial = c.coords[members, 1:]
            distance = np.linalg.norm(spatial - c.coords[start, 1:], axis=1)
            ranked = [members[i] for i in np.lexsort((members, distance))]
        else:
            lengths = nx.single_source_shortest_path_length(c.hasse_graph, start)
            ranked = sorted(members, key=lambda m: (lengths.get(m, c.n + 1), m))
        return frozenset(ranked[:size])

    def discrete_diamond_family(self, c: Causet, slices: Sequence[Slice],
                                sample_budget: Optional[int] = None,
                                rng: Optional[np.random.Generator] = None) -> List[DiamondSpec]:
        """Union of the diamonds over a configured list of slices."""
        family: List[DiamondSpec] = []
        for slice_ in slices:
            if slice_.cauchy is False:
                logger.warning("Skipping non-Cauchy slice '%s'", slice_.label)
                continue
            family.extend(self.diamonds_on_slice(c, slice_, sample_budget, rng))
        return family

    def interpolate_diamond(self, c: Causet, inner: DiamondSpec, outer: DiamondSpec,
                            shared_family: Sequence[DiamondSpec],
                            buffer_steps: int = config.BUFFER_STEPS,
                            require_buffer: bool = True) -> DiamondSpec:
        """Smallest shared diamond whose span sits between inner and outer."""
        if not inner.span <= outer.span:
            raise PreconditionFailureError(
                "Inner span is not contained in the outer span",
                {'missing': sorted(inner.span - outer.span)})
        if require_buffer:
            buffer = self.hasse_buffer(c, inner.span, buffer_steps)
            if not buffer <= outer.span:
                raise PreconditionFailureError(
                    "Hasse buffer of the inner span leaves the outer span",
                    {'buffer_outside': sorted(buffer - outer.span)})
        for candidate in sorted(shared_family, key=lambda d: d.search_key):
            if inner.span <= candidate.span <= outer.span:
                return candidate
        raise NoInterpolantError(
            "No shared diamond lies between inner and outer",
            {'inner_span': sorted(inner.span), 'outer_span': sorted(outer.span),
             'candidates': len(shared_family)})

    def excised_diamond_check(self, c: Causet, slice_: Slice, p: int) -> FamilyComparison:
        """Diamonds of the excision on A minus p against diamonds on A disjoint from p."""
        if p not in slice_.points:
            raise PreconditionFailureError(f"Point {p} is not on the slice", {'slice': slice_.sorted_points()})
        ambient = {d.span for d in self.diamonds_on_slice(c, slice_)
                   if self.causally_disjoint(c, d.span, {p})}
        excision = self.excise(c, p)
        local = excision.local_ids(slice_.points - {p})
        if not local:
            return self._compare_families(set(), ambient, exhaustive=True)
        excised_slice = self.make_slice(excision.causet, local, f"{slice_.label} minus {p}")
        excised = {excision.ambient_ids(d.span) for d in self.diamonds_on_slice(excision.causet, excised_slice)}
        return self._compare_families(excised, ambient,
                                      exhaustive=len(slice_.points) <= self.exhaustive_max)

    def excision_order_agreement(self, c: Causet, p: int, max_pairs: Optional[int] = None,
                                 rng: Optional[np.random.Generator] = None) -> OrderAgreementReport:
        """Compare the restriction order of excise(c, p) with the excised continuum order."""
        if c.coords is None or c.model is None:
            raise ValueError("Order agreement needs an embedded causet with its model")
        excision = self.excise(c, p)
        sub = excision.causet
        model = sub.model
        pairs = [(i, j) for i in range(sub.n) for j in range(i + 1, sub.n)]
        budget = max_pairs if max_pairs is not None else 10 * self.sample_budget
        exhaustive = len(pairs) <= budget
        if not exhaustive:
            rng = rng or np.random.default_rng(0)
            pairs = [pairs[k] for k in sorted(rng.choice(len(pairs), size=budget, replace=False))]
        disagreements = []
        for i, j in pairs:
            verdict = self.continuum.causal_relation(model, sub.event(i), sub.event(j))
            related = verdict in (CausalVerdict.CHRONOLOGICAL, CausalVerdict.LIGHTLIKE)
            restricted = bool(sub.comparable[i, j])
            if related != restricted:
                disagreements.append({'pair': [excision.to_ambient[i], excision.to_ambient[j]],
                                      'restriction': restricted, 'continuum': verdict.value})
        if disagreements:
            logger.warning("Excision order disagrees on %d of %d pairs", len(disagreements), len(pairs))
        return OrderAgreementReport(not disagreements, len(pairs), exhaustive, disagreements)

    # ------------------------------------------------------------------
    # Serialization

    @staticmethod
    def causet_to_dict(c: Causet) -> Dict[str, Any]:
        data: Dict[str, Any] = {'n': c.n, 'seed': c.seed, 'edges': [list(e) for e in c.cover_edges()]}
        if c.coords is not None:
            data['coords'] = c.coords.tolist()
        if c.model is not None:
            data['model'] = c.model.to_dict()
        return data

    def causet_from_dict(self, data: Dict[str, Any]) -> Causet:
        n = int(data['n'])
        base = self.from_relations(n, [tuple(e) for e in data.get('edges', [])])
        model = SpacetimeModel.from_dict(data['model']) if data.get('model') else None
        coords = data.get('coords')
        return Causet(base.order, np.asarray(coords, dtype=float) if coords is not None else None,
                      data.get('seed'), model)

    @staticmethod
    def export_relation_csv(c: Causet, path: Path) -> Path:
        header = ['id'] + [str(j) for j in range(c.n)]
        rows = ([i] + [int(v) for v in c.order[i]] for i in range(c.n))
        return write_csv(path, rows, header)
