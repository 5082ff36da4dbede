"""
Duality service for CausalLab.
Exact commutants and intersections of Pauli-string algebras, and the duality
checks (Haag, punctured, local definiteness, outer regularity) on nets over
causal sets, plus the cofinal-family bridge.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

import config
from models.algebra import AlgebraBasis, NetAssignment, PauliString
from models.causet import Causet, DiamondSpec, PointSet, Region, Slice, point_set
from models.errors import (
    DimensionMismatchError, NoContainingDiamondError, NoInterpolantError, NoSupersetError,
    PreconditionShadowError
)
from services.causet_service import CausetService
from utils.gf2 import nullspace

logger = logging.getLogger(__name__)

Member = Union[Region, DiamondSpec, Iterable[int]]


class EvaluationMode(Enum):
    """Where commutants of the punctured check are taken."""
    AMBIENT = "ambient"
    EXCISED = "excised"


def member_points(member: Member) -> PointSet:
    if isinstance(member, DiamondSpec):
        return member.span
    if isinstance(member, Region):
        return member.points
    return point_set(member)


@dataclass
class DualityReport:
    """Verdict of a duality identity lhs = rhs."""
    holds: bool
    lhs: AlgebraBasis
    rhs: AlgebraBasis
    disjoint_members: int
    empty_family_convention: bool
    d1_in_family: bool
    mode: Optional[str] = None
    sites: Optional[List[int]] = None
    witnesses: List[str] = field(default_factory=list)
    witness_support: List[List[int]] = field(default_factory=list)
    witness_in_shadow: Optional[bool] = None
    failure_in_shadow: Optional[bool] = None


@dataclass
class LocalDefinitenessReport:
    intersection: AlgebraBasis
    floor: AlgebraBasis
    minimal: bool
    containing: int
    floor_points: List[int] = field(default_factory=list)


@dataclass
class OuterRegularityReport:
    holds: bool
    intersection: AlgebraBasis
    supersets: int
    intersection_points: List[int] = field(default_factory=list)
    witnesses: List[str] = field(default_factory=list)


@dataclass
class NetAxiomsReport:
    isotony: bool
    locality: bool
    pairs: int
    violations: List[Dict[str, Any]] = field(default_factory=list)


@dataclass
class SweepReport:
    connected: bool
    premise: bool
    conclusion: bool
    implication: bool
    checked: int
    failures: List[Dict[str, Any]] = field(default_factory=list)


@dataclass
class BridgeReport:
    """Excised right-hand sides from two families compared on their shared members."""
    equal: bool
    certified: bool
    shared: int
    family_a: int
    family_b: int
    discrepancies: List[Dict[str, Any]] = field(default_factory=list)
    interpolation_failures: List[Dict[str, Any]] = field(default_factory=list)


@dataclass
class CorollaryReport:
    holds: bool
    haag: bool
    local_definiteness: bool
    generation: bool
    bridge: bool
    details: Dict[str, Any] = field(default_factory=dict)


class DualityService:
    """Exact GF(2) decision procedures for toy nets of Pauli algebras."""

    def __init__(self, causets: Optional[CausetService] = None):
        self.causets = causets or CausetService()

    # ------------------------------------------------------------------
    # Algebra primitives

    @staticmethod
    def algebra_of_region(net: NetAssignment, region: Member) -> AlgebraBasis:
        return net.algebra(member_points(region))

    @staticmethod
    def commutant(n_sites: int, algebra: AlgebraBasis) -> AlgebraBasis:
        """Symplectic complement: strings commuting with every basis string."""
        if algebra.n != n_sites:
            raise DimensionMismatchError(f"Algebra on {algebra.n} sites, expected {n_sites}")
        rows = algebra.rows
        swapped = np.hstack([rows[:, n_sites:], rows[:, :n_sites]])
        return AlgebraBasis(n_sites, nullspace(swapped) if len(rows) else np.eye(2 * n_sites, dtype=bool))

    def intersect(self, first: AlgebraBasis, second: AlgebraBasis) -> AlgebraBasis:
        """U & V = (U' + V')' for the nondegenerate symplectic form."""
        if first.n != second.n:
            raise DimensionMismatchError(f"Algebras on {first.n} and {second.n} sites")
        n = first.n
        summed = AlgebraBasis(n, np.vstack([self.commutant(n, first).rows, self.commutant(n, second).rows]))
        return self.commutant(n, summed)

    def intersect_all(self, n_sites: int, algebras: Sequence[AlgebraBasis]) -> AlgebraBasis:
        """Intersection of a list; the empty list gives the full algebra."""
        if not algebras:
            return AlgebraBasis.full(n_sites)
        complements = [self.commutant(n_sites, a).rows for a in algebras]
        return self.commutant(n_sites, AlgebraBasis(n_sites, np.vstack(complements)))

    @staticmethod
    def _missing_strings(container: AlgebraBasis, algebra: AlgebraBasis) -> List[PauliString]:
        return [s for s in algebra.strings() if not container.contains_string(s)]

    # ------------------------------------------------------------------
    # Haag duality

    def _rhs(self, n_sites: int, members: Sequence[PointSet]) -> AlgebraBasis:
        return self.intersect_all(n_sites, [
            self.commutant(n_sites, AlgebraBasis.supported_on(n_sites, m)) for m in members])

    def _disjoint_members(self, c: Causet, family: Sequence[Member], avoid: PointSet) -> List[PointSet]:
        members = []
        for member in family:
            points = member_points(member)
            if points and self.causets.causally_disjoint(c, points, avoid):
                members.append(points)
        return members

    def haag_duality_check(self, net: NetAssignment, d1: Member,
                           family: Optional[Sequence[Member]] = None) -> DualityReport:
        """Region algebra against the commutant-intersection over disjoint members."""
        family = net.family if family is None else family
        points = member_points(d1)
        n = net.n_sites
        disjoint = self._disjoint_members(net.causet, family, points)
        lhs = net.algebra(points)
        rhs = self._rhs(n, disjoint)
        return self._report(lhs, rhs, disjoint, points in {member_points(m) for m in family})

    def _report(self, lhs: AlgebraBasis, rhs: AlgebraBasis, disjoint: List[PointSet], in_family: bool,
                mode: Optional[str] = None, sites: Optional[List[int]] = None,
                shadow: Optional[PointSet] = None) -> DualityReport:
        holds = lhs == rhs
        report = DualityReport(holds, lhs, rhs, len(disjoint), not disjoint, in_family, mode, sites)
        if not holds:
            extra = self._missing_strings(lhs, rhs) or self._missing_strings(rhs, lhs)
            to_ambient = (lambda s: sorted(sites[i] for i in s)) if sites is not None else sorted
            if shadow is not None:
                extra.sort(key=lambda s: not set(to_ambient(s.support())) <= shadow)
                report.witness_in_shadow = bool(extra) and set(to_ambient(extra[0].support())) <= shadow
                # rhs lies in lhs plus the algebra of the shadow
                padded = AlgebraBasis(lhs.n, np.vstack([lhs.rows, AlgebraBasis.supported_on(lhs.n, shadow).rows]))
                report.failure_in_shadow = rhs.contains(lhs) and padded.contains(rhs)
            report.witnesses = [s.label() for s in extra]
            report.witness_support = [to_ambient(s.support()) for s in extra]
        return report

    def covering_oracle(self, net: NetAssignment, d1: Member,
                        family: Optional[Sequence[Member]] = None) -> bool:
        """Union of disjoint members equals the complement of D1."""
        family = net.family if family is None else family
        points = member_points(d1)
        covered = frozenset().union(*self._disjoint_members(net.causet, family, points))
        return covered == net.causet.points - points

    def punctured_hd_check(self, net: NetAssignment, d1: Member, p: int,
                           mode: EvaluationMode = EvaluationMode.EXCISED,
                           family: Optional[Sequence[Member]] = None) -> DualityReport:
        """Haag duality restricted to members disjoint from D1 and the point p."""
        family = net.family if family is None else family
        c = net.causet
        points = member_points(d1)
        shadow = self.causets.causal_hull(c, {p})
        if points & shadow:
            raise PreconditionShadowError(f"Region meets J({p}) at {sorted(points & shadow)}")
        disjoint = self._disjoint_members(c, family, points | {p})
        in_family = points in {member_points(m) for m in family}
        mode = EvaluationMode(mode)
        if mode is EvaluationMode.AMBIENT:
            n = net.n_sites
            return self._report(net.algebra(points), self._rhs(n, disjoint), disjoint, in_family,
                                mode.value, list(range(n)), shadow)

        excision = self.causets.excise(c, p)
        n = excision.causet.n
        local_members = [excision.local_ids(m) for m in disjoint]
        lhs = AlgebraBasis.supported_on(n, excision.local_ids(points))
        return self._report(lhs, self._rhs(n, local_members), disjoint, in_family,
                            mode.value, list(excision.to_ambient))

    # ------------------------------------------------------------------
    # Local definiteness, outer regularity, generation

    def local_definiteness_check(self, net: NetAssignment, p: int,
                                 family: Optional[Sequence[Member]] = None) -> LocalDefinitenessReport:
        family = net.family if family is None else family
        containing = [member_points(m) for m in family if p in member_points(m)]
        if not containing:
            raise NoContainingDiamondError(f"No family member contains point {p}")
        intersection = self.intersect_all(net.n_sites, [net.algebra(m) for m in containing])
        floor_points = frozenset.intersection(*containing)
        floor = net.algebra(floor_points)
        return LocalDefinitenessReport(intersection, floor, intersection == floor,
                                       len(containing), sorted(floor_points))

    def outer_regularity_check(self, net: NetAssignment, d1: Member,
                               family: Optional[Sequence[Member]] = None,
                               buffer_steps: Optional[int] = None) -> OuterRegularityReport:
        """Region algebra against the intersection over strictly larger buffer-supersets."""
        family = net.family if family is None else family
        points = member_points(d1)
        steps = buffer_steps if buffer_steps is not None else config.BUFFER_STEPS
        buffer = self.causets.hasse_buffer(net.causet, points, steps)
        supersets = [m for m in {member_points(f) for f in family} if buffer <= m and m != points]
        if not supersets:
            raise NoSupersetError(f"No family member contains the buffer of {sorted(points)}")
        supersets.sort(key=lambda m: (len(m), sorted(m)))
        intersection = self.intersect_all(net.n_sites, [net.algebra(m) for m in supersets])
        lhs = net.algebra(points)
        holds = intersection == lhs
        witnesses = [] if holds else [s.label() for s in self._missing_strings(lhs, intersection)]
        return OuterRegularityReport(holds, intersection, len(supersets),
                                     sorted(frozenset.intersection(*supersets)), witnesses)

    def generation_check(self, net: NetAssignment) -> bool:
        """Algebras of the proper family members generate the full algebra."""
        c = net.causet
        proper = {member_points(m) for m in net.family} - {c.points}
        proper.discard(frozenset())
        if c.n < 2 or not proper:
            return False
        rows = [net.algebra(r).rows for r in sorted(proper, key=sorted)]
        generated = AlgebraBasis(c.n, np.vstack(rows))
        return generated == AlgebraBasis.full(c.n)

    # ------------------------------------------------------------------
    # Net axioms and sweeps

    def verify_net_axioms(self, net: NetAssignment) -> NetAxiomsReport:
        """Isotony and locality over all ordered pairs of family members."""
        members = sorted({member_points(m) for m in net.family}, key=lambda m: (len(m), sorted(m)))
        algebras = {m: net.algebra(m) for m in members}
        n = net.n_sites
        isotony = locality = True
        violations: List[Dict[str, Any]] = []
        pairs = 0
        for a in members:
            for b in members:
                if a is b:
                    continue
                pairs += 1
                if a <= b and not algebras[b].contains(algebras[a]):
                    isotony = False
                    violations.append({'axiom': 'isotony', 'regions': [sorted(a), sorted(b)]})
                if a and b and self.causets.causally_disjoint(net.causet, a, b):
                    ra, rb = algebras[a].rows.astype(np.uint8), algebras[b].rows.astype(np.uint8)
                    product = (ra[:, :n] @ rb[:, n:].T + ra[:, n:] @ rb[:, :n].T) % 2
                    if product.any():
                        locality = False
                        violations.append({'axiom': 'locality', 'regions': [sorted(a), sorted(b)]})
        return NetAxiomsReport(isotony, locality, pairs, violations)

    def punctured_sweep(self, net: NetAssignment, sweep: Sequence[int],
                     family: Optional[Sequence[Member]] = None) -> SweepReport:
        """Excised punctured duality along a causally disjoint sweep implies Haag duality."""
        family = net.family if family is None else family
        c = net.causet
        sweep = list(sweep)
        graph = nx.Graph()
        graph.add_nodes_from(sweep)
        graph.add_edges_from((a, b) for i, a in enumerate(sweep) for b in sweep[i + 1:]
                             if a != b and not c.comparable[a, b])
        connected = len(sweep) > 0 and nx.is_connected(graph)

        premise = True
        failures: List[Dict[str, Any]] = []
        checked_regions = set()
        checked = 0
        for p in sweep:
            for member in family:
                points = member_points(member)
                if not points or not self.causets.causally_disjoint(c, points, {p}):
                    continue
                checked += 1
                checked_regions.add(points)
                report = self.punctured_hd_check(net, points, p, EvaluationMode.EXCISED, family)
                if not report.holds:
                    premise = False
                    failures.append({'check': 'punctured', 'p': p, 'region': sorted(points),
                                     'witnesses': report.witnesses[:3]})
        conclusion = True
        for points in sorted(checked_regions, key=lambda m: (len(m), sorted(m))):
            report = self.haag_duality_check(net, points, family)
            if not report.holds:
                conclusion = False
                failures.append({'check': 'haag', 'region': sorted(points), 'witnesses': report.witnesses[:3]})
        return SweepReport(connected, premise, conclusion, (not premise) or conclusion, checked, failures)

    def haag_outer_regularity_link(self, net: NetAssignment, d1: Member,
                                   family: Optional[Sequence[Member]] = None) -> Dict[str, Any]:
        """Haag duality and outer regularity side by side for one region."""
        haag = self.haag_duality_check(net, d1, family)
        try:
            outer = self.outer_regularity_check(net, d1, family)
            outer_holds: Optional[bool] = outer.holds
        except NoSupersetError:
            outer_holds = None
        return {'haag': haag.holds, 'outer_regular': outer_holds,
                'consistent': (not haag.holds) or outer_holds is not False}

    # ------------------------------------------------------------------
    # Cofinal families

    def bridge_families(self, c: Causet, p: int, slices: Sequence[Slice]
                        ) -> Tuple[List[DiamondSpec], List[DiamondSpec], List[DiamondSpec]]:
        """Diamonds disjoint from p, diamonds of the excision (ambient ids), and their shared spans."""
        causets = self.causets
        family_a = [d for d in causets.discrete_diamond_family(c, slices)
                    if causets.causally_disjoint(c, d.span, {p})]
        excision = causets.excise(c, p)
        sub = excision.causet
        family_b: List[DiamondSpec] = []
        for slice_ in slices:
            retained = excision.local_ids(slice_.points - causets.causal_hull(c, {p}))
            if p in slice_.points:
                local = retained
            else:
                times = sub.times()
                level = float(np.mean(sub.times()[sorted(retained)])) if times is not None and retained else 0.0
                key = (lambda i: (abs(times[i] - level), i)) if times is not None else (lambda i: (0.0, i))
                local = causets.complete_antichain(sub, retained, key)
            if not local:
                continue
            excised_slice = causets.make_slice(sub, local, f"{slice_.label} excised")
            if not excised_slice.cauchy:
                logger.warning("Excised slice from '%s' is not Cauchy; skipped", slice_.label)
                continue
            ambient_slice = Slice(excision.ambient_ids(local), excised_slice.maximal, True, excised_slice.label)
            for d in causets.diamonds_on_slice(sub, excised_slice):
                family_b.append(DiamondSpec(ambient_slice, excision.ambient_ids(d.base),
                                            excision.ambient_ids(d.span)))
        spans_b = {d.span for d in family_b}
        shared = [d for d in family_a if d.span in spans_b]
        return family_a, family_b, shared

    def cofinality_bridge(self, net: NetAssignment, p: int, family_a: Sequence[DiamondSpec],
                          family_b: Sequence[DiamondSpec], shared: Sequence[Member]) -> BridgeReport:
        """Compare excised right-hand sides from two families on every shared region."""
        c = net.causet
        causets = self.causets
        excision = causets.excise(c, p)
        n = excision.causet.n
        discrepancies: List[Dict[str, Any]] = []
        failures: List[Dict[str, Any]] = []
        seen = set()
        for member in shared:
            d1 = member_points(member)
            if d1 in seen:
                continue
            seen.add(d1)
            avoid = d1 | {p}
            allowed = c.points - causets.causal_hull(c, avoid)
            members_a = self._disjoint_members(c, family_a, avoid)
            members_b = self._disjoint_members(c, family_b, avoid)
            cover_a = frozenset().union(*members_a)
            cover_b = frozenset().union(*members_b)
            for points, other, name in ((cover_a, family_b, 'B'), (cover_b, family_a, 'A')):
                for x in sorted(points):
                    try:
                        causets.interpolate_diamond(c, self._envelope({x}), self._envelope(allowed),
                                                    [d for d in other if isinstance(d, DiamondSpec)],
                                                    require_buffer=False)
                    except NoInterpolantError as exc:
                        failures.append({'region': sorted(d1), 'point': x, 'family': name, **exc.witness})

            rhs_a = self._rhs(n, [excision.local_ids(m) for m in members_a])
            rhs_b = self._rhs(n, [excision.local_ids(m) for m in members_b])
            if rhs_a != rhs_b:
                discrepancies.append({'region': sorted(d1),
                                      'uncovered_by_a': sorted(cover_b - cover_a),
                                      'uncovered_by_b': sorted(cover_a - cover_b)})
        if discrepancies:
            logger.info("Bridge found %d discrepancies at p=%d", len(discrepancies), p)
        return BridgeReport(not discrepancies, not failures, len(seen), len(family_a), len(family_b),
                            discrepancies, failures)

    @staticmethod
    def _envelope(points: Iterable[int]) -> DiamondSpec:
        """A pseudo-diamond whose span is exactly the given points."""
        points = point_set(points)
        return DiamondSpec(Slice(points, False, None, "envelope"), points, points)

    def corollary_summary(self, net: NetAssignment, p: int, slices: Sequence[Slice]) -> CorollaryReport:
        """Haag duality, local definiteness, generation and the bridge, together."""
        c = net.causet
        haag_failures = [sorted(member_points(m)) for m in net.family
                         if self.causets.causally_disjoint(c, member_points(m), {p})
                         and not self.haag_duality_check(net, m).holds]
        try:
            local = self.local_definiteness_check(net, p).minimal
        except NoContainingDiamondError:
            local = False
        generation = self.generation_check(net)
        family_a, family_b, shared = self.bridge_families(c, p, slices)
        bridge = self.cofinality_bridge(net, p, family_a, family_b, shared)
        details = {'haag_failures': haag_failures, 'bridge_discrepancies': bridge.discrepancies,
                   'shared': bridge.shared}
        haag = not haag_failures
        return CorollaryReport(haag and local and generation and bridge.equal,
                               haag, local, generation, bridge.equal, details)
