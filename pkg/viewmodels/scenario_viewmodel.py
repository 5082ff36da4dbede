"""
Scenario ViewModel for CausalLab.
Loads scenario files, builds the causal set and its families once, runs the
named checks (optionally on a worker pool) and assembles the report.
"""

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

import config
from models.algebra import AlgebraBasis, NetAssignment
from models.causet import Causet, DiamondSpec, Region, RegionKind, Slice, point_set
from models.errors import (
    CausalLabError, NoContainingDiamondError, NoInterpolantError, NoSupersetError,
    PreconditionFailureError, PreconditionShadowError, ScenarioParseError, ScenarioValidationError
)
from models.scenario import (
    TIMING_FIELDS, CheckResult, CheckSpec, Expectation, Report, Scenario, SourceKind
)
from models.spacetime import BallDiamond, Event, SpatialBall, SurfaceGrid
from services.causet_service import CausetService
from services.continuum_service import ContinuumService
from services.dense_oracle import MAX_DENSE_SITES, dense_commutant_matches
from services.duality_service import DualityService, EvaluationMode
from services.surface_service import SurfaceService
from utils.bitmatrix import is_strict_order, transitive_closure
from utils.file_utils import read_json, to_jsonable, write_json_atomic

logger = logging.getLogger(__name__)


@dataclass
class CheckOutcome:
    """What a check handler returns before expectations are applied."""
    verdict: bool
    details: Dict[str, Any] = field(default_factory=dict)
    witnesses: Any = None
    flags: Dict[str, Any] = field(default_factory=dict)


CheckHandler = Callable[["ScenarioContext", Dict[str, Any], np.random.Generator], CheckOutcome]
CHECKS: Dict[str, CheckHandler] = {}


def check(name: str) -> Callable[[CheckHandler], CheckHandler]:
    """Register a handler under a scenario check name."""
    def register(handler: CheckHandler) -> CheckHandler:
        CHECKS[name] = handler
        return handler
    return register


class ScenarioContext:
    """Shared, read-only state of one scenario run."""

    def __init__(self, scenario: Scenario, continuum: ContinuumService, surfaces: SurfaceService,
                 causets: CausetService, duality: DualityService):
        self.scenario = scenario
        self.continuum = continuum
        self.surfaces = surfaces
        self.causets = causets
        self.duality = duality
        self.causet = self._build_causet()
        self.slices = self._build_slices()
        self.marked = self._resolve_marked()

    @property
    def model(self):
        if self.scenario.model is None:
            raise PreconditionFailureError("This check needs a spacetime model")
        return self.scenario.model

    def _build_causet(self) -> Causet:
        scenario = self.scenario
        data = scenario.source_data
        if scenario.source is SourceKind.SPRINKLE:
            return self.causets.sprinkle(scenario.model, float(data['density']), int(data.get('seed', scenario.seed)))
        if scenario.source is SourceKind.POINTS:
            return self.causets.from_events(scenario.model, scenario.events(), scenario.seed)
        return self.causets.from_relations(int(data['n']), [tuple(e) for e in data.get('edges', [])])

    def _build_slices(self) -> List[Slice]:
        c = self.causet
        if c.n == 0:
            return []
        slices = [self.causets.level_slice(c, t) for t in self.scenario.slices.levels]
        for i, antichain in enumerate(self.scenario.slices.antichains):
            slices.append(self.causets.make_slice(c, antichain, f"antichain {i}"))
        return slices

    def _resolve_marked(self) -> Optional[int]:
        marked = self.scenario.marked_point
        if marked is None or self.causet.n == 0:
            return None
        if 'id' in marked:
            return int(marked['id'])
        if self.causet.coords is None:
            raise ScenarioValidationError("nearest needs embedded points", "marked_point.nearest")
        target = np.asarray(marked['nearest'], dtype=float)
        distance = np.linalg.norm(self.causet.coords - target, axis=1)
        return int(np.lexsort((np.arange(self.causet.n), distance))[0])

    def marked_point(self, params: Dict[str, Any]) -> int:
        p = params.get('p', self.marked)
        if p is None:
            raise PreconditionFailureError("No marked point configured")
        return int(p)

    def cauchy_slices(self) -> List[Slice]:
        return [s for s in self.slices if s.cauchy]

    @cached_property
    def diamond_family(self) -> List[DiamondSpec]:
        return self.causets.discrete_diamond_family(self.causet, self.slices,
                                                    sample_budget=self.scenario.samples)

    def family(self, spec: Any = "slices") -> List[Region]:
        """Resolve a family spec: 'slices', 'slices:<i,j>', 'convex' or explicit point lists."""
        if isinstance(spec, list):
            return [Region(points, RegionKind.ARBITRARY) for points in spec]
        if spec == "convex":
            return self.causets.convex_region_family(self.causet, sample_budget=self.scenario.samples)
        if isinstance(spec, str) and spec.startswith("slices"):
            diamonds = self.diamond_family
            if ":" in spec:
                chosen = [self.slices[int(i)] for i in spec.split(":", 1)[1].split(",") if i.strip()]
                diamonds = self.causets.discrete_diamond_family(self.causet, chosen,
                                                                sample_budget=self.scenario.samples)
            spans = sorted({d.span for d in diamonds}, key=lambda s: (len(s), sorted(s)))
            return [Region(s, RegionKind.DIAMOND) for s in spans]
        raise ScenarioValidationError(f"Unknown family spec {spec!r}", "params.family")

    def net(self, params: Dict[str, Any]) -> NetAssignment:
        return NetAssignment(self.causet, self.family(params.get('family', "slices")))


# ----------------------------------------------------------------------
# Parameter helpers

def _event(value: Sequence[float]) -> Event:
    return Event.from_sequence([float(v) for v in value])


def _diamond(value: Dict[str, Any]) -> BallDiamond:
    return BallDiamond(float(value['slice_time']), tuple(value['center']), float(value['radius']))


def _ball(value: Any, d: int) -> SpatialBall:
    if isinstance(value, (int, float)):
        return SpatialBall((0.0,) * d, float(value))
    return SpatialBall(tuple(value['center']), float(value['radius']))


def _expected(params: Dict[str, Any], actual: Any) -> bool:
    return 'expected' not in params or params['expected'] == actual


def _regions(ctx: ScenarioContext, params: Dict[str, Any], key: str, default: Sequence[Region]) -> List:
    """Explicit point lists from params, else the given default members."""
    if key in params:
        value = params[key]
        return [point_set(v) for v in value] if value and isinstance(value[0], list) else [point_set(value)]
    return [r.points for r in default]


# ----------------------------------------------------------------------
# Continuum checks

@check("causal_relation")
def _check_causal_relation(ctx, params, rng):
    a, b = _event(params['a']), _event(params['b'])
    verdict = ctx.continuum.causal_relation(ctx.model, a, b)
    orientation = ctx.continuum.time_orientation(ctx.model, a, b)
    return CheckOutcome(_expected(params, verdict.value),
                        {'verdict': verdict.value, 'orientation': orientation.value})


@check("excision_membership")
def _check_excision_membership(ctx, params, rng):
    member = ctx.continuum.excision_membership(ctx.model, _event(params['q']))
    return CheckOutcome(_expected(params, member), {'member': member})


@check("surface_membership")
def _check_surface_membership(ctx, params, rng):
    member = ctx.continuum.surface_membership_co(ctx.model, _event(params['q']))
    return CheckOutcome(_expected(params, member), {'member': member})


@check("diamond_membership")
def _check_diamond_membership(ctx, params, rng):
    dia, q = _diamond(params['diamond']), _event(params['q'])
    member = ctx.continuum.diamond_membership(ctx.model, dia, q)
    oracle = ctx.continuum.diamond_membership_oracle(dia, q, int(params.get('curves', config.ORACLE_CURVES)),
                                                     rng=rng)
    agree = member == oracle.all_meet
    return CheckOutcome(agree and _expected(params, member),
                        {'member': member, 'oracle_all_meet': oracle.all_meet, 'curves': oracle.curves},
                        None if oracle.all_meet else {'endpoint': oracle.escaping_endpoint})


@check("causally_disjoint_cones")
def _check_disjoint_cones(ctx, params, rng):
    d1, d2 = _diamond(params['d1']), _diamond(params['d2'])
    exact = ctx.continuum.causally_disjoint_cones(ctx.model, d1, d2)
    oracle = ctx.continuum.cones_disjoint_oracle(d1, d2)
    return CheckOutcome(exact == oracle and _expected(params, exact), {'disjoint': exact, 'oracle': oracle})


def _surface(ctx: ScenarioContext, params: Dict[str, Any]):
    d = int(params.get('d', ctx.model.d))
    grid = SurfaceGrid.cube(float(params.get('half_width', 5.0)), d, float(params.get('grid_h', ctx.scenario.grid_h)))
    kind = params.get('surface', 'half-cone')
    if kind == 'half-cone':
        return ctx.surfaces.half_cone_surface(grid)
    if kind == 'flat':
        return ctx.surfaces.flat_surface(grid, float(params.get('t0', 0.0)))
    raise ScenarioValidationError(f"Unknown surface '{kind}'", "params.surface")


def _eps(ctx: ScenarioContext, params: Dict[str, Any]):
    if 'eps_linear' in params:
        scale, slope = (float(v) for v in params['eps_linear'])
        return lambda points: scale * (1.0 + slope * np.linalg.norm(points, axis=1))
    return float(params.get('eps', ctx.scenario.eps))


@check("deform_surface")
def _check_deform_surface(ctx, params, rng):
    tau = _surface(ctx, params)
    p = _event(params.get('p', [0.0] * (tau.grid.dimension + 1)))
    eps = _eps(ctx, params)
    deformed = ctx.surfaces.deform_surface_through_point(tau, p, eps)
    coarse = ctx.surfaces.verify_deformation(deformed, tau, p, eps)
    fine = ctx.surfaces.verify_deformation(deformed, tau, p, eps, grid=tau.grid.refined(2))
    details = {'h': coarse.h, 'max_error_ratio': coarse.max_error_ratio, 'max_gradient': coarse.max_gradient,
               'pin_error': coarse.pin_error, 'refined_h': fine.h, 'refined_max_gradient': fine.max_gradient,
               'unchanged': deformed is tau}
    return CheckOutcome(coarse.holds and fine.holds, details)


@check("squeeze")
def _check_squeeze(ctx, params, rng):
    tau = _surface(ctx, params)
    d = tau.grid.dimension
    if 'tau_co_constant' in params:
        tau_co = ctx.surfaces.flat_surface(tau.grid, float(params['tau_co_constant']))
    else:
        p = _event(params.get('p', [0.0] * (d + 1)))
        tau_co = ctx.surfaces.deform_surface_through_point(tau, p, _eps(ctx, params))
    report = ctx.surfaces.check_squeeze_conditions(tau, tau_co, _ball(params['G'], d),
                                                   _ball(params['U1'], d), _ball(params['U2'], d))
    return CheckOutcome(report.cond_a and report.cond_b,
                        {'cond_a': report.cond_a, 'cond_b': report.cond_b, 'h': report.h},
                        report.witnesses or None)


@check("interpolate_cone")
def _check_interpolate_cone(ctx, params, rng):
    h = float(params.get('grid_h', ctx.scenario.grid_h))
    result = ctx.surfaces.interpolate_cone(ctx.model, _diamond(params['inner']), _diamond(params['outer']), h)
    finer = ctx.continuum.verify_cone_nesting(_diamond(params['inner']), result.diamond,
                                              _diamond(params['outer']), ctx.model.excision_point, h / 2)
    return CheckOutcome(result.oracle.holds and finer.holds,
                        {'cone': to_jsonable(result.diamond), 'surface': result.surface.label,
                         'h': result.h, 'refined_holds': finer.holds})


# ----------------------------------------------------------------------
# Causal-set checks

@check("order_axioms")
def _check_order_axioms(ctx, params, rng):
    c = ctx.causet
    round_trip = np.array_equal(transitive_closure(c.hasse), c.order)
    return CheckOutcome(is_strict_order(c.order) and round_trip,
                        {'n': c.n, 'relations': int(c.order.sum()), 'covers': int(c.hasse.sum())})


@check("domain_of_dependence")
def _check_domain(ctx, params, rng):
    points = point_set(params['points'])
    domain = ctx.causets.discrete_domain_of_dependence(ctx.causet, points)
    details = {'domain': sorted(domain),
               'future_domain': sorted(ctx.causets.future_domain(ctx.causet, points)),
               'past_domain': sorted(ctx.causets.past_domain(ctx.causet, points))}
    return CheckOutcome(_expected(params, sorted(domain)), details)


@check("cauchy_slice")
def _check_cauchy_slice(ctx, params, rng):
    slices = ctx.slices if 'slice' not in params else [ctx.slices[int(params['slice'])]]
    verdicts = {s.label: bool(s.cauchy) for s in slices}
    return CheckOutcome(all(verdicts.values()), {'slices': verdicts})


@check("excise")
def _check_excise(ctx, params, rng):
    p = ctx.marked_point(params)
    excision = ctx.causets.excise(ctx.causet, p)
    kept = sorted(excision.to_ambient)
    return CheckOutcome(_expected(params, kept), {'p': p, 'kept': kept})


@check("causally_disjoint")
def _check_causally_disjoint(ctx, params, rng):
    first, second = point_set(params['r1']), point_set(params['r2'])
    disjoint = ctx.causets.causally_disjoint(ctx.causet, first, second)
    symmetric = disjoint == ctx.causets.causally_disjoint(ctx.causet, second, first)
    return CheckOutcome(symmetric and _expected(params, disjoint), {'disjoint': disjoint, 'symmetric': symmetric})


@check("prop33")
def _check_prop33(ctx, params, rng):
    checked, failures = 0, []
    for slice_ in ctx.cauchy_slices():
        if not slice_.maximal:
            continue
        targets = slice_.sorted_points() if 'p' not in params else [int(params['p'])]
        for p in targets:
            if p not in slice_.points:
                continue
            report = ctx.causets.prop33_check(ctx.causet, slice_, p)
            checked += 1
            if not (report.forward and report.converse):
                failures.append({'slice': slice_.label, 'p': p, **to_jsonable(report)})
    return CheckOutcome(checked > 0 and not failures, {'checked': checked}, failures or None)


@check("eq35")
def _check_eq35(ctx, params, rng):
    points = [int(params['p'])] if 'p' in params else sorted(ctx.causet.points)
    failures, exhaustive = [], True
    for p in points:
        report = ctx.causets.eq35_check(ctx.causet, p, ctx.scenario.samples, rng)
        exhaustive &= report.exhaustive
        if not report.equal:
            failures.append({'p': p, 'only_excised': report.only_first, 'only_ambient': report.only_second})
    return CheckOutcome(not failures, {'points': len(points)}, failures or None, {'exhaustive': exhaustive})


@check("excised_diamonds")
def _check_excised_diamonds(ctx, params, rng):
    p = ctx.marked_point(params)
    results = {}
    for slice_ in ctx.cauchy_slices():
        through = ctx.causets.slice_through_point(ctx.causet, slice_, p) if slice_.maximal else slice_
        if p not in through.points or not through.cauchy:
            continue
        results[slice_.label] = to_jsonable(ctx.causets.excised_diamond_check(ctx.causet, through, p))
    return CheckOutcome(bool(results) and all(r['equal'] for r in results.values()), {'slices': results})


@check("excision_order")
def _check_excision_order(ctx, params, rng):
    report = ctx.causets.excision_order_agreement(ctx.causet, ctx.marked_point(params), rng=rng)
    return CheckOutcome(report.agree, {'pairs': report.pairs_checked},
                        report.disagreements or None, {'exhaustive': report.exhaustive})


@check("convex_family")
def _check_convex_family(ctx, params, rng):
    family = ctx.causets.convex_region_family(ctx.causet, sample_budget=ctx.scenario.samples, rng=rng)
    bad = [r.sorted_points() for r in family if not ctx.causets.is_convex_region(ctx.causet, r.points)]
    return CheckOutcome(not bad, {'regions': len(family)}, bad or None,
                        {'exhaustive': ctx.causet.n <= ctx.causets.exhaustive_max})


@check("diamonds")
def _check_diamonds(ctx, params, rng):
    counts, bad = {}, []
    for slice_ in ctx.cauchy_slices():
        diamonds = ctx.causets.diamonds_on_slice(ctx.causet, slice_, ctx.scenario.samples, rng)
        counts[slice_.label] = len(diamonds)
        bad.extend(sorted(d.span) for d in diamonds if not ctx.causets.is_convex(ctx.causet, d.span))
    return CheckOutcome(bool(counts) and not bad, {'diamonds': counts}, bad or None)


@check("slice_through_point")
def _check_slice_through_point(ctx, params, rng):
    p = ctx.marked_point(params)
    results, ok = {}, True
    for slice_ in ctx.cauchy_slices():
        if not slice_.maximal:
            continue
        through = ctx.causets.slice_through_point(ctx.causet, slice_, p)
        retained = slice_.points - ctx.causets.causal_hull(ctx.causet, {p})
        valid = (p in through.points and retained <= through.points
                 and ctx.causets.is_maximal_antichain(ctx.causet, through.points))
        ok &= valid
        results[slice_.label] = {'points': through.sorted_points(), 'cauchy': through.cauchy, 'valid': valid}
    return CheckOutcome(bool(results) and ok, {'slices': results})


@check("interpolate_diamond")
def _check_interpolate_diamond(ctx, params, rng):
    """Nested shared pairs meeting the buffer precondition all interpolate."""
    p = ctx.marked_point(params)
    _, _, shared = ctx.duality.bridge_families(ctx.causet, p, ctx.cauchy_slices())
    attempted, failures = 0, []
    for inner in shared:
        for outer in shared:
            if inner is outer or not inner.span <= outer.span:
                continue
            if not ctx.causets.hasse_buffer(ctx.causet, inner.span) <= outer.span:
                continue
            attempted += 1
            try:
                ctx.causets.interpolate_diamond(ctx.causet, inner, outer, shared)
            except NoInterpolantError as exc:
                failures.append(exc.witness)
    return CheckOutcome(not failures, {'pairs': attempted, 'shared': len(shared)}, failures or None)


# ----------------------------------------------------------------------
# Duality checks

def _d1_members(ctx: ScenarioContext, params: Dict[str, Any], net: NetAssignment) -> List:
    return _regions(ctx, params, 'd1', net.family)


@check("haag")
def _check_haag(ctx, params, rng):
    net = ctx.net(params)
    results, mismatches = [], []
    for d1 in _d1_members(ctx, params, net):
        report = ctx.duality.haag_duality_check(net, d1)
        covering = ctx.duality.covering_oracle(net, d1)
        if covering != report.holds:
            mismatches.append(sorted(d1))
        results.append({'d1': sorted(d1), 'holds': report.holds, 'rhs_dim_log': report.rhs.dim_log,
                        'empty_family_convention': report.empty_family_convention,
                        'witnesses': report.witnesses[:3]})
    return CheckOutcome(all(r['holds'] for r in results) and not mismatches,
                        {'regions': results}, mismatches or None, {'covering_agrees': not mismatches})


@check("covering_equivalence")
def _check_covering(ctx, params, rng):
    net = ctx.net(params)
    disagreements = [sorted(d1) for d1 in _d1_members(ctx, params, net)
                     if ctx.duality.covering_oracle(net, d1) != ctx.duality.haag_duality_check(net, d1).holds]
    return CheckOutcome(not disagreements, {'regions': len(net.family)}, disagreements or None)


@check("punctured_hd")
def _check_punctured(ctx, params, rng):
    net = ctx.net(params)
    p = ctx.marked_point(params)
    mode = EvaluationMode(params.get('mode', EvaluationMode.EXCISED.value))
    results = []
    for d1 in _d1_members(ctx, params, net):
        try:
            report = ctx.duality.punctured_hd_check(net, d1, p, mode)
        except PreconditionShadowError:
            if 'd1' in params:
                raise
            continue
        results.append({'d1': sorted(d1), 'holds': report.holds, 'witnesses': report.witnesses[:3],
                        'witness_support': report.witness_support[:3],
                        'witness_in_shadow': report.witness_in_shadow,
                        'failure_in_shadow': report.failure_in_shadow,
                        'empty_family_convention': report.empty_family_convention})
    verdict = bool(results) and all(r['holds'] for r in results)
    flags = {'mode': mode.value}
    if mode is EvaluationMode.AMBIENT:
        # a must-fail needs every region to fail and only through strings in J(p)
        flags['failure_explained'] = bool(results) and all(
            not r['holds'] and r['failure_in_shadow'] for r in results)
    return CheckOutcome(verdict, {'p': p, 'regions': results}, None, flags)


@check("local_definiteness")
def _check_local_definiteness(ctx, params, rng):
    net = ctx.net(params)
    report = ctx.duality.local_definiteness_check(net, ctx.marked_point(params))
    return CheckOutcome(report.minimal, {'containing': report.containing, 'floor_points': report.floor_points,
                                         'intersection_dim_log': report.intersection.dim_log})


@check("outer_regularity")
def _check_outer_regularity(ctx, params, rng):
    net = ctx.net(params)
    results = []
    for d1 in _d1_members(ctx, params, net):
        try:
            report = ctx.duality.outer_regularity_check(net, d1)
        except NoSupersetError:
            if 'd1' in params:
                raise
            continue
        results.append({'d1': sorted(d1), 'holds': report.holds, 'supersets': report.supersets,
                        'intersection_points': report.intersection_points})
    return CheckOutcome(bool(results) and all(r['holds'] for r in results), {'regions': results})


@check("generation")
def _check_generation(ctx, params, rng):
    return CheckOutcome(ctx.duality.generation_check(ctx.net(params)), {'n': ctx.causet.n})


@check("net_axioms")
def _check_net_axioms(ctx, params, rng):
    report = ctx.duality.verify_net_axioms(ctx.net(params))
    return CheckOutcome(report.isotony and report.locality, {'pairs': report.pairs}, report.violations or None)


@check("commutant_oracle")
def _check_commutant_oracle(ctx, params, rng):
    """GF(2) commutants against dense matrices, plus the dimension identity."""
    n = ctx.causet.n
    if n > MAX_DENSE_SITES:
        raise PreconditionFailureError(f"Dense oracle needs at most {MAX_DENSE_SITES} sites")
    if n <= 4:
        regions = [[i for i in range(n) if mask >> i & 1] for mask in range(1 << n)]
    else:
        count = int(params.get('regions', 100))
        regions = [sorted(np.flatnonzero(rng.random(n) < 0.5).tolist()) for _ in range(count)]
    mismatches = []
    for region in regions:
        algebra = AlgebraBasis.supported_on(n, region)
        commutant = ctx.duality.commutant(n, algebra)
        if algebra.dim_log + commutant.dim_log != 2 * n or not dense_commutant_matches(algebra, commutant):
            mismatches.append(region)
    return CheckOutcome(not mismatches, {'regions': len(regions)}, mismatches or None)


@check("punctured_sweep")
def _check_punctured_sweep(ctx, params, rng):
    net = ctx.net(params)
    if 'sweep' in params:
        sweep = [int(i) for i in params['sweep']]
    else:
        sweep = ctx.cauchy_slices()[int(params.get('slice', 0))].sorted_points()
    report = ctx.duality.punctured_sweep(net, sweep)
    return CheckOutcome(report.connected and report.implication,
                        {'connected': report.connected, 'premise': report.premise,
                         'conclusion': report.conclusion, 'checked': report.checked},
                        report.failures or None, {'vacuous': not report.premise})


@check("haag_outer_link")
def _check_haag_outer_link(ctx, params, rng):
    net = ctx.net(params)
    results = [{'d1': sorted(d1), **ctx.duality.haag_outer_regularity_link(net, d1)}
               for d1 in _d1_members(ctx, params, net)]
    return CheckOutcome(all(r['consistent'] for r in results), {'regions': results})


@check("bridge")
def _check_bridge(ctx, params, rng):
    p = ctx.marked_point(params)
    family_a, family_b, shared = ctx.duality.bridge_families(ctx.causet, p, ctx.cauchy_slices())
    pruned = {point_set(s) for s in params.get('prune_b', [])}
    if pruned:
        family_b = [d for d in family_b if d.span not in pruned]
        shared = [d for d in shared if d.span not in pruned]
    net = NetAssignment(ctx.causet, [d.as_region() for d in family_a])
    report = ctx.duality.cofinality_bridge(net, p, family_a, family_b, shared)
    explained = {tuple(f['region']) for f in report.interpolation_failures}
    unexplained = [d['region'] for d in report.discrepancies if tuple(d['region']) not in explained]
    return CheckOutcome(report.equal,
                        {'shared': report.shared, 'family_a': report.family_a, 'family_b': report.family_b,
                         'certified': report.certified, 'discrepancies': report.discrepancies},
                        report.interpolation_failures or None,
                        {'failure_explained': not unexplained})


@check("corollary")
def _check_corollary(ctx, params, rng):
    p = ctx.marked_point(params)
    report = ctx.duality.corollary_summary(ctx.net(params), p, ctx.cauchy_slices())
    return CheckOutcome(report.holds, {'haag': report.haag, 'local_definiteness': report.local_definiteness,
                                       'generation': report.generation, 'bridge': report.bridge},
                        report.details)


# ----------------------------------------------------------------------

class ScenarioViewModel:
    """Runs scenarios and produces deterministic reports."""

    def __init__(self, jobs: int = config.DEFAULT_JOBS, output_dir: Path = config.OUTPUT_DIR):
        self.jobs = max(1, jobs)
        self.output_dir = Path(output_dir)
        self.continuum = ContinuumService()
        self.surfaces = SurfaceService(continuum=self.continuum)
        self.causets = CausetService(self.continuum)
        self.duality = DualityService(self.causets)

    @staticmethod
    def load_scenario(path: Union[str, Path]) -> Scenario:
        """Parse and validate a scenario file."""
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding='utf-8'))
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(f"{path}: {exc.msg}", exc.lineno) from exc
        except OSError as exc:
            raise ScenarioParseError(f"Cannot read {path}: {exc}") from exc
        return Scenario.from_dict(data)

    def build_context(self, scenario: Scenario) -> ScenarioContext:
        for spec in scenario.checks:
            if spec.name not in CHECKS:
                raise ScenarioValidationError(f"Unknown check '{spec.name}'", "checks.name")
        return ScenarioContext(scenario, self.continuum, self.surfaces, self.causets, self.duality)

    def run_check(self, context: ScenarioContext, spec: CheckSpec, rng: np.random.Generator) -> CheckResult:
        """Run one check; domain errors become failed verdicts with diagnostics."""
        started = time.perf_counter()
        error = None
        try:
            outcome = CHECKS[spec.name](context, spec.params, rng)
        except CausalLabError as exc:
            error = type(exc).__name__
            outcome = CheckOutcome(False, {'error': error, 'message': str(exc)},
                                   getattr(exc, 'witness', None) or None, {'raised': True})
        except (KeyError, ValueError, IndexError, TypeError) as exc:
            logger.exception("Check '%s' failed on bad parameters", spec.name)
            error = type(exc).__name__
            outcome = CheckOutcome(False, {'error': error, 'message': str(exc)}, None,
                                   {'raised': True, 'parameter_error': True})
        elapsed = time.perf_counter() - started
        satisfied = CheckResult.is_satisfied(spec.expect, outcome.verdict, outcome.flags, error, spec.raises)
        if error is not None and not satisfied:
            logger.warning("%s raised %s (expected %s)", spec.name, error, spec.raises)
        logger.info("%s: verdict=%s expect=%s satisfied=%s (%.2fs)",
                    spec.name, outcome.verdict, spec.expect.value, satisfied, elapsed)
        return CheckResult(spec.name, spec.expect, outcome.verdict, satisfied,
                           to_jsonable(outcome.details), to_jsonable(outcome.witnesses),
                           to_jsonable(outcome.flags), round(elapsed, 6))

    def run_scenario(self, scenario: Union[str, Path, Scenario], out: Optional[Path] = None,
                     jobs: Optional[int] = None, fail_fast: Optional[bool] = None) -> Report:
        """Execute all checks in order and write the report atomically when out is given."""
        if not isinstance(scenario, Scenario):
            scenario = self.load_scenario(scenario)
        context = self.build_context(scenario)
        fail_fast = scenario.fail_fast if fail_fast is None else fail_fast
        jobs = self.jobs if jobs is None else max(1, jobs)
        streams = np.random.SeedSequence(scenario.seed).spawn(len(scenario.checks))
        rngs = [np.random.default_rng(s) for s in streams]

        results: List[CheckResult] = []
        if fail_fast or jobs == 1:
            for spec, rng in zip(scenario.checks, rngs):
                result = self.run_check(context, spec, rng)
                results.append(result)
                if fail_fast and not result.satisfied:
                    logger.warning("Fail-fast: stopping after '%s'", spec.name)
                    break
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(self.run_check, context, spec, rng)
                           for spec, rng in zip(scenario.checks, rngs)]
                results = [f.result() for f in futures]

        report = Report(
            scenario=scenario.name,
            artifact_version=config.APP_VERSION,
            provenance={'seed': scenario.seed, 'grid_h': scenario.grid_h, 'eps': scenario.eps,
                        'budgets': {'samples': scenario.samples}, 'points': context.causet.n,
                        'source': scenario.source.value},
            checks=results,
            generated_at=datetime.now(timezone.utc).isoformat(timespec='seconds'),
        )
        if out is not None:
            self.write_report(report, out)
        return report

    @staticmethod
    def write_report(report: Report, path: Union[str, Path]) -> Path:
        return write_json_atomic(path, report.to_dict())

    @staticmethod
    def report_diff(first: Any, second: Any, path: str = "") -> List[str]:
        """Field-wise differences between two reports, ignoring timing fields."""
        if isinstance(first, (str, Path)) and isinstance(second, (str, Path)) and not path:
            first, second = read_json(first), read_json(second)
        if isinstance(first, dict) and isinstance(second, dict):
            diffs = []
            for key in sorted(set(first) | set(second)):
                if key in TIMING_FIELDS:
                    continue
                where = f"{path}.{key}" if path else key
                if key not in first or key not in second:
                    diffs.append(f"{where}: only in {'second' if key not in first else 'first'}")
                else:
                    diffs.extend(ScenarioViewModel.report_diff(first[key], second[key], where))
            return diffs
        if isinstance(first, list) and isinstance(second, list):
            if len(first) != len(second):
                return [f"{path}: length {len(first)} != {len(second)}"]
            diffs = []
            for i, (a, b) in enumerate(zip(first, second)):
                diffs.extend(ScenarioViewModel.report_diff(a, b, f"{path}[{i}]"))
            return diffs
        return [] if first == second else [f"{path}: {first!r} != {second!r}"]
