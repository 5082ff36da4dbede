"""Seeded suites at the sizes the lab is accepted on. Run with ``pytest -m slow``."""

import time
from itertools import combinations

import numpy as np
import pytest

from models.algebra import AlgebraBasis, NetAssignment, PauliString
from models.causet import Causet
from models.spacetime import Event, SpatialBall, SurfaceGrid, SpacetimeModel
from services.causet_service import STRICT
from services.dense_oracle import dense_commutant_matches
from services.duality_service import DualityService
from utils.bitmatrix import transitive_closure

pytestmark = pytest.mark.slow

LEVELS = (0.0, 0.25, 0.5, 0.75, 1.0)


def seeded_dag(seed, n, density=0.35):
    rng = np.random.default_rng(seed)
    return Causet(transitive_closure(np.triu(rng.random((n, n)) < density, k=1)))


def random_span(rng, n, size):
    vectors = rng.random((size, 2 * n)) < 0.5
    return AlgebraBasis.span(n, [PauliString.from_vector(v) for v in vectors])


def centre_point(c):
    centre = np.full(c.coords.shape[1], 0.5)
    return int(np.argmin(np.linalg.norm(c.coords - centre, axis=1)))


def sprinkled_slices(causets, c):
    """Cauchy maximal level slices, plus each one moved through the centre point."""
    slices = [s for s in (causets.level_slice(c, t) for t in LEVELS) if s.cauchy and s.maximal]
    p = centre_point(c)
    moved = [causets.slice_through_point(c, s, p) for s in slices]
    return slices + [s for s in moved if s.cauchy]


# Slice restriction

@pytest.mark.parametrize("d", [1, 3])
def test_slice_restriction_on_fifty_sprinklings(causets, d):
    model = SpacetimeModel.minkowski(d)
    checked = 0
    for seed in range(50):
        c = causets.sprinkle(model, 30, seed)
        assert c.n <= 60
        if c.n == 0:
            continue
        for slice_ in sprinkled_slices(causets, c):
            for p in slice_.sorted_points():
                report = causets.prop33_check(c, slice_, p)
                assert report.forward and report.converse, (seed, slice_.label, p, report.witnesses)
                checked += 1
    assert checked >= 100


# Convex families of the excision

def test_convex_families_agree_on_fifty_small_causets(causets):
    for seed in range(50):
        c = seeded_dag(seed, 4 + seed % 9)
        for p in range(0, c.n, max(1, c.n // 4)):
            report = causets.eq35_check(c, p)
            assert report.exhaustive
            assert report.equal, (seed, p, report.only_first, report.only_second)


def test_sampled_convex_families_agree_on_sprinklings(causets):
    model = SpacetimeModel.minkowski(1)
    for seed in range(10):
        c = causets.sprinkle(model, 40, seed)
        if not 12 < c.n <= 60:
            continue
        report = causets.eq35_check(c, centre_point(c), sample_budget=1000, rng=np.random.default_rng(seed))
        assert not report.exhaustive
        assert report.equal, (seed, report.only_first, report.only_second)


# Diamond interpolation

def test_interpolation_over_five_hundred_nested_pairs(causets, duality):
    model = SpacetimeModel.minkowski(1)
    attempted = 0
    for seed in range(300):
        c = causets.sprinkle(model, 30, seed)
        if c.n < 4:
            continue
        slices = [s for s in (causets.level_slice(c, t) for t in LEVELS) if s.cauchy]
        p = centre_point(c)
        _, _, shared = duality.bridge_families(c, p, slices)
        for inner, outer in combinations(shared, 2):
            if len(inner.span) > len(outer.span):
                inner, outer = outer, inner
            if not inner.span <= outer.span or not causets.hasse_buffer(c, inner.span) <= outer.span:
                continue
            found = causets.interpolate_diamond(c, inner, outer, shared)
            assert inner.span <= found.span <= outer.span
            assert causets.causally_disjoint(c, found.span, {p})
            attempted += 1
        if attempted >= 500:
            break
    assert attempted >= 500


# Surface deformation and squeeze conditions

def test_deformation_in_three_dimensions(surfaces):
    grid = SurfaceGrid.cube(5.0, 3, 0.25)
    tau = surfaces.half_cone_surface(grid)
    p = Event(0.0, (0.0, 0.0, 0.0))
    deformed = surfaces.deform_surface_through_point(tau, p, 0.1)
    assert surfaces.verify_deformation(deformed, tau, p, 0.1).holds
    assert surfaces.verify_deformation(deformed, tau, p, 0.1, grid=grid.refined(2)).holds


def test_squeeze_on_twenty_nested_bases(surfaces):
    grid = SurfaceGrid.cube(5.0, 1, 0.05)
    tau = surfaces.half_cone_surface(grid)
    tau_co = surfaces.deform_surface_through_point(tau, Event(0.0, (0.0,)), 0.1)
    for k in range(20):
        centre = (-3.0 + 0.3 * k,)
        radius = 0.2 + 0.015 * k
        report = surfaces.check_squeeze_conditions(
            tau, tau_co, SpatialBall(centre, radius), SpatialBall(centre, radius + 0.5),
            SpatialBall(centre, radius + 1.0))
        assert report.cond_a and report.cond_b, (k, report.witnesses)
        assert report.witnesses == {}


# Commutant engine

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_commutants_match_dense_matrices_for_every_region(n):
    rng = np.random.default_rng(n)
    algebras = [AlgebraBasis.supported_on(n, sites)
                for size in range(n + 1) for sites in combinations(range(n), size)]
    algebras += [random_span(rng, n, int(rng.integers(1, 2 * n + 1))) for _ in range(20)]
    for algebra in algebras:
        commutant = DualityService.commutant(n, algebra)
        assert algebra.dim_log + commutant.dim_log == 2 * n
        assert dense_commutant_matches(algebra, commutant)


def test_commutants_match_dense_matrices_on_five_sites():
    rng = np.random.default_rng(5)
    for _ in range(100):
        region = np.flatnonzero(rng.random(5) < 0.5)
        algebra = AlgebraBasis.supported_on(5, region)
        assert dense_commutant_matches(algebra, DualityService.commutant(5, algebra))


def test_dimension_identity_on_ten_thousand_spans():
    rng = np.random.default_rng(64)
    for _ in range(10_000):
        n = int(rng.integers(1, 65))
        algebra = AlgebraBasis.supported_on(n, np.flatnonzero(rng.random(n) < rng.random()))
        assert algebra.dim_log + DualityService.commutant(n, algebra).dim_log == 2 * n


# Haag duality and the covering criterion

def test_haag_duality_matches_covering_on_small_causets(causets, duality):
    for seed in range(40):
        c = seeded_dag(seed, 1 + seed % 10)
        net = NetAssignment(c, causets.convex_region_family(c))
        for region in net.family:
            assert duality.haag_duality_check(net, region).holds == duality.covering_oracle(net, region), \
                (seed, region.sorted_points())


# Cofinal families

def test_bridge_on_one_hundred_sprinklings(causets, duality):
    model = SpacetimeModel.minkowski(1)
    certified = 0
    for seed in range(100):
        c = causets.sprinkle(model, 20, seed)
        assert c.n <= 40
        if c.n < 2:
            continue
        p = centre_point(c)
        slices = [causets.level_slice(c, 0.0), causets.level_slice(c, 1.0)]
        family_a, family_b, shared = duality.bridge_families(c, p, slices)
        net = NetAssignment(c, [d.as_region() for d in family_a])
        report = duality.cofinality_bridge(net, p, family_a, family_b, shared)
        if report.certified:
            assert report.equal, (seed, report.discrepancies)
            certified += 1
        explained = {tuple(f['region']) for f in report.interpolation_failures}
        assert all(tuple(d['region']) in explained for d in report.discrepancies), seed
    assert certified > 0


# Performance

def test_closure_and_queries_on_two_thousand_points(causets):
    c = causets.sprinkle(SpacetimeModel.minkowski(1), 2000, 9)
    assert c.n > 1500
    started = time.perf_counter()
    assert np.array_equal(transitive_closure(c.hasse), c.order)
    for x in range(c.n):
        causets.future(c, {x})
        causets.past(c, {x})
        causets.future(c, {x}, STRICT)
        causets.past(c, {x}, STRICT)
    for level in (0.0, 0.5, 1.0):
        slice_ = causets.level_slice(c, level)
        causets.discrete_domain_of_dependence(c, slice_.points)
    assert time.perf_counter() - started < 5.0


def test_commutant_on_256_sites():
    n = 256
    algebra = AlgebraBasis.supported_on(n, range(0, n, 2))
    started = time.perf_counter()
    commutant = DualityService.commutant(n, algebra)
    assert time.perf_counter() - started < 1.0
    assert commutant == AlgebraBasis.supported_on(n, range(1, n, 2))
