import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.algebra import AlgebraBasis, NetAssignment, PauliString
from models.causet import Causet, Region, RegionKind
from models.errors import (
    DimensionMismatchError, NoContainingDiamondError, NoSupersetError, PreconditionShadowError
)
from services.causet_service import CausetService
from services.duality_service import DualityService, EvaluationMode
from utils.bitmatrix import transitive_closure

from .conftest import random_dags, singleton_net


def slice_net(causets, c, points):
    """Net over the diamonds of one antichain."""
    diamonds = causets.diamonds_on_slice(c, causets.make_slice(c, points))
    return NetAssignment(c, [d.as_region() for d in diamonds])


# Algebra primitives

def test_commutant_of_local_algebra_is_the_complement(duality):
    commutant = duality.commutant(3, AlgebraBasis.supported_on(3, [0]))
    assert commutant == AlgebraBasis.supported_on(3, [1, 2])
    assert duality.commutant(3, AlgebraBasis.identity(3)) == AlgebraBasis.full(3)
    with pytest.raises(DimensionMismatchError):
        duality.commutant(2, AlgebraBasis.full(3))


def test_commutant_of_a_stabilizer_group(duality):
    group = AlgebraBasis.span(2, [PauliString.from_label("XX"), PauliString.from_label("ZZ")])
    assert duality.commutant(2, group) == group


def test_intersections(duality):
    first = AlgebraBasis.supported_on(3, [0, 1])
    second = AlgebraBasis.supported_on(3, [1, 2])
    assert duality.intersect(first, second) == AlgebraBasis.supported_on(3, [1])
    assert duality.intersect_all(3, []) == AlgebraBasis.full(3)
    assert duality.intersect_all(3, [first, second, AlgebraBasis.supported_on(3, [2])]).is_trivial
    with pytest.raises(DimensionMismatchError):
        duality.intersect(first, AlgebraBasis.full(2))


@st.composite
def string_sets(draw, n=4):
    labels = draw(st.lists(st.text(alphabet="IXYZ", min_size=n, max_size=n), max_size=6))
    return AlgebraBasis.span(n, [PauliString.from_label(label) for label in labels])


@settings(max_examples=60, deadline=None)
@given(algebra=string_sets())
def test_commutant_dimension_and_bicommutant(algebra):
    commutant = DualityService.commutant(4, algebra)
    assert algebra.dim_log + commutant.dim_log == 8
    assert DualityService.commutant(4, commutant) == algebra
    for s in algebra.strings():
        assert all(s.commutes_with(t) for t in commutant.strings())


@settings(max_examples=40, deadline=None)
@given(first=string_sets(), second=string_sets())
def test_intersection_is_contained_in_both(first, second):
    meet = DualityService().intersect(first, second)
    assert first.contains(meet) and second.contains(meet)


# Haag duality

def test_haag_holds_on_an_antichain(duality, antichain):
    net = singleton_net(antichain(3))
    for site in range(3):
        report = duality.haag_duality_check(net, {site})
        assert report.holds
        assert report.disjoint_members == 2
        assert duality.covering_oracle(net, {site})


def test_haag_fails_on_the_diamond(causets, duality, diamond):
    net = slice_net(causets, diamond, {1, 2})
    report = duality.haag_duality_check(net, {1})
    assert not report.holds
    assert report.rhs == AlgebraBasis.supported_on(4, [0, 1, 3])
    assert report.lhs == AlgebraBasis.supported_on(4, [1])
    assert report.witnesses
    assert not duality.covering_oracle(net, {1})


def test_empty_family_convention(duality, chain):
    net = singleton_net(chain)
    report = duality.haag_duality_check(net, {1})
    assert report.empty_family_convention
    assert report.rhs == AlgebraBasis.full(3)


@settings(max_examples=40, deadline=None)
@given(raw=random_dags(max_n=7))
def test_haag_duality_matches_covering_oracle(raw):
    causets = CausetService()
    duality = DualityService(causets)
    c = Causet(transitive_closure(raw))
    net = NetAssignment(c, causets.convex_region_family(c))
    for region in net.family:
        assert duality.haag_duality_check(net, region).holds == duality.covering_oracle(net, region)


# Punctured duality

def test_punctured_duality_in_the_excision(duality, antichain):
    net = singleton_net(antichain(3))
    report = duality.punctured_hd_check(net, {0}, 2, EvaluationMode.EXCISED)
    assert report.holds
    assert report.sites == [0, 1]


def test_ambient_punctured_duality_fails_in_the_shadow(duality, antichain):
    net = singleton_net(antichain(3))
    report = duality.punctured_hd_check(net, {0}, 2, EvaluationMode.AMBIENT)
    assert not report.holds
    assert report.witness_in_shadow
    assert all(support == [2] for support in report.witness_support)


def test_punctured_duality_with_no_disjoint_members(causets, duality, diamond):
    net = slice_net(causets, diamond, {1, 2})
    report = duality.punctured_hd_check(net, {2}, 1, "excised")
    assert report.holds
    assert report.empty_family_convention


def test_punctured_region_must_avoid_the_shadow(causets, duality, diamond):
    net = slice_net(causets, diamond, {1, 2})
    with pytest.raises(PreconditionShadowError):
        duality.punctured_hd_check(net, {0}, 1)


# Local definiteness, outer regularity, generation

def test_local_definiteness(duality, antichain):
    net = singleton_net(antichain(3))
    report = duality.local_definiteness_check(net, 0)
    assert report.minimal
    assert report.floor_points == [0]
    with pytest.raises(NoContainingDiamondError):
        duality.local_definiteness_check(net, 0, [Region({1})])


def test_outer_regularity(duality, antichain):
    c = antichain(3)
    net = NetAssignment(c, [Region({0, 1}), Region({0, 2})])
    report = duality.outer_regularity_check(net, {0})
    assert report.holds
    assert report.supersets == 2
    assert report.intersection_points == [0]
    with pytest.raises(NoSupersetError):
        duality.outer_regularity_check(singleton_net(c), {0, 1, 2})


def test_outer_regularity_fails_with_one_superset(causets, duality, diamond):
    net = slice_net(causets, diamond, {1, 2})
    report = duality.outer_regularity_check(net, {1})
    assert not report.holds
    assert report.witnesses


def test_generation(causets, duality, diamond, antichain):
    assert duality.generation_check(NetAssignment(diamond, causets.convex_region_family(diamond)))
    assert duality.generation_check(singleton_net(antichain(3)))
    assert not duality.generation_check(singleton_net(causets.from_relations(1, [])))


def test_generation_uses_only_the_supplied_family(causets, duality, diamond):
    # proper spans {1} and {2} leave sites 0 and 3 out
    assert not duality.generation_check(slice_net(causets, diamond, {1, 2}))
    assert not duality.generation_check(NetAssignment(diamond, [[0, 1, 2, 3]]))
    assert duality.generation_check(NetAssignment(diamond, [[0, 1], [2, 3], [0, 1, 2, 3]]))


def test_net_axioms(causets, duality, diamond):
    report = duality.verify_net_axioms(slice_net(causets, diamond, {1, 2}))
    assert report.isotony and report.locality
    assert report.pairs == 6
    assert not report.violations


# Sweeps and links

def test_punctured_sweep_on_an_antichain(duality, antichain):
    report = duality.punctured_sweep(singleton_net(antichain(3)), [0, 1, 2])
    assert report.connected and report.premise and report.conclusion and report.implication
    assert report.checked == 6


def test_punctured_sweep_with_a_weaker_premise(causets, duality, diamond):
    report = duality.punctured_sweep(slice_net(causets, diamond, {1, 2}), [1, 2])
    assert report.premise
    assert not report.conclusion
    assert not report.implication


def test_haag_outer_regularity_link(causets, duality, diamond):
    link = duality.haag_outer_regularity_link(slice_net(causets, diamond, {1, 2}), {1})
    assert link == {'haag': False, 'outer_regular': False, 'consistent': True}


# Cofinal families

def test_bridge_on_an_antichain(causets, duality, antichain):
    c = antichain(4)
    slices = [causets.make_slice(c, range(4))]
    family_a, family_b, shared = duality.bridge_families(c, 3, slices)
    assert sorted(sorted(d.span) for d in family_a) == [[0], [1], [2]]
    assert sorted(sorted(d.span) for d in family_b) == [[0], [1], [2]]
    report = duality.cofinality_bridge(NetAssignment(c, [d.as_region() for d in family_a]),
                                       3, family_a, family_b, shared)
    assert report.equal and report.certified
    assert report.shared == 3


def test_pruned_bridge_reports_an_explained_discrepancy(causets, duality, antichain):
    c = antichain(4)
    family_a, family_b, shared = duality.bridge_families(c, 3, [causets.make_slice(c, range(4))])
    family_b = [d for d in family_b if d.span != {2}]
    shared = [d for d in shared if d.span != {2}]
    report = duality.cofinality_bridge(NetAssignment(c, [d.as_region() for d in family_a]),
                                       3, family_a, family_b, shared)
    assert not report.equal and not report.certified
    assert [d['region'] for d in report.discrepancies] == [[0], [1]]
    assert all(f['point'] == 2 and f['family'] == 'B' for f in report.interpolation_failures)
    assert {tuple(f['region']) for f in report.interpolation_failures} == {(0,), (1,)}


def test_corollary_summary(causets, duality, diamond, antichain):
    c = antichain(3)
    report = duality.corollary_summary(singleton_net(c), 2, [causets.make_slice(c, range(3))])
    assert report.holds
    assert report.haag and report.local_definiteness and report.generation and report.bridge
    failing = duality.corollary_summary(slice_net(causets, diamond, {1, 2}), 1,
                                        [causets.make_slice(diamond, {1, 2})])
    assert not failing.holds and not failing.haag
    assert failing.details['haag_failures'] == [[2]]


def test_region_members_accept_point_lists(duality, antichain):
    net = NetAssignment(antichain(2), [[0], [1]])
    assert duality.algebra_of_region(net, [1]) == AlgebraBasis.supported_on(2, [1])
    assert duality.algebra_of_region(net, Region({0}, RegionKind.CONVEX)) == AlgebraBasis.supported_on(2, [0])
    assert np.array_equal(duality.haag_duality_check(net, [0]).rhs.rows,
                          AlgebraBasis.supported_on(2, [0]).rows)
