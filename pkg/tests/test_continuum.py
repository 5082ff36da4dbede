import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from models.errors import InExcisedShadowError, OutOfWindowError
from models.spacetime import (
    BallDiamond, CausalVerdict, Event, SpacetimeModel, TimeOrientation, Window
)
from services.continuum_service import ContinuumService, causal_order_matrix, interval
from utils.bitmatrix import is_strict_order

WINDOW_1D = Window((-2.0, -3.0), (2.0, 3.0))
WINDOW_3D = Window((-2.0, -3.0, -3.0, -3.0), (2.0, 3.0, 3.0, 3.0))


@pytest.fixture
def mink2():
    return SpacetimeModel.minkowski(1, WINDOW_1D)


@pytest.fixture
def excised2():
    return SpacetimeModel.excised(1, Event(0.0, (0.0,)), WINDOW_1D)


def test_interval_sign_convention():
    assert interval(np.array([0.0, 0.0]), np.array([1.0, 0.0])) == -1.0
    assert interval(np.array([0.0, 0.0]), np.array([0.0, 2.0])) == 4.0


@pytest.mark.parametrize("a, b, expected", [
    ((0.0, 0.0), (1.0, 0.0), CausalVerdict.CHRONOLOGICAL),
    ((0.0, 0.0), (1.0, 1.0), CausalVerdict.LIGHTLIKE),
    ((0.0, 0.0), (0.5, 1.0), CausalVerdict.SPACELIKE),
    ((0.3, 0.1), (0.3, 0.1), CausalVerdict.IDENTICAL),
])
def test_causal_relation_in_minkowski(continuum, mink2, a, b, expected):
    assert continuum.causal_relation(mink2, Event.from_sequence(a), Event.from_sequence(b)) is expected


def test_time_orientation(continuum, mink2):
    a, b = Event(0.0, (0.0,)), Event(1.0, (0.5,))
    assert continuum.time_orientation(mink2, a, b) is TimeOrientation.FUTURE
    assert continuum.time_orientation(mink2, b, a) is TimeOrientation.PAST
    assert continuum.time_orientation(mink2, a, Event(0.0, (1.0,))) is TimeOrientation.NONE


def test_four_dimensional_relation(continuum):
    model = SpacetimeModel.minkowski(3, WINDOW_3D)
    origin = Event(0.0, (0.0, 0.0, 0.0))
    assert continuum.causal_relation(model, origin, Event(1.0, (0.5, 0.5, 0.5))) is CausalVerdict.CHRONOLOGICAL
    assert continuum.causal_relation(model, origin, Event(1.0, (0.6, 0.0, 0.8))) is CausalVerdict.LIGHTLIKE
    assert continuum.causal_relation(model, origin, Event(0.1, (1.0, 1.0, 0.0))) is CausalVerdict.SPACELIKE


def test_events_outside_window_are_rejected(continuum, mink2):
    with pytest.raises(OutOfWindowError):
        continuum.causal_relation(mink2, Event(0.0, (0.0,)), Event(3.0, (0.0,)))
    with pytest.raises(OutOfWindowError):
        continuum.causal_relation(mink2, Event(0.0, (0.0,)), Event(0.0, (0.0, 0.0)))


def test_excision_membership(continuum, excised2):
    assert not continuum.excision_membership(excised2, Event(0.0, (0.0,)))
    assert not continuum.excision_membership(excised2, Event(1.0, (0.0,)))
    assert not continuum.excision_membership(excised2, Event(-1.0, (1.0,)))
    assert continuum.excision_membership(excised2, Event(0.0, (1.0,)))


def test_shadow_events_are_rejected_by_excised_relation(continuum, excised2):
    with pytest.raises(InExcisedShadowError):
        continuum.causal_relation(excised2, Event(-1.0, (-0.5,)), Event(0.0, (2.0,)))


def test_excised_relation_beside_the_shadow(continuum, excised2):
    a, b = Event(-1.0, (-1.5,)), Event(1.0, (-1.5,))
    assert continuum.segment_avoids_shadow(excised2, a, b)
    assert continuum.causal_relation(excised2, a, b) is CausalVerdict.CHRONOLOGICAL


@settings(max_examples=80, deadline=None)
@given(coords=st.lists(st.floats(min_value=-1.9, max_value=1.9, allow_nan=False), min_size=4, max_size=4))
def test_excised_order_restricts_ambient_order_in_two_dimensions(coords):
    continuum = ContinuumService()
    excised2 = SpacetimeModel.excised(1, Event(0.0, (0.0,)), WINDOW_1D)
    a, b = Event(coords[0], (coords[1],)), Event(coords[2], (coords[3],))
    assume(not continuum.in_shadow(excised2, a) and not continuum.in_shadow(excised2, b))
    ambient = continuum.causal_relation(excised2.ambient(), a, b)
    assert continuum.causal_relation(excised2, a, b) is ambient


@settings(max_examples=150, deadline=None)
@given(coords=st.lists(st.floats(min_value=-1.9, max_value=1.9, allow_nan=False), min_size=8, max_size=8))
def test_causal_segments_outside_the_shadow_never_enter_it(coords):
    continuum = ContinuumService()
    excised4 = SpacetimeModel.excised(3, Event(0.0, (0.0, 0.0, 0.0)), WINDOW_3D)
    a, b = Event(coords[0], tuple(coords[1:4])), Event(coords[4], tuple(coords[5:8]))
    assume(not continuum.in_shadow(excised4, a) and not continuum.in_shadow(excised4, b))
    verdict = continuum.causal_relation(excised4, a, b)
    if verdict is CausalVerdict.CHRONOLOGICAL:
        assert continuum.segment_avoids_shadow(excised4, a, b)
    assert verdict is continuum.causal_relation(excised4.ambient(), a, b)


def test_spacelike_segments_can_cross_the_shadow(continuum, excised2):
    a, b = Event(0.0, (-1.0,)), Event(0.0, (1.0,))
    assert not continuum.segment_avoids_shadow(excised2, a, b)
    assert continuum.causal_relation(excised2, a, b) is CausalVerdict.SPACELIKE


def test_surface_membership(continuum, mink2):
    assert continuum.surface_membership_co(mink2, Event(0.5, (1.0,)))
    assert continuum.surface_membership_co(mink2, Event(0.5, (-1.0,)))
    assert not continuum.surface_membership_co(mink2, Event(0.5, (0.5,)))
    assert not continuum.surface_membership_co(mink2, Event(0.0, (0.0,)))


def test_diamond_membership_agrees_with_curve_oracle(continuum, mink2):
    dia = BallDiamond(0.0, (0.0,), 1.0)
    inside, outside = Event(0.2, (0.3,)), Event(0.5, (0.6,))
    rng = np.random.default_rng(3)
    assert continuum.diamond_membership(mink2, dia, inside)
    assert continuum.diamond_membership_oracle(dia, inside, rng=rng).all_meet
    assert not continuum.diamond_membership(mink2, dia, outside)
    report = continuum.diamond_membership_oracle(dia, outside, rng=rng)
    assert not report.all_meet
    assert report.escaping_endpoint is not None


def test_diamond_boundary_is_excluded(continuum, mink2):
    assert not continuum.diamond_membership(mink2, BallDiamond(0.0, (0.0,), 1.0), Event(0.5, (0.5,)))


def test_disjoint_cones_agree_with_lattice_oracle(continuum, mink2):
    left, right = BallDiamond(0.0, (-1.0,), 0.4), BallDiamond(0.0, (1.0,), 0.4)
    assert continuum.causally_disjoint_cones(mink2, left, right)
    assert continuum.cones_disjoint_oracle(left, right)
    near = BallDiamond(0.0, (0.5,), 0.4)
    assert not continuum.causally_disjoint_cones(mink2, BallDiamond(0.0, (0.0,), 0.4), near)
    assert not continuum.cones_disjoint_oracle(BallDiamond(0.0, (0.0,), 0.4), near)


def test_time_separated_cones_are_not_disjoint(continuum, mink2):
    early, late = BallDiamond(-1.0, (0.0,), 0.4), BallDiamond(1.0, (0.5,), 0.4)
    assert not continuum.causally_disjoint_cones(mink2, early, late)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1), n=st.integers(min_value=0, max_value=40))
def test_sprinkled_causal_matrix_is_a_strict_order(seed, n):
    coords = np.random.default_rng(seed).random((n, 3))
    assert is_strict_order(causal_order_matrix(coords))


@settings(max_examples=80, deadline=None)
@given(coords=st.lists(st.floats(min_value=-0.9, max_value=0.9, allow_nan=False), min_size=6, max_size=6))
def test_relation_is_invariant_under_translation_and_reflection(coords):
    continuum = ContinuumService()
    mink2 = SpacetimeModel.minkowski(1, WINDOW_1D)
    a, b = np.array(coords[0:2]), np.array(coords[2:4])
    assume(abs(interval(a, b)) > 1e-9)
    shift = np.array(coords[4:6])
    verdict = continuum.causal_relation(mink2, Event.from_sequence(a), Event.from_sequence(b))
    moved = continuum.causal_relation(mink2, Event.from_sequence(a + shift), Event.from_sequence(b + shift))
    mirrored = continuum.causal_relation(mink2, Event(a[0], (-a[1],)), Event(b[0], (-b[1],)))
    assert moved is verdict
    assert mirrored is verdict
