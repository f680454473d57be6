import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graspa.errors import OutOfBoard, SemanticError
from graspa.se3 import (
    Pose, RegionGrid, axis_angle, is_reached, orientation_error, position_error, regions_of_point, rot_x, rot_z,
    rotation, rotation_angle,
)
from oracles import angle_between, random_rotation, rodrigues

seeds = st.integers(0, 2**32 - 1)


def rand_pose(seed):
    rng = np.random.default_rng(seed)
    return Pose(rng.uniform(-1, 1, 3), random_rotation(rng))


def test_position_error_examples():
    assert position_error(Pose(), Pose()) == 0.0
    a, b = Pose([0.1, 0.2, 0.0], rot_x(0.3)), Pose([0.1, 0.2, 0.02], rot_z(1.0))
    assert position_error(a, b) == pytest.approx(0.02, abs=1e-15)
    assert position_error(Pose(), Pose([0.003, 0.004, 0])) == pytest.approx(0.005, abs=1e-15)


def test_orientation_error_examples():
    R = rot_x(0.4)
    e = orientation_error(Pose(R=R), Pose(R=R))
    assert e.alpha == pytest.approx(0.0, abs=1e-7) and e.e_o == pytest.approx(0.0, abs=1e-7)
    e = orientation_error(Pose(R=R), Pose(R=R @ rot_z(math.radians(30))))
    assert e.alpha == pytest.approx(math.pi / 6, abs=1e-12)
    assert e.e_o == pytest.approx(0.5, abs=1e-12)
    e = orientation_error(Pose(R=R), Pose(R=R @ rot_x(math.radians(120))))
    assert e.alpha == pytest.approx(2 * math.pi / 3, abs=1e-12)
    assert e.e_o == 1.0
    np.testing.assert_allclose(e.r_error, rot_x(math.radians(120)), atol=1e-12)


@pytest.mark.parametrize("ep, alpha, expected", [(0.01, 0.2, True), (0.03, 0.2, False), (0.02, 0.5, True),
                                                 (0.01, 0.6, False)])
def test_is_reached_thresholds(ep, alpha, expected):
    d = Pose()
    r = Pose([ep, 0, 0], rot_z(alpha))
    # nudge onto the exact boundary values
    assert is_reached(d, r, 0.02 + 1e-15, 0.5 + 1e-15) is expected


def test_is_reached_rejects_bad_thresholds():
    with pytest.raises(ValueError):
        is_reached(Pose(), Pose(), 0.0, 0.5)
    with pytest.raises(ValueError):
        is_reached(Pose(), Pose(), 0.01, 4.0)


def test_gate_uses_angle_not_sine():
    # a half turn has sin(alpha) ~ 0 but must not pass a 0.5 rad gate
    assert not is_reached(Pose(), Pose(R=rot_x(math.pi)), 0.02, 0.5)


def test_pose_validation():
    with pytest.raises(SemanticError):
        Pose([0, 0, np.nan])
    with pytest.raises(SemanticError):
        Pose(R=np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(SemanticError):
        Pose(R=np.eye(3) * 1.01)
    Pose(R=np.eye(3) + 1e-7)  # within orthonormality tolerance
    with pytest.raises(SemanticError):
        Pose.from_matrix(np.ones((4, 4)))


def test_pose_is_immutable():
    p = Pose([1, 2, 3])
    with pytest.raises(ValueError):
        p.p[0] = 5.0


@settings(max_examples=60, deadline=None)
@given(seeds, seeds)
def test_pose_composition_and_inverse(s1, s2):
    a, b = rand_pose(s1), rand_pose(s2)
    assert (a @ a.inverse()).allclose(Pose(), atol=1e-12)
    np.testing.assert_allclose((a @ b).matrix(), a.matrix() @ b.matrix(), atol=1e-12)
    assert Pose.from_matrix(a.matrix()).allclose(a, atol=0)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_rotation_matches_independent_rodrigues(seed):
    rng = np.random.default_rng(seed)
    axis, angle = rng.standard_normal(3), rng.uniform(-math.pi, math.pi)
    np.testing.assert_allclose(rotation(axis, angle), rodrigues(axis, angle), atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_axis_angle_roundtrip(seed):
    rng = np.random.default_rng(seed)
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    angle = rng.uniform(1e-3, math.pi - 1e-3)
    k, a = axis_angle(rotation(axis, angle))
    assert a == pytest.approx(angle, abs=1e-9)
    np.testing.assert_allclose(k, axis, atol=1e-7)


@settings(max_examples=200, deadline=None)
@given(seeds, seeds, seeds)
def test_angle_is_left_invariant_and_symmetric(s1, s2, s3):
    A, B, C = (rand_pose(s).R for s in (s1, s2, s3))
    alpha = orientation_error(Pose(R=A), Pose(R=B)).alpha
    assert orientation_error(Pose(R=C @ A), Pose(R=C @ B)).alpha == pytest.approx(alpha, abs=1e-9)
    assert orientation_error(Pose(R=B), Pose(R=A)).alpha == pytest.approx(alpha, abs=1e-9)
    assert alpha == pytest.approx(angle_between(A, B), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(seeds, seeds, seeds)
def test_position_error_is_a_metric(s1, s2, s3):
    a, b, c = rand_pose(s1), rand_pose(s2), rand_pose(s3)
    assert position_error(a, b) == position_error(b, a) >= 0
    assert position_error(a, c) <= position_error(a, b) + position_error(b, c) + 1e-15


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_near_identity_noise_never_raises(seed):
    rng = np.random.default_rng(seed)
    R = np.eye(3) + rng.uniform(-4e-7, 4e-7, (3, 3))
    alpha = rotation_angle(R)
    assert 0.0 <= alpha < 2e-6


def test_region_examples():
    g = RegionGrid()
    assert g.cell_width == pytest.approx(0.198) and g.cell_height == pytest.approx(0.21)
    assert regions_of_point((0.05, 0.05)) == {1}
    assert regions_of_point((0.198, 0.10)) == {1, 2}
    assert regions_of_point((0.198, 0.210)) == {1, 2, 4, 5}
    assert regions_of_point((0.5, 0.4)) == {6}
    assert regions_of_point((-0.0005, 0.1)) == {1}
    with pytest.raises(OutOfBoard):
        regions_of_point((-0.01, 0.1))
    with pytest.raises(OutOfBoard):
        regions_of_point((0.3, 0.43))


def test_region_numbering_is_row_major():
    g = RegionGrid()
    assert g.cell_bounds(1) == pytest.approx((0, 0, 0.198, 0.21))
    assert g.cell_bounds(3) == pytest.approx((0.396, 0, 0.594, 0.21))
    assert g.cell_bounds(4) == pytest.approx((0, 0.21, 0.198, 0.42))
    with pytest.raises(ValueError):
        g.cell_bounds(7)


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 0.594), st.floats(0, 0.42))
def test_regions_tile_the_board(x, y):
    g = RegionGrid()
    found = regions_of_point((x, y))
    assert 1 <= len(found) <= 4
    # enumerate cells independently with an exact, tolerance-free check
    inside = {r for r in g.region_ids
              if g.cell_bounds(r)[0] < x < g.cell_bounds(r)[2] and g.cell_bounds(r)[1] < y < g.cell_bounds(r)[3]}
    assert inside <= found
    near_edge = min(abs(x - k * 0.198) for k in range(4)) <= 1e-3 or min(abs(y - k * 0.21) for k in range(3)) <= 1e-3
    if not near_edge:
        assert found == inside and len(found) == 1
