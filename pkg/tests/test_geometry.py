"""
Tests for rs2v.geometry: Rodrigues conversions, rigid transforms and the
spherical coordinate boundary.

Run with:
    pytest tests/test_geometry.py -v -s
"""

import time

import numpy as np
import pytest

from rs2v.errors import DegenerateOrigin, NotARotation
from rs2v.geometry import (
    RigidTransform,
    apply_transform,
    canonical_rotvec,
    cartesian_to_spherical,
    compose,
    direction_from_angles,
    from_spherical,
    inv_rodrigues,
    invert,
    is_rotation,
    rodrigues,
    spherical_to_cartesian,
    to_spherical,
    world_to_vehicle_transform,
)


def random_rotvecs(rng, n, low=1e-6, high=np.pi - 1e-6):
    axes = rng.normal(size=(n, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    return axes * rng.uniform(low, high, size=(n, 1))


# ---------------------------------------------------------------------------
# Rodrigues
# ---------------------------------------------------------------------------

def test_rodrigues_zero_is_identity():
    assert np.array_equal(rodrigues([0.0, 0.0, 0.0]), np.eye(3))


def test_rodrigues_quarter_turn_about_z():
    rot = rodrigues([0.0, 0.0, np.pi / 2])
    assert np.allclose(rot @ [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], atol=1e-15)
    assert np.allclose(rot @ [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], atol=1e-15)


def test_rodrigues_tiny_angle_stays_orthonormal():
    rot = rodrigues([1e-12, -2e-12, 5e-13])
    assert is_rotation(rot)
    assert np.allclose(inv_rodrigues(rot), [1e-12, -2e-12, 5e-13], rtol=1e-6, atol=1e-20)


def test_rodrigues_rejects_bad_shapes():
    with pytest.raises(ValueError):
        rodrigues([1.0, 2.0])
    with pytest.raises(ValueError):
        rodrigues([np.nan, 0.0, 0.0])


def test_inv_rodrigues_round_trip_random():
    """10,000 random rotation vectors survive the round trip to 1e-9."""
    rng = np.random.default_rng(0)
    thetas = random_rotvecs(rng, 10_000)
    recovered = np.array([inv_rodrigues(rodrigues(t)) for t in thetas])
    assert np.max(np.abs(recovered - thetas)) <= 1e-9


@pytest.mark.timing
def test_inv_rodrigues_round_trip_speed():
    rng = np.random.default_rng(0)
    thetas = random_rotvecs(rng, 10_000)

    started = time.perf_counter()
    for t in thetas:
        inv_rodrigues(rodrigues(t))
    elapsed = time.perf_counter() - started
    print(f"\n10k round trips in {elapsed:.3f}s")
    assert elapsed < 1.0


def test_rodrigues_transpose_is_reverse_rotation():
    np.testing.assert_allclose(
        rodrigues([0.1, 0.2, 0.3]).T, rodrigues([-0.1, -0.2, -0.3]), atol=1e-12,
    )


def test_scipy_conversions_accept_frozen_arrays():
    theta = np.array([0.1, -0.2, 0.3])
    theta.setflags(write=False)
    rot = rodrigues(theta)
    rot.setflags(write=False)
    np.testing.assert_allclose(inv_rodrigues(rot), theta, atol=1e-12)

    t = world_to_vehicle_transform([5.0, 1.0, 0.0], theta, [0.0, 0.0, 1.73])
    assert not t.rotation.flags.writeable
    np.testing.assert_allclose(inv_rodrigues(t.rotation), -theta, atol=1e-12)


def test_inv_rodrigues_identity_is_zero():
    assert np.array_equal(inv_rodrigues(np.eye(3)), np.zeros(3))


def test_inv_rodrigues_half_turn_canonical_sign():
    """Both signs of a pi rotation map to the vector whose first nonzero
    component is positive."""
    axis = np.array([-1.0, 2.0, 2.0]) / 3.0
    for sign in (1.0, -1.0):
        theta = inv_rodrigues(rodrigues(sign * np.pi * axis))
        assert np.isclose(np.linalg.norm(theta), np.pi, atol=1e-9)
        assert theta[0] > 0
        assert np.allclose(theta, -np.pi * axis, atol=1e-9)


def test_canonical_rotvec_leaves_small_angles_alone():
    theta = np.array([-0.3, 0.1, 0.2])
    assert np.array_equal(canonical_rotvec(theta), theta)


def test_inv_rodrigues_rejects_reflection():
    with pytest.raises(NotARotation):
        inv_rodrigues(np.diag([1.0, 1.0, -1.0]))


def test_inv_rodrigues_rejects_scaled_matrix():
    with pytest.raises(NotARotation):
        inv_rodrigues(2.0 * np.eye(3))


# ---------------------------------------------------------------------------
# Rigid transforms
# ---------------------------------------------------------------------------

def test_world_to_vehicle_maps_target_centroid_to_minus_delta_t():
    rng = np.random.default_rng(1)
    delta_t = np.array([0.0, 0.0, 1.73])
    for theta in random_rotvecs(rng, 1000):
        x_wc = rng.uniform(-100.0, 100.0, 3)
        t = world_to_vehicle_transform(x_wc, theta, delta_t)
        assert np.allclose(apply_transform(t, x_wc), -delta_t, atol=1e-9)
        # the target's own heading becomes the identity
        assert np.allclose(t.rotation @ rodrigues(theta), np.eye(3), atol=1e-9)


def test_world_to_vehicle_identity_pose():
    t = world_to_vehicle_transform([0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    assert np.array_equal(t.rotation, np.eye(3))
    assert np.array_equal(t.translation, np.zeros(3))


def test_world_to_vehicle_yawed_target():
    """A car at (10, 5, 0) facing +y sees a point 3 m ahead of it on its +x axis."""
    t = world_to_vehicle_transform([10.0, 5.0, 0.0], [0.0, 0.0, np.pi / 2], [0.0, 0.0, 0.0])
    assert np.allclose(apply_transform(t, [10.0, 8.0, 0.0]), [3.0, 0.0, 0.0], atol=1e-12)


def test_apply_transform_batch_matches_single():
    rng = np.random.default_rng(2)
    t = RigidTransform(rodrigues([0.1, -0.4, 0.7]), [1.0, 2.0, 3.0])
    points = rng.normal(size=(50, 3))
    batch = apply_transform(t, points)
    assert batch.shape == (50, 3)
    for p, q in zip(points, batch):
        assert np.allclose(apply_transform(t, p), q, atol=1e-12)


def test_compose_is_associative():
    rng = np.random.default_rng(3)
    t1, t2, t3 = (RigidTransform(rodrigues(th), rng.normal(size=3)) for th in random_rotvecs(rng, 3))
    left = compose(compose(t3, t2), t1)
    right = compose(t3, compose(t2, t1))
    assert np.allclose(left.as_matrix(), right.as_matrix(), atol=1e-12)


def test_invert_round_trip():
    t = RigidTransform(rodrigues([0.3, 0.2, -1.1]), [4.0, -2.0, 0.5])
    both = compose(invert(t), t)
    assert np.allclose(both.rotation, np.eye(3), atol=1e-12)
    assert np.allclose(both.translation, np.zeros(3), atol=1e-12)


def test_rigid_transform_rejects_non_rotation():
    with pytest.raises(NotARotation):
        RigidTransform(np.diag([1.0, 2.0, 1.0]), np.zeros(3))


def test_rigid_transform_is_immutable():
    t = RigidTransform.identity()
    with pytest.raises(ValueError):
        t.translation[0] = 1.0


# ---------------------------------------------------------------------------
# Spherical coordinates
# ---------------------------------------------------------------------------

def test_spherical_axes():
    assert np.allclose(cartesian_to_spherical([1.0, 0.0, 0.0]), (1.0, 0.0, 90.0))
    assert np.allclose(cartesian_to_spherical([0.0, 2.0, 0.0]), (2.0, 90.0, 90.0))
    assert np.allclose(cartesian_to_spherical([0.0, 0.0, -3.0]), (3.0, 0.0, 180.0))


def test_spherical_azimuth_in_range():
    s = cartesian_to_spherical([1.0, -1e-300, 0.0])
    assert 0.0 <= s.phi < 360.0
    s = cartesian_to_spherical([-1.0, -1.0, 0.0])
    assert np.isclose(s.phi, 225.0)


def test_spherical_origin_raises():
    with pytest.raises(DegenerateOrigin):
        cartesian_to_spherical([0.0, 0.0, 0.0])


def test_spherical_round_trip():
    rng = np.random.default_rng(4)
    points = rng.uniform(-50.0, 50.0, size=(1000, 3))
    back = from_spherical(to_spherical(points))
    assert np.allclose(back, points, atol=1e-9)
    p = points[0]
    assert np.allclose(spherical_to_cartesian(cartesian_to_spherical(p)), p, atol=1e-12)


def test_to_spherical_origin_row_is_zero():
    assert np.array_equal(to_spherical(np.zeros((1, 3))), np.zeros((1, 3)))


def test_direction_from_angles_unit_length():
    dirs = direction_from_angles(np.arange(0.0, 360.0, 10.0), 100.0)
    assert dirs.shape == (36, 3)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)
    assert np.all(dirs[:, 2] < 0)
