import numpy as np
import pytest

from slenderflow.curves import make_centerline
from slenderflow.frames import FrenetFrame, compute_bishop_frame

CHECK_S = np.linspace(0.0, 2 * np.pi, 1000, endpoint=False)


def _frame_arrays(frame, s=CHECK_S):
    return frame.tangent(s), frame.normal(s), frame.binormal(s)


def test_circle_frame_closed_form():
    c = make_centerline("circle")
    frame = compute_bishop_frame(c, initial_normal=[1.0, 0.0, 0.0])
    assert abs(frame.alpha) < 1e-10
    n = frame.normal(CHECK_S)
    expected = np.stack([np.cos(CHECK_S), np.sin(CHECK_S), np.zeros_like(CHECK_S)], axis=1)
    assert np.abs(n - expected).max() < 1e-10
    b = frame.binormal(CHECK_S)
    assert np.abs(np.abs(b[:, 2]) - 1.0).max() < 1e-10
    k1, k2 = frame.curvatures(np.array([0.0, 2.0]))
    assert np.allclose(k1, -1.0, atol=1e-9)
    assert np.allclose(k2, 0.0, atol=1e-9)


@pytest.mark.parametrize("name,kwargs", [
    ("trefoil", {}),
    ("fourball", {}),
    ("figure8", {}),
    ("hairtie", {"H": 0.9}),
])
def test_frame_invariants(name, kwargs):
    c = make_centerline(name, **kwargs)
    frame = compute_bishop_frame(c)
    t, n, b = _frame_arrays(frame)
    assert np.abs(np.sum(n * n, axis=1) - 1).max() < 1e-10
    assert np.abs(np.sum(b * b, axis=1) - 1).max() < 1e-10
    assert np.abs(np.sum(n * b, axis=1)).max() < 1e-10
    assert np.abs(np.sum(t * n, axis=1)).max() < 1e-10
    # right-handed: T x N = B
    assert np.abs(np.cross(t, n) - b).max() < 1e-10
    # periodicity after the twist correction
    assert np.linalg.norm(frame.normal(2 * np.pi) - frame.normal(0.0)) < 1e-8
    assert np.linalg.norm(frame.binormal(2 * np.pi) - frame.binormal(0.0)) < 1e-8


def test_transported_tangent_tracks_curve_tangent(trefoil, trefoil_frame):
    # N x B reconstructs the tangent that was transported by the quaternion
    n = trefoil_frame.normal(CHECK_S)
    b = trefoil_frame.binormal(CHECK_S)
    t_curve = trefoil.tangent(CHECK_S)
    assert np.abs(np.cross(n, b) - t_curve).max() < 1e-8


def test_fourball_has_no_frenet_frame_but_bishop_works():
    c = make_centerline("fourball")
    frenet = FrenetFrame(c)
    # curvature vector vanishes at the flat spots of the 4-norm ball
    s = np.linspace(0, 2 * np.pi, 256)
    tp = frenet._tprime(s)
    assert np.linalg.norm(tp, axis=1).min() < 1e-3
    frame = compute_bishop_frame(c)
    t, n, b = _frame_arrays(frame)
    assert np.abs(np.cross(t, n) - b).max() < 1e-10


def test_normal_binormal_stay_orthogonal_at_random_s(trefoil_frame):
    rng = np.random.default_rng(3)
    s = rng.uniform(0, 2 * np.pi, 1000)
    n = trefoil_frame.normal(s)
    b = trefoil_frame.binormal(s)
    assert np.abs(np.sum(n * b, axis=1)).max() < 1e-10


def test_frenet_frame_reference_orientation():
    c = make_centerline("hairtie", H=0.9)
    frame = FrenetFrame(c)
    n = frame.normal(np.pi / 3)
    assert np.allclose(n, [0.5, np.sqrt(3) / 2, 0.0], atol=1e-10)
    k1, k2 = frame.curvatures(np.pi / 3)
    assert k2 == pytest.approx(0.0, abs=1e-14)


def test_minimal_twist_branch(trefoil_frame):
    assert -np.pi <= trefoil_frame.alpha <= np.pi
    assert abs(trefoil_frame.kappa3 - trefoil_frame.alpha / trefoil_frame.centerline.length) < 1e-15
