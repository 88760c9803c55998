"""Orthonormal frames along closed curves.

The rotation-minimizing (Bishop) frame is computed by integrating a
quaternion initial value problem along the curve; a uniform twist rate is
then chosen so the transported frame closes up after one period.  A Frenet
frame is also provided for curves whose curvature vector never vanishes
(used by the quadrature reference harness).
"""

import numpy as np
from scipy.integrate import solve_ivp

from . import spectral

_FEEDBACK_GAIN = 10.0  # spins the transported tangent toward the analytic one
_DEFAULT_TOL = 5e-14


def _quat_rotate(q, v):
    """Rotate vectors by unit quaternions q = (z1, z2, z3, r), batched."""
    z, r = q[..., :3], q[..., 3:]
    t = 2.0 * np.cross(z, v)
    return v + r * t + np.cross(z, t)


def _initial_frame(t0, n0=None):
    """Complete t0 to a right-handed orthonormal triple (t0, n0, b0)."""
    if n0 is None:
        ref = np.array([0.0, 0.0, 1.0])
        if abs(t0 @ ref) > 0.9:
            ref = np.array([1.0, 0.0, 0.0])
        n0 = ref - (ref @ t0) * t0
    else:
        n0 = np.asarray(n0, dtype=float)
        n0 = n0 - (n0 @ t0) * t0
        if np.linalg.norm(n0) < 1e-12:
            raise ValueError("initial normal is parallel to the tangent")
    n0 = n0 / np.linalg.norm(n0)
    return n0, np.cross(t0, n0)


class BishopFrame:
    """Rotation-minimizing frame {T, N, B} along a closed curve.

    ``normal``/``binormal`` evaluate a spectral resampling of the quaternion
    IVP solution; ``tangent`` always comes from the curve derivative.  The
    twist constant ``alpha`` is the angle correction that makes the frame
    periodic, taken on the minimal-|alpha| branch.
    """

    def __init__(self, centerline, coeffs_n, coeffs_b, alpha, n0, b0, q_path):
        self.centerline = centerline
        self._coeffs_n = coeffs_n
        self._coeffs_b = coeffs_b
        self.alpha = alpha
        self.initial_normal = n0
        self.initial_binormal = b0
        self.q_path = q_path  # dense-output interpolant of the quaternion IVP

    @property
    def kappa3(self):
        return self.alpha / self.centerline.length

    def tangent(self, s):
        return self.centerline.tangent(s)

    def normal(self, s):
        return spectral.evaluate_fourier(self._coeffs_n, s)

    def binormal(self, s):
        return spectral.evaluate_fourier(self._coeffs_b, s)

    def quaternion(self, s):
        q = np.atleast_2d(self.q_path(np.atleast_1d(s)).T)
        return q / np.linalg.norm(q, axis=-1, keepdims=True)

    def curvatures(self, s):
        """(kappa1, kappa2) defined through the tangent derivative."""
        d1 = self.centerline.evaluate(s, order=1)
        d2 = self.centerline.evaluate(s, order=2)
        speed = np.linalg.norm(d1, axis=-1, keepdims=True)
        tprime = d2 / speed - d1 * np.sum(d1 * d2, axis=-1, keepdims=True) / speed**3
        k1 = np.sum(tprime * self.normal(s), axis=-1) / speed[..., 0]
        k2 = np.sum(tprime * self.binormal(s), axis=-1) / speed[..., 0]
        return k1, k2


def _tangent_and_derivative(centerline, s):
    d1 = centerline.evaluate(s, order=1)
    d2 = centerline.evaluate(s, order=2)
    speed = np.linalg.norm(d1)
    t = d1 / speed
    tprime = d2 / speed - d1 * (d1 @ d2) / speed**3
    return t, tprime, speed


def _solve_quaternion_ivp(centerline, t0_vec, alpha, tol):
    length = centerline.length

    def rhs(s, q):
        q = q / np.linalg.norm(q)
        t, tprime, speed = _tangent_and_derivative(centerline, s)
        t_num = _quat_rotate(q[None, :], t0_vec[None, :])[0]
        omega = np.cross(t, tprime) + (speed * alpha / length) * t
        omega = omega + _FEEDBACK_GAIN * np.cross(t_num, t)
        z, r = q[:3], q[3]
        return 0.5 * np.concatenate([r * omega + np.cross(omega, z), [-omega @ z]])

    sol = solve_ivp(
        rhs,
        (0.0, 2 * np.pi),
        np.array([0.0, 0.0, 0.0, 1.0]),
        method="DOP853",
        rtol=tol,
        atol=tol,
        dense_output=True,
    )
    if not sol.success:
        raise RuntimeError(f"quaternion frame integration failed: {sol.message}")
    return sol


def compute_bishop_frame(centerline, tol=_DEFAULT_TOL, initial_normal=None, resample=4097):
    """Build the periodic Bishop frame of a closed curve.

    Two integration passes are used: the first (zero twist) measures the
    angle by which the transported normal misses periodicity, the second
    applies the compensating uniform twist.
    """
    t0, _, _ = _tangent_and_derivative(centerline, 0.0)
    n0, b0 = _initial_frame(t0, initial_normal)

    first = _solve_quaternion_ivp(centerline, t0, 0.0, tol)
    q_end = first.sol(2 * np.pi)
    q_end = q_end / np.linalg.norm(q_end)
    n_end = _quat_rotate(q_end[None, :], n0[None, :])[0]
    mismatch = np.arctan2(n_end @ b0, n_end @ n0)
    alpha = -mismatch

    sol = _solve_quaternion_ivp(centerline, t0, alpha, tol)

    if resample % 2 == 0:
        resample += 1
    grid = np.linspace(0.0, 2 * np.pi, resample, endpoint=False)
    q = sol.sol(grid).T
    q = q / np.linalg.norm(q, axis=1, keepdims=True)
    n_vals = _quat_rotate(q, np.broadcast_to(n0, (resample, 3)))
    b_vals = _quat_rotate(q, np.broadcast_to(b0, (resample, 3)))
    coeffs_n = spectral.truncate_tail(spectral.fourier_coeffs(n_vals), rel_tol=1e-14)
    coeffs_b = spectral.truncate_tail(spectral.fourier_coeffs(b_vals), rel_tol=1e-14)
    return BishopFrame(centerline, coeffs_n, coeffs_b, alpha, n0, b0, sol.sol)


class FrenetFrame:
    """Frame with N = T'/|T'|; undefined where the curvature vector vanishes.

    Kept as an explicitly requested alternative for reproducing reference
    quadrature results; not suitable for curves with inflection points.
    ``flip`` negates N (and B) to select the opposite orientation.
    """

    def __init__(self, centerline, flip=False):
        self.centerline = centerline
        self._sign = -1.0 if flip else 1.0

    def tangent(self, s):
        return self.centerline.tangent(s)

    def _tprime(self, s):
        d1 = self.centerline.evaluate(s, order=1)
        d2 = self.centerline.evaluate(s, order=2)
        speed = np.linalg.norm(d1, axis=-1, keepdims=True)
        return d2 / speed - d1 * np.sum(d1 * d2, axis=-1, keepdims=True) / speed**3

    def normal(self, s):
        tp = self._tprime(s)
        norm = np.linalg.norm(tp, axis=-1, keepdims=True)
        if np.any(norm < 1e-12):
            raise ValueError("Frenet frame undefined: curvature vector vanishes")
        return self._sign * tp / norm

    def binormal(self, s):
        return np.cross(self.tangent(s), self.normal(s))

    def curvatures(self, s):
        tp = self._tprime(s)
        speed = self.centerline.speed(s)
        k1 = self._sign * np.linalg.norm(tp, axis=-1) / speed
        return k1, np.zeros_like(k1)
