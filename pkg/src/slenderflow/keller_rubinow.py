"""Classical nonlocal slender-body velocity evaluator and comparison tools.

Evaluates the Keller-Rubinow centerline velocity for a closed unit-length
fiber: a local term depending on log(pi*eps/4) plus a nonlocal integral
whose two singular pieces cancel to a bounded integrand with a jump at
t = s.  The integral uses 200-node Gauss-Legendre panels on [s, s+1/3],
[s+1/3, s+2/3], [s+2/3, s+1] in arclength units, which keeps nodes off the
jump and resolves near-approach features at thirds of the period.

``f`` is the force density the fiber exerts on the fluid, matching the
solver convention, so the velocity response aligns with f for thin fibers.
"""

from dataclasses import dataclass

import numpy as np

_GL_NODES = 200
_SPEED_TOL = 1e-8


@dataclass
class KRProblem:
    """Unit-length constant-speed centerline with force density and radius."""

    centerline: object
    force: object  # f(s) -> (..., 3) on the 2pi-periodic parameter
    radius: float
    mu: float = 1.0

    def __post_init__(self):
        s = np.linspace(0.0, 2 * np.pi, 512, endpoint=False)
        speeds = self.centerline.speed(s)
        mean = speeds.mean()
        if np.abs(speeds - mean).max() > _SPEED_TOL * mean:
            raise ValueError("slender-body evaluation needs a constant-speed curve")
        if abs(self.centerline.length - 1.0) > 1e-8:
            raise ValueError("slender-body evaluation needs a unit-length curve")


def _panel_nodes(s_arc):
    """Gauss-Legendre nodes/weights on the three thirds starting at s_arc."""
    x, w = np.polynomial.legendre.leggauss(_GL_NODES)
    starts = s_arc + np.array([0.0, 1.0, 2.0]) / 3.0
    t = np.concatenate([lo + (x + 1.0) / 6.0 for lo in starts])
    wt = np.tile(w / 6.0, 3)
    return t, wt


def kr_velocity(problem, s):
    """Centerline velocity at parameter s (scalar or array), shape (..., 3).

    8*pi*mu*u = [(I - 3ee) - 2*log(pi*eps/4)*(I + ee)] f(s)
                + int_0^1 { (I/|r| + rr/|r|^3) f(t) - (I + ee) f(s) / (|sin(pi(s-t))|/pi) } dt
    with e the unit tangent and r = gamma(s) - gamma(t) in arclength units.
    The log coefficient multiplies (I + ee): the tangential log-mobility is
    twice the normal one, which also makes the operator consistent with the
    boundary value problem as the radius shrinks.
    """
    cl = problem.centerline
    eps = problem.radius
    s = np.asarray(s, dtype=float)
    if s.ndim == 0:
        return kr_velocity(problem, s[None])[0]

    out = np.empty(s.shape + (3,))
    log_term = -2.0 * np.log(np.pi * eps / 4.0)
    for idx, s_val in np.ndenumerate(s):
        gamma_s = cl.evaluate(s_val)
        e = cl.tangent(s_val)
        ee = np.outer(e, e)
        f_s = np.asarray(problem.force(s_val), dtype=float)
        local = ((np.eye(3) - 3.0 * ee) + log_term * (np.eye(3) + ee)) @ f_s

        t_arc, w = _panel_nodes(s_val / (2 * np.pi))
        t_par = 2 * np.pi * t_arc
        gamma_t = cl.evaluate(t_par)
        f_t = np.asarray(problem.force(t_par), dtype=float)
        r = gamma_s[None, :] - gamma_t
        dist = np.linalg.norm(r, axis=1)
        stokeslet = f_t / dist[:, None] + r * (np.sum(r * f_t, axis=1) / dist**3)[:, None]
        sin_sep = np.abs(np.sin(np.pi * (s_val / (2 * np.pi) - t_arc))) / np.pi
        subtract = (f_s + e * (e @ f_s))[None, :] / sin_sep[:, None]
        integral = (w[:, None] * (stokeslet - subtract)).sum(axis=0)
        out[idx] = (local + integral) / (8 * np.pi * problem.mu)
    return out


def compare_profiles(candidate, reference, norm=2):
    """Relative discrepancy of two velocity profiles on a shared grid.

    Takes the Euclidean norm over the space dimension pointwise, then the
    chosen vector norm (1, 2 or inf) along the grid, and divides by the
    same construction applied to the reference profile.
    """
    candidate = np.asarray(candidate, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if candidate.shape != reference.shape:
        raise ValueError("profiles must be sampled on the same grid")
    diff = np.linalg.norm(candidate - reference, axis=-1)
    ref = np.linalg.norm(reference, axis=-1)
    order = {1: 1, 2: 2, "inf": np.inf, np.inf: np.inf}[norm]
    return float(np.linalg.norm(diff, ord=order) / np.linalg.norm(ref, ord=order))


def convergence_rate(radii, discrepancies, n_fit=3):
    """Log-log regression slope using the smallest ``n_fit`` radii."""
    radii = np.asarray(radii, dtype=float)
    discrepancies = np.asarray(discrepancies, dtype=float)
    if np.any(radii <= 0) or np.any(discrepancies <= 0):
        raise ValueError("rate fit needs positive radii and discrepancies")
    if len(radii) < n_fit:
        raise ValueError(f"rate fit needs at least {n_fit} points")
    order = np.argsort(radii)
    sel = order[:n_fit]
    slope, _ = np.polyfit(np.log(radii[sel]), np.log(discrepancies[sel]), 1)
    return float(slope)
