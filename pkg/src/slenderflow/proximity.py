"""Near-self-intersection diagnostics for unit-length constant-speed curves.

The functional minimized here is the chord length between two curve points
divided by the sine of half their parameter separation; its infimum over
all pairs is small exactly when the curve surface nearly touches itself.
On the diagonal the ratio tends to twice the (constant) parameterization
speed, which is the circle's value 1/pi and the largest possible.
"""

import numpy as np
from scipy.optimize import minimize

_SPEED_TOL = 1e-8
_LENGTH_TOL = 1e-10


def _check_unit_speed(centerline):
    s = np.linspace(0.0, 2 * np.pi, 1024, endpoint=False)
    speeds = centerline.speed(s)
    mean = speeds.mean()
    if np.abs(speeds - mean).max() > _SPEED_TOL * mean:
        raise ValueError("sigma requires a constant-speed parameterization")
    if abs(centerline.length - 1.0) > 1e-6:
        raise ValueError("sigma requires a unit-length curve")
    return mean


def sigma_and_gap(centerline, grid=2048, refine=True, near_points=None):
    """Minimum chord-to-sine ratio, the gap distance, and the minimizing pair.

    Returns (sigma, gap, (s, t)).  When ``near_points`` (an iterable of
    parameter values marking the near-approach points, e.g. pi/3, pi and
    5*pi/3 for the three-lobed family) is given, ``gap`` is their minimum
    pairwise distance; otherwise it is the chord length at the sigma
    minimizer, which is not meaningful for curves without a near approach.
    """
    speed = _check_unit_speed(centerline)
    s = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    pts = centerline.evaluate(s)

    diag_limit = 2.0 * speed
    best = diag_limit
    best_pair = (0.0, 0.0)
    block = 256
    for lo in range(0, grid, block):
        hi = min(lo + block, grid)
        diff = pts[lo:hi, None, :] - pts[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        denom = np.abs(np.sin(0.5 * (s[lo:hi, None] - s[None, :])))
        ratio = np.where(denom > 1e-12, dist / np.maximum(denom, 1e-300), diag_limit)
        idx = np.unravel_index(np.argmin(ratio), ratio.shape)
        if ratio[idx] < best:
            best = ratio[idx]
            best_pair = (s[lo + idx[0]], s[idx[1]])

    if refine and best < diag_limit:
        def objective(x):
            half = abs(np.sin(0.5 * (x[0] - x[1])))
            if half < 1e-9:
                return diag_limit
            d = np.linalg.norm(centerline.evaluate(x[0]) - centerline.evaluate(x[1]))
            return d / half

        res = minimize(objective, np.array(best_pair), method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 400})
        if res.fun < best:
            best = float(res.fun)
            best_pair = (float(res.x[0]) % (2 * np.pi), float(res.x[1]) % (2 * np.pi))

    if near_points is not None:
        pts_near = centerline.evaluate(np.asarray(list(near_points), dtype=float))
        dists = [
            np.linalg.norm(pts_near[i] - pts_near[j])
            for i in range(len(pts_near))
            for j in range(i + 1, len(pts_near))
        ]
        gap = float(min(dists))
    else:
        gap = float(np.linalg.norm(centerline.evaluate(best_pair[0]) - centerline.evaluate(best_pair[1])))
    return float(best), gap, best_pair

HAIRTIE_NEAR_POINTS = (np.pi / 3, np.pi, 5 * np.pi / 3)
