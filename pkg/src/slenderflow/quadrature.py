"""Surface quadrature on thin tubes adapted to a 1/r point singularity.

A rule for a source point (s*, theta*) has two parts.  The inner region in
s (where the centerline is within 5*eps of gamma(s*)) spans all theta and is
covered by six Duffy-transformed triangles meeting at the source, which
regularizes the point singularity.  The outer region is cut at markers
placed where the centerline distance h(s) = |gamma(s) - gamma(s*)| crosses
geometric levels or has a sharp extremum; each panel carries a tensor rule
with exponentially rescaled Gauss-Legendre nodes in s (clustering toward the
closer end) and the trapezoid rule in the periodic theta direction.

A rule depends only on the centerline and s*; a change of theta* is a rigid
shift of the theta coordinates.
"""

import csv
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar

_MARKER_MERGE_TOL = 1e-10
_PANEL_RATIO_CAP = 10.0
_EXTREMUM_KEEP_FACTOR = 4.0
_CURVATURE_GRID = 30
_DETECT_GRID = 512


@lru_cache(maxsize=64)
def _gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def duffy_triangle_rule(qn):
    """Tensor rule on the triangle (0,0)-(0,1)-(1,1), singularity at (0,0).

    The substitution (x, y) = (u v, u) maps the triangle to the unit square
    and contributes a factor u that cancels a 1/r vertex singularity.
    Returns qn^2 nodes of shape (qn^2, 2) and positive weights.
    """
    if qn < 2:
        raise ValueError("Duffy rule needs at least 2 points per direction")
    x, w = _gauss_legendre(qn)
    u = 0.5 * (x + 1.0)
    wu = 0.5 * w
    uu, vv = np.meshgrid(u, u, indexing="ij")
    ww = np.outer(wu, wu) * uu
    nodes = np.stack([(uu * vv).ravel(), uu.ravel()], axis=1)
    return nodes, ww.ravel()


# Six triangles covering [-1,1]^2 with a vertex at the origin: each half
# square splits into three, so the two halves can be scaled separately in s.
_SQUARE_TRIANGLES = [
    ((0.0, 1.0), (1.0, 1.0)),
    ((1.0, 1.0), (1.0, -1.0)),
    ((1.0, -1.0), (0.0, -1.0)),
    ((0.0, 1.0), (-1.0, 1.0)),
    ((-1.0, 1.0), (-1.0, -1.0)),
    ((-1.0, -1.0), (0.0, -1.0)),
]


def _centered_square_rule(qn):
    """Duffy rules on six triangles tiling [-1,1]^2 around the origin."""
    ref_nodes, ref_weights = duffy_triangle_rule(qn)
    nodes, weights = [], []
    for va, vb in _SQUARE_TRIANGLES:
        a = np.asarray(va)
        b = np.asarray(vb)
        m = np.stack([b - a, a], axis=1)  # columns: images of (1,0) and (0,1)
        mapped = ref_nodes @ m.T
        det = abs(np.linalg.det(m))
        nodes.append(mapped)
        weights.append(ref_weights * det)
    return np.concatenate(nodes), np.concatenate(weights)


@dataclass
class SubdivisionPlan:
    """Outer-region panel layout in s, kept for diagnostics."""

    markers: np.ndarray
    panel_h: list = field(default_factory=list)  # (h_left, h_right) per panel
    panel_ratio: list = field(default_factory=list)  # within-panel h_max/h_min
    panel_nodes: list = field(default_factory=list)
    extrema: list = field(default_factory=list)  # (s, h, kept) from detection


@dataclass
class QuadratureRule:
    """Flat (s, theta) nodes and weights plus the block structure."""

    nodes: np.ndarray
    weights: np.ndarray
    source: tuple
    qn: int
    n_inner: int
    plan: SubdivisionPlan
    panels: list  # (s_nodes, s_weights) per outer panel
    theta_nodes: np.ndarray  # shared across panels, offset by theta*
    theta_weight: float

    def __len__(self):
        return self.nodes.shape[0]

    def shifted(self, dtheta):
        """Rule for the source point rotated by dtheta in theta."""
        nodes = self.nodes.copy()
        nodes[:, 1] += dtheta
        return QuadratureRule(
            nodes,
            self.weights,
            (self.source[0], self.source[1] + dtheta),
            self.qn,
            self.n_inner,
            self.plan,
            self.panels,
            self.theta_nodes + dtheta,
            self.theta_weight,
        )

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["s", "theta", "weight"])
            for (s, th), w in zip(self.nodes, self.weights):
                writer.writerow([f"{s:.15e}", f"{th:.15e}", f"{w:.15e}"])


def _refine_extremum(h, x1, x2, x3, minimum):
    sign = 1.0 if minimum else -1.0
    try:
        res = minimize_scalar(
            lambda x: sign * h(x), bracket=(x1, x2, x3), method="golden",
            options={"xtol": 1e-12},
        )
        return float(res.x)
    except ValueError:
        return float(x2)


def _find_extrema(h, a, b):
    """Interior extrema of h on [a, b]: (location, value, is_minimum)."""
    s = np.linspace(a, b, _DETECT_GRID)
    vals = h(s)
    out = []
    d = np.diff(vals)
    for i in range(len(d) - 1):
        if d[i] == 0.0:
            continue
        if d[i] > 0 and d[i + 1] < 0:
            x = _refine_extremum(h, s[i], s[i + 1], s[i + 2], minimum=False)
            out.append((x, float(h(x)), False))
        elif d[i] < 0 and d[i + 1] > 0:
            x = _refine_extremum(h, s[i], s[i + 1], s[i + 2], minimum=True)
            out.append((x, float(h(x)), True))
    return out


def _keep_extremum(h, s_e, a, b):
    """Sharpness filter: centered-difference curvature of log10 h at s_e
    must exceed 4x its average magnitude on a regular 30-point grid."""
    grid = np.linspace(a, b, _CURVATURE_GRID)
    delta = grid[1] - grid[0]

    def curv(x):
        vals = np.log10(h(np.array([x - delta, x, x + delta])))
        return (vals[0] - 2 * vals[1] + vals[2]) / delta**2

    avg = np.mean([abs(curv(x)) for x in grid[1:-1]])
    return abs(curv(s_e)) > _EXTREMUM_KEEP_FACTOR * avg


def _log_level_crossings(h, a, b, base):
    """Locations where log10(h/base) crosses a positive integer."""
    s = np.linspace(a, b, 4 * _DETECT_GRID)
    g = np.log10(h(s) / base)
    out = []
    for level in range(1, int(np.floor(g.max())) + 1):
        f = g - level
        idx = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
        for i in idx:
            out.append(brentq(lambda x: np.log10(h(x) / base) - level, s[i], s[i + 1]))
    return out


def _panel_extent(h, sl, sr, extrema):
    """Within-panel extremes of h from endpoints, samples, and extrema."""
    samples = h(np.linspace(sl, sr, 33))
    h_min = samples.min()
    h_max = samples.max()
    for x, val, _ in extrema:
        if sl < x < sr:
            h_min = min(h_min, val)
            h_max = max(h_max, val)
    return h_min, h_max


def _split_for_ratio_cap(h, markers, extrema):
    """Insert markers until every panel has h_max/h_min <= 10.

    Panels containing an extremum are first split there; monotone panels are
    then split where h crosses geometrically spaced levels.
    """
    markers = list(markers)
    for _ in range(8):
        new = []
        for sl, sr in zip(markers[:-1], markers[1:]):
            h_min, h_max = _panel_extent(h, sl, sr, extrema)
            if h_max <= _PANEL_RATIO_CAP * h_min:
                continue
            inside = [x for x, _, _ in extrema if sl + _MARKER_MERGE_TOL < x < sr - _MARKER_MERGE_TOL]
            if inside:
                new.extend(inside)
                continue
            hl = float(h(sl))
            hr = float(h(sr))
            lo, hi = sorted((hl, hr))
            n_levels = max(2, int(np.ceil(np.log10(h_max / h_min))))
            for k in range(1, n_levels):
                level = lo * (hi / lo) ** (k / n_levels)
                try:
                    new.append(brentq(lambda x: float(h(x)) - level, sl, sr))
                except ValueError:
                    pass
        if not new:
            break
        markers = _merge_markers(sorted(set(markers) | set(new)))
    return markers


def _merge_markers(markers):
    merged = [markers[0]]
    for m in markers[1:]:
        if m - merged[-1] > _MARKER_MERGE_TOL:
            merged.append(m)
        else:
            merged[-1] = max(merged[-1], m)
    return merged


def _bracket_crossing(h, s_star, threshold, direction, speed_star):
    """First s (marching from s*) where h reaches the threshold."""
    step = direction * 0.5 * threshold / speed_star
    prev = s_star
    cur = s_star + step
    while abs(cur - s_star) < np.pi:
        if h(np.array([cur]))[0] >= threshold:
            lo, hi = (prev, cur) if direction > 0 else (cur, prev)
            return brentq(lambda x: h(np.array([x]))[0] - threshold, lo, hi)
        prev = cur
        cur = cur + step
    raise ValueError("inner region covers the full curve: radius too large")


def build_surface_rule(surface, s_star, qn, theta_star=0.0):
    """Composite rule for integrands with a 1/r singularity at (s*, theta*).

    Inner region: 6*qn^2 Duffy nodes.  Outer region: per-panel
    max(qn/2, floor(qn*log10(hmax/hmin) + 5*qn*len/(2*pi))) nodes in s times
    qn trapezoid nodes in theta.  Exponential rescaling in s follows the
    boundary-value construction s(t) = A + B*exp(C*t) interpolating the
    endpoint distances.
    """
    if qn < 8:
        raise ValueError("surface rules need qn >= 8")
    eps = surface.radius
    cl = surface.centerline
    g_star = cl.evaluate(float(s_star))
    speed_star = float(cl.speed(float(s_star)))

    def h(s):
        return np.linalg.norm(cl.evaluate(np.asarray(s, dtype=float)) - g_star, axis=-1)

    threshold = 5.0 * eps
    s_in_r = _bracket_crossing(h, s_star, threshold, +1, speed_star)
    s_in_l = _bracket_crossing(h, s_star, threshold, -1, speed_star)

    a, b = s_in_r, s_in_l + 2 * np.pi
    if b - a < 1e-8:
        raise ValueError("outer region is empty: radius too large for this curve")

    # inner region: six Duffy triangles on [-1,1]^2, halves scaled separately
    sq_nodes, sq_weights = _centered_square_rule(qn)
    dr = s_in_r - s_star
    dl = s_star - s_in_l
    s_inner = s_star + np.where(sq_nodes[:, 0] >= 0, sq_nodes[:, 0] * dr, sq_nodes[:, 0] * dl)
    th_inner = theta_star + np.pi * sq_nodes[:, 1]
    w_inner = sq_weights * np.where(sq_nodes[:, 0] >= 0, dr, dl) * np.pi
    inner_nodes = np.stack([s_inner, th_inner], axis=1)

    # outer region: subdivision markers
    extrema = _find_extrema(h, a, b)
    markers = [a, b]
    markers += _log_level_crossings(h, a, b, threshold)
    kept = []
    for x, val, is_min in extrema:
        keep = _keep_extremum(h, x, a, b)
        kept.append((x, val, keep))
        if keep:
            markers.append(x)
    markers = _merge_markers(sorted(markers))
    markers = _split_for_ratio_cap(h, markers, extrema)

    theta_nodes = theta_star + 2 * np.pi * (np.arange(qn) + 0.5) / qn
    theta_weight = 2 * np.pi / qn

    plan = SubdivisionPlan(markers=np.asarray(markers), extrema=kept)
    panels = []
    outer_nodes, outer_weights = [], []
    for sl, sr in zip(markers[:-1], markers[1:]):
        hl = float(h(np.array([sl]))[0])
        hr = float(h(np.array([sr]))[0])
        h_min, h_max = _panel_extent(h, sl, sr, extrema)
        n_s = int(max(
            np.ceil(qn / 2),
            np.floor(qn * np.log10(h_max / h_min) + 5 * qn * (sr - sl) / (2 * np.pi)),
        ))
        x, w = _gauss_legendre(n_s)
        if abs(hr - hl) <= 1e-12 * max(hl, hr):
            s_nodes = 0.5 * (sr - sl) * (x + 1.0) + sl
            s_weights = 0.5 * (sr - sl) * w
        else:
            t = 0.5 * (x + 1.0)
            wt = 0.5 * w
            A = (sl * hr - sr * hl) / (hr - hl)
            B = (sr - sl) * hl / (hr - hl)
            C = np.log(hr / hl)
            expo = np.exp(C * t)
            s_nodes = A + B * expo
            s_weights = wt * B * C * expo
        panels.append((s_nodes, s_weights))
        plan.panel_h.append((hl, hr))
        plan.panel_ratio.append(h_max / h_min)
        plan.panel_nodes.append(n_s)
        grid_s, grid_th = np.meshgrid(s_nodes, theta_nodes, indexing="ij")
        outer_nodes.append(np.stack([grid_s.ravel(), grid_th.ravel()], axis=1))
        outer_weights.append(np.outer(s_weights, np.full(qn, theta_weight)).ravel())

    nodes = np.concatenate([inner_nodes] + outer_nodes)
    weights = np.concatenate([w_inner] + outer_weights)
    return QuadratureRule(
        nodes=nodes,
        weights=weights,
        source=(float(s_star), float(theta_star)),
        qn=qn,
        n_inner=inner_nodes.shape[0],
        plan=plan,
        panels=panels,
        theta_nodes=theta_nodes,
        theta_weight=theta_weight,
    )


def integrate(rule, f):
    """Weighted sum of f(s_array, theta_array) over the rule nodes.

    ``f`` returns shape (n,) or (n, k); raises on non-finite values.
    """
    vals = np.asarray(f(rule.nodes[:, 0], rule.nodes[:, 1]))
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand returned a non-finite value at a quadrature node")
    if vals.ndim == 1:
        return float(rule.weights @ vals)
    return np.tensordot(rule.weights, vals, axes=(0, 0))
