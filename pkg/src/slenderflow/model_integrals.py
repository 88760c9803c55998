"""Model singular integrands for quadrature convergence studies.

Three integrands over a tube surface, all singular at a chosen source point:
the bare inverse distance, and one component each of the single-layer
(point-force) and double-layer (point-stress) potentials modulated by a
high-frequency surface Fourier mode.  The reference configuration is the
three-lobed curve with H = 0.9 (no rescaling) carrying a Frenet frame, with
the source at s* = pi/3, theta* = 0.
"""

import numpy as np

from .curves import make_centerline
from .frames import FrenetFrame
from .surface import FiberSurface


def reference_surface(radius):
    """Frenet-framed tube around the unscaled H = 0.9 three-lobed curve."""
    centerline = make_centerline("hairtie", H=0.9)
    return FiberSurface(centerline, FrenetFrame(centerline), radius)


def make_model_integrands(surface, s_star, theta_star):
    """Return dict of the three model integrands as f(s, theta) callables."""
    x_star, _, _ = surface.geometry(np.asarray(float(s_star)), np.asarray(float(theta_star)))

    def geometry(s, theta):
        x, nu, jac = surface.geometry(s, theta)
        r = x - x_star
        dist = np.linalg.norm(r, axis=-1)
        return r, dist, nu, jac

    def one_over_r(s, theta):
        _, dist, _, jac = geometry(s, theta)
        return jac / dist

    def single_layer(s, theta):
        r, dist, _, jac = geometry(s, theta)
        osc = np.cos(50.0 * s + 2.0 * theta)
        return (r[..., 0] * r[..., 1] / dist**3) * osc * jac / (8.0 * np.pi)

    def double_layer(s, theta):
        r, dist, nu, jac = geometry(s, theta)
        osc = np.cos(50.0 * s + 2.0 * theta)
        rdotnu = np.sum(r * nu, axis=-1)
        return (-3.0 / (4.0 * np.pi)) * (r[..., 0] * r[..., 1] * rdotnu / dist**5) * osc * jac

    return {"one_over_r": one_over_r, "single_layer": single_layer, "double_layer": double_layer}
