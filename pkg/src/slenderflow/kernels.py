"""Fundamental-solution kernels for Stokes flow, as bare tensors.

Scalar prefactors (1/8pi for the point-force kernel, -3/4pi for the traction
kernel, 1/4pi for the point-source kernels, and the local -1/2 traction jump)
are applied by the assembly stage, keeping these functions reusable in model
integrals.  The viscosity is fixed to MU = 1: the boundary value problem is
linear in it and all reported comparisons are viscosity-free after
nondimensionalization.
"""

import numpy as np

MU = 1.0


def stokeslet(x, y):
    """Point-force kernel G_ij = delta_ij/|r| + r_i r_j/|r|^3 with r = x - y.

    Batched: x, y broadcast to (..., 3); returns (..., 3, 3).
    """
    r = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    dist = np.linalg.norm(r, axis=-1)
    if np.any(dist == 0.0):
        raise ValueError("stokeslet evaluated at coincident points")
    eye = np.eye(3)
    return eye / dist[..., None, None] + (r[..., :, None] * r[..., None, :]) / dist[..., None, None] ** 3


def traction_kernel(x, y, nu_x):
    """Traction kernel K_ij = r_i r_j (r . nu_x)/|r|^5 with r = x - y.

    ``nu_x`` is the unit normal at the target x; the -3/4pi prefactor and
    the local -rho/2 jump are applied at assembly.
    """
    r = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    dist = np.linalg.norm(r, axis=-1)
    if np.any(dist == 0.0):
        raise ValueError("traction kernel evaluated at coincident points")
    rdotnu = np.sum(r * nu_x, axis=-1)
    return (r[..., :, None] * r[..., None, :]) * (rdotnu / dist**5)[..., None, None]


def source_velocity_kernel(x, gamma_s):
    """Point-source velocity R_i/|R|^3 with R = x - gamma(s)."""
    R = np.asarray(x, dtype=float) - np.asarray(gamma_s, dtype=float)
    dist = np.linalg.norm(R, axis=-1)
    if np.any(dist == 0.0):
        raise ValueError("point-source kernel evaluated on the centerline")
    return R / dist[..., None] ** 3


def source_traction_kernel(x, gamma_s, nu_x):
    """Point-source traction 2 nu_i/|R|^3 - 6 R_i (R . nu)/|R|^5."""
    R = np.asarray(x, dtype=float) - np.asarray(gamma_s, dtype=float)
    dist = np.linalg.norm(R, axis=-1)
    if np.any(dist == 0.0):
        raise ValueError("point-source kernel evaluated on the centerline")
    rdotnu = np.sum(R * nu_x, axis=-1)
    return 2.0 * np.asarray(nu_x, dtype=float) / dist[..., None] ** 3 - 6.0 * R * (
        rdotnu / dist**5
    )[..., None]


def circumferential_moment(k_theta, k_s, s, frame, radius):
    """Closed form of int_0^{2pi} nu_j exp(i(k_s s + k_theta theta)) J dtheta.

    The theta integral of the tube's normal vector against a circumferential
    Fourier mode vanishes for |k_theta| > 2 and otherwise reduces to the
    frame vectors and curvatures at s.  Values for negative k_theta are
    complex conjugates of the positive ones (before the exp(i k_s s) factor).
    Vectorized over s; returns shape s.shape + (3,) complex.
    """
    s = np.asarray(s, dtype=float)
    n = frame.normal(s)
    b = frame.binormal(s)
    k1, k2 = frame.curvatures(s)
    speed = frame.centerline.speed(s)
    k_abs = abs(int(k_theta))
    if k_abs == 0:
        base = -np.pi * radius**2 * speed[..., None] * (n * k1[..., None] + b * k2[..., None])
        base = base.astype(complex)
    elif k_abs == 1:
        base = np.pi * radius * speed[..., None] * (n + 1j * b)
    elif k_abs == 2:
        base = (
            -0.5
            * np.pi
            * radius**2
            * speed[..., None]
            * (n + 1j * b)
            * (k1 + 1j * k2)[..., None]
        )
    else:
        return np.zeros(s.shape + (3,), dtype=complex)
    if int(k_theta) < 0:
        base = np.conj(base)
    return base * np.exp(1j * k_s * s)[..., None]
