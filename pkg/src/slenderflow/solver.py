"""Dense collocation system for the completed single-layer representation.

The fluid velocity is a single-layer (point-force) distribution on the tube
surface plus point sources on the centerline whose strength is the flux of
the layer density through each cross section.  Collocating the two boundary
conditions (velocity constant on cross sections; traction integrated around
a cross section equal to the centerline force density) on regular grids
yields a square dense complex system for the Fourier coefficients of the
layer density together with the sampled centerline velocity.

Sign convention: the prescribed force density f(s) is the force per unit
parameter that the fiber exerts on the fluid, so the velocity response
aligns with f.  This matches the slender-body evaluator in
``keller_rubinow`` and makes drag coefficients positive.

The solve uses a full SVD with a relative cutoff, recording the condition
number; the systems range from mildly to severely ill conditioned as the
fiber radius shrinks.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import spectral
from .quadrature import build_surface_rule

_SYM_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
_SVD_CUTOFF = 1e-13

# Orientation of the force rows relative to the raw fluid-side traction
# balance: with the fiber-on-fluid convention for f the right-hand side
# enters negated (the fluid-side traction balances the driving force).
_FORCE_RHS_SIGN = -1.0


@dataclass
class ProblemSpec:
    """Geometry, forcing, and resolution parameters for one solve."""

    surface: object
    force: object  # f(s) -> (..., 3), 2pi-periodic
    n_s: int
    n_theta: int
    qn: int

    def __post_init__(self):
        if self.n_s % 2 == 0 or self.n_theta % 2 == 0:
            raise ValueError("n_s and n_theta must be odd")


class DiscreteSystem:
    """Dense complex collocation matrix with its index maps."""

    def __init__(self, matrix, rhs, spec, ks_vals, kt_vals, collocation_speeds):
        self.matrix = matrix
        self.rhs = rhs
        self.spec = spec
        self.ks_vals = ks_vals
        self.kt_vals = kt_vals
        self.collocation_speeds = collocation_speeds
        self._svd = None

    def with_force(self, force):
        """Right-hand side for a new force density on the same geometry."""
        n_s = self.spec.n_s
        rhs = np.zeros_like(self.rhs)
        s_grid = 2 * np.pi * np.arange(n_s) / n_s
        f_vals = np.asarray(force(s_grid), dtype=float).reshape(n_s, 3)
        base = 3 * n_s * self.spec.n_theta
        for j_s in range(n_s):
            rhs[base + 3 * j_s : base + 3 * j_s + 3] = (
                _FORCE_RHS_SIGN * f_vals[j_s] * self.collocation_speeds[j_s]
            )
        return rhs

    @property
    def size(self):
        return self.matrix.shape[0]

    def alpha_column(self, i_ms, i_mt, ell):
        return 3 * (i_ms * self.spec.n_theta + i_mt) + ell

    def velocity_row(self, j_s, j_theta, i):
        return 3 * (j_s * self.spec.n_theta + j_theta) + i

    def force_row(self, j_s, i):
        return 3 * self.spec.n_s * self.spec.n_theta + 3 * j_s + i

    def c_column(self, j_s, i):
        return self.force_row(j_s, i)


class Solution:
    """Density coefficients, centerline velocity samples, and SVD data."""

    def __init__(self, alpha, c_samples, singular_values, condition_number, system):
        self.alpha = alpha  # (n_s, n_theta, 3) complex, FFT mode order
        self.c_samples = c_samples  # (n_s, 3) complex
        self.singular_values = singular_values
        self.condition_number = condition_number
        self.system = system

    @property
    def centerline_velocity_samples(self):
        return self.c_samples.real

    def reality_defect(self):
        """Relative size of imaginary parts of rho on the collocation grid and c."""
        spec = self.system.spec
        s = 2 * np.pi * np.arange(spec.n_s) / spec.n_s
        th = 2 * np.pi * np.arange(spec.n_theta) / spec.n_theta
        rho = self.density(s[:, None], th[None, :])
        scale = max(np.abs(rho).max(), 1e-300)
        c_scale = max(np.abs(self.c_samples).max(), 1e-300)
        return max(
            np.abs(rho.imag).max() / scale,
            np.abs(self.c_samples.imag).max() / c_scale,
        )

    def density(self, s, theta):
        """Layer density rho(s, theta) from its Fourier coefficients."""
        s = np.asarray(s, dtype=float)
        theta = np.asarray(theta, dtype=float)
        ks = self.system.ks_vals
        kt = self.system.kt_vals
        es = np.exp(1j * s[..., None] * ks)
        et = np.exp(1j * theta[..., None] * kt)
        return np.einsum("...s,...t,stl->...l", es, et, self.alpha)

    def export_csv(self, path):
        """Centerline velocity table (j_s, s, c_x, c_y, c_z), RFC-4180."""
        spec = self.system.spec
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["j_s", "s", "c_x", "c_y", "c_z"])
            for j in range(spec.n_s):
                s = 2 * np.pi * j / spec.n_s
                c = self.c_samples[j].real
                writer.writerow([j, f"{s:.15e}"] + [f"{v:.15e}" for v in c])

    def export_json(self, path):
        data = {
            "n_s": self.system.spec.n_s,
            "n_theta": self.system.spec.n_theta,
            "qn": self.system.spec.qn,
            "radius": self.system.spec.surface.radius,
            "condition_number": self.condition_number,
            "singular_values": [float(v) for v in self.singular_values],
        }
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)


def _symmetric_components(vec_outer, scale):
    """Pack the six upper-triangle components of a symmetric rank-one tensor."""
    out = np.empty((vec_outer.shape[0], 6))
    for idx, (i, j) in enumerate(_SYM_PAIRS):
        out[:, idx] = vec_outer[:, i] * vec_outer[:, j] * scale
    return out


def assemble(spec):
    """Build the dense system enforcing both boundary conditions.

    One singular rule is built per collocation s* and shifted in theta for
    each theta* on that cross section; the point-source kernels enter only
    the columns with |k_theta| <= 2 (their circumferential moments vanish
    otherwise).
    """
    surface = spec.surface
    cl = surface.centerline
    eps = surface.radius
    n_s, n_theta, qn = spec.n_s, spec.n_theta, spec.qn
    n_modes = n_s * n_theta
    size = 3 * (n_modes + n_s)

    ks_vals = spectral.wavenumbers(n_s)
    kt_vals = spectral.wavenumbers(n_theta)
    reduced = np.where(np.abs(kt_vals) <= 2)[0]
    kt_red = kt_vals[reduced]

    A = np.zeros((size, size), dtype=complex)
    b = np.zeros(size, dtype=complex)
    collocation_speeds = np.zeros(n_s)

    theta_grid = 2 * np.pi * np.arange(n_theta) / n_theta

    for j_s in range(n_s):
        s_star = 2 * np.pi * j_s / n_s
        rule = build_surface_rule(surface, s_star, qn)
        s_m = rule.nodes[:, 0]
        th0_m = rule.nodes[:, 1]
        w_m = rule.weights
        fd = surface.frame_data(s_m)
        gamma_m = fd["gamma"]
        n_m = fd["normal"]
        b_m = fd["binormal"]
        jac_base = eps * fd["speed"]
        curv_n = eps * fd["kappa1"]
        curv_b = eps * fd["kappa2"]

        e_s = np.exp(1j * np.outer(s_m, ks_vals))  # (M, n_s)
        e_t0 = np.exp(1j * np.outer(th0_m, kt_vals))  # (M, n_theta)

        star = surface.frame_data(np.asarray(float(s_star)))
        g_star = star["gamma"]
        speed_star = float(star["speed"])
        es_star = np.exp(1j * ks_vals * s_star)

        f_val = np.atleast_2d(np.asarray(spec.force(s_star), dtype=float))[0]

        for j_t in range(n_theta):
            theta_star = theta_grid[j_t]
            ct, st = np.cos(theta_star), np.sin(theta_star)
            nu_star = ct * star["normal"] + st * star["binormal"]
            x_star = g_star + eps * nu_star
            jac_star = eps * speed_star * (
                1.0 - eps * (ct * star["kappa1"] + st * star["kappa2"])
            )

            th_m = th0_m + theta_star
            cth = np.cos(th_m)
            sth = np.sin(th_m)
            nu_m = cth[:, None] * n_m + sth[:, None] * b_m
            x_m = gamma_m + eps * nu_m
            jac_m = jac_base * (1.0 - cth * curv_n - sth * curv_b)
            jw = jac_m * w_m

            r = x_star - x_m
            dist = np.linalg.norm(r, axis=1)
            inv_d = 1.0 / dist
            inv_d3 = inv_d**3

            comps = np.empty((len(s_m), 12))
            comps[:, :6] = _symmetric_components(r, inv_d3)
            for idx, (i, j) in enumerate(_SYM_PAIRS):
                if i == j:
                    comps[:, idx] += inv_d
            rdotnu = r @ nu_star
            comps[:, 6:12] = _symmetric_components(r, rdotnu * inv_d**5)
            comps *= jw[:, None]

            e_t = e_t0 * np.exp(1j * kt_vals * theta_star)
            # one GEMM: (n_s, M) @ (M, 12 * n_theta)
            stacked = (comps[:, :, None] * e_t[:, None, :]).reshape(len(s_m), -1)
            full = (e_s.T @ stacked).reshape(n_s, 12, n_theta)

            Rx = x_star - gamma_m
            Rdist = np.linalg.norm(Rx, axis=1)
            inv_R3 = Rdist**-3
            rdnu_R = Rx @ nu_star
            src_vel = Rx * inv_R3[:, None]  # a_i = R_i / R^3
            src_trac = 2.0 * nu_star[None, :] * inv_R3[:, None] - 6.0 * Rx * (
                rdnu_R * Rdist**-5
            )[:, None]
            red_comps = np.concatenate(
                [
                    src_vel[:, :, None] * nu_m[:, None, :],
                    src_trac[:, :, None] * nu_m[:, None, :],
                ],
                axis=1,
            ).reshape(len(s_m), 18) * jw[:, None]
            e_t_red = e_t[:, reduced]
            stacked_red = (red_comps[:, :, None] * e_t_red[:, None, :]).reshape(len(s_m), -1)
            red = (e_s.T @ stacked_red).reshape(n_s, 18, len(reduced))

            # fiber-integrity rows at (j_s, j_t)
            vel_block = np.zeros((3, 3, n_s, n_theta), dtype=complex)
            for idx, (i, j) in enumerate(_SYM_PAIRS):
                vel_block[i, j] = full[:, idx, :] / (8 * np.pi)
                vel_block[j, i] = vel_block[i, j]
            for i in range(3):
                for j in range(3):
                    vel_block[i, j][:, reduced] += red[:, 3 * i + j, :] / (4 * np.pi)
            for i in range(3):
                row = 3 * (j_s * n_theta + j_t) + i
                A[row, : 3 * n_modes] = vel_block[i].transpose(1, 2, 0).reshape(-1)
                A[row, 3 * n_modes + 3 * j_s + i] = -1.0
                # rhs stays zero

            # averaged-force row accumulation at j_s
            w_star = (2 * np.pi / n_theta) * jac_star
            et_star = np.exp(1j * kt_vals * theta_star)
            local = -0.5 * np.outer(es_star, et_star)  # -rho/2 jump, diagonal in i=j
            force_block = np.zeros((3, 3, n_s, n_theta), dtype=complex)
            for idx, (i, j) in enumerate(_SYM_PAIRS):
                force_block[i, j] = full[:, 6 + idx, :] * (-3.0 / (4 * np.pi))
                force_block[j, i] = force_block[i, j]
            for i in range(3):
                for j in range(3):
                    force_block[i, j][:, reduced] += red[:, 9 + 3 * i + j, :] / (4 * np.pi)
                force_block[i, i] += local
            for i in range(3):
                frow = 3 * n_modes + 3 * j_s + i
                A[frow, : 3 * n_modes] += w_star * force_block[i].transpose(1, 2, 0).reshape(-1)

        collocation_speeds[j_s] = speed_star
        for i in range(3):
            frow = 3 * n_modes + 3 * j_s + i
            b[frow] = _FORCE_RHS_SIGN * f_val[i] * speed_star

    return DiscreteSystem(A, b, spec, ks_vals, kt_vals, collocation_speeds)


def solve(system, rcond=_SVD_CUTOFF, force=None):
    """Minimum-norm least-squares solve by full SVD with relative cutoff.

    ``force`` overrides the assembled right-hand side, reusing the cached
    factorization when several force densities share one geometry.
    """
    if system._svd is None:
        system._svd = np.linalg.svd(system.matrix, full_matrices=False)
    u, sv, vh = system._svd
    rhs = system.rhs if force is None else system.with_force(force)
    inv = np.where(sv > rcond * sv[0], 1.0 / np.where(sv > 0, sv, 1.0), 0.0)
    x = vh.conj().T @ (inv * (u.conj().T @ rhs))
    n_modes = system.spec.n_s * system.spec.n_theta
    alpha = x[: 3 * n_modes].reshape(system.spec.n_s, system.spec.n_theta, 3)
    c = x[3 * n_modes :].reshape(system.spec.n_s, 3)
    condition = float(sv[0] / sv[-1])
    return Solution(alpha, c, sv, condition, system)


def centerline_velocity(solution, m):
    """Trigonometric interpolation of the velocity samples to m even points."""
    n_s = solution.system.spec.n_s
    if m < n_s:
        raise ValueError("interpolation target must be at least as fine as the grid")
    coeffs = spectral.fourier_coeffs(solution.c_samples.real)
    if m == n_s:
        return solution.c_samples.real.copy()
    return spectral.uniform_values(coeffs, m)


def field_velocity(solution, x, n_grid=None):
    """Completed-representation velocity at an exterior point.

    The integrand is smooth away from the surface, so a doubly periodic
    trapezoid grid is spectrally accurate; evaluation closer to the surface
    than one radius is rejected.
    """
    spec = solution.system.spec
    surface = spec.surface
    eps = surface.radius
    x = np.asarray(x, dtype=float)

    n_sg = n_grid or max(4 * spec.n_s, 128)
    n_tg = max(4 * spec.n_theta, 32)
    s = np.linspace(0.0, 2 * np.pi, n_sg, endpoint=False)
    th = np.linspace(0.0, 2 * np.pi, n_tg, endpoint=False)
    ss, tt = np.meshgrid(s, th, indexing="ij")
    xs, nus, jac = surface.geometry(ss.ravel(), tt.ravel())

    r = x[None, :] - xs
    dist = np.linalg.norm(r, axis=1)
    if dist.min() < eps:
        raise ValueError("field evaluation point is inside or too near the fiber")

    rho = solution.density(ss.ravel(), tt.ravel()).real
    dA = jac * (2 * np.pi / n_sg) * (2 * np.pi / n_tg)
    inv_d = 1.0 / dist
    stokeslet_part = (
        rho * inv_d[:, None] + r * (np.sum(r * rho, axis=1) * inv_d**3)[:, None]
    )
    u = (stokeslet_part * dA[:, None]).sum(axis=0) / (8 * np.pi)

    flux = np.sum(rho * nus, axis=1) * dA
    gammas = surface.centerline.evaluate(ss.ravel())
    R = x[None, :] - gammas
    Rdist = np.linalg.norm(R, axis=1)
    u = u + (R * (flux * Rdist**-3)[:, None]).sum(axis=0) / (4 * np.pi)
    return u


def drag_coefficient(eps, n_s=21, n_theta=13, qn=35, return_solution=False):
    """Axial drag of a unit-radius circular fiber, scaled on a sphere.

    Prescribes a uniform axial unit force density (mobility problem), reads
    the rigid translation speed U, and returns F/(6*pi*mu*U*(1+eps)) with F
    the net driving force.
    """
    from .curves import make_centerline
    from .frames import compute_bishop_frame
    from .surface import FiberSurface

    cl = make_centerline("circle")
    frame = compute_bishop_frame(cl)
    surface = FiberSurface(cl, frame, eps)
    spec = ProblemSpec(
        surface=surface,
        force=lambda s: np.broadcast_to([0.0, 0.0, 1.0], np.shape(s) + (3,)),
        n_s=n_s,
        n_theta=n_theta,
        qn=qn,
    )
    sol = solve(assemble(spec))
    u_axial = sol.c_samples[:, 2].real.mean()
    net_force = 2 * np.pi  # unit density times unit-circle length
    coefficient = net_force / (6 * np.pi * u_axial * (1.0 + eps))
    return (coefficient, sol) if return_solution else coefficient
