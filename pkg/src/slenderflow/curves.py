"""Closed space curves stored as truncated Fourier series.

A :class:`Centerline` represents a 2pi-periodic curve gamma(s) in R^3 by
per-coordinate complex Fourier coefficients.  Derivatives come from spectral
differentiation, arclength from term-wise integration of |gamma'|, and
constant-speed reparameterization from Newton inversion of the cumulative
arclength.
"""

import json
from functools import cached_property

import numpy as np

from . import spectral

_CHECK_GRID = 4096
_REALITY_TOL = 1e-12


class Centerline:
    """A closed curve gamma: [0, 2pi) -> R^3 held as a Fourier series.

    ``coeffs`` has shape (n_modes, 3) in FFT mode order with odd n_modes.
    The reconstruction must be real valued and the parameterization regular
    (|gamma'| > 0); both are verified on a fine grid at construction.
    """

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim != 2 or coeffs.shape[1] != 3:
            raise ValueError("coeffs must have shape (n_modes, 3)")
        if coeffs.shape[0] % 2 == 0:
            raise ValueError("mode count must be odd")
        self.coeffs = coeffs
        self.coeffs.setflags(write=False)
        self._validate()

    def _validate(self):
        grid = max(_CHECK_GRID, self.n_modes)
        if grid % 2 == 0:
            grid += 1
        values = spectral.uniform_values(self.coeffs, grid)
        # reality: compare against the complex reconstruction at a few points
        probe = np.linspace(0.0, 2 * np.pi, 17, endpoint=False)
        k = spectral.wavenumbers(self.n_modes)
        complex_vals = np.exp(1j * np.outer(probe, k)) @ self.coeffs
        scale = max(np.abs(values).max(), 1e-300)
        if np.abs(complex_vals.imag).max() > _REALITY_TOL * scale:
            raise ValueError("Fourier reconstruction is not real valued")
        speeds = np.linalg.norm(spectral.uniform_values(self.coeffs, grid, order=1), axis=1)
        if speeds.min() <= 0.0:
            raise ValueError("curve is not regular: |gamma'| vanishes on the check grid")

    @property
    def n_modes(self):
        return self.coeffs.shape[0]

    def evaluate(self, s, order=0):
        """gamma(s) or its order-th derivative, shape s.shape + (3,)."""
        if order > 2:
            raise ValueError("derivative order must be 0, 1 or 2")
        return spectral.evaluate_fourier(self.coeffs, s, order=order)

    def speed(self, s):
        return np.linalg.norm(self.evaluate(s, order=1), axis=-1)

    def tangent(self, s):
        d = self.evaluate(s, order=1)
        return d / np.linalg.norm(d, axis=-1, keepdims=True)

    @cached_property
    def _speed_series(self):
        speeds = np.linalg.norm(spectral.uniform_values(self.coeffs, _CHECK_GRID + 1, order=1), axis=1)
        return spectral.fourier_coeffs(speeds[:, None])

    @cached_property
    def length(self):
        mean_speed, _ = spectral.integrated_coeffs(self._speed_series)
        return float(mean_speed[0] * 2 * np.pi)

    def arclength(self, s):
        """Cumulative arclength from 0 to s (term-wise spectral integral)."""
        mean_speed, periodic = spectral.integrated_coeffs(self._speed_series)
        s = np.asarray(s, dtype=float)
        part = spectral.evaluate_fourier(periodic, s)[..., 0]
        part0 = spectral.evaluate_fourier(periodic, 0.0)[..., 0]
        return mean_speed[0] * s + part - part0

    def parameter_of_arclength(self, ell, tol=1e-13, max_iter=60):
        """Invert the cumulative arclength by Newton iteration.

        Seeded from a uniform lookup table; raises RuntimeError if the
        iteration stalls before reaching ``tol * length``.
        """
        ell = np.atleast_1d(np.asarray(ell, dtype=float))
        table_s = np.linspace(0.0, 2 * np.pi, 2049)
        table_ell = self.arclength(table_s)
        s = np.interp(ell, table_ell, table_s)
        target = tol * self.length
        for _ in range(max_iter):
            resid = self.arclength(s) - ell
            if np.abs(resid).max() < target:
                break
            s = s - resid / self.speed(s)
        else:
            raise RuntimeError("arclength inversion did not converge")
        return s

    def to_json(self):
        """Serialize as {"modes": n, "coeffs": [[[re, im] x 3] per mode]}."""
        coeffs = [[[z.real, z.imag] for z in row] for row in self.coeffs]
        return json.dumps({"modes": self.n_modes, "coeffs": coeffs})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        coeffs = np.array([[complex(re, im) for re, im in row] for row in data["coeffs"]])
        if coeffs.shape[0] != data["modes"]:
            raise ValueError("mode count does not match coefficient rows")
        return cls(coeffs)


def _sample_formula(formula, n):
    s = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    return np.stack(formula(s), axis=-1)


def _circle(radius=1.0):
    return lambda s: (radius * np.cos(s), radius * np.sin(s), np.zeros_like(s)), 33


def _ellipse(aspect=2.5):
    return lambda s: (np.cos(s), aspect * np.sin(s), np.zeros_like(s)), 33


def _trefoil():
    return (
        lambda s: (np.sin(s) + 2 * np.sin(2 * s), np.cos(s) - 2 * np.cos(2 * s), -np.sin(3 * s)),
        65,
    )


def _fourball():
    def formula(s):
        r = (np.cos(s) ** 4 + np.sin(s) ** 4) ** (-0.25)
        return r * np.cos(s), r * np.sin(s), np.zeros_like(s)

    return formula, 257


def _figure8():
    return lambda s: (np.sin(2 * s), 1.6 * np.sin(s), 0.3 * np.cos(s)), 33


def _hairtie(H):
    if H >= 1.0:
        raise ValueError(f"hairtie amplitude must satisfy H < 1, got {H}")

    def formula(s):
        bulge = 1.0 + H * np.cos(3 * s)
        return np.cos(s) * bulge, np.sin(s) * bulge, H * np.sin(3 * s)

    return formula, 65


_BUILTINS = {
    "circle": _circle,
    "ellipse": _ellipse,
    "trefoil": _trefoil,
    "fourball": _fourball,
    "figure8": _figure8,
    "hairtie": _hairtie,
}


def make_centerline(source, **params):
    """Build a Centerline from samples or from a named builtin curve.

    ``source`` is either an array-like of 3-vectors at equispaced s values
    (odd count >= 5) or one of the builtin names: circle(radius),
    ellipse(aspect), trefoil, fourball, figure8, hairtie(H).
    """
    if isinstance(source, str):
        try:
            factory = _BUILTINS[source]
        except KeyError:
            raise ValueError(f"unknown builtin curve {source!r}") from None
        n_override = params.pop("n_samples", None)
        formula, n_default = factory(**params)
        samples = _sample_formula(formula, n_override or n_default)
    else:
        if params:
            raise ValueError("parameters are only accepted with builtin names")
        samples = np.asarray(source, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 3:
            raise ValueError("samples must form an (n, 3) array")
        if samples.shape[0] < 5 or samples.shape[0] % 2 == 0:
            raise ValueError("sample count must be odd and at least 5")
    return Centerline(spectral.fourier_coeffs(samples))


def eval_curve(centerline, s, order=0):
    """Point or derivative of the Fourier interpolant (exact if band-limited)."""
    return centerline.evaluate(s, order=order)


def reparameterize(centerline, mode="constant_speed_unit_length"):
    """Return a constant-speed version of the curve.

    ``constant_speed_unit_length`` rescales so the total length is exactly 1;
    ``constant_speed_keep_length`` preserves the length.  The result samples
    gamma(s(u)) with u the uniform parameter and refits a Fourier series,
    doubling the sample count until the spectral tail is negligible.
    """
    if mode not in ("constant_speed_unit_length", "constant_speed_keep_length"):
        raise ValueError(f"unknown reparameterization mode {mode!r}")
    length = centerline.length
    scale = 1.0 / length if mode == "constant_speed_unit_length" else 1.0

    n = max(4 * centerline.n_modes + 1, 257)
    while True:
        u = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
        s_of_u = centerline.parameter_of_arclength(u * length / (2 * np.pi))
        samples = scale * centerline.evaluate(s_of_u)
        coeffs = spectral.fourier_coeffs(samples)
        kmax = (n - 1) // 2
        tail = np.abs(coeffs[kmax - kmax // 8 : kmax + 1]).max()
        if tail <= 1e-13 * np.abs(coeffs).max() or n >= 8193:
            break
        n = 2 * n - 1
    return Centerline(spectral.truncate_tail(coeffs, rel_tol=1e-15))
