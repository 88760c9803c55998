"""Fourier-series helpers for 2pi-periodic data sampled on uniform grids.

Coefficients are stored in numpy FFT order (k = 0, 1, ..., K, -K, ..., -1,
odd length 2K+1) so that ``values = ifft(coeffs * n)`` on a uniform grid.
"""

import numpy as np

_EVAL_CHUNK = 4096


def wavenumbers(n_modes):
    """Signed wavenumbers in FFT order for an odd mode count."""
    if n_modes % 2 == 0:
        raise ValueError(f"mode count must be odd, got {n_modes}")
    return np.fft.fftfreq(n_modes, d=1.0 / n_modes).astype(int)


def fourier_coeffs(samples):
    """Fourier coefficients of real samples on the uniform grid 2*pi*j/n.

    ``samples`` has shape (n, ...) with odd n; the returned coefficients
    have the same shape and satisfy f(s) = sum_k c_k exp(i k s).
    """
    n = samples.shape[0]
    if n % 2 == 0:
        raise ValueError(f"sample count must be odd, got {n}")
    return np.fft.fft(samples, axis=0) / n


def evaluate_fourier(coeffs, s, order=0):
    """Evaluate (a derivative of) the interpolant at arbitrary points.

    ``coeffs`` has shape (n_modes, m); returns real values with shape
    s.shape + (m,), or scalars collapsed accordingly.  Work is chunked so
    the exp(i k s) matrix never exceeds a few MB.
    """
    s = np.asarray(s, dtype=float)
    s_flat = np.atleast_1d(s).ravel()
    k = wavenumbers(coeffs.shape[0])
    c = coeffs if order == 0 else coeffs * (1j * k[:, None]) ** order
    out = np.empty((s_flat.size, coeffs.shape[1]))
    for lo in range(0, s_flat.size, _EVAL_CHUNK):
        hi = min(lo + _EVAL_CHUNK, s_flat.size)
        phases = np.exp(1j * np.outer(s_flat[lo:hi], k))
        out[lo:hi] = (phases @ c).real
    return out.reshape(s.shape + (coeffs.shape[1],))


def uniform_values(coeffs, n, order=0):
    """Values of the interpolant on the uniform grid 2*pi*j/n (n >= n_modes)."""
    n_modes = coeffs.shape[0]
    if n < n_modes:
        raise ValueError("refinement grid must be at least as fine as the series")
    k = wavenumbers(n_modes)
    c = coeffs if order == 0 else coeffs * (1j * k[:, None]) ** order
    padded = np.zeros((n,) + coeffs.shape[1:], dtype=complex)
    padded[k] = c
    return np.fft.ifft(padded * n, axis=0).real


def truncate_tail(coeffs, rel_tol=1e-14):
    """Drop symmetric high-mode pairs whose magnitude is below rel_tol * max."""
    n = coeffs.shape[0]
    kmax = (n - 1) // 2
    mags = np.abs(coeffs).max(axis=tuple(range(1, coeffs.ndim)))
    floor = mags.max() * rel_tol
    keep = kmax
    while keep > 0 and mags[keep] <= floor and mags[n - keep] <= floor:
        keep -= 1
    if keep == kmax:
        return coeffs
    k = wavenumbers(n)
    sel = np.abs(k) <= keep
    return coeffs[sel]


def integrated_coeffs(coeffs):
    """Antiderivative data: (mean value, coefficients of the periodic part).

    For f(s) = c0 + sum_{k!=0} c_k e^{iks}, the antiderivative is
    c0*s + sum_{k!=0} c_k e^{iks}/(ik) + const; the constant is chosen so the
    periodic part vanishes at s=0.
    """
    k = wavenumbers(coeffs.shape[0])
    periodic = np.zeros_like(coeffs)
    nonzero = k != 0
    periodic[nonzero] = coeffs[nonzero] / (1j * k[nonzero, None])
    return coeffs[0].real, periodic
