"""Centerline force densities used across the experiments.

All forcings are functions of the 2pi-periodic curve parameter and return
the force density the fiber exerts on the fluid; see the solver module for
the sign convention.
"""

import numpy as np


def uniform(direction):
    direction = np.asarray(direction, dtype=float)

    def f(s):
        return np.broadcast_to(direction, np.shape(s) + (3,))

    return f


def inplane_cosine(m):
    """f(s) = (cos(m s), 0, 0): in-plane forcing for the circular fiber."""

    def f(s):
        s = np.asarray(s, dtype=float)
        return np.stack([np.cos(m * s), np.zeros_like(s), np.zeros_like(s)], axis=-1)

    return f


def trefoil_wave(k, corrected=True):
    """Oscillatory in-plane forcing for the four-curve comparisons.

    The corrected form uses 2*cos(2ks) in the second component; the printed
    variant (cos ks) is kept selectable for reproducing the raw source.
    """

    def f(s):
        s = np.asarray(s, dtype=float)
        second = 2 * np.cos(2 * k * s) - np.cos(k * s) if corrected else np.cos(k * s)
        return np.stack([np.sin(k * s) + 2 * np.sin(2 * k * s), second, np.zeros_like(s)], axis=-1)

    return f


def three_point_contrast():
    """Forcing whose values at s = pi/3, pi, 5pi/3 are +z, +x, -z.

    Pushes two of the three near-approach branches of the three-lobed curve
    in opposite tangential directions and the third normal to them.
    """

    def f(s):
        s = np.asarray(s, dtype=float)
        phase = s + np.pi / (3 * np.sqrt(3.0)) * np.sin(s)
        return np.stack([-np.cos(phase), np.zeros_like(s), np.sin(phase)], axis=-1)

    return f


def from_config(config):
    """Build a forcing from its JSON description."""
    kind = config["kind"]
    if kind == "uniform":
        return uniform(config["direction"])
    if kind == "inplane_cosine":
        return inplane_cosine(int(config["m"]))
    if kind == "trefoil_wave":
        return trefoil_wave(int(config["k"]), bool(config.get("corrected", True)))
    if kind == "three_point_contrast":
        return three_point_contrast()
    raise ValueError(f"unknown forcing kind {kind!r}")
