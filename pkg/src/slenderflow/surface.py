"""Tubular fiber surfaces built from a centerline and an orthonormal frame."""

import numpy as np


class FiberSurface:
    """Tube of radius eps around a closed centerline.

    X(s, theta) = gamma(s) + eps*cos(theta)*N(s) + eps*sin(theta)*B(s).
    Requires eps * (|kappa1| + |kappa2|) < 1 so cross sections do not
    self-penetrate (positive surface Jacobian).
    """

    def __init__(self, centerline, frame, radius):
        if radius <= 0:
            raise ValueError("fiber radius must be positive")
        self.centerline = centerline
        self.frame = frame
        self.radius = radius

    def frame_data(self, s):
        """Centerline/frame quantities at s, shared by quadrature and assembly."""
        s = np.asarray(s, dtype=float)
        gamma = self.centerline.evaluate(s)
        d1 = self.centerline.evaluate(s, order=1)
        speed = np.linalg.norm(d1, axis=-1)
        k1, k2 = self.frame.curvatures(s)
        return {
            "gamma": gamma,
            "speed": speed,
            "normal": self.frame.normal(s),
            "binormal": self.frame.binormal(s),
            "kappa1": k1,
            "kappa2": k2,
        }

    def geometry(self, s, theta, data=None):
        """Surface point, outward unit normal, and area density at (s, theta).

        ``data`` may carry precomputed frame_data(s) when s is reused with
        many theta values.
        """
        s = np.asarray(s, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if data is None:
            data = self.frame_data(s)
        ct = np.cos(theta)[..., None]
        st = np.sin(theta)[..., None]
        nu = ct * data["normal"] + st * data["binormal"]
        x = data["gamma"] + self.radius * nu
        jac = (
            self.radius
            * data["speed"]
            * (1.0 - self.radius * (np.cos(theta) * data["kappa1"] + np.sin(theta) * data["kappa2"]))
        )
        return x, nu, jac

    def point(self, s, theta):
        x, nu, jac = self.geometry(s, theta)
        if np.any(jac <= 0):
            raise ValueError("surface Jacobian is nonpositive: fiber self-penetrates")
        return x, nu, jac

    def area(self, n_s=512, n_theta=64):
        """Total surface area by the doubly periodic trapezoid rule."""
        s = np.linspace(0.0, 2 * np.pi, n_s, endpoint=False)
        theta = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
        data = self.frame_data(s)
        total = 0.0
        for th in theta:
            _, _, jac = self.geometry(s, np.full_like(s, th), data=data)
            total += jac.sum()
        return total * (2 * np.pi / n_s) * (2 * np.pi / n_theta)


def surface_geometry(surface, s, theta):
    """(X, nu, J) at a single surface point; rejects self-penetration."""
    return surface.point(s, theta)
