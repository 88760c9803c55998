#!/usr/bin/env python3
"""Render the trefoil's induced flow slice as SVG arrows (qualitative).

Forcing f = (x, -y, 0) on the trefoil produces a far field resembling an
extensional flow that decays with distance; this script solves a small
system and draws the in-plane velocity on a grid in the z = 0 plane.
"""

import sys

import numpy as np

from slenderflow import forcing
from slenderflow.curves import make_centerline
from slenderflow.frames import compute_bishop_frame
from slenderflow.solver import ProblemSpec, assemble, field_velocity, solve
from slenderflow.surface import FiberSurface


def trefoil_linear_force(curve):
    def f(s):
        pts = np.atleast_2d(curve.evaluate(s))
        out = np.stack([pts[:, 0], -pts[:, 1], np.zeros(len(pts))], axis=-1)
        return out.reshape(np.shape(s) + (3,))

    return f


def main(out_path="trefoil_flow.svg"):
    curve = make_centerline("trefoil")
    frame = compute_bishop_frame(curve)
    surface = FiberSurface(curve, frame, 1.5e-3)
    spec = ProblemSpec(surface, trefoil_linear_force(curve), 21, 7, 25)
    solution = solve(assemble(spec))

    width = height = 640
    span = 8.0
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        "<!-- in-plane velocity of the trefoil extensional-like flow, z=0 slice -->",
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    grid = np.linspace(-span, span, 15)
    centerline_xy = curve.evaluate(np.linspace(0, 2 * np.pi, 200))
    for gx in grid:
        for gy in grid:
            x = np.array([gx, gy, 0.0])
            if np.linalg.norm(centerline_xy - x, axis=1).min() < 0.3:
                continue
            u = field_velocity(solution, x, n_grid=96)
            scale = 2.0 / (np.linalg.norm(u[:2]) + 1e-12) * min(np.linalg.norm(u[:2]), 0.4)
            px = (gx + span) / (2 * span) * width
            py = height - (gy + span) / (2 * span) * height
            qx = px + u[0] * scale * 40
            qy = py - u[1] * scale * 40
            lines.append(
                f'<line x1="{px:.1f}" y1="{py:.1f}" x2="{qx:.1f}" y2="{qy:.1f}" '
                'stroke="#1f77b4" stroke-width="1.2"/>'
            )
            lines.append(f'<circle cx="{qx:.1f}" cy="{qy:.1f}" r="1.6" fill="#1f77b4"/>')
    pts = " ".join(
        f"{(p[0] + span) / (2 * span) * width:.1f},{height - (p[1] + span) / (2 * span) * height:.1f}"
        for p in centerline_xy
    )
    lines.append(f'<polyline points="{pts}" fill="none" stroke="#d62728" stroke-width="2"/>')
    lines.append("</svg>")
    with open(out_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main(*sys.argv[1:])
