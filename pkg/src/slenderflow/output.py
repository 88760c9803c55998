"""Deterministic CSV/JSON/SVG writers for experiment outputs.

CSV files are RFC-4180 (CRLF, '.' decimal) with numbers in scientific
notation at 16 significant digits, so identical configs produce
byte-identical bodies.  Plots are standalone SVG with the plotted data
embedded as comments; no runtime plotting dependency.
"""

import csv
import json

import numpy as np


def fmt(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return f"{value:.15e}"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def write_json(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")


def write_profile_csv(path, samples):
    """Velocity profile in the solver export format (j_s, s, c_x, c_y, c_z)."""
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[0]
    rows = [
        [j, 2 * np.pi * j / n] + list(samples[j])
        for j in range(n)
    ]
    write_csv(path, ["j_s", "s", "c_x", "c_y", "c_z"], rows)


def _svg_header(width, height, title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<!-- {title} -->",
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]


def _map_points(xs, ys, width, height, margin=50):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    x0, x1 = xs.min(), xs.max()
    y0, y1 = ys.min(), ys.max()
    span_x = x1 - x0 or 1.0
    span_y = y1 - y0 or 1.0
    px = margin + (xs - x0) / span_x * (width - 2 * margin)
    py = height - margin - (ys - y0) / span_y * (height - 2 * margin)
    return px, py


def write_loglog_svg(path, series, title, xlabel, ylabel, width=640, height=480):
    """series: {label: (x_array, y_array)} drawn on log-log axes."""
    lines = _svg_header(width, height, title)
    all_x = np.concatenate([np.log10(np.asarray(x, float)) for x, _ in series.values()])
    all_y = np.concatenate([np.log10(np.asarray(y, float)) for _, y in series.values()])
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]
    for idx, (label, (x, y)) in enumerate(sorted(series.items())):
        lx, ly = np.log10(np.asarray(x, float)), np.log10(np.asarray(y, float))
        px = 50 + (lx - all_x.min()) / (np.ptp(all_x) or 1.0) * (width - 100)
        py = height - 50 - (ly - all_y.min()) / (np.ptp(all_y) or 1.0) * (height - 100)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = colors[idx % len(colors)]
        lines.append(f"<!-- data {label}: x={list(map(float, x))} y={list(map(float, y))} -->")
        lines.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for a, b in zip(px, py):
            lines.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="{color}"/>')
        lines.append(
            f'<text x="{width - 180}" y="{30 + 16 * idx}" fill="{color}" '
            f'font-size="12">{label}</text>'
        )
    lines.append(
        f'<text x="{width // 2}" y="{height - 12}" text-anchor="middle" font-size="12">{xlabel}</text>'
    )
    lines.append(
        f'<text x="14" y="{height // 2}" font-size="12" transform="rotate(-90 14 {height // 2})" '
        f'text-anchor="middle">{ylabel}</text>'
    )
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_rule_svg(path, rule, width=720, height=480):
    """Scatter of quadrature nodes in the (s, theta) plane, weight-scaled."""
    lines = _svg_header(width, height, f"quadrature nodes, source {rule.source}")
    s = rule.nodes[:, 0]
    th = np.mod(rule.nodes[:, 1] - rule.source[1] + np.pi, 2 * np.pi) - np.pi
    px, py = _map_points(s, th, width, height)
    wmax = rule.weights.max()
    lines.append(f"<!-- {len(rule)} nodes, qn={rule.qn}, inner={rule.n_inner} -->")
    for a, b, w in zip(px, py, rule.weights):
        r = 0.6 + 2.0 * np.sqrt(abs(w) / wmax)
        lines.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="{r:.2f}" fill="#1f77b4" fill-opacity="0.5"/>')
    sx, sy = _map_points(
        np.array([rule.source[0], s.min(), s.max()]), np.array([0.0, th.min(), th.max()]), width, height
    )
    lines.append(f'<circle cx="{sx[0]:.2f}" cy="{sy[0]:.2f}" r="5" fill="#d62728"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
