"""Loading of the packaged reference-value fixtures."""

import csv
from importlib import resources



def _read(name):
    path = resources.files("slenderflow.fixtures") / name
    with path.open("r") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, body = rows[0], rows[1:]
    return header, body


def torus_drag_references():
    """{1/eps: F'inf} from the recomputed toroidal-harmonic solutions."""
    _, body = _read("torus_drag.csv")
    return {float(r[0]): float(r[1]) for r in body}


def quadrature_references():
    """{(radius, qn): (nodes, one_over_r, single_layer, double_layer)}."""
    _, body = _read("quadrature_models.csv")
    return {
        (float(r[0]), int(r[1])): (int(r[2]), float(r[3]), float(r[4]), float(r[5]))
        for r in body
    }


def condition_references(include_anomalous=False):
    """{(radius, n_s, n_theta): condition}; the flagged row is skipped by default."""
    _, body = _read("condition_numbers.csv")
    out = {}
    for r in body:
        if not include_anomalous and r[4] == "1":
            continue
        out[(float(r[0]), int(r[1]), int(r[2]))] = float(r[3])
    return out


def hairtie_references():
    """{H: (gap, sigma)} for the near-intersection family, as printed strings."""
    _, body = _read("hairtie_geometry.csv")
    return {float(r[0]): (r[1], r[2]) for r in body}


def sigma_references():
    """{curve name: sigma} for the named unit-length centerlines (strings)."""
    _, body = _read("sigma_reference.csv")
    return {r[0]: r[1] for r in body}


def matches_printed(value, reference):
    """True when value agrees with a printed decimal reference.

    Tolerance is one unit in the last printed decimal place, since the
    references may be truncated rather than rounded.
    """
    reference = reference.strip()
    decimals = len(reference.split(".")[1]) if "." in reference else 0
    unit = 10.0 ** (-decimals)
    return abs(value - float(reference)) <= 1.0000001 * unit
