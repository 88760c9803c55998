import json

import numpy as np
import pytest

from slenderflow.curves import make_centerline
from slenderflow.forcing import uniform
from slenderflow.frames import compute_bishop_frame
from slenderflow.quadrature import build_surface_rule, integrate
from slenderflow.solver import (
    DiscreteSystem,
    ProblemSpec,
    assemble,
    centerline_velocity,
    field_velocity,
    solve,
)
from slenderflow.surface import FiberSurface


@pytest.fixture(scope="module")
def torus_system():
    c = make_centerline("circle")
    frame = compute_bishop_frame(c)
    surf = FiberSurface(c, frame, 0.1)
    spec = ProblemSpec(surf, uniform([0.0, 0.0, 1.0]), 7, 7, 16)
    return assemble(spec)


@pytest.fixture(scope="module")
def torus_solution(torus_system):
    return solve(torus_system)


def test_matrix_dimension(torus_system):
    assert torus_system.size == 3 * (7 * 7 + 7) == 168
    assert np.all(np.isfinite(torus_system.matrix.view(float)))


def test_size_identity_for_larger_grids():
    # the largest reported system: 3*(121*23 + 121) scalar equations
    assert 3 * (121 * 23 + 121) == 8712


def test_index_maps_are_bijections(torus_system):
    rows = set()
    cols = set()
    for j_s in range(7):
        for i in range(3):
            rows.add(torus_system.force_row(j_s, i))
            cols.add(torus_system.c_column(j_s, i))
            for j_t in range(7):
                rows.add(torus_system.velocity_row(j_s, j_t, i))
        for i_mt in range(7):
            for ell in range(3):
                cols.add(torus_system.alpha_column(j_s, i_mt, ell))
    assert rows == set(range(168))
    assert cols == set(range(168))


def test_rigid_translation_response(torus_solution):
    c = torus_solution.c_samples.real
    # uniform axial forcing on the torus: velocity is a uniform axial translation
    assert np.abs(c[:, 2] - c[:, 2].mean()).max() < 1e-6 * abs(c[:, 2].mean())
    assert np.abs(c[:, :2]).max() < 1e-6 * abs(c[:, 2].mean())
    assert c[:, 2].mean() > 0  # response aligned with the driving force


def test_reality(torus_solution):
    assert torus_solution.reality_defect() < 1e-8


def test_linearity_in_force(torus_system, torus_solution):
    doubled = solve(torus_system, force=uniform([0.0, 0.0, 2.0]))
    assert np.abs(doubled.c_samples - 2 * torus_solution.c_samples).max() < 1e-12 * np.abs(
        torus_solution.c_samples
    ).max()


def test_net_force_bookkeeping(torus_system, torus_solution):
    # the force rows are enforced linearly: A x = b holds on those rows, and
    # the trapezoid s-sum of b reproduces the prescribed net force
    n_modes = 7 * 7
    x = np.concatenate(
        [torus_solution.alpha.reshape(-1), torus_solution.c_samples.reshape(-1)]
    )
    resid = torus_system.matrix @ x - torus_system.rhs
    force_resid = resid[3 * n_modes :]
    assert np.abs(force_resid).max() < 1e-8 * np.abs(torus_system.rhs).max()
    net = -(2 * np.pi / 7) * torus_system.rhs[3 * n_modes :].reshape(7, 3).sum(axis=0)
    assert np.allclose(net.real, [0.0, 0.0, 2 * np.pi], atol=1e-10)


def test_centerline_velocity_interpolation(torus_solution):
    samples = centerline_velocity(torus_solution, 7)
    assert np.allclose(samples, torus_solution.c_samples.real)
    dense = centerline_velocity(torus_solution, 500)
    assert np.abs(dense[:, 2] - samples[:, 2].mean()).max() < 1e-6
    with pytest.raises(ValueError):
        centerline_velocity(torus_solution, 5)


def test_band_limited_interpolation_identity():
    # c = cos(2s) sampled on a 21-point grid interpolates exactly
    n = 21
    s = 2 * np.pi * np.arange(n) / n
    samples = np.stack([np.cos(2 * s), np.zeros(n), np.zeros(n)], axis=1)

    class Dummy:
        pass

    sol = Dummy()
    sol.c_samples = samples.astype(complex)
    spec = Dummy()
    spec.n_s = n
    system = Dummy()
    system.spec = spec
    sol.system = system
    dense = centerline_velocity(sol, 500)
    s500 = np.linspace(0, 2 * np.pi, 500, endpoint=False)
    assert np.abs(dense[:, 0] - np.cos(2 * s500)).max() < 1e-12


def test_field_velocity_decay_and_symmetry(torus_solution):
    u_near = field_velocity(torus_solution, [2.0, 0.0, 0.0])
    u_far = field_velocity(torus_solution, [2000.0, 0.0, 0.0])
    assert np.linalg.norm(u_far) <= 1e-2 * np.linalg.norm(u_near)
    # on the symmetry axis the flow is purely axial
    u_axis = field_velocity(torus_solution, [0.0, 0.0, 1.5])
    assert np.abs(u_axis[:2]).max() < 1e-6 * abs(u_axis[2])
    with pytest.raises(ValueError):
        field_velocity(torus_solution, [1.0, 0.0, 0.0])


def test_exports(tmp_path, torus_solution):
    csv_path = tmp_path / "solution.csv"
    json_path = tmp_path / "solution.json"
    torus_solution.export_csv(csv_path)
    torus_solution.export_json(json_path)
    body = csv_path.read_bytes()
    assert body.startswith(b"j_s,s,c_x,c_y,c_z")
    assert b"\r\n" in body
    meta = json.loads(json_path.read_text())
    assert meta["condition_number"] == pytest.approx(torus_solution.condition_number)
    assert len(meta["singular_values"]) == 168


def test_odd_grid_required():
    c = make_centerline("circle")
    frame = compute_bishop_frame(c)
    surf = FiberSurface(c, frame, 0.1)
    with pytest.raises(ValueError):
        ProblemSpec(surf, uniform([0, 0, 1]), 8, 7, 16)


def test_circumferential_resolution_robustness():
    # thin torus: raising n_theta from 5 to 13 barely moves the drag value
    from slenderflow.solver import drag_coefficient

    coarse = drag_coefficient(1e-2, n_s=11, n_theta=5, qn=24)
    fine = drag_coefficient(1e-2, n_s=11, n_theta=13, qn=24)
    assert abs(fine - coarse) / abs(fine) <= 1e-5


def test_quadrature_refinement_does_not_inflate_conditioning(trefoil, trefoil_frame):
    surf = FiberSurface(trefoil, trefoil_frame, 1e-3)
    conds = []
    for qn in (40, 50):
        spec = ProblemSpec(surf, uniform([0, 0, 1.0]), 7, 7, qn)
        conds.append(solve(assemble(spec)).condition_number)
    assert abs(conds[1] - conds[0]) / conds[0] <= 1e-2


def test_single_layer_nullspace_and_completion(trefoil, trefoil_frame):
    # rho = nu: the layer velocity vanishes at exterior points and the
    # completed representation reduces to the point-source term alone
    eps = 0.05
    surf = FiberSurface(trefoil, trefoil_frame, eps)
    rule = build_surface_rule(surf, 1.0, 35)
    cl = trefoil

    def layer(x0):
        def f(s, th):
            x, nu, jac = surf.geometry(s, th)
            r = x0[None, :] - x
            dist = np.linalg.norm(r, axis=1)
            g = nu / dist[:, None] + r * (np.sum(r * nu, axis=1) / dist**3)[:, None]
            return g * jac[:, None]

        return integrate(rule, f) / (8 * np.pi)

    def sources(x0):
        def f(s, th):
            x, nu, jac = surf.geometry(s, th)
            flux = np.sum(nu * nu, axis=1) * jac
            R = x0[None, :] - cl.evaluate(s)
            dist = np.linalg.norm(R, axis=1)
            return R * (flux / dist**3)[:, None]

        return integrate(rule, f) / (4 * np.pi)

    for x0 in (np.array([4.0, 1.0, 1.0]), np.array([0.0, 0.0, 5.0])):
        u_layer = layer(x0)
        assert np.linalg.norm(u_layer) < 1e-6
        completed = u_layer + sources(x0)
        assert np.linalg.norm(completed - sources(x0)) < 1e-6
