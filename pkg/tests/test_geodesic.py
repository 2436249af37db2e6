import math

import numpy as np
import pytest

from gravclock.errors import DomainError
from gravclock.geodesic import (
    BoundaryConditions,
    energy_ratio_samples,
    functional_value,
    proper_time_along,
    solve_extremal_path,
    verify_first_order,
)
from gravclock.propertime import delta_tau_first_order
from gravclock.spacetime import RotatingMassModel, SpacetimePoint

FLAT = RotatingMassModel(M=0.0, J=0.0)
EQ = math.pi / 2


def _cartesian(pt):
    s = math.sin(pt.theta)
    return np.array([pt.r * s * math.cos(pt.phi), pt.r * s * math.sin(pt.phi), pt.r * math.cos(pt.theta)])


@pytest.fixture(scope="module")
def flat_solution(unit_constants):
    bc = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ - 0.2, 0.1),
        SpacetimePoint(30.0, 1.15, EQ + 0.15, 0.45),
    )
    return bc, solve_extremal_path(FLAT, bc, n_segments=1024, constants=unit_constants)


def test_flat_spacetime_gives_straight_line_proper_time(flat_solution, unit_constants):
    bc, res = flat_solution
    chord = np.linalg.norm(_cartesian(bc.end) - _cartesian(bc.start))
    span = bc.end.t - bc.start.t
    expected = span * math.sqrt(1.0 - (chord / span) ** 2)
    assert res.converged
    assert abs(res.proper_time / expected - 1.0) < 1e-10


def test_flat_solution_nodes_lie_on_the_chord(flat_solution):
    bc, res = flat_solution
    a, b = _cartesian(bc.start), _cartesian(bc.end)
    mid = res.nodes[len(res.nodes) // 2]
    pt = SpacetimePoint(0.0, mid[0], mid[1], mid[2])
    x = _cartesian(pt)
    direction = (b - a) / np.linalg.norm(b - a)
    off_axis = (x - a) - np.dot(x - a, direction) * direction
    assert np.linalg.norm(off_axis) < 1e-7


def test_flat_solution_has_uniform_coordinate_speed(flat_solution):
    _, res = flat_solution
    speeds = np.sqrt(
        res.path.dr_dt**2
        + res.path.r**2 * (res.path.dtheta_dt**2 + np.sin(res.path.theta) ** 2 * res.path.dphi_dt**2)
    )
    assert (speeds.max() - speeds.min()) / speeds.mean() < 1e-6


def test_proper_time_along_reproduces_solver_functional(flat_solution, unit_constants):
    _, res = flat_solution
    again = proper_time_along(FLAT, res.path, False, unit_constants)
    assert abs(again / res.proper_time - 1.0) < 1e-12


def test_perturbed_minus_unperturbed_on_same_path_is_the_first_order_shift(unit_constants):
    # quadrature of the rate deviation on a fixed path: the difference from
    # the first-order shift is second order in the perturbation strength
    model = RotatingMassModel(M=1e-6, J=2.5e-3)
    bc = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(30.0, 1.0, EQ, 0.3)
    )
    path = solve_extremal_path(model, bc, False, unit_constants, 256).path

    def mismatch(scale):
        scaled = RotatingMassModel(M=model.M, J=scale * model.J)
        on_path = proper_time_along(scaled, path, True, unit_constants) - proper_time_along(
            scaled, path, False, unit_constants
        )
        first = delta_tau_first_order(scaled, path, unit_constants)
        return abs(on_path - first), abs(first)

    diff1, scale1 = mismatch(1.0)
    assert diff1 < 1e-3 * scale1
    diff_half, _ = mismatch(0.5)
    assert abs(diff1 / diff_half - 4.0) < 0.2  # quadratic in the perturbation


def test_energy_ratio_conserved_along_radial_geodesic(unit_constants):
    model = RotatingMassModel(M=1e-6, J=0.0)
    bc = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(100.0, 1.3, EQ, 0.0)
    )
    res = solve_extremal_path(model, bc, n_segments=1024, constants=unit_constants)
    ratios = energy_ratio_samples(model, res.path, unit_constants)
    drift = (ratios.max() - ratios.min()) / abs(ratios.mean())
    assert res.converged
    assert drift < 1e-9


def test_mesh_convergence(unit_constants):
    model = RotatingMassModel(M=1e-6, J=0.0)
    bc = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(30.0, 1.0, EQ, 0.3)
    )
    coarse = solve_extremal_path(model, bc, n_segments=512, constants=unit_constants)
    fine = solve_extremal_path(model, bc, n_segments=1024, constants=unit_constants)
    assert abs(coarse.proper_time / fine.proper_time - 1.0) < 1e-8


def test_extremality_random_node_perturbations(unit_constants):
    model = RotatingMassModel(M=1e-6, J=0.0)
    bc = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(30.0, 1.0, EQ, 0.3)
    )
    res = solve_extremal_path(model, bc, n_segments=128, constants=unit_constants)
    rng = np.random.default_rng(3)
    for _ in range(5):
        node = rng.integers(1, res.nodes.shape[0] - 1)
        coord = rng.integers(0, 3)
        drops = []
        for delta in (4e-4, 2e-4):
            nodes = res.nodes.copy()
            nodes[node, coord] += delta
            perturbed = functional_value(model, nodes, bc.start.t, bc.end.t, False, unit_constants)
            drop = res.proper_time - perturbed
            assert drop > 0.0
            drops.append(drop)
        # quadratic response: halving the perturbation quarters the loss
        assert abs(drops[0] / drops[1] - 4.0) < 0.4


def test_first_order_residual_scaling(unit_constants):
    model = RotatingMassModel(M=1e-6, J=1.25e-3)
    bc = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(30.0, 1.0, EQ, 0.3)
    )
    scales = [0.08, 0.16, 0.32, 0.64, 1.28, 2.56, 5.12, 8.0]
    report = verify_first_order(model, bc, scales, constants=unit_constants, n_segments=512)
    assert report.all_converged
    assert report.slope >= 1.8
    assert report.slope < 2.3
    # the prediction reuses the public first-order quadrature on the solver path
    base = solve_extremal_path(model, bc, False, unit_constants, 512)
    assert report.predicted_shifts[3] == pytest.approx(
        0.64 * delta_tau_first_order(model, base.path, unit_constants), rel=1e-12
    )


def test_exact_shift_is_odd_in_the_perturbation(unit_constants):
    model = RotatingMassModel(M=1e-6, J=1.25e-3)
    bc = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(30.0, 1.0, EQ, 0.3)
    )
    base = solve_extremal_path(model, bc, False, unit_constants, 512)

    def exact(scale):
        scaled = RotatingMassModel(M=model.M, J=scale * model.J)
        return (
            solve_extremal_path(scaled, bc, True, unit_constants, 512).proper_time
            - base.proper_time
        )

    ratios = []
    for eps in (8.0, 4.0, 2.0):
        ratios.append(abs(exact(eps) + exact(-eps)) / abs(exact(eps)))
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 0.01
    # linear decay of the even part: halving eps roughly halves the ratio
    assert 0.3 < ratios[1] / ratios[0] < 0.7
    assert 0.3 < ratios[2] / ratios[1] < 0.7


def test_sweep_cap_raises_no_convergence(unit_constants):
    from gravclock.errors import NoConvergence

    bc = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(30.0, 1.0, EQ, 0.3)
    )
    with pytest.raises(NoConvergence):
        solve_extremal_path(FLAT, bc, constants=unit_constants, max_sweeps=0)


def test_boundary_validation(unit_constants):
    with pytest.raises(DomainError):
        BoundaryConditions(
            SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(-1.0, 1.0, EQ, 0.3)
        )
    spacelike = BoundaryConditions(
        SpacetimePoint(0.0, 1.0, EQ, 0.0), SpacetimePoint(0.5, 1.0, EQ, 3.0)
    )
    with pytest.raises(DomainError):
        solve_extremal_path(FLAT, spacelike, constants=unit_constants)
