import numpy as np
import pytest

from staggered_nystrom import kernels
from staggered_nystrom.assembly import Direct, Indirect, assemble_system, build_grid
from staggered_nystrom.geometry import ScattererConfig
from staggered_nystrom.potential import (
    DensitySolution,
    FieldSample,
    NearBoundaryWarning,
    boundary_error,
    evaluate_potential,
    evaluate_single_layer,
    observation_error,
    postprocess_functional,
    richardson,
    sample_field,
    solve,
)
from staggered_nystrom.specfun import DomainError

from conftest import TWO_ELLIPSES, Z0

POINTS = np.array([[-4.0, -4.0], [-5.0, -5.5], [-6.0, -7.0], [7.0, 7.6], [-6.8, -6.0]])


def trace_solution(N, k=1.0):
    grids = [build_grid(N, 1 / 6)] * 2
    vals = [kernels.point_source_trace(c, g.t, Z0, k) for c, g in zip(TWO_ELLIPSES, grids)]
    return DensitySolution(TWO_ELLIPSES, grids, vals, k)


def test_green_representation_of_exact_field():
    # Exterior Green formula: U = DLP[U|_Gamma] - SLP[dU/dn]; trapezoid rules are spectral here.
    sol = trace_solution(200)
    neumann = [kernels.point_source_neumann(c, g.t, Z0, 1.0) for c, g in zip(sol.curves, sol.grids)]
    u = evaluate_potential(sol, POINTS) - evaluate_single_layer(sol, neumann, POINTS)
    exact = kernels.point_source(POINTS, Z0, 1.0)
    assert np.max(np.abs(u - exact)) < 1e-12


def test_potential_matches_kernel_sum():
    sol = trace_solution(16)
    z = np.array([9.0, -3.0])
    direct = sum(g.h * np.sum(kernels.dlp_kernel(z, c, g.t, 1.0) * v)
                 for c, g, v in zip(sol.curves, sol.grids, sol.values))
    assert evaluate_potential(sol, z) == pytest.approx(direct, rel=1e-14)


@pytest.mark.filterwarnings("ignore::staggered_nystrom.potential.NearBoundaryWarning")
def test_linearity_and_superposition(rng):
    a, b = trace_solution(20), trace_solution(20)
    b = DensitySolution(b.curves, b.grids, [v * (1 + rng.standard_normal(20)) for v in b.values], 1.0)
    both = DensitySolution(a.curves, a.grids, [x + y for x, y in zip(a.values, b.values)], 1.0)
    ua, ub, uab = (evaluate_potential(s, POINTS) for s in (a, b, both))
    assert np.allclose(uab, ua + ub, rtol=1e-13)
    assert np.allclose(evaluate_potential(a.scaled(2 - 3j), POINTS), (2 - 3j) * ua, rtol=1e-13)


def test_density_length_check():
    with pytest.raises(ValueError):
        DensitySolution(TWO_ELLIPSES, [build_grid(10, 0.25)] * 2, [np.zeros(9), np.zeros(10)], 1.0)


def test_on_curve_and_near_curve():
    sol = trace_solution(20)
    with pytest.raises(DomainError):
        evaluate_potential(sol, TWO_ELLIPSES[0].x(0.0))
    with pytest.warns(NearBoundaryWarning):
        evaluate_potential(sol, [1.05, 0.0])
    samples = sample_field(sol, [[1.05, 0.0], [50.0, 50.0]])
    assert [s.near_boundary for s in samples] == [True, False]


def test_richardson_formula():
    coarse = np.array([1.0, 2.0 + 1j])
    fine = np.array([0.5, 1.0])
    assert np.allclose(richardson(coarse, fine), (4 * fine - coarse) / 3)
    assert np.allclose(richardson(fine, fine), fine)
    a = [FieldSample((0.0, 1.0), 1.0), FieldSample((2.0, 1.0), 2.0)]
    b = [FieldSample((0.0, 1.0), 0.5), FieldSample((2.0, 1.0), 1.0)]
    out = richardson(a, b)
    assert [s.value for s in out] == pytest.approx([1 / 3, 2 / 3])
    with pytest.raises(ValueError):
        richardson(a, [FieldSample((0.0, 1.0), 0.5), FieldSample((2.0, 9.0), 1.0)])
    with pytest.raises(ValueError):
        richardson(a, b[:1])


def test_richardson_of_identical_fields_keeps_their_error():
    config = ScattererConfig(TWO_ELLIPSES, 1.0, 40, 1 / 6)
    sol = solve(assemble_system(config, Indirect(Z0)))
    u = evaluate_potential(sol, POINTS)
    exact = lambda z: kernels.point_source(z, Z0, 1.0)
    assert observation_error(richardson(u, u), exact, POINTS) == pytest.approx(
        observation_error(sol, exact, POINTS), rel=1e-12
    )


def test_observation_error_forms():
    exact = lambda z: kernels.point_source(z, Z0, 1.0)
    ref = np.array([exact(z) for z in POINTS])
    assert observation_error(ref, exact, POINTS) == 0.0
    assert observation_error(lambda z: exact(z) + 1e-3j, exact, POINTS) == pytest.approx(1e-3)


def test_boundary_error_and_functional():
    sol = trace_solution(30)
    tr = lambda p, t: kernels.point_source_trace(TWO_ELLIPSES[p], t, Z0, 1.0)
    assert boundary_error(sol, tr) == 0.0
    assert boundary_error(sol.scaled(1.1), tr) > 0
    ones = postprocess_functional(sol, lambda t: np.ones_like(t))
    assert ones == pytest.approx(np.mean(sol.values[0]))
    assert postprocess_functional(sol, np.ones(30), curve=1) == pytest.approx(np.mean(sol.values[1]))


def test_direct_solution_is_close_to_trace():
    config = ScattererConfig(TWO_ELLIPSES, 1.0, 80, 1 / 6)
    sol = solve(assemble_system(config, Direct(Z0)))
    tr = lambda p, t: kernels.point_source_trace(TWO_ELLIPSES[p], t, Z0, 1.0)
    assert boundary_error(sol, tr) < 3e-3


@pytest.mark.filterwarnings("ignore::staggered_nystrom.potential.NearBoundaryWarning")
def test_trivial_examples():
    sol = trace_solution(12)
    zero = sol.scaled(0.0)
    assert np.all(evaluate_potential(zero, POINTS) == 0)
    assert richardson(np.array([1.0]), np.array([4.0]))[0] == pytest.approx(5.0)
    assert richardson(np.array([2 - 1j]), np.array([2 - 1j]))[0] == pytest.approx(2 - 1j)
    const = DensitySolution(sol.curves, sol.grids, [np.full(12, 0.7 + 0.2j)] * 2, 1.0)
    assert postprocess_functional(const, lambda t: np.ones_like(t)) == pytest.approx(0.7 + 0.2j)
    half = np.r_[np.ones(6), np.zeros(6)]
    ones = DensitySolution(sol.curves, sol.grids, [half, half], 1.0)
    assert postprocess_functional(ones, half) == pytest.approx(sol.grids[0].h * 6)


@pytest.mark.filterwarnings("ignore::staggered_nystrom.potential.NearBoundaryWarning")
def test_superposition_over_curves():
    sol = trace_solution(24)
    parts = [DensitySolution([c], [g], [v], 1.0) for c, g, v in zip(sol.curves, sol.grids, sol.values)]
    total = evaluate_potential(sol, POINTS)
    assert np.allclose(total, sum(evaluate_potential(p, POINTS) for p in parts), rtol=1e-14, atol=0)


@pytest.mark.slow
def test_functional_rate_for_fourier_mode():
    v = lambda t: np.exp(2j * np.pi * t)
    fine = trace_solution(4000)
    exact = postprocess_functional(fine, v)
    Ns = (40, 80, 160, 320)
    errs = []
    for N in Ns:
        sol = solve(assemble_system(ScattererConfig(TWO_ELLIPSES, 1.0, N, 1 / 6), Direct(Z0)))
        errs.append(abs(postprocess_functional(sol, v) - exact))
    rate = -np.polyfit(np.log(Ns), np.log(errs), 1)[0]
    assert abs(rate - 2) <= 0.1
