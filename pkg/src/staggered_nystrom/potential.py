"""Discrete potentials from nodal densities and the error metrics used in the
convergence studies."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, List, Sequence, Union

import numpy as np

from .assembly import BlockSystem, StaggeredGrid
from .dense_solver import lu_solve
from .geometry import ParametricCurve
from .specfun import DomainError, hankel1_0, hankel1_1


class NearBoundaryWarning(UserWarning):
    pass


@dataclass
class DensitySolution:
    """Nodal values ``phi_j`` at ``t_j`` for every curve."""

    curves: Sequence[ParametricCurve]
    grids: Sequence[StaggeredGrid]
    values: List[np.ndarray]
    k: float

    def __post_init__(self):
        for v, g in zip(self.values, self.grids):
            if len(v) != g.N:
                raise ValueError(f"density of length {len(v)} on a grid with N={g.N}")

    def scaled(self, factor) -> "DensitySolution":
        return DensitySolution(self.curves, self.grids, [factor * v for v in self.values], self.k)


def solve(system: BlockSystem) -> DensitySolution:
    phi = lu_solve(system.matrix(), system.rhs)
    return DensitySolution(system.curves, system.grids, system.split(phi), system.k)


@dataclass(frozen=True)
class FieldSample:
    z: tuple
    value: complex
    near_boundary: bool = False


def _points(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    return z.reshape(-1, 2)


def _near_boundary(sol: DensitySolution, pts: np.ndarray) -> np.ndarray:
    flags = np.zeros(len(pts), dtype=bool)
    for curve, grid in zip(sol.curves, sol.grids):
        nodes = curve.x(grid.t)
        d = np.linalg.norm(pts[:, None, :] - nodes[None, :, :], axis=-1).min(axis=1)
        flags |= d < 5.0 * grid.h * curve.speed(grid.t).max()
    return flags


def evaluate_potential(sol: DensitySolution, z) -> Union[complex, np.ndarray]:
    """Midpoint-rule double-layer potential ``U_h(z)`` summed over all curves."""
    shape = np.shape(z)[:-1]
    pts = _points(z)
    total = np.zeros(len(pts), dtype=complex)
    for curve, grid, phi in zip(sol.curves, sol.grids, sol.values):
        nodes = curve.x(grid.t)
        diff = pts[:, None, :] - nodes[None, :, :]
        r = np.linalg.norm(diff, axis=-1)
        if np.any(r < 1e-12 * curve.diameter()):
            raise DomainError("potential evaluated on the curve")
        proj = np.einsum("mjd,jd->mj", diff, curve.normal(grid.t))
        kern = hankel1_1(sol.k * r) * proj / r
        total += 0.25j * sol.k * grid.h * (kern @ phi)
    if np.any(_near_boundary(sol, pts)):
        warnings.warn("potential evaluated within 5h|x'| of a curve", NearBoundaryWarning, stacklevel=2)
    return complex(total[0]) if shape == () else total.reshape(shape)


def evaluate_single_layer(sol: DensitySolution, densities: Sequence[np.ndarray], z):
    """Midpoint-rule single layer ``sum h (i/4) H0(k|z - x(t_j)|) psi_j``.

    ``densities`` are scaled (multiplied by ``|x'|``) Neumann data at ``t_j``.
    """
    shape = np.shape(z)[:-1]
    pts = _points(z)
    total = np.zeros(len(pts), dtype=complex)
    for curve, grid, psi in zip(sol.curves, sol.grids, densities):
        r = np.linalg.norm(pts[:, None, :] - curve.x(grid.t)[None, :, :], axis=-1)
        total += 0.25j * grid.h * (hankel1_0(sol.k * r) @ psi)
    return complex(total[0]) if shape == () else total.reshape(shape)


def sample_field(sol: DensitySolution, points) -> List[FieldSample]:
    pts = _points(points)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearBoundaryWarning)
        vals = evaluate_potential(sol, pts)
    near = _near_boundary(sol, pts)
    return [FieldSample(tuple(p), complex(v), bool(f)) for p, v, f in zip(pts, vals, near)]


def _values(field) -> np.ndarray:
    if len(field) and isinstance(field[0], FieldSample):
        return np.array([s.value for s in field])
    return np.asarray(field, dtype=complex)


def richardson(coarse, fine):
    """``(4/3) U_{h/2} - (1/3) U_h`` pointwise.

    Accepts arrays of values or lists of :class:`FieldSample`; in the latter
    case the observation points must coincide.
    """
    if len(coarse) != len(fine):
        raise ValueError("Richardson extrapolation needs matching point sets")
    samples = len(coarse) and isinstance(coarse[0], FieldSample)
    if samples and any(a.z != b.z for a, b in zip(coarse, fine)):
        raise ValueError("Richardson extrapolation needs matching point sets")
    extrapolated = (4.0 * _values(fine) - _values(coarse)) / 3.0
    if samples:
        return [
            FieldSample(a.z, complex(v), a.near_boundary or b.near_boundary)
            for a, b, v in zip(coarse, fine, extrapolated)
        ]
    return extrapolated


def observation_error(approx, exact: Callable, points) -> float:
    """Max over ``points`` of ``|U(z) - U_h(z)|``.

    ``approx`` is a :class:`DensitySolution`, a sequence of values or samples
    aligned with ``points``, or a callable.
    """
    pts = _points(points)
    if isinstance(approx, DensitySolution):
        vals = evaluate_potential(approx, pts)
    elif callable(approx):
        vals = np.array([approx(z) for z in pts])
    else:
        vals = _values(approx)
    ref = np.array([exact(z) for z in pts])
    return float(np.max(np.abs(ref - vals)))


def boundary_error(sol: DensitySolution, exact_trace: Callable) -> float:
    """``max_{p,j} |phi_j - phi(t_j)|``; ``exact_trace(p, t)`` gives the trace on curve p."""
    worst = 0.0
    for p, (grid, phi) in enumerate(zip(sol.grids, sol.values)):
        worst = max(worst, float(np.max(np.abs(phi - exact_trace(p, grid.t)))))
    return worst


def postprocess_functional(sol: DensitySolution, v, curve: int = 0) -> complex:
    """``h sum_j phi_j v(t_j)`` on one curve; ``v`` is a callable or nodal samples."""
    grid = sol.grids[curve]
    vals = v(grid.t) if callable(v) else np.asarray(v)
    return complex(grid.h * np.sum(sol.values[curve] * vals))
