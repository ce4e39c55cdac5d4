"""Staggered grids, the hypersingular system matrix, right-hand sides and the
Calderon preconditioner matrix.

Row ``i`` of a block tests against the cell ``(s_{i+eps}, s_{i+1+eps})`` of
the observation curve; column ``j`` is the piecewise constant unknown on
``(s_j, s_{j+1})`` of the source curve. With ``G_ij = V1(s_{i+eps}, s_j)``
sampled on the ``(N+1) x (N+1)`` staggered lattice the leading term is the
mixed second difference of ``G``; the ``V2`` term is a one-point midpoint rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Union

import numpy as np

from . import kernels
from .geometry import ParametricCurve, ScattererConfig, reduce_eps
from .specfun import DomainError, hankel1_0


class AssemblyError(RuntimeError):
    pass


@dataclass(frozen=True)
class StaggeredGrid:
    """The four node families ``s_i, t_i, s_{i+eps}, t_{i+eps}``, i = 0..N-1."""

    N: int
    eps: float

    @property
    def h(self) -> float:
        return 1.0 / self.N

    def _nodes(self, shift: float, count: int) -> np.ndarray:
        return (np.arange(count) + shift) * self.h

    @property
    def s(self) -> np.ndarray:
        return self._nodes(-0.5, self.N)

    @property
    def t(self) -> np.ndarray:
        return self._nodes(0.0, self.N)

    @property
    def s_eps(self) -> np.ndarray:
        return self._nodes(self.eps - 0.5, self.N)

    @property
    def t_eps(self) -> np.ndarray:
        return self._nodes(self.eps, self.N)

    def cell_edges(self, staggered: bool) -> np.ndarray:
        """The ``N + 1`` break points ``s_0..s_N`` (or ``s_{i+eps}``)."""
        return self._nodes((self.eps if staggered else 0.0) - 0.5, self.N + 1)


def build_grid(N: int, eps: float) -> StaggeredGrid:
    if int(N) != N or N < 4:
        raise ValueError(f"N must be an integer >= 4, got {N}")
    return StaggeredGrid(N=int(N), eps=reduce_eps(eps))


def assemble_w_block(
    p: ParametricCurve,
    q: ParametricCurve,
    grid_p: StaggeredGrid,
    grid_q: StaggeredGrid,
    k: float,
) -> np.ndarray:
    """Block of the discrete hypersingular operator, observation ``p``, source ``q``."""
    if grid_p.eps != grid_q.eps:
        raise ValueError("observation and source grids must share eps")
    s_obs = grid_p.cell_edges(staggered=True)
    s_src = grid_q.cell_edges(staggered=False)
    try:
        G = kernels.v1(p, q, s_obs[:, None], s_src[None, :], k)
        K2 = kernels.v2(p, q, grid_p.t_eps[:, None], grid_q.t[None, :], k)
    except DomainError as exc:
        raise AssemblyError(f"coincident nodes while assembling block: {exc}") from exc
    lead = G[1:, 1:] - G[:-1, 1:] - G[1:, :-1] + G[:-1, :-1]
    # The h^2 weight comes from the source-side midpoint rule.
    return lead + grid_q.h**2 * K2


@dataclass(frozen=True)
class Indirect:
    """Double-layer ansatz; data is ``g = -grad U . n`` of the exact field."""

    source: Sequence[float]


@dataclass(frozen=True)
class Direct:
    """Green's-formula formulation; the unknown is the trace ``U o x``."""

    source: Sequence[float]


Formulation = Union[Indirect, Direct]


@dataclass
class BlockSystem:
    curves: Sequence[ParametricCurve]
    grids: List[StaggeredGrid]
    k: float
    blocks: List[List[np.ndarray]]
    rhs: np.ndarray
    formulation: Formulation = None
    offsets: np.ndarray = field(init=False)

    def __post_init__(self):
        self.offsets = np.concatenate([[0], np.cumsum([g.N for g in self.grids])])

    def matrix(self) -> np.ndarray:
        return np.block(self.blocks)

    def split(self, vector) -> List[np.ndarray]:
        vector = np.asarray(vector)
        return [vector[a:b] for a, b in zip(self.offsets[:-1], self.offsets[1:])]


def grids_for(config: ScattererConfig) -> List[StaggeredGrid]:
    return [build_grid(n, config.eps) for n in config.N]


def assemble_w(config: ScattererConfig, grids=None) -> List[List[np.ndarray]]:
    grids = grids or grids_for(config)
    c = config.curves
    return [
        [assemble_w_block(c[p], c[q], grids[p], grids[q], config.k) for q in range(len(c))]
        for p in range(len(c))
    ]


def indirect_rhs(config: ScattererConfig, grids, source) -> np.ndarray:
    parts = []
    for curve, grid in zip(config.curves, grids):
        g = -kernels.point_source_neumann(curve, grid.t_eps, source, config.k)
        parts.append(grid.h * g)
    return np.concatenate(parts)


def adjoint_dlp_matrix(config: ScattererConfig, grids, p: int, q: int) -> np.ndarray:
    """Midpoint discretization ``h_q K'(t_{i+eps}, t_j)`` of the adjoint double layer."""
    c = config.curves
    K = kernels.adjoint_dlp_kernel(
        c[p], grids[p].t_eps[:, None], c[q], grids[q].t[None, :], config.k
    )
    return grids[q].h * K


def direct_rhs(config: ScattererConfig, grids, source, include_adjoint: bool = True) -> np.ndarray:
    """``h_p [ -(1/2) gn_p(t_{i+eps}) + sum_q h_q sum_j K'_pq(t_{i+eps}, t_j) gn_q(t_j) ]``.

    ``gn`` is the scaled Neumann datum ``grad U . n`` of the exact field.
    """
    k = config.k
    data = [kernels.point_source_neumann(c, g.t, source, k) for c, g in zip(config.curves, grids)]
    parts = []
    for p, (curve, grid) in enumerate(zip(config.curves, grids)):
        local = -0.5 * kernels.point_source_neumann(curve, grid.t_eps, source, k)
        if include_adjoint:
            for q in range(len(config.curves)):
                local = local + adjoint_dlp_matrix(config, grids, p, q) @ data[q]
        parts.append(grid.h * local)
    return np.concatenate(parts)


def assemble_system(config: ScattererConfig, formulation: Formulation) -> BlockSystem:
    grids = grids_for(config)
    blocks = assemble_w(config, grids)
    if isinstance(formulation, Indirect):
        rhs = indirect_rhs(config, grids, formulation.source)
    elif isinstance(formulation, Direct):
        rhs = direct_rhs(config, grids, formulation.source)
    else:
        raise TypeError(f"unknown formulation {formulation!r}")
    return BlockSystem(
        curves=config.curves, grids=grids, k=config.k, blocks=blocks, rhs=rhs,
        formulation=formulation,
    )


def assemble_calderon_v(config: ScattererConfig, grids=None) -> np.ndarray:
    """Dense ``V_ij = H0(k |x_p(t_i) - x_q(t_{j+eps})|)``, all blocks."""
    grids = grids or grids_for(config)
    c = config.curves
    rows = []
    for p in range(len(c)):
        row = []
        for q in range(len(c)):
            diff = c[p].x(grids[p].t)[:, None, :] - c[q].x(grids[q].t_eps)[None, :, :]
            r = np.linalg.norm(diff, axis=-1)
            if np.any(r == 0.0):
                raise AssemblyError("coincident nodes in Calderon matrix")
            row.append(hankel1_0(config.k * r))
        rows.append(row)
    return np.block(rows)


@dataclass(frozen=True)
class QuadratureErrorMatrix:
    E: np.ndarray
    order: int
    subdivisions: int

    def norm2(self) -> float:
        return float(np.linalg.norm(self.E, 2))


def quadrature_error_matrix(
    curve: ParametricCurve,
    grid: StaggeredGrid,
    k: float,
    reference_order: int = 16,
    subdivisions: int = 1,
) -> QuadratureErrorMatrix:
    """Defect of the one-point rule for ``V2`` on every staggered cell.

    ``E_ij = int_{Q_ij} V2 - h^2 V2(t_{i+eps}, t_j)`` with
    ``Q_ij = (s_{i+eps}, s_{i+1+eps}) x (s_j, s_{j+1})``; the integral is a
    tensor Gauss-Legendre rule with ``reference_order`` points per direction on
    each of ``subdivisions`` sub-intervals.
    """
    if reference_order < 1 or subdivisions < 1:
        raise ValueError("reference_order and subdivisions must be positive")
    N, h = grid.N, grid.h
    x, w = np.polynomial.legendre.leggauss(reference_order)
    sub = h / subdivisions
    # Local offsets within a cell of width h, starting at the left edge.
    offs = (np.arange(subdivisions)[:, None] * sub + 0.5 * sub * (x[None, :] + 1.0)).ravel()
    wts = np.tile(0.5 * sub * w, subdivisions)
    src = (grid.cell_edges(staggered=False)[:-1, None] + offs[None, :]).ravel()
    n_src = curve.normal(src)
    x_src = curve.x(src)
    src_w = np.tile(wts, N)
    E = np.empty((N, N), dtype=complex)
    obs_edges = grid.cell_edges(staggered=True)[:-1]
    midpoint = kernels.v2(curve, curve, grid.t_eps[:, None], grid.t[None, :], k)
    for i in range(N):
        obs = obs_edges[i] + offs
        diff = curve.x(obs)[:, None, :] - x_src[None, :, :]
        r = np.linalg.norm(diff, axis=-1)
        nn = curve.normal(obs) @ n_src.T
        vals = -0.25j * k * k * hankel1_0(k * r) * nn
        cell = (wts @ (vals * src_w)).reshape(N, -1).sum(axis=1)
        E[i] = cell - h * h * midpoint[i]
    return QuadratureErrorMatrix(E=E, order=reference_order, subdivisions=subdivisions)
