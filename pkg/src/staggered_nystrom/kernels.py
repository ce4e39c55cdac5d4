"""Parametrized Helmholtz kernels for the staggered Nystrom discretization.

``v1`` and ``v2`` are the two weakly singular kernels of the hypersingular
operator written as ``W = -D V1 D + V2``; ``dlp_kernel`` and
``adjoint_dlp_kernel`` are the double-layer and adjoint double-layer kernels
with the scaled normal. All functions broadcast over their parameter arrays.
The exact reference field is the point source ``H0(k |z - z0|)``.
"""

import numpy as np

from .geometry import ParametricCurve
from .specfun import DomainError, hankel1_0, hankel1_1


def _distance(diff, what="points"):
    r = np.linalg.norm(diff, axis=-1)
    if np.any(r == 0.0):
        raise DomainError(f"coincident {what}: kernel is singular there")
    return r


def _pair_geometry(p: ParametricCurve, q: ParametricCurve, s, t):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    return p.x(s) - q.x(t), s, t


def v1(p: ParametricCurve, q: ParametricCurve, s, t, k: float):
    """``(i/4) H0(k |x_p(s) - x_q(t)|)``."""
    diff, _, _ = _pair_geometry(p, q, s, t)
    return 0.25j * hankel1_0(k * _distance(diff))


def v2(p: ParametricCurve, q: ParametricCurve, s, t, k: float):
    """``-(i k^2/4) H0(k |x_p(s) - x_q(t)|) n_p(s) . n_q(t)``."""
    diff, s, t = _pair_geometry(p, q, s, t)
    nn = np.sum(p.normal(s) * q.normal(t), axis=-1)
    return -0.25j * k * k * hankel1_0(k * _distance(diff)) * nn


def v1_v2(p: ParametricCurve, q: ParametricCurve, s, t, k: float):
    """Both kernels at once, sharing the Hankel evaluation."""
    diff, s, t = _pair_geometry(p, q, s, t)
    h0 = hankel1_0(k * _distance(diff))
    nn = np.sum(p.normal(s) * q.normal(t), axis=-1)
    return 0.25j * h0, -0.25j * k * k * h0 * nn


def _layer(diff, normal, k):
    r = _distance(diff)
    return 0.25j * k * hankel1_1(k * r) * np.sum(diff * normal, axis=-1) / r


def dlp_kernel(z, q: ParametricCurve, t, k: float):
    """Double-layer kernel ``(ik/4) H1(k r) (z - x_q(t)).n_q(t) / r``."""
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    diff = z - q.x(t)
    r = np.linalg.norm(diff, axis=-1)
    if np.any(r < 1e-12 * q.diameter()):
        raise DomainError("observation point lies on the curve")
    return _layer(diff, q.normal(t), k)


def adjoint_dlp_kernel(p: ParametricCurve, s, q: ParametricCurve, t, k: float):
    """Adjoint double-layer kernel; the normal is taken at the observation point."""
    diff, s, t = _pair_geometry(p, q, s, t)
    return _layer(diff, p.normal(s), k)


def point_source(z, z0, k: float):
    """Exact radiating field ``U(z) = H0(k |z - z0|)``."""
    diff = np.asarray(z, dtype=float) - np.asarray(z0, dtype=float)
    return hankel1_0(k * _distance(diff, "point and source"))


def point_source_gradient(z, z0, k: float):
    """``grad U(z) = -k H1(k r) (z - z0) / r``."""
    diff = np.asarray(z, dtype=float) - np.asarray(z0, dtype=float)
    r = _distance(diff, "point and source")
    return np.asarray(-k * hankel1_1(k * r) / r)[..., None] * diff


def point_source_neumann(p: ParametricCurve, t, z0, k: float):
    """Scaled Neumann trace ``grad U(x_p(t)) . n_p(t)`` of the point source."""
    t = np.asarray(t, dtype=float)
    diff = p.x(t) - np.asarray(z0, dtype=float)
    r = _distance(diff, "point and source")
    return -k * hankel1_1(k * r) * np.sum(diff * p.normal(t), axis=-1) / r


def point_source_trace(p: ParametricCurve, t, z0, k: float):
    """Parametrized Dirichlet trace ``U(x_p(t))``."""
    return point_source(p.x(np.asarray(t, dtype=float)), z0, k)


__all__ = [
    "v1",
    "v2",
    "v1_v2",
    "dlp_kernel",
    "adjoint_dlp_kernel",
    "point_source",
    "point_source_gradient",
    "point_source_neumann",
    "point_source_trace",
]
