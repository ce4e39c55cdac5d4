"""Smooth closed 1-periodic parametric curves and scatterer configurations."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

Evaluator = Callable[[np.ndarray], np.ndarray]


class CurveKind(enum.Enum):
    ELLIPSE = "ellipse"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ParametricCurve:
    """A counterclockwise, 1-periodic parametrization ``t -> x(t)``.

    ``point`` and ``derivative`` take an array of parameters of any shape and
    return an array of shape ``t.shape + (2,)``. Both must be analytic; no
    numerical differentiation is ever performed.
    """

    point: Evaluator
    derivative: Evaluator
    kind: CurveKind = CurveKind.CUSTOM
    params: dict = field(default_factory=dict)
    normal_fn: Optional[Evaluator] = None

    def x(self, t) -> np.ndarray:
        return self.point(np.asarray(t, dtype=float))

    def dx(self, t) -> np.ndarray:
        return self.derivative(np.asarray(t, dtype=float))

    def normal(self, t) -> np.ndarray:
        """Scaled outward normal ``(x2'(t), -x1'(t))``; its length is ``|x'(t)|``."""
        if self.normal_fn is not None:
            return self.normal_fn(np.asarray(t, dtype=float))
        d = self.dx(t)
        return np.stack([d[..., 1], -d[..., 0]], axis=-1)

    def speed(self, t) -> np.ndarray:
        return np.linalg.norm(self.dx(t), axis=-1)

    def reversed(self) -> "ParametricCurve":
        """The same curve traversed as ``t -> x(-t)`` (clockwise for an ellipse)."""
        point, derivative = self.point, self.derivative
        return ParametricCurve(
            point=lambda t: point(-t),
            derivative=lambda t: -derivative(-t),
            kind=CurveKind.CUSTOM,
            params={"reversed": self.describe()},
        )

    def diameter(self, samples: int = 256) -> float:
        pts = self.x(np.arange(samples) / samples)
        return float(np.ptp(pts, axis=0).max())

    def describe(self) -> dict:
        return {"kind": self.kind.value, **self.params}


def ellipse(center, a: float, b: float) -> ParametricCurve:
    """Ellipse ``center + (a cos 2 pi t, b sin 2 pi t)``, oriented counterclockwise."""
    if not (a > 0 and b > 0):
        raise ValueError(f"ellipse semiaxes must be positive, got a={a}, b={b}")
    cx, cy = (float(c) for c in center)
    two_pi = 2.0 * np.pi

    def point(t):
        w = two_pi * t
        return np.stack([cx + a * np.cos(w), cy + b * np.sin(w)], axis=-1)

    def derivative(t):
        w = two_pi * t
        return np.stack([-two_pi * a * np.sin(w), two_pi * b * np.cos(w)], axis=-1)

    def normal(t):
        w = two_pi * t
        return np.stack([two_pi * b * np.cos(w), two_pi * a * np.sin(w)], axis=-1)

    return ParametricCurve(
        point=point,
        derivative=derivative,
        kind=CurveKind.ELLIPSE,
        params={"center": [cx, cy], "semiaxes": [float(a), float(b)]},
        normal_fn=normal,
    )


def circle(center=(0.0, 0.0), radius: float = 1.0) -> ParametricCurve:
    return ellipse(center, radius, radius)


def scaled_normal(curve: ParametricCurve, t):
    """``(x2'(t), -x1'(t))``; outward for counterclockwise curves."""
    return curve.normal(t)


def curve_from_dict(entry: dict) -> ParametricCurve:
    kind = entry.get("kind", "ellipse")
    if kind != "ellipse":
        raise ValueError(f"unsupported curve kind in config: {kind!r}")
    a, b = entry["semiaxes"]
    return ellipse(entry.get("center", (0.0, 0.0)), a, b)


def reduce_eps(eps: float) -> float:
    """Map ``eps`` to its representative in (-1/2, 1/2]; integers are rejected."""
    eps = float(eps)
    reduced = eps - np.ceil(eps - 0.5)
    if reduced == 0.0:
        raise ValueError(
            f"eps={eps} is an integer: the staggered kernels would be evaluated "
            "on their diagonal singularity"
        )
    return float(reduced)


@dataclass(frozen=True)
class ScattererConfig:
    """A set of disjoint curves with wavenumber, per-curve N and staggering eps."""

    curves: Sequence[ParametricCurve]
    k: float
    N: Sequence[int]
    eps: float

    def __post_init__(self):
        curves = tuple(self.curves)
        Ns = (self.N,) * len(curves) if np.isscalar(self.N) else tuple(self.N)
        if len(Ns) != len(curves):
            raise ValueError("need one N per curve")
        if not curves:
            raise ValueError("at least one curve is required")
        if not self.k > 0:
            raise ValueError(f"wavenumber must be positive, got {self.k}")
        if any(int(n) != n or n < 1 for n in Ns):
            raise ValueError(f"N must be positive integers, got {Ns}")
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "N", tuple(int(n) for n in Ns))
        object.__setattr__(self, "eps", reduce_eps(self.eps))
        check_disjoint(curves, self.N)

    def with_(self, **changes) -> "ScattererConfig":
        fields = {"curves": self.curves, "k": self.k, "N": self.N, "eps": self.eps}
        fields.update(changes)
        return ScattererConfig(**fields)


def check_disjoint(curves: Sequence[ParametricCurve], Ns: Sequence[int]) -> None:
    """Reject configurations whose curves share a node (up to 10 eps * diameter)."""
    if len(curves) < 2:
        return
    pts = [c.x(np.arange(n) / n) for c, n in zip(curves, Ns)]
    diam = max(c.diameter() for c in curves)
    tol = 10.0 * np.finfo(float).eps * diam
    for p in range(len(curves)):
        for q in range(p + 1, len(curves)):
            d = np.linalg.norm(pts[p][:, None, :] - pts[q][None, :, :], axis=-1)
            if d.min() <= tol:
                raise ValueError(f"curves {p} and {q} intersect")
