"""Fourier-side tools: trigonometric interpolation coefficients, periodic
Sobolev norms, the Hilbert transform and ``D_n`` on coefficient windows, and the
periodized Bernoulli functions ``B_l`` together with their conjugates ``C_l``.

The symmetric window for ``M`` coefficients is ``{m : -M/2 < m <= M/2}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .specfun import DomainError

C2_MODES = 2048


def window(M: int) -> np.ndarray:
    """Integer frequencies ``-M/2 < m <= M/2`` in increasing order."""
    if M < 1:
        raise ValueError(f"window size must be positive, got {M}")
    return np.arange(-((M - 1) // 2), M // 2 + 1)


@dataclass(frozen=True)
class FourierVector:
    """Coefficients ``u(m)`` on the window of size ``len(coeffs)``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))

    @property
    def M(self) -> int:
        return len(self.coeffs)

    @property
    def modes(self) -> np.ndarray:
        return window(self.M)

    def __getitem__(self, m: int) -> complex:
        lo = -((self.M - 1) // 2)
        if not lo <= m <= self.M // 2:
            return 0j
        return complex(self.coeffs[m - lo])

    def map(self, symbol) -> "FourierVector":
        return FourierVector(symbol(self.modes) * self.coeffs)


def fourier_coeffs(samples) -> FourierVector:
    """``u(m) = (1/M) sum_j u(j/M) exp(-2 pi i m j / M)`` for ``m`` in the window."""
    samples = np.asarray(samples, dtype=complex)
    M = len(samples)
    if M < 2:
        raise ValueError("need at least two samples")
    c = np.fft.fft(samples) / M
    return FourierVector(c[window(M) % M])


def synthesize(fv: FourierVector, t) -> np.ndarray:
    """Evaluate ``sum_m u(m) exp(2 pi i m t)``."""
    t = np.asarray(t, dtype=float)
    return np.exp(2j * np.pi * np.multiply.outer(t, fv.modes)) @ fv.coeffs


def sobolev_norm(fv: FourierVector, r: float) -> float:
    m = np.abs(fv.modes).astype(float)
    weight = np.ones_like(m)
    weight[m > 0] = m[m > 0] ** (2.0 * r)
    return float(np.sqrt(np.sum(weight * np.abs(fv.coeffs) ** 2)))


def apply_hilbert(fv: FourierVector) -> FourierVector:
    return fv.map(lambda m: np.sign(m).astype(float))


def apply_dn(fv: FourierVector, n: int) -> FourierVector:
    """``u(m) -> (2 pi i m)^n u(m)``, zero mode removed; ``n`` may be negative."""
    if int(n) != n:
        raise ValueError("D_n needs an integer order")

    def symbol(m):
        out = np.zeros(len(m), dtype=complex)
        nz = m != 0
        out[nz] = (2j * np.pi * m[nz]) ** int(n)
        return out

    return fv.map(symbol)


def periodized_bernoulli(ell: int, t):
    """1-periodic ``B_l`` with ``(-1)^l l! B_l`` the Bernoulli polynomial on (0, 1)."""
    t = np.asarray(t, dtype=float)
    f = t - np.floor(t)
    if ell == 1:
        if np.any(f == 0.0):
            raise DomainError("B_1 jumps at the integers")
        out = 0.5 - f
    elif ell == 2:
        out = 0.5 * (f * f - f + 1.0 / 6.0)
    else:
        raise ValueError(f"only l = 1, 2 are supported, got {ell}")
    return out if out.ndim else float(out)


def bernoulli_coeffs(ell: int, M: int) -> FourierVector:
    """Exact coefficients ``-1 / (-2 pi i m)^l`` (zero mean) of ``B_l``."""
    m = window(M)
    c = np.zeros(M, dtype=complex)
    nz = m != 0
    c[nz] = -1.0 / (-2j * np.pi * m[nz]) ** ell
    return FourierVector(c)


def c_ell(ell: int, t):
    """Conjugate ``C_l = H B_l``.

    ``C_1`` has the closed form ``-(1/2 pi i) log(4 sin^2 pi t)``; ``C_2`` is a
    truncated synthesis over ``C2_MODES`` modes.
    """
    t = np.asarray(t, dtype=float)
    if ell == 1:
        if np.any(t == np.round(t)):
            raise DomainError("C_1 has a logarithmic singularity at the integers")
        out = -np.log(4.0 * np.sin(np.pi * t) ** 2) / (2j * np.pi)
    elif ell == 2:
        out = synthesize(apply_hilbert(bernoulli_coeffs(2, C2_MODES)), t)
    else:
        raise ValueError(f"only l = 1, 2 are supported, got {ell}")
    return out if out.ndim else complex(out)


def comb_coefficients(N: int, M: int) -> FourierVector:
    """Coefficients of ``d_h - 1`` where ``d_h = h sum_j delta_{s_j}``, ``s_j = (j - 1/2) h``.

    They vanish except at ``m = l N``, ``l != 0``, where they equal ``(-1)^l``.
    """
    m = window(M)
    c = np.zeros(M, dtype=complex)
    hit = (m % N == 0) & (m != 0)
    c[hit] = (-1.0) ** (m[hit] // N)
    return FourierVector(c)


def comb_defect_norm(N: int, r: float = -1.0, terms: int = 1000) -> float:
    """``||d_h - 1||_r`` for ``r < -1/2``: partial sum plus a Hurwitz zeta tail."""
    if r >= -0.5:
        raise ValueError("the comb lies in H^r only for r < -1/2")
    l = np.arange(1, terms + 1, dtype=float)
    s = -2.0 * r
    head = np.sum((l * N) ** (-s))
    tail = N ** (-s) * zeta(s, terms + 1)
    return float(np.sqrt(2.0 * (head + tail)))


def local_minima(values) -> np.ndarray:
    """Indices of strict interior local minima of a sampled curve."""
    v = np.asarray(values, dtype=float)
    return np.flatnonzero((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:])) + 1


def c1_minima(eps_grid) -> np.ndarray:
    """Sweep values where ``|C_1|`` has a local minimum (its zeros ``+-1/6`` mod 1)."""
    eps_grid = np.asarray(eps_grid, dtype=float)
    return eps_grid[local_minima(np.abs(c_ell(1, eps_grid)))]
