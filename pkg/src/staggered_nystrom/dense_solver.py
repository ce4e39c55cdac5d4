"""Dense complex LU solves and spectral condition number estimation.

The factorization is LAPACK's partial-pivoting ``getrf`` (via scipy). The
2-norm condition number is estimated by power iteration on ``A^H A`` for the
largest singular value and inverse iteration through the LU factors for the
smallest, so no SVD is ever formed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg


class SingularMatrixError(np.linalg.LinAlgError):
    pass


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LUFactors:
    """Packed ``P A = L U`` factors with the pivot sequence.

    ``growth`` is ``max|U| / max|A|``; large values flag pivoting trouble.
    """

    lu: np.ndarray
    piv: np.ndarray
    growth: float

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def solve(self, b, conjugate_transpose: bool = False) -> np.ndarray:
        trans = 2 if conjugate_transpose else 0
        return scipy.linalg.lu_solve((self.lu, self.piv), b, trans=trans, check_finite=False)

    def unpack(self):
        """Return ``(P, L, U)`` with ``A = P @ L @ U``."""
        n = self.n
        L = np.tril(self.lu, -1) + np.eye(n)
        U = np.triu(self.lu)
        perm = np.arange(n)
        for i, p in enumerate(self.piv):
            perm[i], perm[p] = perm[p], perm[i]
        P = np.zeros((n, n))
        P[perm, np.arange(n)] = 1.0
        return P, L, U


def lu_factor(A) -> LUFactors:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    A = A.astype(np.complex128, copy=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, overwrite_a=True, check_finite=False)
    diag = np.abs(np.diag(lu))
    if np.any(diag == 0.0):
        raise SingularMatrixError(f"exactly zero pivot at position {int(np.argmin(diag))}")
    scale = np.abs(A).max() if A.size else 1.0
    growth = float(np.abs(np.triu(lu)).max() / scale) if scale > 0 else np.inf
    return LUFactors(lu=lu, piv=piv, growth=growth)


def lu_solve(A, b) -> np.ndarray:
    """Solve ``A x = b`` by LU with partial pivoting."""
    b = np.asarray(b)
    A = np.asarray(A)
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"right-hand side of length {b.shape[0]} does not match {A.shape}")
    return lu_factor(A).solve(b.astype(np.complex128))


@dataclass(frozen=True)
class Cond2Estimate:
    value: float
    sigma_max: float
    sigma_min: float
    converged: bool
    iterations: int


def _start_vector(n: int) -> np.ndarray:
    # All-ones is an exact singular vector of circulant matrices, where power
    # iteration would stall on the constant mode; a fixed perturbation avoids that.
    rng = np.random.default_rng(20120101)
    v = np.ones(n) + 0.5 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return v / np.linalg.norm(v)


def _dominant_eigenvalue(apply, n, tol, maxiter):
    """Power iteration for a Hermitian positive definite operator."""
    x = _start_vector(n)
    lam_old = None
    for it in range(1, maxiter + 1):
        y = apply(x)
        lam = float(np.real(np.vdot(x, y)))
        norm = np.linalg.norm(y)
        if norm == 0.0:
            raise SingularMatrixError("operator annihilated the iterate")
        x = y / norm
        if lam_old is not None and abs(lam - lam_old) <= tol * abs(lam):
            return lam, True, it
        lam_old = lam
    return lam, False, maxiter


def estimate_cond2(A, tol: float = 1e-6, maxiter: int = 10_000) -> Cond2Estimate:
    """Estimate ``sigma_max / sigma_min`` of a square nonsingular matrix.

    Iterations stop when two successive Rayleigh quotients agree to ``tol``
    relative; ``converged`` is False if ``maxiter`` was hit first.
    """
    A = np.asarray(A, dtype=np.complex128)
    factors = lu_factor(A)
    n = A.shape[0]
    AH = A.conj().T

    lam_max, ok_max, it_max = _dominant_eigenvalue(lambda v: AH @ (A @ v), n, tol, maxiter)

    def inverse_gram(v):
        w = factors.solve(v, conjugate_transpose=True)
        return factors.solve(w)

    lam_inv, ok_min, it_min = _dominant_eigenvalue(inverse_gram, n, tol, maxiter)
    sigma_max = np.sqrt(lam_max)
    sigma_min = 1.0 / np.sqrt(lam_inv)
    return Cond2Estimate(
        value=float(sigma_max / sigma_min),
        sigma_max=float(sigma_max),
        sigma_min=float(sigma_min),
        converged=ok_max and ok_min,
        iterations=it_max + it_min,
    )


def cond2(A, tol: float = 1e-6, maxiter: int = 10_000) -> float:
    est = estimate_cond2(A, tol=tol, maxiter=maxiter)
    if not est.converged:
        warnings.warn(
            f"cond2 did not converge in {maxiter} iterations; best estimate {est.value:.6g}",
            ConvergenceWarning,
            stacklevel=2,
        )
    return est.value
