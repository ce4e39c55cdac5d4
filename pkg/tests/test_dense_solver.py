import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from staggered_nystrom.dense_solver import (
    ConvergenceWarning,
    SingularMatrixError,
    cond2,
    estimate_cond2,
    lu_factor,
    lu_solve,
)


def random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 60), st.integers(0, 2**31 - 1))
def test_manufactured_solution(n, seed):
    rng = np.random.default_rng(seed)
    A = random_complex(rng, n) + n * np.eye(n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    got = lu_solve(A, A @ x)
    assert np.linalg.norm(got - x) <= 1e-10 * np.linalg.norm(x)


def test_factors_reconstruct(rng):
    A = random_complex(rng, 40)
    P, L, U = lu_factor(A).unpack()
    assert np.allclose(P @ L @ U, A, rtol=0, atol=1e-13 * np.abs(A).max())
    # Complex pivots are chosen by |Re| + |Im|, so multipliers stay below sqrt(2).
    assert np.all(np.abs(np.tril(L, -1)) <= np.sqrt(2) + 1e-15)


def test_conjugate_transpose_solve(rng):
    A = random_complex(rng, 30)
    b = rng.standard_normal(30) + 0j
    x = lu_factor(A).solve(b, conjugate_transpose=True)
    assert np.allclose(A.conj().T @ x, b)


def test_pivoting_needed():
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(lu_solve(A, [2.0, 3.0]), [3.0, 2.0])


def test_singular_and_malformed():
    with pytest.raises(SingularMatrixError):
        lu_factor(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        lu_factor(np.ones((2, 3)))
    with pytest.raises(ValueError):
        lu_factor(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        lu_solve(np.eye(3), np.ones(4))


@pytest.mark.parametrize("n", [5, 40, 120])
def test_cond2_against_svd(rng, n):
    A = random_complex(rng, n) + 2 * np.eye(n)
    s = np.linalg.svd(A, compute_uv=False)
    assert cond2(A, tol=1e-12) == pytest.approx(s[0] / s[-1], rel=1e-4)


def test_cond2_of_circulant():
    # The constant vector is a singular vector of any circulant matrix.
    c = np.r_[4.0, -1.0, np.zeros(30), -1.5]
    A = np.array([np.roll(c, i) for i in range(len(c))])
    s = np.linalg.svd(A, compute_uv=False)
    assert cond2(A, tol=1e-12) == pytest.approx(s[0] / s[-1], rel=1e-6)


def test_cond2_scale_invariance(rng):
    A = random_complex(rng, 30)
    assert cond2(10j * A, tol=1e-12) == pytest.approx(cond2(A, tol=1e-12), rel=1e-8)


def test_cond2_nonconvergence_warns(rng):
    A = random_complex(rng, 30)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        cond2(A, tol=1e-15, maxiter=2)
    assert any(issubclass(x.category, ConvergenceWarning) for x in w)
    est = estimate_cond2(A, tol=1e-15, maxiter=2)
    assert not est.converged and est.value > 1


def test_residual_bound_on_fixed_seed_systems():
    rng = np.random.default_rng(2012)
    worst = 0.0
    for i in range(200):
        n = (8, 64, 256)[i % 3]
        A = random_complex(rng, n)
        b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = lu_solve(A, b)
        res = np.linalg.norm(A @ x - b) / (np.linalg.norm(A, "fro") * np.linalg.norm(x) + np.linalg.norm(b))
        worst = max(worst, res)
    assert worst <= 1e-12


def test_small_examples():
    b = np.array([1 + 2j, -3.0])
    assert np.allclose(lu_solve(np.eye(2), b), b)
    assert np.allclose(lu_solve(np.diag([2.0, 4.0]), [2.0, 8.0]), [1.0, 2.0])
    assert cond2(np.eye(5)) == pytest.approx(1.0)
    assert cond2(np.diag([1.0, 10.0])) == pytest.approx(10.0, rel=1e-6)


def test_reconstruction_in_frobenius_norm(rng):
    for n in (8, 64, 256):
        A = random_complex(rng, n)
        P, L, U = lu_factor(A).unpack()
        assert np.linalg.norm(P @ L @ U - A) <= 1e-12 * np.linalg.norm(A)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 30), st.integers(0, 2**31 - 1))
def test_cond2_at_least_one(n, seed):
    A = random_complex(np.random.default_rng(seed), n)
    assert cond2(A, tol=1e-8) >= 1.0
