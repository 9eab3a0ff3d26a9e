import numpy as np
import pytest

from conftest import random_complex_matrix
from torusweyl.linops import op_norm, sigma_min, svd
from torusweyl.regularize import (bump, bump_wide, func_calc_of_gram,
                                  regularized_inverse_residual,
                                  regularized_operator, regularized_trace_pair,
                                  small_singular_count)
from torusweyl.symbol import constant, scottish_flag


def test_bump_shape():
    ts = np.linspace(-20, 20, 4001)
    psi = bump(ts)
    assert np.all((0 <= psi) & (psi <= 1))
    assert np.all(psi[np.abs(ts) <= 1] == 1.0)
    assert np.all(psi[np.abs(ts) >= 4] == 0.0)
    # smooth interior values strictly between the plateaus
    assert 0 < bump(2.5) < 1


def test_wide_bump_covers_support():
    ts = np.linspace(-16, 16, 4001)
    inner = np.abs(ts) <= 4
    assert np.all(bump_wide(ts[inner]) == 1.0)
    assert np.all(bump_wide(ts[np.abs(ts) >= 16]) == 0.0)
    # pointwise: psi_wide = 1 wherever psi > 0
    support = bump(ts) > 0
    assert np.all(bump_wide(ts[support]) == 1.0)


def test_gram_calculus_identity_function():
    A = np.array([[1.0, 2.0], [0.0, 1.0]], dtype=complex)
    P = func_calc_of_gram(A, lambda t: np.ones_like(t), 0.7)
    assert np.abs(P - np.eye(2)).max() <= 1e-12


def test_gram_calculus_diagonal_bump():
    alpha = 0.5
    A = np.diag([0.0, 3 * alpha]).astype(complex)
    P = func_calc_of_gram(A, bump, alpha)
    assert np.abs(P - np.diag([1.0, 0.0])).max() <= 1e-14  # psi(0)=1, psi(9)=0


def test_gram_calculus_commutes_with_gram(rng):
    A = random_complex_matrix(rng, 8)
    P = func_calc_of_gram(A, bump, 1.0)
    G = A @ A.conj().T
    comm = P @ G - G @ P
    assert op_norm(comm) <= 1e-10 * op_norm(G)
    assert np.abs(P - P.conj().T).max() <= 1e-12  # Hermitian for real phi


def test_regularized_zero_matrix():
    reg = regularized_operator(np.zeros((5, 5), dtype=complex), 0.3)
    s = np.linalg.svd(reg, compute_uv=False)
    assert np.abs(s - 0.3).max() <= 1e-14


def test_regularized_diagonal_example():
    alpha = 0.25
    A = np.diag([0.0, 3 * alpha]).astype(complex)
    reg = regularized_operator(A, alpha)
    assert np.abs(reg - np.diag([alpha, 3 * alpha])).max() <= 1e-14


def test_sigma_floor_over_random_draws(rng):
    for _ in range(50):
        A = random_complex_matrix(rng, 20)
        reg = regularized_operator(A, 0.1)
        assert sigma_min(reg) >= 0.1 - 1e-12


def test_singular_values_follow_scalar_formula(rng):
    alpha = 0.4
    for _ in range(10):
        d = int(rng.integers(2, 30))
        A = random_complex_matrix(rng, d)
        s = np.linalg.svd(A, compute_uv=False)
        expected = np.sort(s + alpha * bump((s / alpha) ** 2))[::-1]
        got = np.linalg.svd(regularized_operator(A, alpha), compute_uv=False)
        assert np.abs(np.sort(got) - np.sort(expected)).max() <= 1e-11


def test_inverse_norm_bounded_by_alpha(rng):
    alpha = 0.2
    for _ in range(10):
        A = random_complex_matrix(rng, 12)
        inv = np.linalg.inv(regularized_operator(A, alpha))
        assert op_norm(inv) <= (1 + 1e-9) / alpha


def test_residual_identity_matrix():
    assert regularized_inverse_residual(np.eye(4, dtype=complex)) <= 1e-12


def test_residual_diagonal_with_scalar_oracle():
    A = np.diag([0.0, 1.0, 5.0]).astype(complex)
    assert regularized_inverse_residual(A) <= 1e-12
    # scalar-formula oracle: on each singular value both sides reduce to
    # (1 - psi_wide(s^2)) / (s + psi(s^2)) and (1 - psi_wide(s^2)) s/(s^2 + psi(s^2))
    for s in (0.0, 1.0, 5.0):
        lhs = (1 - bump_wide(s ** 2)) / (s + bump(s ** 2))
        rhs = (1 - bump_wide(s ** 2)) * s / (s ** 2 + bump(s ** 2))
        assert lhs == pytest.approx(rhs, abs=1e-15)


def test_residual_random_30(rng):
    A = random_complex_matrix(rng, 30)
    assert regularized_inverse_residual(A) <= 1e-10


def test_residual_hundred_random_matrices(rng):
    for _ in range(100):
        d = int(rng.integers(2, 41))
        A = random_complex_matrix(rng, d, scale=float(rng.uniform(0.2, 3.0)))
        assert regularized_inverse_residual(A) <= 1e-10 * (1 + op_norm(A))


def test_gram_bump_rank_counts_small_singular_values(rng):
    alpha = 0.8
    for seed in range(5):
        r = np.random.default_rng(seed)
        A = random_complex_matrix(r, 12)
        P = func_calc_of_gram(A, bump, alpha)
        s = np.linalg.svd(A, compute_uv=False)
        expected_rank = int(np.sum(s ** 2 < 4 * alpha ** 2))
        got_rank = int(np.sum(np.linalg.svd(P, compute_uv=False) > 1e-12))
        # identical unless a singular value lands in the tiny outer sliver of
        # the bump where psi < 1e-12; none of these seeds does
        assert got_rank == expected_rank


def test_small_singular_count_constants():
    one = constant(1, 1.0)
    assert small_singular_count(one, 8, 0.3, 2.0) == 0  # R*alpha = 0.6 < 1
    zero = constant(1, 0.0)
    assert small_singular_count(zero, 8, 0.3, 2.0) == 8


def test_trace_pair_scalar_symbol():
    f = constant(1, 2.0)
    first, second = regularized_trace_pair(f, 16, 0.1)
    assert first == pytest.approx(16 / 2, abs=1e-10)   # psi inactive: |f|^2/alpha^2 = 400
    assert second == pytest.approx(16 / 2, abs=1e-10)


def test_trace_pair_zero_symbol_matches_factorization_oracle():
    f = constant(1, 0.0)
    N, alpha = 6, 1.0
    first, second = regularized_trace_pair(f, N, alpha)
    # scalar formula through the same factorization: A = 0 has S = 0, so the
    # regularized operator is alpha * U V* and its trace-inverse is tr(V U*)
    fac = svd(np.zeros((N, N), dtype=complex))
    expected_first = np.trace(fac.V @ fac.U.conj().T) / alpha
    assert first == pytest.approx(complex(expected_first), abs=1e-12)
    assert second == pytest.approx(0j, abs=1e-15)


def test_trace_pair_flag_regression():
    # both traces vanish by the f -> -f symmetry of the flag; the loose
    # difference bound 0.2 * N * alpha is the recorded gate
    first, second = regularized_trace_pair(scottish_flag(), 100, 0.2)
    assert abs(first) <= 1e-8
    assert abs(second) <= 1e-8
    assert abs(first - second) <= 0.2 * 100 * 0.2


def test_positive_alpha_required():
    with pytest.raises(ValueError):
        regularized_operator(np.eye(2, dtype=complex), 0.0)
    with pytest.raises(ValueError):
        func_calc_of_gram(np.eye(2, dtype=complex), bump, -1.0)
