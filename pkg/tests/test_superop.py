import numpy as np
import pytest

from matpersp import funcat
from matpersp.errors import DomainError, NonPositiveH
from matpersp.linalg import DEFAULT_TOL, complex_gaussian, loewner_leq, make_rng, matrix_function, sample_density, sample_positive, sample_unitary
from matpersp.superop import (
    LeftRightPair,
    apply_marechal,
    apply_perspective,
    hs_inner,
    joint_weights,
    left_superop,
    marechal_form,
    marechal_superop_direct,
    marechal_superop_matrix,
    perspective_form,
    perspective_superop_direct,
    perspective_superop_matrix,
    right_superop,
    unvec,
    vec,
)

from conftest import assert_close


def random_pair(n, seed, density=False):
    rng = make_rng(seed)
    sample = sample_density if density else sample_positive
    return LeftRightPair.from_matrices(sample(n, rng), sample(n, rng)), rng


def test_vec_examples():
    np.testing.assert_array_equal(vec(np.eye(2)), [1, 0, 0, 1])
    X = np.array([[0, 1], [0, 0]], dtype=complex)
    assert hs_inner(X, X) == 1
    Y = complex_gaussian((3, 3), make_rng(0))
    np.testing.assert_array_equal(unvec(vec(Y)), Y)
    Z = complex_gaussian((3, 3), make_rng(1))
    assert hs_inner(Y, Z) == pytest.approx(np.trace(Y @ Z.conj().T), abs=1e-14)
    with pytest.raises(ValueError):
        unvec(np.zeros(5))


def test_left_right_superops():
    rng = make_rng(2)
    assert_close(left_superop(np.eye(3)), np.eye(9), 0)
    A = complex_gaussian((3, 3), rng)
    B = complex_gaussian((3, 3), rng)
    X = complex_gaussian((3, 3), rng)
    scale = np.linalg.norm(A) * np.linalg.norm(X)
    assert np.linalg.norm(left_superop(A) @ vec(X) - vec(A @ X)) <= 1e-12 * scale
    assert np.linalg.norm(right_superop(B) @ vec(X) - vec(X @ B)) <= 1e-12 * np.linalg.norm(B) * np.linalg.norm(X)


def test_left_right_commute():
    rng = make_rng(3)
    for _ in range(20):
        A = sample_positive(4, rng)
        B = sample_positive(4, rng)
        L, R = left_superop(A), right_superop(B)
        assert np.linalg.norm(L @ R - R @ L) <= 1e-12 * np.linalg.norm(A) * np.linalg.norm(B)


def test_pair_rejects_nonpositive():
    with pytest.raises(DomainError, match="not strictly positive"):
        LeftRightPair.from_matrices(np.eye(2), np.diag([1.0, 0.0]))


def test_joint_weights_examples():
    n = 3
    pair = LeftRightPair.from_matrices(np.eye(n) / n, np.eye(n) / n)
    _, _, w = joint_weights(pair, np.eye(n))
    assert w.sum() == pytest.approx(n, abs=1e-12)
    D = np.diag([0.2, 0.3, 0.5])
    _, _, w = joint_weights(LeftRightPair.from_matrices(D, D), np.eye(n))
    assert_close(w, np.eye(n), 1e-15)
    pair, rng = random_pair(4, 4)
    K = complex_gaussian((4, 4), rng)
    _, _, w = joint_weights(pair, K)
    assert w.sum() == pytest.approx(np.linalg.norm(K) ** 2, abs=1e-10)
    with pytest.raises(ValueError):
        joint_weights(pair, np.eye(3))


def test_perspective_form_trivial_functions():
    pair, rng = random_pair(3, 5, density=True)
    K = complex_gaussian((3, 3), rng)
    assert perspective_form(funcat.identity(), pair, np.eye(3)) == pytest.approx(1.0, abs=1e-13)
    val = perspective_form(funcat.identity(), pair, K)
    assert val == pytest.approx(np.trace(pair.left @ K @ K.conj().T).real, abs=1e-12)
    one = funcat.constant(1.0)
    assert perspective_form(one, pair, np.eye(3)) == pytest.approx(np.trace(pair.right).real, abs=1e-13)
    assert perspective_form(one, pair, K) == pytest.approx(np.trace(K @ pair.right @ K.conj().T).real, abs=1e-12)


def test_perspective_form_diagonal_relative_entropy():
    pair = LeftRightPair.from_matrices(np.diag([0.5, 0.5]), np.diag([0.25, 0.75]))
    oracle = funcat.classical_relative_entropy([0.5, 0.5], [0.25, 0.75])
    assert perspective_form(funcat.xlogx(), pair, np.eye(2)) == pytest.approx(oracle, abs=1e-12)


def test_diagonal_reduction_to_classical_perspective():
    rng = make_rng(6)
    for f in funcat.convex_catalog():
        lam = rng.uniform(0.1, 3, 4)
        mu = rng.uniform(0.1, 3, 4)
        pair = LeftRightPair.from_matrices(np.diag(lam), np.diag(mu))
        expected = sum(funcat.classical_perspective(f, l, m) for l, m in zip(lam, mu))
        assert perspective_form(f, pair, np.eye(4)) == pytest.approx(expected, abs=1e-12 * (1 + abs(expected)))


def test_apply_perspective_examples():
    pair, rng = random_pair(3, 7)
    K = complex_gaussian((3, 3), rng)
    assert_close(apply_perspective(funcat.identity(), pair, K), pair.left @ K, 1e-12)
    assert_close(apply_perspective(funcat.constant(1.0), pair, K), K @ pair.right, 1e-12)
    for f in (funcat.xlogx(), funcat.neg_power(0.3), funcat.inverse()):
        Y = apply_perspective(f, pair, K)
        form = perspective_form(f, pair, K)
        assert hs_inner(Y, K).real == pytest.approx(form, abs=1e-10 * (1 + abs(form)))
        assert abs(hs_inner(Y, K).imag) <= 1e-10 * (1 + abs(form))


def test_perspective_form_real_for_nonhermitian_k():
    pair, rng = random_pair(4, 8)
    K = complex_gaussian((4, 4), rng)
    value = perspective_form(funcat.xlogx(), pair, K)
    assert isinstance(value, float)
    Y = apply_perspective(funcat.xlogx(), pair, K)
    assert abs(hs_inner(Y, K).imag) <= 1e-12 * (1 + abs(value))


def test_log_law_consequence():
    rng = make_rng(9)
    log = funcat.log()
    for n in (2, 3, 5):
        rho = sample_density(n, rng)
        sigma = sample_density(n, rng)
        pair = LeftRightPair.from_matrices(rho, sigma)
        direct = np.trace(rho @ matrix_function(log, rho)).real - np.trace(rho @ matrix_function(log, sigma)).real
        assert perspective_form(funcat.xlogx(), pair, np.eye(n)) == pytest.approx(direct, abs=1e-10)


def test_marechal_identity_h_is_perspective_bitwise():
    pair, rng = random_pair(3, 10)
    K = complex_gaussian((3, 3), rng)
    for f in funcat.convex_catalog():
        assert marechal_form(f, funcat.identity(), pair, K) == perspective_form(f, pair, K)
        np.testing.assert_array_equal(apply_marechal(f, funcat.identity(), pair, K), apply_perspective(f, pair, K))


def test_marechal_lieb_trace_oracle():
    s = t = 0.5
    A = sample_positive(2, make_rng(11))
    B = sample_positive(2, make_rng(12))
    X = complex_gaussian((2, 2), make_rng(13))
    pair = LeftRightPair.from_matrices(A, B)
    value = marechal_form(funcat.neg_power(s), funcat.power(t), pair, X.conj().T)
    As = matrix_function(funcat.power(s), A)
    Bp = matrix_function(funcat.power((1 - s) * t), B)
    oracle = -np.trace(As @ X.conj().T @ Bp @ X).real
    assert value == pytest.approx(oracle, abs=1e-10 * (1 + abs(oracle)))


def test_marechal_constant_f():
    pair, rng = random_pair(3, 14)
    K = complex_gaussian((3, 3), rng)
    h = funcat.power(0.4)
    hR = matrix_function(h, pair.right)
    expected = np.trace(K @ hR @ K.conj().T).real
    assert marechal_form(funcat.constant(1.0), h, pair, K) == pytest.approx(expected, abs=1e-12)


def test_marechal_nonpositive_h():
    pair = LeftRightPair.from_matrices(np.eye(2), np.diag([0.5, 2.0]))
    with pytest.raises(NonPositiveH):
        marechal_form(funcat.square(), funcat.log(), pair, np.eye(2))


def test_perspective_ratio_domain_error():
    pair = LeftRightPair.from_matrices(np.eye(2), np.eye(2))
    shifted = funcat.shift_reduce(funcat.neg_log(), 5.0)  # domain (-5, inf): every ratio fine
    perspective_form(shifted, pair, np.eye(2))
    narrow = funcat.ScalarFunctionSpec("narrow", lambda x: x, funcat.Interval(2.0, 3.0, True, True))
    with pytest.raises(DomainError):
        perspective_form(narrow, pair, np.eye(2))


def test_superop_matrix_identity_and_quadratic_form():
    pair, rng = random_pair(3, 15)
    assert_close(perspective_superop_matrix(funcat.identity(), pair), left_superop(pair.left), 1e-12)
    K = complex_gaussian((3, 3), rng)
    for f in (funcat.xlogx(), funcat.neg_power(0.5), funcat.square()):
        S = perspective_superop_matrix(f, pair)
        np.testing.assert_array_equal(S, S.conj().T)
        q = np.vdot(vec(K), S @ vec(K)).real
        form = perspective_form(f, pair, K)
        assert q == pytest.approx(form, abs=1e-10 * (1 + abs(form)))


@pytest.mark.parametrize("fid", ["xlogx", "neg_power:s=0.3", "inverse", "square", "neg_log"])
def test_superop_dual_route(fid):
    f = funcat.parse_function(fid)
    pair, _ = random_pair(3, 16)
    S = perspective_superop_matrix(f, pair)
    D = perspective_superop_direct(f, pair)
    assert np.linalg.norm(S - D) <= 1e-9 * (1 + np.linalg.norm(S))


def test_marechal_superop_dual_route():
    pair, _ = random_pair(3, 17)
    f, h = funcat.neg_power(0.6), funcat.power(0.7)
    S = marechal_superop_matrix(f, h, pair)
    D = marechal_superop_direct(f, h, pair)
    assert np.linalg.norm(S - D) <= 1e-9 * (1 + np.linalg.norm(S))


def test_degenerate_spectra_route_equality():
    U = sample_unitary(3, make_rng(18))
    A = U @ np.diag([1.0, 1.0, 2.0]) @ U.conj().T
    B = np.eye(3) * 0.5
    pair = LeftRightPair.from_matrices(A, B)
    f = funcat.xlogx()
    S = perspective_superop_matrix(f, pair)
    D = perspective_superop_direct(f, pair)
    assert np.linalg.norm(S - D) <= 1e-9 * (1 + np.linalg.norm(S))


def test_positivity_transfer():
    rng = make_rng(19)
    f = funcat.square()  # nonnegative everywhere
    for _ in range(20):
        pair = LeftRightPair.from_matrices(sample_positive(3, rng), sample_positive(3, rng))
        S = perspective_superop_matrix(f, pair)
        assert loewner_leq(np.zeros_like(S), S, DEFAULT_TOL).holds
