"""Left/right multiplication superoperators and their perspectives.

For positive ``A`` (acting on the left) and ``B`` (acting on the right) the
maps ``L(X) = A X`` and ``R(X) = X B`` commute on the Hilbert-Schmidt space
of ``n x n`` matrices, and they are jointly diagonalized by the rank-one
matrices ``E_ij = u_i v_j*`` built from eigenvectors of ``A`` and ``B``:
``L(E_ij) = λ_i E_ij`` and ``R(E_ij) = μ_j E_ij``. Every function of the pair
is therefore a multiplier on that basis, which is how the perspective
``f(L/R) R`` and the generalized form ``f(L/h(R)) h(R)`` are evaluated here.
The ``n^2 x n^2`` matrix route is kept as an independent cross-check.

Vectorization is column stacking, so ``vec(A X) = (I ⊗ A) vec(X)`` and
``vec(X B) = (B^T ⊗ I) vec(X)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonPositiveH
from .linalg import DEFAULT_TOL, SpectralDecomposition, ToleranceConfig, _square, eig_hermitian, hermitize, matrix_function


def vec(X) -> np.ndarray:
    X = np.asarray(X)
    return X.reshape(-1, order="F")


def unvec(v) -> np.ndarray:
    v = np.asarray(v)
    n = math.isqrt(v.size)
    if v.ndim != 1 or n * n != v.size:
        raise ValueError(f"length {v.size} is not a perfect square")
    return v.reshape((n, n), order="F")


def hs_inner(X, Y) -> complex:
    """``<X, Y> = Trace(X Y*)``."""
    return complex(np.vdot(vec(Y), vec(X)))


def left_superop(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    return np.kron(np.eye(A.shape[0]), A)


def right_superop(B) -> np.ndarray:
    B = np.asarray(B, dtype=np.complex128)
    return np.kron(B.T, np.eye(B.shape[0]))


@dataclass(frozen=True)
class LeftRightPair:
    """Strictly positive ``(left, right)`` with cached spectral data.

    Build with :meth:`from_matrices`, which validates positivity.
    """

    left: np.ndarray
    right: np.ndarray
    left_spec: SpectralDecomposition
    right_spec: SpectralDecomposition

    @classmethod
    def from_matrices(cls, left, right, cfg: ToleranceConfig = DEFAULT_TOL, names=("left", "right")):
        mats, specs = [], []
        for M, name in zip((left, right), names):
            M = _square(M, name)
            if np.linalg.norm(M - M.conj().T) > 1e-12 * (1 + np.linalg.norm(M)):
                raise DomainError(f"{name} is not Hermitian")
            M = hermitize(M)
            spec = eig_hermitian(M, tol=cfg.jacobi_tol)
            if spec.eigenvalues[0] < cfg.dom_floor:
                raise DomainError(f"{name} not strictly positive: λ_min = {spec.eigenvalues[0]:.6e}")
            mats.append(M)
            specs.append(spec)
        if mats[0].shape != mats[1].shape:
            raise ValueError(f"dimension mismatch: {mats[0].shape} vs {mats[1].shape}")
        return cls(mats[0], mats[1], specs[0], specs[1])

    @property
    def n(self) -> int:
        return self.left.shape[0]


def _check_k(pair: LeftRightPair, K) -> np.ndarray:
    K = np.asarray(K, dtype=np.complex128)
    if K.shape != (pair.n, pair.n):
        raise ValueError(f"dimension mismatch: K is {K.shape}, pair is {pair.n}x{pair.n}")
    return K


def _overlaps(pair: LeftRightPair, K) -> np.ndarray:
    """``M_ij = u_i* K v_j``."""
    U = pair.left_spec.unitary
    V = pair.right_spec.unitary
    return U.conj().T @ K @ V


def joint_weights(pair: LeftRightPair, K):
    """Return ``(λ, μ, w)`` with ``w[i, j] = |u_i* K v_j|^2``."""
    K = _check_k(pair, K)
    M = _overlaps(pair, K)
    return pair.left_spec.eigenvalues, pair.right_spec.eigenvalues, np.abs(M) ** 2


def multipliers(f, pair: LeftRightPair, h=None, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalue table ``f(λ_i / d_j) d_j`` with ``d_j = h(μ_j)`` (``μ_j`` if ``h`` is None)."""
    lam = pair.left_spec.eigenvalues
    mu = pair.right_spec.eigenvalues
    if h is None:
        denom = mu
    else:
        denom = h(h.domain.admit(mu, cfg.dom_floor, what="right eigenvalue"))
        if np.any(denom <= cfg.dom_floor):
            raise NonPositiveH(f"h = {h.id} is not strictly positive on the right spectrum: min h(μ) = {denom.min():.6e}")
    ratios = lam[:, None] / denom[None, :]
    ratios = f.domain.admit(ratios, cfg.dom_floor, what="ratio")
    return f(ratios) * denom[None, :]


def marechal_form(f, h, pair: LeftRightPair, K, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``<(f Δ h)(L, R)(K), K>`` for ``(f Δ h)(L, R) = f(L / h(R)) h(R)``."""
    _, _, w = joint_weights(pair, K)
    return float(np.sum(multipliers(f, pair, h, cfg) * w))


def perspective_form(f, pair: LeftRightPair, K, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``<g(L, R)(K), K>`` for the perspective ``g(L, R) = f(L/R) R``.

    Equals ``sum_ij f(λ_i/μ_j) μ_j |u_i* K v_j|^2``.
    """
    return marechal_form(f, None, pair, K, cfg)


def apply_marechal(f, h, pair: LeftRightPair, K, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    K = _check_k(pair, K)
    M = _overlaps(pair, K)
    U = pair.left_spec.unitary
    V = pair.right_spec.unitary
    return U @ (multipliers(f, pair, h, cfg) * M) @ V.conj().T


def apply_perspective(f, pair: LeftRightPair, K, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``g(L, R)(K) = sum_ij f(λ_i/μ_j) μ_j (u_i* K v_j) u_i v_j*``."""
    return apply_marechal(f, None, pair, K, cfg)


def marechal_superop_matrix(f, h, pair: LeftRightPair, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``(f Δ h)(L, R)`` as an ``n^2 x n^2`` Hermitian matrix (column stacking)."""
    U = pair.left_spec.unitary
    V = pair.right_spec.unitary
    W = np.kron(V.conj(), U)  # column j*n + i is vec(u_i v_j*)
    coeffs = multipliers(f, pair, h, cfg).T.reshape(-1)
    return hermitize((W * coeffs) @ W.conj().T)


def perspective_superop_matrix(f, pair: LeftRightPair, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    return marechal_superop_matrix(f, None, pair, cfg)


def marechal_superop_direct(f, h, pair: LeftRightPair, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Oracle route: functional calculus on the ``n^2 x n^2`` operators themselves.

    Forms ``L h(R)^{-1}`` explicitly and applies :func:`matrix_function`, so it
    shares no spectral bookkeeping with :func:`marechal_superop_matrix`.
    """
    L = left_superop(pair.left)
    R = right_superop(pair.right)
    D = R if h is None else matrix_function(h, R, cfg)
    quotient = hermitize(L @ np.linalg.inv(D))
    return hermitize(matrix_function(f, quotient, cfg) @ D)


def perspective_superop_direct(f, pair: LeftRightPair, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    return marechal_superop_direct(f, None, pair, cfg)
