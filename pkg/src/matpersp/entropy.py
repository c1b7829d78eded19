"""Quantum entropies and Lieb trace functionals.

Each functional has two evaluation routes: direct functional calculus on
``n x n`` matrices, and a quadratic form of a (generalized) perspective of
the left/right multiplication pair. The ``*_via_*`` functions expose the
second route so the two can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import funcat
from .errors import ParameterError
from .linalg import DEFAULT_TOL, ToleranceConfig, as_density, as_positive, eig_hermitian, matrix_function
from .superop import LeftRightPair, marechal_form, perspective_form


@dataclass(frozen=True)
class LiebParameters:
    """Exponents of ``Trace A^q X* B^p X`` with ``p, q > 0`` and ``p + q <= 1``.

    The equivalent generalized-perspective parameters are ``s = q`` and
    ``t = p / (1 - q)``, so that ``p = (1 - s) t`` and ``0 < t <= 1``.
    """

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (p > 0 and q > 0):
            raise ParameterError(f"need p > 0 and q > 0, got p={p}, q={q}")
        if p + q > 1 + 4 * np.finfo(float).eps:
            raise ParameterError(f"need p + q <= 1, got p + q = {p + q!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def s(self) -> float:
        return self.q

    @property
    def t(self) -> float:
        return min(self.p / (1.0 - self.q), 1.0)


def _check_s(s):
    s = float(s)
    if not 0.0 < s < 1.0:
        raise ParameterError(f"s must lie in (0, 1), got s={s}")
    return s


def von_neumann_entropy(rho, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``-Trace(ρ log ρ)`` in nats."""
    rho = as_density(rho, "rho", cfg)
    lam = eig_hermitian(rho, tol=cfg.jacobi_tol).eigenvalues
    return float(-np.sum(lam * np.log(lam)))


def relative_entropy(rho, sigma, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``Trace ρ (log ρ - log σ)`` in nats, for strictly positive ``ρ, σ``."""
    rho = as_positive(rho, "rho", cfg)
    sigma = as_positive(sigma, "sigma", cfg)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    log = funcat.log()
    value = np.trace(rho @ (matrix_function(log, rho, cfg) - matrix_function(log, sigma, cfg)))
    return float(value.real)


def relative_entropy_via_perspective(rho, sigma, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``<g(L, R)(I), I>`` with ``g`` the perspective of ``x log x``, ``L = ρ·``, ``R = ·σ``."""
    pair = LeftRightPair.from_matrices(rho, sigma, cfg, names=("rho", "sigma"))
    return perspective_form(funcat.xlogx(), pair, np.eye(pair.n), cfg)


def lieb_functional(A, B, K, s: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``Trace A^s K* B^(1-s) K`` for ``0 < s < 1``."""
    s = _check_s(s)
    A = as_positive(A, "A", cfg)
    B = as_positive(B, "B", cfg)
    K = np.asarray(K, dtype=np.complex128)
    As = matrix_function(funcat.power(s), A, cfg)
    Bs = matrix_function(funcat.power(1.0 - s), B, cfg)
    return float(np.trace(As @ K.conj().T @ Bs @ K).real)


def lieb_via_perspective(A, B, K, s: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``-<g(L, R)(K*), K*>`` for the perspective of ``-x^s``."""
    s = _check_s(s)
    pair = LeftRightPair.from_matrices(A, B, cfg, names=("A", "B"))
    Kstar = np.asarray(K, dtype=np.complex128).conj().T
    return -perspective_form(funcat.neg_power(s), pair, Kstar, cfg)


def lieb_pq_functional(A, B, X, params: LiebParameters, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``Trace A^q X* B^p X`` for ``p, q > 0``, ``p + q <= 1``."""
    A = as_positive(A, "A", cfg)
    B = as_positive(B, "B", cfg)
    X = np.asarray(X, dtype=np.complex128)
    Aq = matrix_function(funcat.power(params.q), A, cfg)
    Bp = matrix_function(funcat.power(params.p), B, cfg)
    return float(np.trace(Aq @ X.conj().T @ Bp @ X).real)


def lieb_pq_via_marechal(A, B, X, params: LiebParameters, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """``-<(f Δ h)(L, R)(X*), X*>`` with ``f = -x^s``, ``h = y^t``."""
    pair = LeftRightPair.from_matrices(A, B, cfg, names=("A", "B"))
    Xstar = np.asarray(X, dtype=np.complex128).conj().T
    return -marechal_form(funcat.neg_power(params.s), funcat.power(params.t), pair, Xstar, cfg)
