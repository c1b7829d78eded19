"""Dense complex Hermitian linear algebra.

Eigendecomposition is cyclic Jacobi; the sweep loop runs in the compiled
``_jacobi`` extension when available and in ``_jacobi_py`` otherwise. Set
``MATPERSP_PURE_PYTHON=1`` to force the fallback.

Matrices are plain ``numpy`` arrays of ``complex128``. The ``as_*``
validators enforce the Hermitian / positive / density invariants at API
boundaries.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import _jacobi_py
from .errors import ConvergenceError, DomainError, PreconditionError
from .reports import InequalityReport

if os.environ.get("MATPERSP_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _jacobi as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_KERNELS = {"python": _jacobi_py.jacobi_sweeps}
if _compiled is not None:
    _KERNELS["cython"] = _compiled.jacobi_sweeps

MAX_SWEEPS = 100


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative tolerances; every check scales them by ``1 + operand norms``.

    ``jacobi_tol`` is the eigensolver stopping threshold on the
    off-diagonal Frobenius norm relative to ``||H||_F``.
    """

    psd_tol: float = 1e-9
    eq_tol: float = 1e-10
    dom_floor: float = 1e-12
    jacobi_tol: float = 1e-14

    def __post_init__(self):
        for name in ("psd_tol", "eq_tol", "dom_floor", "jacobi_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.dom_floor < self.eq_tol <= self.psd_tol:
            raise ValueError("tolerances must satisfy dom_floor < eq_tol <= psd_tol")

    def tightened(self) -> "ToleranceConfig":
        """Same tolerances with a 10x stricter eigensolver threshold."""
        return replace(self, jacobi_tol=self.jacobi_tol / 10)

    def to_dict(self):
        return {
            "psd_tol": self.psd_tol,
            "eq_tol": self.eq_tol,
            "dom_floor": self.dom_floor,
            "jacobi_tol": self.jacobi_tol,
        }


DEFAULT_TOL = ToleranceConfig()


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    unitary: np.ndarray  # eigenvectors as columns

    def reconstruct(self) -> np.ndarray:
        U = self.unitary
        return (U * self.eigenvalues) @ U.conj().T


def hermitize(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    return (M + M.conj().T) / 2


def dagger(M) -> np.ndarray:
    return np.asarray(M).conj().T


def _square(M, name="matrix") -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def is_hermitian(M) -> bool:
    M = np.asarray(M)
    fro = np.linalg.norm(M)
    return bool(np.linalg.norm(M - M.conj().T) <= 1e-12 * (1 + fro))


def as_hermitian(M, name="matrix") -> np.ndarray:
    """Validate the Hermitian invariant; return the exactly-symmetrized matrix."""
    M = _square(M, name)
    if not is_hermitian(M):
        raise DomainError(f"{name} is not Hermitian: ||M - M*||_F = {np.linalg.norm(M - M.conj().T):.3e}")
    return hermitize(M)


def as_positive(M, name="matrix", cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    H = as_hermitian(M, name)
    lam_min = eig_hermitian(H, tol=cfg.jacobi_tol).eigenvalues[0]
    if lam_min < cfg.dom_floor:
        raise DomainError(f"{name} not strictly positive: λ_min = {lam_min:.6e}")
    return H


def as_density(M, name="rho", cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    P = as_positive(M, name, cfg)
    tr = np.trace(P).real
    if abs(tr - 1.0) > 1e-12:
        raise DomainError(f"{name} does not have unit trace: Trace = {tr:.17g}")
    return P


def eig_hermitian(H, tol: float = DEFAULT_TOL.jacobi_tol, max_sweeps: int = MAX_SWEEPS, backend: str | None = None):
    """Spectral decomposition of a Hermitian matrix by cyclic Jacobi.

    Parameters
    ----------
    H : array_like
        Hermitian matrix. Only the Hermitian part is used.
    tol : float
        Stop when the off-diagonal Frobenius norm drops to ``tol * ||H||_F``.
    max_sweeps : int
        Raise :class:`ConvergenceError` past this many sweeps.
    backend : {"cython", "python"}, optional
        Kernel override; defaults to the module-level :data:`BACKEND`.

    Returns
    -------
    SpectralDecomposition
        Ascending eigenvalues and the matching unitary.
    """
    H = hermitize(_square(H))
    kernel = _KERNELS[backend or BACKEND]
    w, V, sweeps = kernel(H, tol, max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (n={H.shape[0]})")
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], V[:, order])


def eigvalsh(H, tol: float = DEFAULT_TOL.jacobi_tol) -> np.ndarray:
    return eig_hermitian(H, tol=tol).eigenvalues


def matrix_function(f, H, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``U f(Λ) U*`` for Hermitian ``H = U Λ U*``.

    ``f`` is a :class:`~matpersp.funcat.ScalarFunctionSpec` (domain checked,
    raising :class:`DomainError`) or any vectorized callable (unchecked).
    """
    dec = eig_hermitian(H, tol=cfg.jacobi_tol)
    x = dec.eigenvalues
    domain = getattr(f, "domain", None)
    if domain is not None:
        x = domain.admit(x, cfg.dom_floor, what="eigenvalue")
    fx = np.asarray(f(x), dtype=np.float64)
    U = dec.unitary
    return hermitize((U * fx) @ U.conj().T)


def spectral_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def loewner_leq(A, B, cfg: ToleranceConfig = DEFAULT_TOL, kind: str = "loewner") -> InequalityReport:
    """Check ``A <= B`` in the Loewner order.

    The margin is ``lambda_min(B - A)``; the check holds when it is at least
    ``-psd_tol * (1 + ||A||_2 + ||B||_2)``.
    """
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    margin = float(eig_hermitian(B - A, tol=cfg.jacobi_tol).eigenvalues[0])
    scale = 1.0 + spectral_norm(A) + spectral_norm(B)
    return InequalityReport(kind=kind, margin=margin, scale=scale, tol=cfg.psd_tol)


def check_isometric(A, B, atol: float = 1e-8):
    n = A.shape[1]
    err = np.linalg.norm(dagger(A) @ A + dagger(B) @ B - np.eye(n))
    if err > atol:
        raise PreconditionError(f"A*A + B*B != I: ||A*A + B*B - I||_F = {err:.3e}")


def check_subisometric(A, B, atol: float = 1e-8):
    lam_max = eigvalsh(dagger(A) @ A + dagger(B) @ B)[-1]
    if lam_max > 1 + atol:
        raise PreconditionError(f"A*A + B*B is not <= I: λ_max = {lam_max:.12g}")


# --- random samplers ------------------------------------------------------
#
# All samplers take an explicit numpy Generator. The documented generator is
# PCG64; ``trial_rng(seed, t)`` derives the stream for trial ``t`` through
# SeedSequence spawn keys so results do not depend on execution order.


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def complex_gaussian(shape, rng) -> np.ndarray:
    """Standard complex Gaussian entries, ``E|z|^2 = 1``."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def sample_hermitian(n: int, scale: float = 1.0, rng=None) -> np.ndarray:
    if n < 1 or not scale > 0:
        raise ValueError("need n >= 1 and scale > 0")
    rng = rng if rng is not None else make_rng(0)
    return scale * hermitize(complex_gaussian((n, n), rng))


def sample_positive(n: int, rng=None, min_eig: float = 1e-8) -> np.ndarray:
    """Wishart ``G G*``, resampled until ``lambda_min >= min_eig``."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = rng if rng is not None else make_rng(0)
    while True:
        G = complex_gaussian((n, n), rng)
        P = hermitize(G @ G.conj().T)
        if eigvalsh(P)[0] >= min_eig:
            return P


def sample_density(n: int, rng=None, min_eig: float = 1e-8) -> np.ndarray:
    if n < 1:
        raise ValueError("need n >= 1")
    rng = rng if rng is not None else make_rng(0)
    while True:
        P = sample_positive(n, rng, min_eig=0.0)
        rho = P / np.trace(P).real
        if n == 1:
            return np.ones((1, 1), dtype=np.complex128)
        if eigvalsh(rho)[0] >= min_eig:
            return rho


def sample_unitary(n: int, rng=None) -> np.ndarray:
    """Haar unitary via phase-corrected QR."""
    rng = rng if rng is not None else make_rng(0)
    Q, R = np.linalg.qr(complex_gaussian((n, n), rng))
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def sample_isometric_pair(n: int, rng=None):
    """``(A, B)`` with ``A*A + B*B = I``: blocks of a random 2n x n isometry."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = rng if rng is not None else make_rng(0)
    while True:
        Q, R = np.linalg.qr(complex_gaussian((2 * n, n), rng))
        d = np.diagonal(R)
        Q = Q * (d / np.abs(d))
        A, B = Q[:n].copy(), Q[n:].copy()
        if np.linalg.norm(dagger(A) @ A + dagger(B) @ B - np.eye(n)) <= 1e-10:
            return A, B


def sample_contraction(n: int, rng=None) -> np.ndarray:
    """Random ``C`` with ``||C||_2 <= 1``: singular values of a Gaussian clipped at 1."""
    rng = rng if rng is not None else make_rng(0)
    G = complex_gaussian((n, n), rng) / np.sqrt(n)
    U, s, Vh = np.linalg.svd(G)
    return (U * np.minimum(s, 1.0)) @ Vh


def sample_subisometric_pair(n: int, rng=None, contraction=None):
    """``(A C, B C)`` for an isometric pair, so ``A*A + B*B = C*C <= I``."""
    rng = rng if rng is not None else make_rng(0)
    A, B = sample_isometric_pair(n, rng)
    C = sample_contraction(n, rng) if contraction is None else np.asarray(contraction, dtype=np.complex128)
    if spectral_norm(C) > 1 + 1e-12:
        raise ValueError("contraction must satisfy ||C||_2 <= 1")
    return A @ C, B @ C


def sample_spread_hermitian(n: int, rng=None, lo: float = 1e-2, hi: float = 1e2, signed: bool = False) -> np.ndarray:
    """``U diag(d) U*`` with ``d`` log-uniform in ``[lo, hi]`` (random signs if ``signed``)."""
    rng = rng if rng is not None else make_rng(0)
    d = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    if signed:
        d = d * rng.choice([-1.0, 1.0], size=n)
    U = sample_unitary(n, rng)
    return hermitize((U * d) @ U.conj().T)
