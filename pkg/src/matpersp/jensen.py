"""Randomized verification of Hansen-Pedersen-Jensen and joint convexity inequalities.

Checkers return :class:`~matpersp.reports.InequalityReport`; the
:func:`verify_suite` driver samples inputs with per-trial generators
``trial_rng(seed, t)`` and aggregates a
:class:`~matpersp.reports.VerificationReport`. Suite identifiers::

    affine_jensen            f(A*T1A + B*T2B) <= A*f(T1)A + B*f(T2)B, A*A + B*B = I
    subhom_jensen            same with A*A + B*B <= I and f(0) <= 0
    shift_route              affine inequality rebuilt from the shifted F(t) = f(t+c) - f(c)
    joint_convexity:<id>     scalar functional, <id> in FUNCTIONALS
    loewner_convexity[:<f>]  perspective (or f Δ h) superoperators in Loewner order
    counterexample[:<f>]     search for an affine_jensen violation
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import entropy, funcat
from .errors import ConfigError, DomainError, PreconditionError
from .funcat import ScalarFunctionSpec, parse_function, shift_reduce
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_hermitian,
    check_isometric,
    check_subisometric,
    complex_gaussian,
    dagger,
    hermitize,
    loewner_leq,
    matrix_function,
    sample_density,
    sample_hermitian,
    sample_isometric_pair,
    sample_positive,
    sample_spread_hermitian,
    sample_subisometric_pair,
    trial_rng,
)
from .reports import InequalityReport, VerificationReport, Witness
from .superop import LeftRightPair, marechal_form, marechal_superop_matrix

ISOMETRY_ATOL = 1e-8
ROUTE_TOL = 1e-9
COUNTEREXAMPLE_FACTOR = 10.0


# --- Jensen-type operator inequalities ---------------------------------------


def _jensen_sides(f, T1, T2, A, B, cfg):
    T1 = as_hermitian(T1, "T1")
    T2 = as_hermitian(T2, "T2")
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if not (T1.shape == T2.shape == A.shape == B.shape):
        raise ValueError("T1, T2, A, B must share one square shape")
    lhs = matrix_function(f, hermitize(dagger(A) @ T1 @ A + dagger(B) @ T2 @ B), cfg)
    rhs = hermitize(dagger(A) @ matrix_function(f, T1, cfg) @ A + dagger(B) @ matrix_function(f, T2, cfg) @ B)
    return lhs, rhs


def check_affine_jensen(f, T1, T2, A, B, cfg: ToleranceConfig = DEFAULT_TOL) -> InequalityReport:
    """``f(A*T1A + B*T2B) <= A*f(T1)A + B*f(T2)B`` under ``A*A + B*B = I``."""
    check_isometric(np.asarray(A), np.asarray(B), ISOMETRY_ATOL)
    lhs, rhs = _jensen_sides(f, T1, T2, A, B, cfg)
    return loewner_leq(lhs, rhs, cfg, kind="affine_jensen")


def _require_subhomogeneous(f):
    if f.value_at_zero is None:
        raise PreconditionError(f"{f.id}: 0 is not in the domain, f(0) <= 0 cannot hold")
    if f.value_at_zero > 0:
        raise PreconditionError(f"{f.id}: f(0) = {f.value_at_zero} > 0")


def check_subhom_jensen(f, T1, T2, A, B, cfg: ToleranceConfig = DEFAULT_TOL) -> InequalityReport:
    """Jensen inequality for contractive pairs ``A*A + B*B <= I``; needs ``f(0) <= 0``."""
    _require_subhomogeneous(f)
    check_subisometric(np.asarray(A), np.asarray(B), ISOMETRY_ATOL)
    lhs, rhs = _jensen_sides(f, T1, T2, A, B, cfg)
    return loewner_leq(lhs, rhs, cfg, kind="subhom_jensen")


def derive_affine_via_shift(f, c, T1, T2, A, B, cfg: ToleranceConfig = DEFAULT_TOL) -> InequalityReport:
    """Rebuild the affine inequality from the contractive one.

    With ``F(t) = f(t + c) - f(c)`` (so ``F(0) = 0``) and ``Tj' = Tj - cI``,
    check ``F(A*T1'A + B*T2'B) <= A*F(T1')A + B*F(T2')B``, then add
    ``f(c) I = f(c)(A*A + B*B)`` to both sides. The returned margin is that of
    the reassembled inequality and should match :func:`check_affine_jensen`.
    """
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    check_isometric(A, B, ISOMETRY_ATOL)
    c = float(c)
    dom = f.domain
    if not (dom.lo < c < dom.hi):
        raise DomainError(f"shift point c={c} is not interior to {dom}")
    F = shift_reduce(f, c)
    n = A.shape[0]
    eye = np.eye(n)
    T1s = as_hermitian(T1, "T1") - c * eye
    T2s = as_hermitian(T2, "T2") - c * eye
    check_subhom_jensen(F, T1s, T2s, A, B, cfg)  # validates hypotheses of the contractive form
    lhs_F, rhs_F = _jensen_sides(F, T1s, T2s, A, B, cfg)
    fc = funcat.eval_scalar(f, c)
    lhs = lhs_F + fc * eye
    rhs = rhs_F + fc * hermitize(dagger(A) @ A + dagger(B) @ B)
    return loewner_leq(lhs, rhs, cfg, kind="shift_route")


# --- joint convexity ---------------------------------------------------------


@dataclass(frozen=True)
class Functional:
    """A two-argument scalar functional ``phi(P, Q)`` and the sense it is tested in."""

    id: str
    evaluate: Callable
    sense: str  # "convex" or "concave"

    def __call__(self, P, Q) -> float:
        return self.evaluate(P, Q)

    def negated(self) -> "Functional":
        ev = self.evaluate
        sense = "concave" if self.sense == "convex" else "convex"
        return Functional(f"neg[{self.id}]", lambda P, Q: -ev(P, Q), sense)


# name -> (needs K, needs f, needs h, sense, argument sampler)
FUNCTIONALS = {
    "rel_entropy": (False, False, False, "convex", "density"),
    "lieb": (True, False, False, "concave", "positive"),
    "lieb_pq": (True, False, False, "concave", "positive"),
    "perspective": (True, True, False, "convex", "positive"),
    "marechal": (True, True, True, "convex", "positive"),
}


def _parse_params(text, allowed):
    params = {}
    for item in filter(None, text.split(",")):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in allowed:
            raise ConfigError(f"bad parameter {item!r}; expected {', '.join(allowed)}")
        try:
            params[key] = float(value)
        except ValueError:
            raise ConfigError(f"parameter {key!r} is not a number: {value!r}") from None
    return params


def parse_functional(text: str, s=None, p=None, q=None):
    """Split ``lieb:s=0.5`` into ``("lieb", {"s": 0.5})``; CLI-style overrides fill gaps."""
    name, _, rest = text.partition(":")
    if name not in FUNCTIONALS:
        raise ConfigError(f"unknown functional {name!r}; known: {', '.join(FUNCTIONALS)}")
    allowed = {"lieb": ("s",), "lieb_pq": ("p", "q")}.get(name, ())
    params = _parse_params(rest, allowed)
    for key, value in (("s", s), ("p", p), ("q", q)):
        if key in allowed and key not in params and value is not None:
            params[key] = float(value)
    missing = [k for k in allowed if k not in params]
    if missing:
        raise ConfigError(f"functional {name!r} needs parameter(s) {', '.join(missing)}")
    return name, params


def functional_id(name, params):
    if not params:
        return name
    return name + ":" + ",".join(f"{k}={params[k]!r}" for k in sorted(params))


def make_functional(name, params=None, K=None, f=None, h=None, cfg: ToleranceConfig = DEFAULT_TOL) -> Functional:
    """Bind a registered functional to its auxiliary matrix and functions."""
    params = dict(params or {})
    needs_k, needs_f, needs_h, sense, _ = FUNCTIONALS[name]
    if needs_k and K is None:
        raise ConfigError(f"functional {name!r} needs an auxiliary matrix K")
    if needs_f and f is None:
        raise ConfigError(f"functional {name!r} needs a function (--fn)")
    if needs_h and h is None:
        raise ConfigError(f"functional {name!r} needs a denominator function (--h-fn)")
    fid = functional_id(name, params)
    if name == "rel_entropy":
        ev = lambda P, Q: entropy.relative_entropy(P, Q, cfg)  # noqa: E731
    elif name == "lieb":
        s = params["s"]
        entropy._check_s(s)
        ev = lambda P, Q: entropy.lieb_functional(P, Q, K, s, cfg)  # noqa: E731
    elif name == "lieb_pq":
        lp = entropy.LiebParameters(params["p"], params["q"])
        ev = lambda P, Q: entropy.lieb_pq_functional(P, Q, K, lp, cfg)  # noqa: E731
    elif name == "perspective":
        ev = lambda P, Q: marechal_form(f, None, LeftRightPair.from_matrices(P, Q, cfg), K, cfg)  # noqa: E731
        fid = f"{fid}[{f.id}]"
    else:
        ev = lambda P, Q: marechal_form(f, h, LeftRightPair.from_matrices(P, Q, cfg), K, cfg)  # noqa: E731
        fid = f"{fid}[{f.id};{h.id}]"
    return Functional(fid, ev, sense)


def _mix(c, X1, X2):
    return c * np.asarray(X1) + (1.0 - c) * np.asarray(X2)


def check_joint_convexity_scalar(functional: Functional, first, second, c: float, cfg: ToleranceConfig = DEFAULT_TOL) -> InequalityReport:
    """Scalar joint convexity (or concavity) at mixing weight ``c``.

    ``first`` and ``second`` are ``(P, Q)`` argument pairs. The convex margin
    is ``c phi(P1,Q1) + (1-c) phi(P2,Q2) - phi(P, Q)`` at the mixed point;
    for concave functionals it is negated.
    """
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {c}")
    (P1, Q1), (P2, Q2) = first, second
    a = c * functional(P1, Q1)
    b = (1.0 - c) * functional(P2, Q2)
    m = functional(_mix(c, P1, P2), _mix(c, Q1, Q2))
    margin = a + b - m
    if functional.sense == "concave":
        margin = -margin
    scale = 1.0 + abs(a) + abs(b) + abs(m)
    return InequalityReport(kind=f"joint_convexity:{functional.id}", margin=margin, scale=scale, tol=cfg.psd_tol)


def check_joint_convexity_loewner(f, first, second, c: float, h=None, cfg: ToleranceConfig = DEFAULT_TOL) -> InequalityReport:
    """``g(L, R) <= c g(L1, R1) + (1-c) g(L2, R2)`` on the ``n^2``-dimensional space.

    ``g`` is the perspective of ``f``, or ``f Δ h`` when ``h`` is given.
    """
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {c}")
    (P1, Q1), (P2, Q2) = first, second

    def g(P, Q):
        return marechal_superop_matrix(f, h, LeftRightPair.from_matrices(P, Q, cfg), cfg)

    rhs = c * g(P1, Q1) + (1.0 - c) * g(P2, Q2)
    lhs = g(_mix(c, P1, P2), _mix(c, Q1, Q2))
    return loewner_leq(lhs, rhs, cfg, kind="loewner_convexity")


# --- replay ------------------------------------------------------------------


def replay_witness(w: Witness, cfg: ToleranceConfig = DEFAULT_TOL) -> InequalityReport:
    """Re-run the check recorded in a witness."""
    m = w.matrices
    kind, _, rest = w.kind.partition(":")
    if kind == "affine_jensen":
        return check_affine_jensen(parse_function(w.function), m["t1"], m["t2"], m["a"], m["b"], cfg)
    if kind == "subhom_jensen":
        return check_subhom_jensen(parse_function(w.function), m["t1"], m["t2"], m["a"], m["b"], cfg)
    if kind == "shift_route":
        return derive_affine_via_shift(parse_function(w.function), w.params["c"], m["t1"], m["t2"], m["a"], m["b"], cfg)
    first, second = (m["left1"], m["right1"]), (m["left2"], m["right2"])
    f = parse_function(w.params["f"]) if "f" in w.params else None
    h = parse_function(w.params["h"]) if "h" in w.params else None
    if kind == "joint_convexity":
        name, params = parse_functional(w.params["functional"])
        fn = make_functional(name, params, K=m.get("k"), f=f, h=h, cfg=cfg)
        return check_joint_convexity_scalar(fn, first, second, w.params["c"], cfg)
    if kind == "loewner_convexity":
        return check_joint_convexity_loewner(f, first, second, w.params["c"], h=h, cfg=cfg)
    raise ConfigError(f"cannot replay witness of kind {w.kind!r}")


# --- randomized drivers ------------------------------------------------------


def _sample_operand(f: ScalarFunctionSpec, n, rng, spread=False):
    """A Hermitian matrix with spectrum inside ``f``'s domain."""
    dom = f.domain
    if math.isinf(dom.lo) and math.isinf(dom.hi):
        return sample_spread_hermitian(n, rng, signed=True) if spread else sample_hermitian(n, 1.0, rng)
    if dom.lo == 0.0 and math.isinf(dom.hi):
        return sample_spread_hermitian(n, rng) if spread else sample_positive(n, rng)
    raise ConfigError(f"no sampler for domain {dom} of {f.id}")


def _mixing_weight(trial, rng):
    forced = (0.0, 0.5, 1.0)
    return forced[trial] if trial < len(forced) else float(rng.uniform(0.0, 1.0))


def _shift_point(f, rng):
    dom = f.domain
    if math.isinf(dom.lo):
        return float(rng.uniform(-1.0, 1.0))
    return float(dom.lo + rng.uniform(0.01, 1.0))


def _require(f, suite):
    if f is None:
        raise ConfigError(f"suite {suite!r} needs a function")
    return f


def parse_suite(suite: str, f=None):
    """Split a suite id into ``(kind, function-or-functional text)``."""
    kind, _, rest = suite.partition(":")
    known = ("affine_jensen", "subhom_jensen", "shift_route", "joint_convexity", "loewner_convexity", "counterexample")
    if kind not in known:
        raise ConfigError(f"unknown suite {suite!r}; known: {', '.join(known)}")
    if kind == "joint_convexity" and not rest:
        raise ConfigError("joint_convexity needs a functional, e.g. joint_convexity:rel_entropy")
    if kind in ("affine_jensen", "subhom_jensen", "shift_route") and rest:
        raise ConfigError(f"suite {kind!r} takes its function from --fn, not the suite id")
    return kind, rest


def verify_suite(
    suite: str,
    n: int,
    trials: int,
    seed: int,
    f: ScalarFunctionSpec | None = None,
    h: ScalarFunctionSpec | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
    s=None,
    p=None,
    q=None,
) -> VerificationReport:
    """Run a registered suite; deterministic in ``(suite, n, trials, seed, f, h, cfg)``."""
    kind, rest = parse_suite(suite, f)
    if kind in ("loewner_convexity", "counterexample") and rest:
        f = parse_function(rest)
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError(f"trials must be a positive integer, got {trials!r}")
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"n must be a positive integer, got {n!r}")

    fname = None
    if kind == "joint_convexity":
        fname_base, params = parse_functional(rest, s=s, p=p, q=q)
        needs_k, needs_f, needs_h, _, sampler = FUNCTIONALS[fname_base]
        if needs_f:
            _require(f, suite)
        if needs_h and h is None:
            raise ConfigError(f"suite {suite!r} needs --h-fn")
        # validate parameters once, before any sampling
        make_functional(fname_base, params, K=np.eye(n), f=f, h=h, cfg=cfg)
        fname = functional_id(fname_base, params)
        if needs_f:
            fname += f"[{f.id}]" if not needs_h else f"[{f.id};{h.id}]"
    else:
        _require(f, suite)
        fname = f.id if h is None else f"{f.id};{h.id}"
        if kind == "subhom_jensen":
            try:
                _require_subhomogeneous(f)
            except PreconditionError as exc:
                raise ConfigError(str(exc)) from None
        if kind == "counterexample" and n < 2:
            raise ConfigError("counterexample search needs n >= 2")

    report = VerificationReport(suite=suite, function=fname, n=n, trials=trials, seed=seed, tolerances=cfg.to_dict())
    start = time.perf_counter()

    if kind == "counterexample":
        witness = _search(f, n, trials, seed, cfg, report)
        if witness is not None:
            report.violations.append(witness)
        report.elapsed = time.perf_counter() - start
        return report

    if kind == "shift_route":
        report.max_route_gap = 0.0

    for t in range(trials):
        rng = trial_rng(seed, t)
        spread = t % 2 == 1
        matrices, wparams = {}, {}
        if kind in ("affine_jensen", "subhom_jensen", "shift_route"):
            if kind == "subhom_jensen":
                A, B = sample_subisometric_pair(n, rng)
            else:
                A, B = sample_isometric_pair(n, rng)
            T1 = _sample_operand(f, n, rng, spread)
            T2 = _sample_operand(f, n, rng, spread)
            matrices = {"a": A, "b": B, "t1": T1, "t2": T2}
            if kind == "affine_jensen":
                rep = check_affine_jensen(f, T1, T2, A, B, cfg)
                ok = rep.holds
            elif kind == "subhom_jensen":
                rep = check_subhom_jensen(f, T1, T2, A, B, cfg)
                ok = rep.holds
            else:
                c = _shift_point(f, rng)
                wparams["c"] = c
                direct = check_affine_jensen(f, T1, T2, A, B, cfg)
                rep = derive_affine_via_shift(f, c, T1, T2, A, B, cfg)
                gap = abs(rep.margin - direct.margin) / direct.scale
                report.max_route_gap = max(report.max_route_gap, gap)
                ok = rep.holds and direct.holds and gap <= ROUTE_TOL
        else:
            c = _mixing_weight(t, rng)
            wparams["c"] = c
            if kind == "joint_convexity":
                sample = sample_density if sampler == "density" else sample_positive
                P1, Q1, P2, Q2 = (sample(n, rng) for _ in range(4))
                K = complex_gaussian((n, n), rng) if needs_k else None
                fn = make_functional(fname_base, params, K=K, f=f, h=h, cfg=cfg)
                rep = check_joint_convexity_scalar(fn, (P1, Q1), (P2, Q2), c, cfg)
                wparams["functional"] = functional_id(fname_base, params)
            else:
                P1, Q1, P2, Q2 = (sample_density(n, rng) for _ in range(4))
                K = None
                rep = check_joint_convexity_loewner(f, (P1, Q1), (P2, Q2), c, h=h, cfg=cfg)
            matrices = {"left1": P1, "right1": Q1, "left2": P2, "right2": Q2}
            if K is not None:
                matrices["k"] = K
            if f is not None:
                wparams["f"] = f.id
            if h is not None:
                wparams["h"] = h.id
            ok = rep.holds
        report.record(t, rep)
        if not ok:
            report.violations.append(
                Witness(kind=rep.kind, function=fname, margin=rep.margin, scale=rep.scale, trial=t, matrices=matrices, params=wparams)
            )
    report.elapsed = time.perf_counter() - start
    return report


def _search(f, n, trials, seed, cfg, report=None):
    threshold = COUNTEREXAMPLE_FACTOR * cfg.psd_tol
    tight = cfg.tightened()
    for t in range(trials):
        rng = trial_rng(seed, t)
        A, B = sample_isometric_pair(n, rng)
        spread = t % 2 == 1
        T1 = _sample_operand(f, n, rng, spread)
        T2 = _sample_operand(f, n, rng, spread)
        rep = check_affine_jensen(f, T1, T2, A, B, cfg)
        if report is not None:
            report.record(t, rep)
        if rep.margin < -threshold * rep.scale:
            again = check_affine_jensen(f, T1, T2, A, B, tight)
            if again.margin < -threshold * again.scale:
                if report is not None:
                    report.extra["trials_run"] = t + 1
                return Witness(kind="affine_jensen", function=f.id, margin=again.margin, scale=again.scale, trial=t,
                               matrices={"a": A, "b": B, "t1": T1, "t2": T2})
    if report is not None:
        report.extra["trials_run"] = trials
    return None


def counterexample_search(f, n: int, trials: int, seed: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Witness | None:
    """First verified violation of the affine Jensen inequality, or ``None``.

    A candidate must violate by more than ``10 * psd_tol * scale`` and keep
    doing so when recomputed with a 10x tighter eigensolver threshold.
    """
    if n < 2:
        raise ConfigError("counterexample search needs n >= 2")
    return _search(f, n, trials, seed, cfg)
