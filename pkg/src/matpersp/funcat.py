"""Scalar function catalog with operator-convexity metadata.

Functions are addressed by string ids such as ``xlogx``,
``neg_power:s=0.5`` or ``affine:a=1,b=-2`` (see :func:`parse_function`).
The ``op_class`` tag is trusted metadata; :mod:`matpersp.jensen` audits it
empirically.

Also holds the commutative baselines (classical perspective, Shannon
entropy, Kullback-Leibler divergence) used as oracles for the matrix code.
Logarithms are natural throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError, ParameterError


class OpClass(str, enum.Enum):
    CONVEX = "operator-convex"
    CONCAVE = "operator-concave"
    NOT_CONVEX = "not-operator-convex"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class Interval:
    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = False
    hi_closed: bool = False

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"

    def contains(self, x: float, floor: float = 0.0) -> bool:
        """Scalar membership; open endpoints exclude a ``floor``-wide band."""
        if math.isfinite(self.lo):
            if x < self.lo if self.lo_closed else (x <= self.lo or x - self.lo < floor):
                return False
        if math.isfinite(self.hi):
            if x > self.hi if self.hi_closed else (x >= self.hi or self.hi - x < floor):
                return False
        return True

    def admit(self, x, floor: float, what: str = "value") -> np.ndarray:
        """Validate an array of (eigen)values against the interval.

        Open endpoints reject anything within ``floor`` of the boundary.
        Closed endpoints tolerate rounding of ``floor * (1 + max|x|)`` past
        the boundary and clamp onto it.
        """
        x = np.asarray(x, dtype=np.float64)
        slack = floor * (1.0 + float(np.max(np.abs(x)))) if x.size else 0.0
        if math.isfinite(self.lo):
            bad = x < self.lo - slack if self.lo_closed else x - self.lo < floor
            if np.any(bad):
                raise DomainError(f"{what} {float(np.min(x)):.6e} outside domain {self}")
            if self.lo_closed:
                x = np.maximum(x, self.lo)
        if math.isfinite(self.hi):
            bad = x > self.hi + slack if self.hi_closed else self.hi - x < floor
            if np.any(bad):
                raise DomainError(f"{what} {float(np.max(x)):.6e} outside domain {self}")
            if self.hi_closed:
                x = np.minimum(x, self.hi)
        return x

    def shifted(self, c: float) -> "Interval":
        return Interval(self.lo - c, self.hi - c, self.lo_closed, self.hi_closed)


REAL_LINE = Interval()
NONNEG = Interval(0.0, math.inf, lo_closed=True)
POSITIVE = Interval(0.0, math.inf)


@dataclass(frozen=True)
class ScalarFunctionSpec:
    """A scalar function ``f`` together with its domain and classification.

    ``affine`` marks functions that are simultaneously operator convex and
    operator concave (identity, affine maps, constants).
    """

    name: str
    fn: Callable = field(compare=False, repr=False)
    domain: Interval = REAL_LINE
    op_class: OpClass = OpClass.UNCLASSIFIED
    value_at_zero: float | None = None
    params: tuple = ()
    affine: bool = False

    @property
    def id(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v!r}" for k, v in self.params)

    @property
    def operator_convex(self) -> bool:
        return self.op_class is OpClass.CONVEX or self.affine

    @property
    def operator_concave(self) -> bool:
        return self.op_class is OpClass.CONCAVE or self.affine

    def param(self, key):
        return dict(self.params)[key]

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = np.asarray(self.fn(x), dtype=np.float64)
        if self.value_at_zero is not None:
            y = np.where(x == 0.0, self.value_at_zero, y)
        return y


def _xlogx(x):
    return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def identity():
    return ScalarFunctionSpec("identity", lambda x: x + 0.0, REAL_LINE, OpClass.CONVEX, 0.0, affine=True)


def affine(a: float = 1.0, b: float = 1.0):
    a, b = float(a), float(b)
    return ScalarFunctionSpec("affine", lambda x: a + b * x, REAL_LINE, OpClass.CONVEX, a, (("a", a), ("b", b)), affine=True)


def constant(a: float = 1.0):
    a = float(a)
    return ScalarFunctionSpec("constant", lambda x: np.full_like(x, a), REAL_LINE, OpClass.CONVEX, a, (("a", a),), affine=True)


def square():
    return ScalarFunctionSpec("square", lambda x: x * x, REAL_LINE, OpClass.CONVEX, 0.0)


def quartic():
    return ScalarFunctionSpec("quartic", lambda x: x**4, REAL_LINE, OpClass.NOT_CONVEX, 0.0)


def exp():
    return ScalarFunctionSpec("exp", np.exp, REAL_LINE, OpClass.NOT_CONVEX, 1.0)


def xlogx():
    return ScalarFunctionSpec("xlogx", _xlogx, NONNEG, OpClass.CONVEX, 0.0)


def neg_power(s: float = 0.5):
    """``-x**s`` on ``[0, inf)``; operator convex for ``0 < s < 1``."""
    s = float(s)
    if not 0.0 < s < 1.0:
        raise ParameterError(f"neg_power requires 0 < s < 1, got s={s}")
    return ScalarFunctionSpec("neg_power", lambda x: -np.power(x, s), NONNEG, OpClass.CONVEX, 0.0, (("s", s),))


def power(t: float = 0.5):
    """``x**t`` on ``[0, inf)``.

    Operator concave for ``0 < t <= 1``, operator convex for ``1 <= t <= 2``
    and neither for ``t > 2``.
    """
    t = float(t)
    if not t > 0.0:
        raise ParameterError(f"power requires t > 0, got t={t}")
    if t < 1.0:
        cls = OpClass.CONCAVE
    elif t <= 2.0:
        cls = OpClass.CONVEX
    else:
        cls = OpClass.NOT_CONVEX
    fn = (lambda x: x + 0.0) if t == 1.0 else (lambda x: np.power(x, t))
    return ScalarFunctionSpec("power", fn, NONNEG, cls, 0.0, (("t", t),), affine=(t == 1.0))


def neg_log():
    return ScalarFunctionSpec("neg_log", lambda x: -np.log(x), POSITIVE, OpClass.CONVEX)


def log():
    return ScalarFunctionSpec("log", np.log, POSITIVE, OpClass.CONCAVE)


def inverse():
    return ScalarFunctionSpec("inverse", lambda x: 1.0 / x, POSITIVE, OpClass.CONVEX)


REGISTRY = {
    "identity": identity,
    "affine": affine,
    "constant": constant,
    "square": square,
    "quartic": quartic,
    "exp": exp,
    "xlogx": xlogx,
    "neg_power": neg_power,
    "power": power,
    "neg_log": neg_log,
    "log": log,
    "inverse": inverse,
}


def catalog() -> list[ScalarFunctionSpec]:
    """Every registered function at its default parameters."""
    return [factory() for factory in REGISTRY.values()]


def convex_catalog() -> list[ScalarFunctionSpec]:
    """Operator-convex entries with representative parameter values."""
    return [
        identity(),
        affine(1.0, -2.0),
        constant(1.0),
        square(),
        xlogx(),
        neg_power(0.25),
        neg_power(0.5),
        neg_power(0.75),
        power(1.5),
        power(2.0),
        neg_log(),
        inverse(),
    ]


def parse_function(text: str) -> ScalarFunctionSpec:
    """Resolve ids like ``xlogx``, ``neg_power:s=0.5``, ``affine:a=1,b=-2``."""
    name, _, rest = text.strip().partition(":")
    if name not in REGISTRY:
        raise ConfigError(f"unknown function id {name!r}; known: {', '.join(REGISTRY)}")
    kwargs = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ConfigError(f"malformed parameter {item!r} in {text!r}")
            try:
                kwargs[key.strip()] = float(value)
            except ValueError:
                raise ConfigError(f"parameter {key!r} is not a number: {value!r}") from None
    try:
        return REGISTRY[name](**kwargs)
    except TypeError:
        raise ConfigError(f"invalid parameters for {name!r}: {sorted(kwargs)}") from None


def eval_scalar(f: ScalarFunctionSpec, x: float, floor: float = 1e-12) -> float:
    x = float(x)
    if not f.domain.contains(x, floor):
        raise DomainError(f"{x!r} outside domain {f.domain} of {f.id}")
    return float(f(x))


def shift_reduce(f: ScalarFunctionSpec, c: float) -> ScalarFunctionSpec:
    """``F(t) = f(t + c) - f(c)`` on the translated domain; ``F(0) = 0``."""
    c = float(c)
    fc = eval_scalar(f, c)

    def shifted(t):
        return f(t + c) - fc

    return ScalarFunctionSpec(
        f"shift[{f.id}]",
        shifted,
        f.domain.shifted(c),
        f.op_class,
        0.0,
        (("c", c),),
        affine=f.affine,
    )


# --- commutative baselines ------------------------------------------------


def as_probability(p, name="p") -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError(f"{name} must be a nonempty vector")
    if np.any(p <= 0):
        raise DomainError(f"{name} must be strictly positive")
    if abs(p.sum() - 1.0) > 1e-12:
        raise DomainError(f"{name} must sum to 1, got {p.sum():.17g}")
    return p


def classical_perspective(f: ScalarFunctionSpec, x: float, t: float) -> float:
    """``g(x, t) = f(x / t) * t`` for ``t > 0``."""
    if not t > 0:
        raise DomainError(f"perspective requires t > 0, got {t}")
    return eval_scalar(f, x / t) * t


def classical_entropy(p) -> float:
    p = as_probability(p)
    return float(-np.sum(p * np.log(p)))


def classical_relative_entropy(p, q) -> float:
    """``sum_i p_i log p_i - p_i log q_i``, the divergence of ``p`` from ``q``."""
    p = as_probability(p, "p")
    q = as_probability(q, "q")
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.size} vs {q.size}")
    return float(np.sum(p * np.log(p) - p * np.log(q)))
