"""Result records for inequality checks and randomized verification runs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .serialize import dumps, matrix_from_dict, matrix_to_dict

FORMAT_WITNESS = "matpersp.witness/1"
FORMAT_REPORT = "matpersp.report/1"


@dataclass(frozen=True)
class InequalityReport:
    """One checked inequality ``lhs <= rhs``.

    ``margin`` is ``lambda_min(rhs - lhs)`` for Loewner checks and
    ``rhs - lhs`` for scalar checks. The check holds when
    ``margin >= -tol * scale``.
    """

    kind: str
    margin: float
    scale: float
    tol: float

    @property
    def holds(self) -> bool:
        return self.margin >= -self.tol * self.scale

    @property
    def relative_margin(self) -> float:
        return self.margin / self.scale

    def to_dict(self):
        return {
            "kind": self.kind,
            "margin": self.margin,
            "scale": self.scale,
            "tol": self.tol,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class Witness:
    """Concrete inputs violating an inequality.

    ``matrices`` maps role names (``t1``, ``t2``, ``a``, ``b`` for Jensen
    checks; ``left1``, ``right1``, ``left2``, ``right2``, ``k`` for joint
    convexity checks) to arrays. ``params`` holds scalars such as the
    mixing weight ``c`` or the shift point.
    """

    kind: str
    function: str
    margin: float
    scale: float
    trial: int
    matrices: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "format": FORMAT_WITNESS,
            "kind": self.kind,
            "function": self.function,
            "trial": self.trial,
            "margin": self.margin,
            "scale": self.scale,
            "params": {k: self.params[k] for k in sorted(self.params)},
            "matrices": {k: matrix_to_dict(self.matrices[k]) for k in sorted(self.matrices)},
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("format") != FORMAT_WITNESS:
            raise ValueError(f"not a witness object (format={d.get('format')!r})")
        return cls(
            kind=d["kind"],
            function=d["function"],
            margin=float(d["margin"]),
            scale=float(d["scale"]),
            trial=int(d["trial"]),
            matrices={k: matrix_from_dict(v) for k, v in d["matrices"].items()},
            params=dict(d.get("params", {})),
        )

    def dumps(self):
        return dumps(self.to_dict())


@dataclass
class VerificationReport:
    """Aggregate of a seeded randomized suite.

    ``worst_margin`` is the minimum trial margin and ``worst_relative_margin``
    the minimum of ``margin / scale``; the suite holds iff no trial violated
    its tolerance. ``elapsed`` is kept in memory only; it is excluded from
    the serialized form so reruns produce identical bytes.
    """

    suite: str
    function: str | None
    n: int
    trials: int
    seed: int
    tolerances: dict
    worst_margin: float = np.inf
    worst_relative_margin: float = np.inf
    worst_trial: int = -1
    max_route_gap: float | None = None
    violations: list = field(default_factory=list)
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations

    def record(self, trial: int, report: InequalityReport):
        if report.relative_margin < self.worst_relative_margin:
            self.worst_relative_margin = report.relative_margin
            self.worst_trial = trial
        self.worst_margin = min(self.worst_margin, report.margin)

    def to_dict(self):
        def num(x):
            return None if x is None or not np.isfinite(x) else float(x)

        out = {
            "format": FORMAT_REPORT,
            "suite": self.suite,
            "function": self.function,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "holds": self.holds,
            "worst_margin": num(self.worst_margin),
            "worst_relative_margin": num(self.worst_relative_margin),
            "worst_trial": self.worst_trial,
            "max_route_gap": num(self.max_route_gap),
        }
        for k in sorted(self.extra):
            out[k] = self.extra[k]
        out["violations"] = [w.to_dict() for w in sorted(self.violations, key=lambda w: w.trial)]
        return out

    def dumps(self):
        return dumps(self.to_dict())
