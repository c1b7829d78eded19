"""Command-line front end: ``matpersp eval | verify | search``.

Exit codes: 0 success / all checks passed, 1 a mathematical violation was
found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import entropy
from .errors import MatPerspError
from .funcat import parse_function
from .jensen import check_affine_jensen, check_subhom_jensen, counterexample_search, replay_witness, verify_suite
from .linalg import DEFAULT_TOL, ToleranceConfig, as_density, as_hermitian, as_positive
from .reports import Witness
from .serialize import dumps, matrix_from_dict, matrix_to_dict
from .superop import LeftRightPair, marechal_form, perspective_form

KINDS = ("general", "hermitian", "positive", "density")
EVAL_FUNCTIONALS = (
    "vn_entropy",
    "rel_entropy",
    "lieb",
    "lieb_pq",
    "perspective",
    "marechal",
    "affine_jensen",
    "subhom_jensen",
    "witness",
)


def load_matrix(path, name, cfg: ToleranceConfig = DEFAULT_TOL):
    """Read a matrix file and enforce its ``kind`` tag."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    M = matrix_from_dict(data)
    kind = data.get("kind", "general")
    if kind not in KINDS:
        raise ValueError(f"{name}: unknown matrix kind {kind!r}")
    if kind == "hermitian":
        M = as_hermitian(M, name)
    elif kind == "positive":
        M = as_positive(M, name, cfg)
    elif kind == "density":
        M = as_density(M, name, cfg)
    return M


def save_matrix(path, M, kind="general"):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(matrix_to_dict(M, kind)))


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cfg(args) -> ToleranceConfig:
    if args.tol is None:
        return DEFAULT_TOL
    return ToleranceConfig(psd_tol=args.tol, eq_tol=min(DEFAULT_TOL.eq_tol, args.tol))


def _need(value, flag):
    if value is None:
        raise MatPerspError(f"missing required option {flag}")
    return value


def _matrix(args, attr, flag, cfg, default_n=None):
    path = getattr(args, attr)
    if path is None:
        if default_n is not None:
            return np.eye(default_n, dtype=np.complex128)
        raise MatPerspError(f"missing required option {flag}")
    return load_matrix(path, flag.lstrip("-"), cfg)


def _load_witness(path):
    with open(path, encoding="utf-8") as fh:
        return Witness.from_dict(json.load(fh))


def cmd_eval(args) -> int:
    cfg = _cfg(args)
    name, _, rest = args.functional.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, _, value = item.partition("=")
        params[key.strip()] = float(value)
    s = params.get("s", args.s)
    p = params.get("p", args.p)
    q = params.get("q", args.q)

    if name == "vn_entropy":
        value = entropy.von_neumann_entropy(_matrix(args, "rho", "--rho", cfg), cfg)
    elif name == "rel_entropy":
        value = entropy.relative_entropy(_matrix(args, "rho", "--rho", cfg), _matrix(args, "sigma", "--sigma", cfg), cfg)
    elif name in ("lieb", "lieb_pq", "perspective", "marechal"):
        A = _matrix(args, "a", "--a", cfg)
        B = _matrix(args, "b", "--b", cfg)
        if name == "lieb":
            value = entropy.lieb_functional(A, B, _matrix(args, "k", "--k", cfg, A.shape[0]), _need(s, "--s"), cfg)
        elif name == "lieb_pq":
            lp = entropy.LiebParameters(_need(p, "--p"), _need(q, "--q"))
            value = entropy.lieb_pq_functional(A, B, _matrix(args, "x", "--x", cfg, A.shape[0]), lp, cfg)
        else:
            f = parse_function(_need(args.fn, "--fn"))
            h = parse_function(_need(args.h_fn, "--h-fn")) if name == "marechal" else None
            pair = LeftRightPair.from_matrices(A, B, cfg, names=("a", "b"))
            K = _matrix(args, "k", "--k", cfg, A.shape[0])
            value = perspective_form(f, pair, K, cfg) if h is None else marechal_form(f, h, pair, K, cfg)
    elif name in ("affine_jensen", "subhom_jensen"):
        if args.witness:
            w = _load_witness(args.witness)
            f = parse_function(args.fn or w.function)
            m = w.matrices
            T1, T2, A, B = m["t1"], m["t2"], m["a"], m["b"]
        else:
            f = parse_function(_need(args.fn, "--fn"))
            T1 = _matrix(args, "t1", "--t1", cfg)
            T2 = _matrix(args, "t2", "--t2", cfg)
            A = _matrix(args, "a", "--a", cfg)
            B = _matrix(args, "b", "--b", cfg)
        check = check_affine_jensen if name == "affine_jensen" else check_subhom_jensen
        value = check(f, T1, T2, A, B, cfg).margin
    elif name == "witness":
        value = replay_witness(_load_witness(_need(args.witness, "--witness")), cfg).margin
    else:
        raise MatPerspError(f"unknown functional {args.functional!r}; known: {', '.join(EVAL_FUNCTIONALS)}")
    print(f"{value:.15g}")
    return 0


def cmd_verify(args) -> int:
    cfg = _cfg(args)
    f = parse_function(args.fn) if args.fn else None
    h = parse_function(args.h_fn) if args.h_fn else None
    report = verify_suite(args.suite, n=args.n, trials=args.trials, seed=args.seed, f=f, h=h, cfg=cfg, s=args.s, p=args.p, q=args.q)
    _write(report.dumps(), args.out)
    status = "holds" if report.holds else f"{len(report.violations)} violation(s)"
    print(
        f"{args.suite}: {status}; worst relative margin {report.worst_relative_margin:.3e} "
        f"over {args.trials} trials ({report.elapsed:.2f} s)",
        file=sys.stderr,
    )
    return 0 if report.holds else 1


def cmd_search(args) -> int:
    cfg = _cfg(args)
    f = parse_function(_need(args.fn, "--fn"))
    witness = counterexample_search(f, args.n, args.trials, args.seed, cfg)
    if witness is None:
        print("none")
        return 0
    _write(witness.dumps(), args.out)
    if args.out:
        print(f"witness: trial {witness.trial}, margin {witness.margin:.6e} -> {args.out}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matpersp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--fn", help="function id, e.g. xlogx or neg_power:s=0.5")
        p.add_argument("--h-fn", dest="h_fn", help="denominator function id for generalized perspectives")
        p.add_argument("--s", type=float)
        p.add_argument("--p", type=float)
        p.add_argument("--q", type=float)
        p.add_argument("--tol", type=float, help="Loewner tolerance psd_tol (default 1e-9)")
        p.add_argument("--out", help="output path (default: stdout)")

    ev = sub.add_parser("eval", help="evaluate a functional on matrix files")
    ev.add_argument("functional", help=", ".join(EVAL_FUNCTIONALS))
    for flag in ("rho", "sigma", "a", "b", "k", "x", "t1", "t2"):
        ev.add_argument(f"--{flag}", metavar="PATH")
    ev.add_argument("--witness", metavar="PATH", help="witness file to replay")
    common(ev)
    ev.set_defaults(func=cmd_eval)

    ve = sub.add_parser("verify", help="run a randomized verification suite")
    ve.add_argument("suite")
    ve.add_argument("--n", type=int, default=3)
    ve.add_argument("--trials", type=int, default=500)
    ve.add_argument("--seed", type=int, default=0)
    common(ve)
    ve.set_defaults(func=cmd_verify)

    se = sub.add_parser("search", help="search for an operator-convexity counterexample")
    se.add_argument("--n", type=int, default=2)
    se.add_argument("--trials", type=int, default=100000)
    se.add_argument("--seed", type=int, default=0)
    common(se)
    se.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MatPerspError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
