"""Command line entry point: ``rsclifford <command> ...``.

Exact objects (bases, kernels, Cayley images of rational points) print as
canonical text or JSON; numeric evaluators print blade -> float maps.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .errors import ConfigError, RejectedInputError, SingularInputError
from .verify.config import MAX_K, MAX_N, SUITE_NAMES

OPS = ("dirac", "spherical-dirac", "rk", "rks")


def _coords(text: str) -> list:
    """'1/2,0,-3' -> [Fraction(1, 2), 0, -3]; decimals stay exact too."""
    try:
        return [Fraction(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coordinate list {text!r}") from None


def _floats(text: str) -> np.ndarray:
    return np.array([float(c) for c in _coords(text)])


def _capped_n(text: str) -> int:
    n = int(text)
    if not 1 <= n <= MAX_N:
        raise argparse.ArgumentTypeError(f"n must be in [1, {MAX_N}]")
    return n


def _capped_k(text: str) -> int:
    k = int(text)
    if not 0 <= k <= MAX_K:
        raise argparse.ArgumentTypeError(f"k must be in [0, {MAX_K}]")
    return k


def _k_list(text: str) -> tuple:
    return tuple(_capped_k(s) for s in text.split(",") if s.strip())


def _exact_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else str(c)
    return repr(c) if isinstance(c, float) else str(c)


def _dense_json(arr) -> dict:
    from .clifford_core import blade_name
    arr = np.asarray(arr, dtype=float)
    return {blade_name(b): float(v) for b, v in enumerate(arr) if v != 0.0}


def _emit(args, text: str):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# subcommands

def cmd_verify(args) -> int:
    from .verify import all_passed, dump, run_all
    from .verify.config import DEFAULT, VerifyConfig, load_config
    try:
        base = load_config(args.config) if args.config else DEFAULT
        suites = None
        if args.suite is not None:
            suites = SUITE_NAMES if args.suite == "all" else (args.suite,)
        cfg = base.with_overrides(suites=suites, n=args.n, k=args.k, order=args.order, seed=args.seed,
                                  tol_pointwise=args.tol_pointwise, tol_integral=args.tol_integral,
                                  format=args.format, out=args.out)
        if not isinstance(cfg, VerifyConfig):
            raise ConfigError("config: could not build a configuration")
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2

    def progress(rep):
        flag = "PASS" if rep.passed else "FAIL"
        print(f"[{flag}] {rep.suite} k={rep.params.get('k')} ({rep.wall_ms} ms)", file=sys.stderr, flush=True)

    reports = run_all(cfg, progress if not args.quiet else None)
    text = dump(reports, cfg.format) if reports else ("[]" if cfg.format == "json" else "no suites selected")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all_passed(reports) else 1


def cmd_basis(args) -> int:
    from .monogenic_spaces import harmonic_basis, monogenic_basis
    if args.kind == "harmonic":
        B = harmonic_basis(args.n, args.k)
    else:
        B = monogenic_basis(args.n, args.k, "left" if args.kind == "monogenic-left" else "right")
    if args.format == "json":
        _emit(args, json.dumps({"kind": args.kind, "n": args.n, "k": args.k,
                                "elements": [p.to_json() for p in B]}, indent=2))
    else:
        _emit(args, "\n".join(p.render() for p in B))
    return 0


def cmd_cayley(args) -> int:
    from .clifford_core import Multivector
    from .conformal import cayley, cayley_inverse
    pt = args.point
    if args.inverse:
        res = cayley_inverse(Multivector.vector(len(pt), pt))
        coords = res.vector_coords()[:-1]
    else:
        res = cayley(Multivector.vector(len(pt) + 1, pt + [0]))
        coords = res.coords.vector_coords()
    coords = [_exact_str(c) for c in coords]
    if args.format == "json":
        _emit(args, json.dumps({"input": [_exact_str(c) for c in pt], "inverse": args.inverse, "image": coords}))
    else:
        _emit(args, ", ".join(coords))
    return 0


def cmd_apply(args) -> int:
    from .poly_algebra import CliffordPolynomial
    from .sphere_ops import rarita_schwinger, rarita_schwinger_spherical, spherical_dirac
    with open(args.input) as fh:
        f = CliffordPolynomial.from_json(json.load(fh))
    names = [b[0] for b in f.blocks]
    if args.op in ("dirac", "rk"):
        x = args.block or names[0]
        out = f.dirac_left(x) if args.op == "dirac" else rarita_schwinger(f, x, args.n, args.k)
    else:
        if "w" not in names or "u" not in names:
            raise RejectedInputError("sphere operators need blocks named w (n+1) and u (n)")
        out = spherical_dirac(f, args.n) if args.op == "spherical-dirac" else \
            rarita_schwinger_spherical(f, args.n, args.k)
    if args.format == "json":
        _emit(args, json.dumps(out.to_json(), indent=2))
    else:
        _emit(args, out.render())
    return 0


def cmd_zk(args) -> int:
    from .kernels import zk
    Z = zk(args.n, args.k)
    _emit(args, json.dumps(Z.to_json(), indent=2) if args.format == "json" else Z.render())
    return 0


def cmd_ek(args) -> int:
    from .kernels import ek
    E = ek(args.n, args.k, args.y)
    _emit(args, json.dumps(E.to_json(), indent=2) if args.format == "json" else E.render())
    return 0


def _spinor(v, n, name):
    if v is None:
        v = np.eye(n)[0]
    if len(v) != n:
        raise RejectedInputError(f"{name} needs {n} coordinates")
    return v


def _sphere_args(args):
    x, y = args.x, args.y
    if len(x) != len(y):
        raise RejectedInputError("x and y must have the same length")
    n = len(x) - 1
    if not 3 <= n <= MAX_N:
        raise RejectedInputError(f"points must lie on S^n with 3 <= n <= {MAX_N}")
    for p, name in ((x, "x"), (y, "y")):
        if abs(np.linalg.norm(p) - 1) > 1e-12:
            raise RejectedInputError(f"{name} is not a unit vector")
    return n, x, y, _spinor(args.u, n, "u"), _spinor(args.v, n, "v")


def cmd_eks(args) -> int:
    from .kernels import eks_numeric
    n, x, y, u, v = _sphere_args(args)
    if np.allclose(x, y):
        raise SingularInputError("x and y coincide")
    val = eks_numeric(n, args.k, args.representation)(x, y, u, v)
    _emit(args, json.dumps({"n": n, "k": args.k, "representation": args.representation,
                            "value": _dense_json(val)}, indent=2))
    return 0


def cmd_proj_kernel(args) -> int:
    from .kernels import canonical_section, projective_kernel_numeric
    n, x, y, u, v = _sphere_args(args)
    if np.allclose(x, y) or np.allclose(x, -y):
        raise SingularInputError("x and y represent the same projective point")
    x, y = canonical_section(x), canonical_section(y)
    val = projective_kernel_numeric(n, args.k, args.bundle)(x, y, u, v)
    _emit(args, json.dumps({"n": n, "k": args.k, "bundle": args.bundle, "x": x.tolist(), "y": y.tolist(),
                            "value": _dense_json(val)}, indent=2))
    return 0


def cmd_quad(args) -> int:
    from .integration import quad_cap, quad_geodesic_sphere
    c = args.center
    n = len(c) - 1
    if not 1 <= n <= MAX_N:
        raise RejectedInputError(f"center must lie on S^n with n <= {MAX_N}")
    rule = (quad_geodesic_sphere if args.surface == "boundary" else quad_cap)(c, args.radius, n, args.order)
    if args.format == "json":
        _emit(args, json.dumps(rule.to_json()))
    else:
        _emit(args, f"{rule.kind}: n={n} nodes={len(rule)} measure={float(np.sum(rule.weights)):.15g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rsclifford", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp, default="text"):
        sp.add_argument("--format", choices=("json", "text"), default=default)
        sp.add_argument("--out", help="write to this file instead of stdout")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=SUITE_NAMES + ("all",))
    v.add_argument("--config", help="file with key = value lines (same keys as the flags)")
    v.add_argument("--n", type=_capped_n)
    v.add_argument("--k", type=_k_list, help="one value or a comma list")
    v.add_argument("--order", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--tol-pointwise", type=float)
    v.add_argument("--tol-integral", type=float)
    v.add_argument("--format", choices=("json", "text"))
    v.add_argument("--out")
    v.add_argument("--quiet", action="store_true", help="no per-suite progress on stderr")
    v.set_defaults(fn=cmd_verify)

    b = sub.add_parser("basis", help="exact basis of H_k or M_k")
    b.add_argument("--n", type=_capped_n, required=True)
    b.add_argument("--k", type=_capped_k, required=True)
    b.add_argument("--kind", choices=("harmonic", "monogenic-left", "monogenic-right"), default="monogenic-left")
    fmt(b)
    b.set_defaults(fn=cmd_basis)

    c = sub.add_parser("cayley", help="Cayley image of a rational point (or its inverse)")
    c.add_argument("--point", type=_coords, required=True, help="comma separated, e.g. 1/2,0,3")
    c.add_argument("--inverse", action="store_true", help="point is on S^n, map back to R^n")
    fmt(c)
    c.set_defaults(fn=cmd_cayley)

    a = sub.add_parser("apply", help="apply an operator to a polynomial in JSON form")
    a.add_argument("--op", choices=OPS, required=True)
    a.add_argument("--n", type=_capped_n, required=True)
    a.add_argument("--k", type=_capped_k, required=True)
    a.add_argument("--input", required=True)
    a.add_argument("--block", help="differentiation block for dirac/rk (default: the first)")
    fmt(a, "json")
    a.set_defaults(fn=cmd_apply)

    for name, fn, helptext in (("zk", cmd_zk, "reproducing kernel Z_k"),
                               ("ek", cmd_ek, "fundamental solution E_k")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--n", type=_capped_n, default=3)
        s.add_argument("--k", type=_capped_k, default=1)
        if name == "ek":
            s.add_argument("--y", type=_coords, help="rational center (default 0)")
        fmt(s)
        s.set_defaults(fn=fn)

    for name, fn, helptext in (("eks", cmd_eks, "evaluate the spherical kernel"),
                               ("proj-kernel", cmd_proj_kernel, "evaluate a projective kernel")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--x", type=_floats, required=True)
        s.add_argument("--y", type=_floats, required=True)
        s.add_argument("--u", type=_floats)
        s.add_argument("--v", type=_floats)
        s.add_argument("--k", type=_capped_k, default=1)
        if name == "eks":
            s.add_argument("--representation", choices=("right", "left", "literal"), default="right")
        else:
            s.add_argument("--bundle", type=int, choices=(1, 2), required=True)
        s.add_argument("--out")
        s.set_defaults(fn=fn)

    q = sub.add_parser("quad", help="quadrature rule on a geodesic sphere or cap")
    q.add_argument("--surface", choices=("boundary", "cap"), required=True)
    q.add_argument("--center", type=_floats, required=True)
    q.add_argument("--radius", type=float, required=True)
    q.add_argument("--order", type=int, default=24)
    fmt(q, "json")
    q.set_defaults(fn=cmd_quad)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (RejectedInputError, SingularInputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
