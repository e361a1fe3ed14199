"""Command-line front end: run an experiment and write CSV."""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction

import numpy as np

from projcocycle.analysis import (
    boundedness_bounds,
    drift_grid,
    drift_sequence,
    enlarged_drift_sequence,
    reduce_with_conjugacy,
)
from projcocycle.enlarged import Triple, diagonal_probe, enlarged_cocycle
from projcocycle.geometry import TWO_PI, NumericalError, canon
from projcocycle.mapspec import MapSpecError, parse_map_spec
from projcocycle.projective import cocycle_iterates, projective_derivative

MAP_HELP = (
    "map spec, e.g. 'rot:0.5', 'arnold:a=0.8,b=0.5', 'mobius:kappa=0,sigma=0.3+0i', "
    "'comp(f,g)', 'inv(f)', 'pow(f,n)', 'conj(phi,f)'"
)

COLUMNS = {
    "fit": [
        ("theta", "base point"),
        ("value", "f(theta) in [0, 2pi)"),
        ("d1", "first derivative of f at theta"),
        ("d2", "second derivative of f at theta"),
        ("kappa", "rotation part of the osculating Möbius map"),
        ("sigma_re", "real part of its disk point sigma"),
        ("sigma_im", "imaginary part of sigma"),
    ],
    "iterate": [
        ("n", "iterate index"),
        ("theta_n", "f^n(theta)"),
        ("kappa", "rotation part of the projective derivative of f^n at theta"),
        ("sigma_re", "real part of sigma"),
        ("sigma_im", "imaginary part of sigma"),
        ("r", "|sigma|"),
    ],
    "drift": [
        ("theta", "base point (only with --grid or --random)"),
        ("n", "iterate index"),
        ("d_n", "first derivative of f^n at theta"),
        ("delta_n", "second derivative of f^n at theta"),
        ("r_n", "|sigma| of the projective derivative of f^n"),
        ("dist", "hyperbolic distance from 0 to sigma, log((1+r)/(1-r))"),
        ("drift", "dist / n"),
    ],
    "reduce": [
        ("theta", "grid point"),
        ("angle", "rotation part of the reduced map"),
        ("residual", "hyperbolic distance of its sigma from 0"),
        ("sigma_re", "real part of sigma of the reduced map"),
        ("sigma_im", "imaginary part of sigma"),
    ],
    "diagonal": [
        ("eps", "half-width of the triple (theta-eps, theta, theta+eps)"),
        ("gamma_over", "(1 - cos gamma) / eps^2"),
        ("gamma_plus_over", "(1 - cos(gamma + 2 eps)) / eps^2"),
        ("rho_defect_over", "(1 - rho) / eps"),
        ("sigma_re", "real part of sigma of the 3-point Möbius map"),
        ("sigma_im", "imaginary part of sigma"),
        ("kappa", "rotation part of the 3-point Möbius map"),
    ],
    "enlarged": [
        ("t1,t2,t3", "the triple, in [0, 2pi) (without --n)"),
        ("kappa,sigma_re,sigma_im", "the Möbius map through the triple and its image (without --n)"),
        ("n", "iterate index (with --n)"),
        ("r_n", "|sigma| of the 3-point map of f^n (with --n)"),
        ("dist", "hyperbolic distance from 0 to sigma (with --n)"),
        ("drift", "dist / n (with --n)"),
        ("rho_n", "modulus of the cross-ratio quotient tau (with --n)"),
        ("gap", "1 - r_n^2 (with --n)"),
    ],
    "bounds": [
        ("lambda", "bound on |sigma|"),
        ("d_max", "(1+lambda)/(1-lambda)"),
        ("delta_max", "2(1+lambda)/(1-lambda)^2"),
    ],
}


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x) + 0.0, ".17g")


class UsageError(Exception):
    pass


def _columns_epilog(name: str) -> str:
    lines = ["CSV columns:"]
    lines += [f"  {col:<24} {doc}" for col, doc in COLUMNS[name]]
    return "\n".join(lines)


def _map(text: str):
    return parse_map_spec(text)


def _triple(text: str) -> Triple:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected t1,t2,t3")
    try:
        return Triple(*(float(p) for p in parts))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def cmd_fit(args, f):
    j = f.jet(args.theta)
    m = projective_derivative(f, canon(args.theta))
    yield [c for c, _ in COLUMNS["fit"]]
    yield [args.theta, j.value, j.d1, j.d2, m.kappa, m.sigma.real, m.sigma.imag]


def cmd_iterate(args, f):
    yield [c for c, _ in COLUMNS["iterate"]]
    x = canon(args.theta)
    for n, m in enumerate(cocycle_iterates(f, x, args.n), start=1):
        x = f(x)
        yield [n, x, m.kappa, m.sigma.real, m.sigma.imag, m.r]


def _thetas(args, rng):
    thetas = []
    if args.grid:
        thetas += [TWO_PI * j / args.grid for j in range(args.grid)]
    if args.random:
        thetas += list(rng.uniform(0.0, TWO_PI, size=args.random))
    return thetas


def cmd_drift(args, f, rng):
    cols = [c for c, _ in COLUMNS["drift"]]
    thetas = _thetas(args, rng)
    if not thetas:
        yield cols[1:]
        for r in drift_sequence(f, args.theta, args.n):
            yield [r.n, r.d_n, r.delta_n, r.r_n, r.dist, r.drift]
        return
    yield cols
    for theta, recs in zip(thetas, drift_grid(f, thetas, args.n, args.workers)):
        for r in recs:
            yield [theta, r.n, r.d_n, r.delta_n, r.r_n, r.dist, r.drift]


def cmd_reduce(args, f):
    phi = _map(args.conj)
    yield [c for c, _ in COLUMNS["reduce"]]
    for rec in reduce_with_conjugacy(f, phi, args.grid, args.offset):
        s = rec.reduced.sigma
        yield [rec.theta, rec.angle, rec.residual, s.real, s.imag]


def cmd_diagonal(args, f):
    yield [c for c, _ in COLUMNS["diagonal"]]
    for r in diagonal_probe(f, args.theta, args.eps, args.factor, args.steps):
        yield [r.eps, r.gamma_over, r.gamma_plus_over, r.rho_defect_over,
               r.sigma_eps.real, r.sigma_eps.imag, r.kappa_eps]


def cmd_enlarged(args, f):
    t = args.triple
    if args.n is None:
        m = enlarged_cocycle(f, t)
        yield ["t1", "t2", "t3", "kappa", "sigma_re", "sigma_im"]
        yield [*t.canonical(), m.kappa, m.sigma.real, m.sigma.imag]
        return
    if t.degenerate:
        raise UsageError(f"--triple: points must be pairwise distinct, got {args.triple_text}")
    yield ["n", "r_n", "dist", "drift", "rho_n", "gap"]
    for r in enlarged_drift_sequence(f, t, args.n):
        yield [r.n, r.r_n, r.dist, r.drift, r.rho_n, r.gap]


def cmd_bounds(args):
    try:
        d, dd = boundedness_bounds(args.lam)
    except ValueError as e:
        raise UsageError(f"--lambda: {e}") from None
    yield [c for c, _ in COLUMNS["bounds"]]
    yield [float(args.lam), float(d), float(dd)]


def _add_global_flags(p, top: bool):
    # accepted before or after the subcommand; only the top level sets defaults
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=d(0), help="seed for random grids (default 0)")
    p.add_argument("--out", default=d(None), help="write CSV here instead of stdout")
    p.add_argument("--format", choices=["csv"], default=d("csv"), help="output format")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, top=False)

    p = argparse.ArgumentParser(
        prog="projcocycle",
        description="Projective-derivative cocycles of circle diffeomorphisms.",
    )
    _add_global_flags(p, top=True)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(
            name, help=help_, description=help_, parents=[common],
            epilog=_columns_epilog(name), formatter_class=argparse.RawDescriptionHelpFormatter,
        )

    s = add("fit", "projective derivative of a map at a point")
    s.add_argument("--map", required=True, help=MAP_HELP)
    s.add_argument("--theta", type=float, required=True)

    s = add("iterate", "projective derivatives of f, f^2, ..., f^n at a point")
    s.add_argument("--map", required=True, help=MAP_HELP)
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--n", type=_positive_int, required=True)

    s = add("drift", "drift sequence of the projective cocycle")
    s.add_argument("--map", required=True, help=MAP_HELP)
    s.add_argument("--theta", type=float, default=0.0, help="base point when no grid is given")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--grid", type=_positive_int, default=None, help="sweep K uniform base points")
    s.add_argument("--random", type=_positive_int, default=None,
                   help="also sweep M random base points drawn with --seed")
    s.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")

    s = add("reduce", "reduce the cocycle with the projective derivative of a conjugacy")
    s.add_argument("--map", required=True, help=MAP_HELP)
    s.add_argument("--conj", required=True,
                   help="phi with phi o f o phi^-1 a rotation (same syntax as --map)")
    s.add_argument("--grid", type=_positive_int, required=True)
    s.add_argument("--offset", type=float, default=0.0, help="rotate the grid by this angle")

    s = add("diagonal", "collapse a symmetric triple onto the diagonal")
    s.add_argument("--map", required=True, help=MAP_HELP)
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--factor", type=float, default=0.5)
    s.add_argument("--steps", type=_positive_int, required=True)

    s = add("enlarged", "3-point cocycle at a triple, or its drift with --n")
    s.add_argument("--map", required=True, help=MAP_HELP)
    s.add_argument("--triple", dest="triple_text", required=True, metavar="T1,T2,T3",
                   help="three angles; write --triple=-0.1,0,0.1 when the first is negative")
    s.add_argument("--n", type=_positive_int, default=None)

    s = add("bounds", "derivative bounds implied by |sigma| <= lambda")
    s.add_argument("--lambda", dest="lam", type=_fraction, required=True,
                   help="decimal or ratio such as 1/3 (evaluated exactly)")
    return p


def _rows(args):
    if args.command == "bounds":
        return cmd_bounds(args)
    try:
        f = _map(args.map)
    except MapSpecError as e:
        raise UsageError(f"--map: {e}") from None
    if args.command == "drift":
        return cmd_drift(args, f, np.random.default_rng(args.seed))
    if args.command == "enlarged":
        try:
            args.triple = _triple(args.triple_text)
        except argparse.ArgumentTypeError as e:
            raise UsageError(f"--triple: {e}") from None
    if args.command == "reduce":
        try:
            _map(args.conj)
        except MapSpecError as e:
            raise UsageError(f"--conj: {e}") from None
    if args.command == "diagonal" and not (0.0 < args.factor < 1.0 and 0.0 < args.eps < math.pi / 2):
        raise UsageError("--eps must lie in (0, pi/2) and --factor in (0, 1)")
    return {"fit": cmd_fit, "iterate": cmd_iterate, "reduce": cmd_reduce,
            "diagonal": cmd_diagonal, "enlarged": cmd_enlarged}[args.command](args, f)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    try:
        for row in _rows(args):
            writer.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    except (UsageError, ValueError) as e:
        parser.exit(2, f"{parser.prog}: error: {e}\n")
    except NumericalError as e:
        print(f"{parser.prog}: numerical failure: {e}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
