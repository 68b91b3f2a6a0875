"""Command-line interface.

Exit codes: 0 success, 2 verification or tail failure, 3 parse or configuration error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import documents, gallery
from .almostperiodic import ExponentialSum, check_ap_distribution, default_probe_grid, find_almost_periods
from .comb import CombDistribution, TailError, evaluate_window, pair
from .fourier import distribution_ft, random_probes, verify_pairing
from .lattice import DimensionError, parse_scalar
from .pointset import PDiscretenessParams, diagnose
from .schwartz import OrderError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 2, 3


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_comb(path) -> CombDistribution:
    return documents.comb_from_doc(documents.loads(_read(path)))


def _vector(text: str, exact: bool, name: str) -> tuple:
    try:
        return tuple(parse_scalar(x, exact) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--{name}: expected comma-separated numbers, got {text!r}") from None


def _floats(text: str, name: str) -> list[float]:
    return [float(x) for x in _vector(text, False, name)]


def _window_args(f: CombDistribution, args):
    center = _vector(args.center, f.exact, "center") if args.center else (Fraction(0) if f.exact else 0.0,) * f.dim
    if len(center) != f.dim:
        raise ConfigError(f"--center needs {f.dim} coordinates")
    radius = parse_scalar(args.radius, f.exact)
    return center, radius


# ---------------------------------------------------------------- commands

def cmd_comb_eval(args) -> int:
    f = _load_comb(args.input)
    center, radius = _window_args(f, args)
    _write(args.out, documents.window_columns(evaluate_window(f, center, radius)))
    return EXIT_OK


def cmd_comb_ft(args) -> int:
    _write(args.out, documents.dumps(distribution_ft(_load_comb(args.input))))
    return EXIT_OK


def cmd_comb_pair(args) -> int:
    f = _load_comb(args.input)
    phi = documents.testfn_from_doc(documents.loads(_read(args.testfn)))
    res = pair(f, phi, args.radius, args.tol)
    _write(args.out, f"value {_fmt(res.value.real)} {_fmt(res.value.imag)}\ntail {_fmt(res.tail)}\nradius {_fmt(res.radius)}\n")
    return EXIT_OK


def cmd_verify_poisson(args) -> int:
    f = _load_comb(args.input)
    probes = random_probes(np.random.default_rng(args.seed), f.dim, args.probes)
    rep = verify_pairing(f, probes, args.radius, args.tol, check_reflection=args.reflection, threads=args.threads)
    lines = [
        f"result {'PASS' if rep.passed else 'FAIL'}",
        f"probes {len(probes)}",
        f"seed {args.seed}",
        f"tol {_fmt(rep.tol)}",
        f"max_defect {_fmt(rep.max_defect)}",
        f"max_tail {_fmt(max(rep.tails, default=0.0))}",
    ]
    if args.reflection:
        lines.append(f"max_reflection_defect {_fmt(rep.max_reflection_defect)}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_pointset_diagnose(args) -> int:
    doc = documents.loads(_read(args.input))
    window = None
    if doc["kind"] == "comb":
        f = documents.comb_from_doc(doc)
        if args.radius is None:
            raise ConfigError("--radius is required to window a comb")
        center, radius = _window_args(f, args)
        points = evaluate_window(f, center, radius)
        window = (tuple(float(x) for x in center), float(radius))
    else:
        points = documents.points_from_doc(doc)
        if args.radius is not None:
            d = doc["dim"]
            center = _floats(args.center, "center") if args.center else [0.0] * d
            window = (tuple(center), float(args.radius))
    params = PDiscretenessParams(args.c, args.h) if args.c is not None else None
    radii = _floats(args.radii, "radii")
    rep = diagnose(points, radii, params, window)
    lines = [f"points {rep.num_points}"]
    if rep.separating_constant is not None:
        lines.append(f"separating_constant {_fmt(rep.separating_constant)}")
    dens = rep.bounded_density
    lines.append(f"bounded_density {dens['value']} {'exact' if dens['exact'] else 'lower_bound'}")
    if rep.p_discrete is not None:
        v = rep.p_discrete
        lines.append(f"p_discrete {'yes' if v.holds else 'no'} ratio {_fmt(v.ratio)} c {_fmt(v.params.c)} h {_fmt(v.params.h)}")
    if rep.covering is not None:
        lines.append(f"covering_radius {_fmt(rep.covering['lower'])} {_fmt(rep.covering['upper'])}")
    if rep.coefficients is not None:
        lines.append(f"inf_total_mass {_fmt(rep.coefficients.inf_total)}")
    prof = rep.counting
    lines.append(f"growth_slope {_fmt(prof.slope)}")
    lines.append("# radius count" + (" ratio bound" if prof.ratios else ""))
    for i, (r, n) in enumerate(zip(prof.radii, prof.counts)):
        extra = f" {_fmt(prof.ratios[i])} {_fmt(prof.bounds[i])}" if prof.ratios else ""
        lines.append(f"{_fmt(r)} {n}{extra}")
    lines.append("# all verdicts refer to the window only")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ap_periods(args) -> int:
    doc = documents.loads(_read(args.input))
    t_range = _floats(args.range, "range")
    if len(t_range) != 2:
        raise ConfigError("--range takes two numbers: start,end")
    probes = default_probe_grid(args.probes, args.span)
    origin = _floats(args.origin, "origin") if args.origin else None
    direction = _floats(args.direction, "direction") if args.direction else None
    if doc["kind"] == "expsum":
        g: ExponentialSum = documents.expsum_from_doc(doc)
        rep = find_almost_periods(g, args.eps, tuple(t_range), args.step, probes, origin, direction)
    elif doc["kind"] == "comb":
        if not args.testfn:
            raise ConfigError("--testfn is required for a comb input")
        f = documents.comb_from_doc(doc)
        phi = documents.testfn_from_doc(documents.loads(_read(args.testfn)))
        rep = check_ap_distribution(f, phi, args.eps, tuple(t_range), args.step, probes, origin, direction)
    else:
        raise ConfigError("ap periods takes an expsum or comb document")
    head = [
        f"# eps {_fmt(rep.eps)}",
        f"# range {_fmt(rep.t_range[0])} {_fmt(rep.t_range[1])} step {_fmt(rep.step)}",
        f"# probes {rep.probe['count']} on [{_fmt(rep.probe['min'])}, {_fmt(rep.probe['max'])}]",
        f"# found {len(rep.periods)} max_gap {_fmt(rep.max_gap) if rep.max_gap is not None else 'none'}",
    ] + [f"# {note}" for note in rep.notes]
    _write(args.out, "\n".join(head) + "\n" + rep.columns())
    return EXIT_OK


def cmd_gallery(args) -> int:
    try:
        obj = gallery.by_name(args.name, args.dim)
    except KeyError as exc:
        raise ConfigError(f"{exc.args[0]}; known: {', '.join(gallery.names())}") from None
    _write(args.out, documents.dumps(obj))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diraccomb", description="Lattice Dirac combs, their transforms and diagnostics.")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for probe sets")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized probe sets")
    sub = parser.add_subparsers(dest="group", required=True)

    def io(p, out=True):
        p.add_argument("--in", dest="input", default="-", help="input document (default stdin)")
        if out:
            p.add_argument("--out", default="-", help="output file (default stdout)")

    comb = sub.add_parser("comb", help="evaluate, transform and pair comb documents").add_subparsers(dest="cmd", required=True)
    p = comb.add_parser("eval", help="windowed evaluation as columns")
    io(p)
    p.add_argument("--center")
    p.add_argument("--radius", required=True)
    p.set_defaults(func=cmd_comb_eval)
    p = comb.add_parser("ft", help="Fourier transform")
    io(p)
    p.set_defaults(func=cmd_comb_ft)
    p = comb.add_parser("pair", help="pairing with a test function")
    io(p)
    p.add_argument("--testfn", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--radius", type=float)
    p.set_defaults(func=cmd_comb_pair)

    verify = sub.add_parser("verify", help="verification runs").add_subparsers(dest="cmd", required=True)
    p = verify.add_parser("poisson", help="check <f_hat, phi> = <f, phi_hat> on random probes")
    io(p)
    p.add_argument("--probes", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--radius", type=float)
    p.add_argument("--reflection", action="store_true", help="also check the double transform")
    p.set_defaults(func=cmd_verify_poisson)

    pts = sub.add_parser("pointset", help="point-set diagnostics").add_subparsers(dest="cmd", required=True)
    p = pts.add_parser("diagnose", help="window diagnostics of a point list or comb support")
    io(p)
    p.add_argument("--radii", required=True)
    p.add_argument("--center")
    p.add_argument("--radius", help="window radius (required for comb input)")
    p.add_argument("--c", type=float, help="p-discreteness constant c")
    p.add_argument("--h", type=float, default=0.0, help="p-discreteness exponent h")
    p.set_defaults(func=cmd_pointset_diagnose)

    ap = sub.add_parser("ap", help="almost periods").add_subparsers(dest="cmd", required=True)
    p = ap.add_parser("periods", help="scan for eps-almost periods")
    io(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--range", required=True, help="start,end")
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--probes", type=int, default=2000)
    p.add_argument("--span", type=float, default=100.0, help="probe grid covers [0, span)")
    p.add_argument("--testfn", help="test function for a comb input")
    p.add_argument("--origin")
    p.add_argument("--direction")
    p.set_defaults(func=cmd_ap_periods)

    p = sub.add_parser("gallery", help="emit a gallery object")
    p.add_argument("name", help=", ".join(gallery.names()))
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gallery)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (documents.DocumentError, ConfigError, DimensionError, OrderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TailError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
