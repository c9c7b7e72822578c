"""Command-line entry point: ``lmcdist <subcommand> ...``.

Exit codes: 0 success, 1 analysis refused (``approx --strict`` without
convergence), 2 input error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from . import gadgets
from .bernoulli import d_theta, solve_f, write_csv
from .bounds import ApproxStatus, approximate
from .core import LmcError, parse_rational, read_lmc, write_lmc
from .dist_one import distance_one
from .linalg import distance_zero
from .simulator import estimate_distance_mc, write_trajectories_csv


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _InputError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _real(text: str) -> float:
    try:
        return float(parse_rational(text.strip()))
    except (ValueError, ZeroDivisionError):
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _rational_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_rational(t) for t in text.split(",") if t.strip())


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lmcdist", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("equiv", help="decide whether init1 and init2 are language equivalent")
    s.add_argument("file")

    s = sub.add_parser("dist1", help="decide whether the distance equals 1")
    s.add_argument("file")
    s.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("approx", help="certified rational bracket around the distance")
    s.add_argument("file")
    s.add_argument("--eps", type=_rational, required=True)
    s.add_argument("--max-depth", type=int, default=30)
    s.add_argument("--history", action="store_true", help="print one line per depth")
    s.add_argument("--csv", metavar="PATH", help="write depth,lower,upper rows")
    s.add_argument("--threshold", type=_rational, help="report above/below/undecided")
    s.add_argument("--strict", action="store_true", help="exit 1 unless the bracket converged")
    s.add_argument("--float", dest="show_float", action="store_true",
                   help="append float renderings")
    s.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("bernoulli", help="solve the Bernoulli-convolution distance function")
    s.add_argument("--theta", type=_real, required=True)
    s.add_argument("--x", type=_real, required=True)
    s.add_argument("--grid", type=int, default=4097)
    s.add_argument("--tol", type=_real, default=1e-9)
    s.add_argument("--csv", metavar="PATH", help="write x,f,d rows over the grid")

    s = sub.add_parser("gadget", help="write an example chain as a .lmc file")
    s.add_argument("family", choices=["example1", "two-state", "irrational", "parallel",
                                      "bernoulli", "sqrt-sum"])
    s.add_argument("--x", type=_rational)
    s.add_argument("--xs", type=_rational_list)
    s.add_argument("--theta", type=_rational)
    s.add_argument("--s", type=_int_list)
    s.add_argument("--t", type=int)
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("sample", help="Monte-Carlo estimate via the likelihood ratio")
    s.add_argument("file")
    s.add_argument("--len", dest="run_length", type=int, required=True)
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--csv", metavar="PATH", help="write side,run,step,letter,ratio rows")
    s.add_argument("--trajectories", type=int, default=10,
                   help="runs per side written with --csv")
    return p


def _fmt(q: Fraction, show_float: bool) -> str:
    return f"{q} (≈{float(q):.10g})" if show_float else str(q)


def _gadget_spec(args):
    fam = args.family
    try:
        if fam == "example1":
            return gadgets.Example1()
        if fam == "two-state":
            return gadgets.TwoState()
        if fam == "irrational":
            return gadgets.Irrational(_need(args.x, "--x"))
        if fam == "parallel":
            return gadgets.Parallel(_need(args.xs, "--xs"))
        if fam == "bernoulli":
            return gadgets.BernoulliChain(_need(args.theta, "--theta"), _need(args.x, "--x"))
        return gadgets.SqrtSum(_need(args.s, "--s"), _need(args.t, "--t"))
    except LmcError as exc:
        raise _InputError(str(exc)) from None


def _need(value, flag):
    if value is None:
        raise _InputError(f"gadget family needs {flag}")
    return value


def _run(args, out) -> int:
    cmd = args.command
    if cmd == "equiv":
        inst = read_lmc(args.file)
        print("equivalent" if distance_zero(inst) else "not-equivalent", file=out)
        return 0
    if cmd == "dist1":
        inst = read_lmc(args.file)
        print("distance=1" if distance_one(inst, jobs=args.jobs) else "distance<1", file=out)
        return 0
    if cmd == "approx":
        if args.eps <= 0:
            raise _InputError("--eps must be positive")
        inst = read_lmc(args.file)
        rep = approximate(inst, args.eps, args.max_depth, jobs=args.jobs)
        br = rep.bracket
        if args.history:
            for h in rep.history:
                print(f"depth={h.depth} lower={_fmt(h.lower, args.show_float)} "
                      f"upper={_fmt(h.upper, args.show_float)}", file=out)
        print(f"lower={_fmt(br.lower, args.show_float)} upper={_fmt(br.upper, args.show_float)} "
              f"status={rep.status.value}", file=out)
        if args.threshold is not None:
            print(rep.classify(args.threshold), file=out)
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["depth", "lower", "upper"])
                for h in rep.history:
                    w.writerow([h.depth, str(h.lower), str(h.upper)])
        if args.strict and rep.status is ApproxStatus.DEPTH_CAPPED:
            return 1
        return 0
    if cmd == "bernoulli":
        try:
            f = solve_f(args.theta, args.grid, args.tol)
            d = d_theta(args.theta, args.x, solution=f)
        except ValueError as exc:
            raise _InputError(str(exc)) from None
        print(f"d_theta={d!r}", file=out)
        if args.csv:
            write_csv(f, args.csv)
        return 0
    if cmd == "gadget":
        spec = _gadget_spec(args)
        write_lmc(gadgets.generate(spec), args.output)
        if not isinstance(spec, gadgets.BernoulliChain):
            cf = gadgets.closed_form(spec)
            print(f"closed_form={cf} ≈{float(cf):.12g}", file=out)
        if isinstance(spec, gadgets.SqrtSum):
            print(f"h={spec.h} tau={spec.tau}", file=out)
        return 0
    if cmd == "sample":
        if args.run_length < 1 or args.samples < 1:
            raise _InputError("--len and --samples must be at least 1")
        inst = read_lmc(args.file)
        est = estimate_distance_mc(inst, args.run_length, args.samples, args.seed, jobs=args.jobs)
        print(f"estimate={est.estimate!r} stderr={est.stderr!r}", file=out)
        if args.csv:
            write_trajectories_csv(inst, args.csv, args.run_length, args.trajectories, args.seed)
        return 0
    raise _InputError(f"unknown command {cmd}")


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        return _run(args, out)
    except _InputError as exc:
        print(exc, file=err)
        return 2
    except (LmcError, OSError) as exc:
        print(f"lmcdist: {exc}", file=err)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
