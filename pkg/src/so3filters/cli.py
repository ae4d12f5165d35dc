"""Command-line entry point: ``simulate``, ``verify``, ``bounds``, ``reproduce``."""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import oracle
from .errors import ConfigError, DomainError, InvalidArgumentError
from .fileio import format_csv, read_config, write_csv
from .sim import SensorConfig, paper_preset, run_experiment
from .verify import SUITES, TOLERANCES, run_suite

FIGURES = ("fig-normR", "fig-sigma")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _seed(value):
    if value is not None:
        return value
    env = os.environ.get("SO3_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InvalidArgumentError(f"SO3_SEED must be an integer, got {env!r}") from None


def _tol_pairs(items):
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise InvalidArgumentError(f"--tol expects NAME=VALUE, got {item!r}")
        out[name.strip()] = float(val)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="so3filters", description="Complementary attitude filters on SO(3).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="run an experiment from a config file")
    s.add_argument("config", help="path to a key = value config file")
    s.add_argument("--out", help="CSV output path (overrides the config's output key)")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=None, help="RNG seed (default: $SO3_SEED or 0)")
    v.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a check tolerance")

    b = sub.add_parser("bounds", help="print envelopes or convergence-time bounds as CSV")
    b.add_argument("--kind", choices=["I", "II", "III"], default="I")
    b.add_argument("--d0", type=float, required=True, help="initial error distance |R~(0)|_I")
    b.add_argument("--lmin", type=float, help="smallest eigenvalue of Abar")
    b.add_argument("--lmax", type=float, help="largest eigenvalue of Abar")
    b.add_argument("--gamma", type=float, help="rate fraction (filters II, III)")
    b.add_argument("--eps", type=float, help="gain parameter epsilon (filters II, III)")
    b.add_argument("--B", type=float, help="ball radius for the convergence-time bound")
    b.add_argument("--t-max", type=float, default=10.0)
    b.add_argument("--steps", type=int, default=101)

    r = sub.add_parser("reproduce", help="regenerate the reference comparison CSV")
    r.add_argument("figure", choices=FIGURES)
    r.add_argument("--out", default=".", help="output directory")
    r.add_argument("--seed", type=int, default=None)
    return p


def _cmd_simulate(args, out) -> int:
    if not os.path.isfile(args.config):
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return 2
    try:
        cfg = read_config(args.config)
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return 2
    record = run_experiment(cfg, write=False)
    path = args.out or cfg.output
    if path:
        write_csv(record, path)
        for k in record.kinds:
            out.write(f"{k.value}: first |R~|_I < 0.1 at t = {record.crossing_time(k, 0.1):g} s\n")
        out.write(f"wrote {path}\n")
    else:
        out.write(format_csv(record))
    return 0


def _cmd_verify(args, out) -> int:
    seed = _seed(args.seed)
    tol = _tol_pairs(args.tol)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if args.suite == "all":
            suite_tol = {k: v for k, v in tol.items() if k in TOLERANCES[name]}
        else:
            suite_tol = tol
        res = run_suite(name, seed=seed, tol=suite_tol)
        out.write(res.summary + "\n")
        for c in res.checks:
            out.write(c.line() + "\n")
        bad = res.first_failure()
        if bad is not None:
            out.write(f"FAILED: {name}.{bad.name}\n")
            return 1
    return 0


def _cmd_bounds(args, out) -> int:
    wrote = False
    if args.B is not None:
        if args.kind != "I":
            raise InvalidArgumentError("--B (convergence-time bound) is available for filter I only")
        if args.lmax is None:
            raise InvalidArgumentError("--B needs --lmax")
        tb = oracle.convergence_time_lower(args.d0, args.B, args.lmax)
        out.write("quantity,value\n")
        out.write("convergence_time_lower,%.12g\n" % tb)
        wrote = True
    if args.lmin is not None:
        lmax = args.lmax if args.lmax is not None else args.lmin
        t = np.linspace(0.0, args.t_max, args.steps)
        env = oracle.bounds_for(args.kind, args.d0, args.lmin, lmax, t, args.gamma, args.eps)
        if wrote:
            out.write("\n")
        out.write("t,lower,upper\n")
        for ti, lo, up in zip(t, env.lower, env.upper):
            out.write("%.12g,%.12g,%.12g\n" % (ti, lo, up))
        wrote = True
    if not wrote:
        raise InvalidArgumentError("nothing to compute: give --B with --lmax, or --lmin for an envelope table")
    return 0


def _cmd_reproduce(args, out) -> int:
    cfg = paper_preset(sensor=SensorConfig(seed=_seed(args.seed)))
    record = run_experiment(cfg, write=False)
    path = os.path.join(args.out, f"{args.figure}.csv")
    write_csv(record, path)
    for k in record.kinds:
        t = record.crossing_time(k, 0.1)
        out.write(f"{k.value}: first |R~|_I < 0.1 at t = {t:g} s\n" if math.isfinite(t) else f"{k.value}: never below 0.1\n")
    out.write(f"wrote {path}\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    handlers = {"simulate": _cmd_simulate, "verify": _cmd_verify, "bounds": _cmd_bounds, "reproduce": _cmd_reproduce}
    try:
        return handlers[args.command](args, out)
    except (InvalidArgumentError, DomainError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
