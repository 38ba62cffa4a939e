"""Command line interface.

    conelab verify <suite> --manifold <id> [--radius r ...] [--grid N]
                   [--jet-order K] [--tol id=val ...] [--seed S]
                   [--samples N] [--report path.json] [--config file]
    conelab list
    conelab integrate <integrand> --manifold <id> --radius r [--grid N]

Exit codes: 0 all identities pass, 1 failures or engine errors, 2 usage.
A JSON config file may supply the same fields as the flags; flags win.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .report import SuiteConfig, all_pass, report_json
from .suites import INTEGRANDS, SUITES, SuiteUsageError, integrate_level_set, run_suite


def _parse_tol(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise SuiteUsageError(f"--tol expects id=value, got {item!r}")
        key, _, val = item.partition("=")
        try:
            out[key] = float(val)
        except ValueError:
            raise SuiteUsageError(f"--tol value for {key!r} is not a number")
    return out


def _parse_grid(text):
    if text is None:
        return None
    if "," in text:
        return tuple(int(v) for v in text.split(","))
    return int(text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="conelab",
        description="Numerical verification of cone, contact and "
                    "almost-Kaehler identities on catalogued manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run an identity suite")
    verify.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    verify.add_argument("--manifold", required=True)
    verify.add_argument("--radius", action="append", type=float, default=None)
    verify.add_argument("--grid", default=None)
    verify.add_argument("--jet-order", type=int, default=None)
    verify.add_argument("--tol", action="append", default=None,
                        metavar="ID=VALUE")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--samples", type=int, default=None)
    verify.add_argument("--report", default=None, help="write JSON report here")
    verify.add_argument("--config", default=None, help="JSON config file")

    sub.add_parser("list", help="list suites and manifolds")

    integ = sub.add_parser("integrate", help="integrate over a level set M_r")
    integ.add_argument("integrand", help=f"one of: {', '.join(INTEGRANDS)}")
    integ.add_argument("--manifold", required=True)
    integ.add_argument("--radius", type=float, required=True)
    integ.add_argument("--grid", default=None)
    return parser


def _load_config(args) -> SuiteConfig:
    base = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            base = json.load(fh)
    cfg = SuiteConfig(manifold=base.get("manifold", ""), suite=args.suite)
    cfg.manifold = args.manifold or base.get("manifold", "")
    cfg.grid = _parse_grid(args.grid) if args.grid is not None else base.get("grid")
    radii = args.radius if args.radius is not None else base.get("radii")
    if radii:
        cfg.radii = tuple(float(r) for r in radii)
    cfg.jet_order = (args.jet_order if args.jet_order is not None
                     else base.get("jet_order"))
    tols = dict(base.get("tolerances", {}))
    tols.update(_parse_tol(args.tol))
    cfg.tolerances = tols
    if args.seed is not None:
        cfg.seed = args.seed
    elif "seed" in base:
        cfg.seed = int(base["seed"])
    if args.samples is not None:
        cfg.samples = args.samples
    elif "samples" in base:
        cfg.samples = int(base["samples"])
    return cfg


def _print_reports(reports):
    for r in reports:
        mx = "n/a" if r.max_residual is None else f"{r.max_residual:.3e}"
        print(f"[{r.verdict.upper():5s}] {r.identity:36s} "
              f"max={mx:>10s} tol={r.tolerance:.1e}  ({r.anchor})")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        if args.command == "list":
            print("suites:")
            for s in SUITES:
                print(f"  {s}")
            print("manifolds:")
            for key in catalog.keys():
                print(f"  {key}")
            print("integrands:")
            for name in INTEGRANDS:
                print(f"  {name}")
            return 0

        if args.command == "integrate":
            value = integrate_level_set(args.manifold, args.radius,
                                        args.integrand,
                                        _parse_grid(args.grid))
            print(f"{value!r}")
            return 0

        config = _load_config(args)
        reports = run_suite(config)
        _print_reports(reports)
        ok = all_pass(reports)
        n_fail = sum(1 for r in reports if r.verdict != "pass")
        print(f"{len(reports)} identities, {n_fail} failing")
        if args.report:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(report_json(config, reports))
            print(f"report written to {args.report}")
        return 0 if ok else 1
    except SuiteUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
