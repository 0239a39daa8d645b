"""Command-line front end.

Exit codes: 0 on success, 1 on invalid input, 2 on numerical failure
(step budget exhausted, quadrature or root solve failure).  Diagnostics
go to stderr as a single line.  Set FIXTIME_LOG to error, info or debug
for progress logging.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from . import config, specfun
from .gain_aut import AUT_CONDITIONS
from .gain_nonaut import NONAUT_CONDITIONS
from .numerics.ode import IntegrationError, IntegratorConfig, Verdict, integrate
from .numerics.quadrature import QuadratureError
from .numerics.roots import RootError
from .verify import certify_settling, format_report, least_ubst_sweep

__all__ = ["main", "run", "build_parser"]

log = logging.getLogger("fixtime")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2

_SPECFUN = {
    "gamma": (specfun.gamma, 1),
    "beta": (specfun.beta, 2),
    "inc_beta": (specfun.inc_beta, 3),
    "inc_beta_inv": (specfun.inc_beta_inv, 3),
    "erf": (specfun.erf, 1),
    "erf_inv": (specfun.erf_inv, 1),
    "erfc_inv": (specfun.erfc_inv, 1),
    "ci": (specfun.cosint, 1),
    "si": (specfun.sinint_shifted, 1),
}


class UsageError(ValueError):
    """Bad command-line input."""


def _setup_logging():
    level = os.environ.get("FIXTIME_LOG", "error").strip().lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, format="fixtime %(levelname)s: %(message)s",
                        level=levels.get(level, logging.ERROR), force=True)
    if level not in levels:
        log.error("ignoring FIXTIME_LOG=%r (expected error, info or debug)", level)


def _floats(text, what):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError(f"{what} is empty")
    return vals


def _add_spec_args(p):
    p.add_argument("--spec", required=True,
                   help="spec JSON file, or the name of a shipped spec (see 'catalog')")
    p.add_argument("--out", help="output file (default: stdout)")
    g = p.add_argument_group("integrator overrides")
    g.add_argument("--rel-tol", type=float)
    g.add_argument("--abs-tol", type=float)
    g.add_argument("--eps-settle", type=float)
    g.add_argument("--gain-cap", type=float)
    g.add_argument("--horizon-guard", type=float)


def build_parser():
    parser = argparse.ArgumentParser(prog="fixtime",
                                     description="Simulate and certify fixed-time systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate one trajectory and write it as CSV")
    _add_spec_args(p)
    p.add_argument("--x0", required=True,
                   help="initial state as comma-separated components, or a single norm r for r*e1")

    p = sub.add_parser("certify", help="compare predicted and simulated settling time")
    _add_spec_args(p)
    p.add_argument("--x0", required=True, help="initial state, as for simulate")

    p = sub.add_parser("sweep", help="settling times over increasing initial norms (JSON)")
    _add_spec_args(p)
    p.add_argument("--norms", help="comma-separated increasing norms (default: x0_norms from the spec file)")

    p = sub.add_parser("specfun-eval", help="evaluate a special function")
    p.add_argument("function", choices=sorted(_SPECFUN))
    p.add_argument("args", nargs="+", type=float)

    sub.add_parser("catalog", help="list gain families, conditions and shipped specs")
    return parser


def _config(args):
    return IntegratorConfig().with_overrides(
        rel_tol=args.rel_tol, abs_tol=args.abs_tol, eps_settle=args.eps_settle,
        gain_cap=args.gain_cap, horizon_guard=args.horizon_guard)


def _load(args):
    cfg = _config(args)
    spec, raw = config.load_spec(args.spec, gain_cap=cfg.gain_cap)
    log.info("loaded spec %s (dim %d, T_c %g)", raw.get("name", args.spec), spec.dim, spec.T_c)
    return spec, raw, cfg


def _initial_state(spec, text):
    vals = _floats(text, "--x0")
    if len(vals) == 1 and spec.dim > 1:
        x0 = np.zeros(spec.dim)
        x0[0] = vals[0]
        return x0
    if len(vals) != spec.dim:
        raise UsageError(f"--x0 needs 1 or {spec.dim} components, got {len(vals)}")
    return np.array(vals)


def _emit(text, out):
    if out:
        config.write_atomic(out, text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def trajectory_csv(traj):
    """CSV text with header t,x1..xn,gain,V and round-trip precision."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    dim = traj.states.shape[1]
    w.writerow(["t"] + [f"x{i + 1}" for i in range(dim)] + ["gain", "V"])
    for t, x, gain, v in zip(traj.times, traj.states, traj.gains, traj.lyap):
        w.writerow([repr(float(t))] + [repr(float(c)) for c in x]
                   + [repr(float(gain)), repr(float(v))])
    return buf.getvalue()


def _simulate(args):
    spec, _, cfg = _load(args)
    traj = integrate(spec, _initial_state(spec, args.x0), cfg)
    log.info("termination %s after %d steps", traj.termination, traj.steps)
    _emit(trajectory_csv(traj), args.out)
    if traj.termination == "budget":
        print(f"fixtime: step budget of {cfg.max_steps} exhausted", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _certify(args):
    spec, _, cfg = _load(args)
    rep = certify_settling(spec, _initial_state(spec, args.x0), cfg)
    text = json.dumps(rep.to_dict(), indent=2) + "\n" if args.out else format_report(rep) + "\n"
    _emit(text, args.out)
    if args.out:
        print(f"verdict {rep.verdict.value}")
    return EXIT_NUMERIC if rep.verdict is Verdict.DIVERGED else EXIT_OK


def _sweep(args):
    spec, raw, cfg = _load(args)
    if args.norms:
        norms = _floats(args.norms, "--norms")
    elif raw.get("x0_norms"):
        norms = [float(r) for r in raw["x0_norms"]]
    else:
        raise UsageError("--norms is required when the spec file has no x0_norms")
    rep = least_ubst_sweep(spec, norms, cfg)
    _emit(json.dumps(rep.to_dict(), indent=2) + "\n", args.out)
    if args.out:
        print(format_report(rep))
    return EXIT_NUMERIC if Verdict.DIVERGED.value in rep.verdicts else EXIT_OK


def _specfun_eval(args):
    fn, arity = _SPECFUN[args.function]
    if len(args.args) != arity:
        raise UsageError(f"{args.function} takes {arity} argument(s), got {len(args.args)}")
    print(repr(float(fn(*args.args))))
    return EXIT_OK


def catalog_text():
    lines = ["Autonomous gains Phi(z)"]
    for fam, (form, cond) in AUT_CONDITIONS.items():
        lines.append(f"  {fam.value:<10} {form}")
        lines.append(f"  {'':<10} conditions: {cond}")
    lines.append("Time-varying gains")
    for fam, (form, cond) in NONAUT_CONDITIONS.items():
        lines.append(f"  {fam.value:<10} {form}")
        lines.append(f"  {'':<10} conditions: {cond}")
    lines.append("Shipped specs (T_c, t0, gain parameters)")
    for name in config.shipped_specs():
        with open(config.shipped_path(name), encoding="utf-8") as fh:
            raw = json.load(fh)
        g = raw["gain"]
        shape = g.get("shape", g.get("eta"))
        params = ", ".join(f"{k}={v:g}" for k, v in g.get("params", {}).items()) or "-"
        lines.append(f"  {name:<11} {g['family']:<9} T_c={raw['T_c']:g} t0={raw['t0']:g} "
                     f"shape={shape} {params}")
    return "\n".join(lines) + "\n"


def _catalog(args):
    sys.stdout.write(catalog_text())
    return EXIT_OK


_COMMANDS = {"simulate": _simulate, "certify": _certify, "sweep": _sweep,
             "specfun-eval": _specfun_eval, "catalog": _catalog}


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit code."""
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return _COMMANDS[args.command](args)
    except (IntegrationError, QuadratureError, RootError, ArithmeticError) as exc:
        print(f"fixtime: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError, TypeError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"fixtime: error: {msg}", file=sys.stderr)
        return EXIT_INVALID


def main(argv=None):
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
