"""Command-line front end.

Exit codes: 0 success / feasible / stable, 1 verification failure,
2 infeasible certificate or unstable verdict, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .atlas import ModelVariant, classify
from .certificate import certify, max_Z, phase_scan
from .core import DomainError, PhysicalParams
from .suites import SUITES, resolve_jobs, run_suite

EXIT_OK, EXIT_FAIL, EXIT_UNSTABLE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _clean(obj):
    """Make ``obj`` JSON-safe: numpy scalars to Python, non-finite floats to null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, shortest round-trip float repr, trailing newline."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _alpha(args) -> float:
    if args.alpha_inverse is not None:
        try:
            inv = Fraction(args.alpha_inverse)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--alpha-inverse: not a number: {args.alpha_inverse!r}") from None
        if inv <= 0:
            raise UsageError("--alpha-inverse must be positive")
        return float(1 / inv)
    if args.alpha is None:
        raise UsageError("one of --alpha or --alpha-inverse is required")
    return args.alpha


def _add_alpha(p, required: bool = True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--alpha", type=float, help="fine-structure constant")
    g.add_argument("--alpha-inverse", type=str, help="1/alpha, e.g. 137 or 137.036")


def _yes_no(s: str) -> bool:
    v = s.lower()
    if v in ("yes", "y", "true", "1"):
        return True
    if v in ("no", "n", "false", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected yes/no, got {s!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qse", description="Stability certificates and verification suites.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", help="solve the constant system and print the energy bound")
    _add_alpha(c)
    c.add_argument("--Z", type=float, required=True)
    c.add_argument("--m", type=float, default=1.0)
    c.add_argument("--lambda", dest="Lambda", type=float, default=1.0)
    c.add_argument("--N", type=int, default=1)
    c.add_argument("--K", type=int, default=1)
    c.add_argument("--eps", type=float, default=None, help="fix epsilon instead of optimizing")
    c.add_argument("--optimize-eps", action="store_true", help="optimize epsilon (the default without --eps)")
    c.add_argument("--paper-mode", action="store_true", help="use the kappa floor 64.5")
    c.add_argument("--output", "-o")

    m = sub.add_parser("maxz", help="largest charge with a feasible certificate")
    _add_alpha(m)
    m.add_argument("--paper-mode", action="store_true")
    m.add_argument("--z-cap", type=int, default=10**9)
    m.add_argument("--output", "-o")

    ph = sub.add_parser("phase", help="scan max_Z over an alpha grid, CSV output")
    ph.add_argument("--alpha-min", type=float, required=True)
    ph.add_argument("--alpha-max", type=float, required=True)
    ph.add_argument("--steps", type=int, required=True)
    ph.add_argument("--log", action="store_true", help="geometric instead of linear spacing")
    ph.add_argument("--z-max", type=int, default=10**9)
    ph.add_argument("--paper-mode", action="store_true")
    ph.add_argument("--jobs", type=int, default=None)
    ph.add_argument("--output", "-o")

    cl = sub.add_parser("classify", help="stability verdict for a model variant")
    cl.add_argument("--projector", required=True, choices=["free", "dressed", "free_D0", "dressed_DA"])
    cl.add_argument("--field", required=True, choices=["classical", "quantized"])
    cl.add_argument("--cutoff", required=True, type=_yes_no)
    cl.add_argument("--coulomb", required=True, type=_yes_no)
    _add_alpha(cl)
    cl.add_argument("--Z", type=float, default=1.0)
    cl.add_argument("--N", type=int, default=1)
    cl.add_argument("--K", type=int, default=1)
    cl.add_argument("--alpha-c", type=float, default=None)
    cl.add_argument("--paper-mode", action="store_true")
    cl.add_argument("--output", "-o")

    v = sub.add_parser("verify", help="run a randomized verification suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=None)
    v.add_argument("--records", action="store_true", help="include per-trial records")
    v.add_argument("--output", "-o")
    return p


def cmd_certify(args) -> int:
    params = PhysicalParams(alpha=_alpha(args), Z=args.Z, m=args.m, Lambda=args.Lambda, N=args.N, K=args.K)
    cert = certify(params, epsilon=args.eps, paper_mode=args.paper_mode)
    _emit(dumps(cert.as_dict()), args.output)
    return EXIT_OK if cert.feasible else EXIT_UNSTABLE


def cmd_maxz(args) -> int:
    alpha = _alpha(args)
    z = max_Z(alpha, paper_mode=args.paper_mode, Z_cap=args.z_cap)
    _emit(dumps({"alpha": alpha, "max_Z": z, "paper_mode": args.paper_mode}), args.output)
    return EXIT_OK


def cmd_phase(args) -> int:
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if not 0 < args.alpha_min <= args.alpha_max:
        raise UsageError("need 0 < --alpha-min <= --alpha-max")
    space = np.geomspace if args.log else np.linspace
    grid = [float(a) for a in space(args.alpha_min, args.alpha_max, args.steps)]
    rows = phase_scan(grid, Z_max=args.z_max, paper_mode=args.paper_mode, jobs=resolve_jobs(args.jobs))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "max_Z", "eps"])
    for r in rows:
        w.writerow([repr(r.alpha), r.max_Z, "" if r.eps is None else repr(r.eps)])
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    projector = {"free": "free_D0", "dressed": "dressed_DA"}.get(args.projector, args.projector)
    variant = ModelVariant(projector, args.field, args.cutoff, args.coulomb)
    verdict = classify(variant, _alpha(args), args.Z, args.N, args.K, alpha_c=args.alpha_c, paper_mode=args.paper_mode)
    out = verdict.as_dict()
    out["variant"] = {"projector": projector, "field": args.field, "cutoff": args.cutoff, "coulomb": args.coulomb}
    _emit(dumps(out), args.output)
    return EXIT_UNSTABLE if verdict.kind.unstable else EXIT_OK


def cmd_verify(args) -> int:
    if args.trials is not None and args.trials < 1:
        raise UsageError("--trials must be >= 1")
    result = run_suite(args.suite, trials=args.trials, seed=args.seed, jobs=args.jobs)
    out = result.as_dict()
    out["seed"] = args.seed
    if not args.records:
        out.pop("records")
        if result.diagnostic:
            # diagnostic suites always log their per-trial values
            out["records"] = result.records
    _emit(dumps(out), args.output)
    return EXIT_OK if result.passed else EXIT_FAIL


COMMANDS = {
    "certify": cmd_certify,
    "maxz": cmd_maxz,
    "phase": cmd_phase,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"qse {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
