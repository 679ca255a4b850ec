"""Command-line front end.

Every subcommand prints one JSON object to stdout.  Numbers use 17
significant digits so values round-trip exactly, and the output holds no
timings, so identical arguments give byte-identical output.  ``--csv PATH``
appends one row per run (timings go there).

Exit codes: 0 success, 2 bad input or a numerical error, 3 when a
verification suite misses a tolerance.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import quadrature as qd
from . import quaternion as qt
from . import transforms as tr
from . import verification
from .errors import BadParameter, SliceBergmanError, SpecError
from .functions import Domain
from .kernels import KernelId, evaluate
from .specs import parse_function, parse_quaternion, parse_unit

CSV_HEADER = ["command", "inputs", "vw", "vx", "vy", "vz", "abs_err", "rel_err", "ms"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3


class UsageError(SliceBergmanError):
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output ------------------------------------------------------------------


def _num(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    if v == int(v) and abs(v) < 2**53:
        return f"{int(v)}.0" if v or math.copysign(1, v) > 0 else "-0.0"
    return format(v, ".17g")


def to_json(obj) -> str:
    """Serialize with 17-significant-digit floats and sorted keys."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(to_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{to_json(v)}" for k, v in sorted(obj.items())) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _append_csv(path, command, inputs, value, abs_err, rel_err, ms):
    v = np.zeros(4)
    v[: np.size(value)] = np.ravel(value)[:4]
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh)
        if new:
            w.writerow(CSV_HEADER)
        w.writerow([command, to_json(inputs), *(_num(c) for c in v), _num(abs_err), _num(rel_err), f"{ms:.3f}"])


# -- subcommands -------------------------------------------------------------
# Each returns (payload, value, abs_err, rel_err, exit_code).


def _threads(args):
    return args.threads


def _report_payload(rep: tr.TransformReport):
    payload = {
        "value": rep.value,
        "reference": rep.reference,
        "error": {"abs": rep.abs_error, "rel": rep.rel_error},
        "rule": rep.rule,
    }
    return payload, rep.value, rep.abs_error, rep.rel_error, EXIT_OK


def cmd_kernel(args):
    kernel = KernelId.parse(args.kernel)
    q = parse_quaternion(args.q, "--q")
    r = parse_quaternion(args.r, "--r")
    value = evaluate(kernel, q, r, args.form)
    return {"value": value, "error": None, "rule": {"kernel": kernel.value, "form": args.form}}, value, \
        math.nan, math.nan, EXIT_OK


def cmd_reproduce(args):
    f = parse_function(args.fn)
    rep = tr.reproduce(f, parse_quaternion(args.q, "--q"), Domain.parse(args.domain),
                       parse_unit(args.slice, "--slice"), n_r=args.nr, n_theta=args.ntheta,
                       radius=args.radius, check_convergence=args.check_convergence, threads=_threads(args))
    return _report_payload(rep)


def cmd_bf_transform(args):
    f = parse_function(args.fn)
    rep = tr.bergman_fueter_transform(f, parse_quaternion(args.q, "--q"), parse_unit(args.slice, "--slice"),
                                      n_r=args.nr, n_theta=args.ntheta, threads=_threads(args))
    return _report_payload(rep)


def cmd_contour(args):
    f = parse_function(args.fn)
    rep = tr.fueter_contour_transform(f, parse_quaternion(args.q, "--q"), parse_unit(args.slice, "--slice"),
                                      rho=args.rho, n_nodes=args.nodes)
    return _report_payload(rep)


def cmd_norm(args):
    f = parse_function(args.fn)
    domain = Domain.parse(args.domain)
    unit = parse_unit(args.slice, "--slice")
    weight = qd.WeightId(args.weight)
    rule = {"kind": args.kind, "domain": domain.value, "weight": weight.value}
    stderr = None
    if args.kind == "slice":
        value = qd.slice_norm_sq(f, domain, unit, weight, half=args.half, n_r=args.nr, n_theta=args.ntheta,
                                 radius=args.radius, threads=_threads(args))
        rule |= {"half": args.half, "n_r": args.nr, "n_theta": args.ntheta}
    else:
        if args.half:
            raise BadParameter("--half only applies to --kind slice")
        if args.kind == "volume":
            value = qd.volume_norm_sq_reduced(f, domain, unit, n_r=args.nr, n_theta=args.ntheta, weight=weight,
                                              radius=args.radius, threads=_threads(args))
            rule |= {"n_r": args.nr, "n_theta": args.ntheta}
        else:
            if weight is not qd.WeightId.NONE:
                raise BadParameter("Monte Carlo norms are unweighted")
            value, stderr = qd.volume_integral_mc(f, domain, samples=args.samples, seed=args.seed)
            rule |= {"samples": args.samples, "seed": args.seed}
    payload = {"value": value, "error": None if stderr is None else {"stderr": stderr}, "rule": rule}
    return payload, value, math.nan, math.nan if stderr is None else stderr, EXIT_OK


def cmd_verify(args):
    if not args.tol_scale > 0:
        raise BadParameter("--tol-scale must be positive")
    results = verification.run_suite(args.suite, args.tol_scale)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    payload = {
        "suite": args.suite,
        "tol_scale": args.tol_scale,
        "passed": ok,
        "failed": sum(not r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
    return payload, math.nan, math.nan, math.nan, EXIT_OK if ok else EXIT_VERIFY


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand; each
    # parser gets its own copy so defaults are not shared
    def common():
        c = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
        c.add_argument("--csv", metavar="PATH", help="append a result row to this CSV file")
        c.add_argument("--threads", type=int,
                       help=f"worker threads for quadrature (default: ${qd.THREADS_ENV} or 1)")
        return c

    p = _Parser(prog="slice-bergman", description="Slice regular Bergman kernels, transforms and norms.",
                parents=[common()])
    p.set_defaults(csv=None, threads=None)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common()], **kw)

    sub.add_parser = add_parser

    def fn_arg(sp):
        sp.add_argument("--fn", required=True, help="JSON function description")

    def grid(sp, nr, nt):
        sp.add_argument("--nr", type=int, default=nr, help="radial nodes")
        sp.add_argument("--ntheta", type=int, default=nt, help="angular nodes")

    k = sub.add_parser("kernel", help="evaluate a kernel at (q, r)")
    k.add_argument("--kernel", default="ball_I", help="disk, ball_I, ball_II, half_A, half_B, q_factor, bergman_fueter")
    k.add_argument("--q", required=True)
    k.add_argument("--r", required=True)
    k.add_argument("--form", choices=["I", "II", "A", "B"])
    k.set_defaults(func=cmd_kernel)

    r = sub.add_parser("reproduce", help="reproducing integral on one slice")
    fn_arg(r)
    r.add_argument("--q", required=True)
    r.add_argument("--domain", default="ball", choices=["ball", "halfspace"])
    r.add_argument("--slice", default="1,0,0")
    grid(r, 64, 128)
    r.add_argument("--radius", type=float, help="half-plane truncation (half-space only)")
    r.add_argument("--check-convergence", action="store_true")
    r.set_defaults(func=cmd_reproduce)

    b = sub.add_parser("bf-transform", help="Laplacian of f from the kernel area integral")
    fn_arg(b)
    b.add_argument("--q", required=True)
    b.add_argument("--slice", default="1,0,0")
    grid(b, 96, 192)
    b.set_defaults(func=cmd_bf_transform)

    c = sub.add_parser("contour", help="Laplacian of f from a circle integral")
    fn_arg(c)
    c.add_argument("--q", required=True)
    c.add_argument("--slice", default="1,0,0")
    c.add_argument("--rho", type=float, default=0.8)
    c.add_argument("--nodes", type=int, default=256)
    c.set_defaults(func=cmd_contour)

    n = sub.add_parser("norm", help="slice, reduced volume or Monte Carlo norms")
    fn_arg(n)
    n.add_argument("--domain", default="ball", choices=["ball", "halfspace"])
    n.add_argument("--slice", default="1,0,0")
    n.add_argument("--weight", default="none", choices=[w.value for w in qd.WeightId])
    n.add_argument("--half", action="store_true", help="upper half of the slice only")
    n.add_argument("--kind", default="slice", choices=["slice", "volume", "mc"])
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--samples", type=int, default=10**6)
    n.add_argument("--radius", type=float)
    grid(n, 64, 128)
    n.set_defaults(func=cmd_norm)

    v = sub.add_parser("verify", help="run acceptance checks")
    v.add_argument("--suite", default="all", choices=sorted(verification.SUITES))
    v.add_argument("--tol-scale", type=float, default=1.0)
    v.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.threads is None:
            args.threads = qd.default_threads()
        if args.threads < 1:
            raise BadParameter("--threads must be at least 1")
        payload, value, abs_err, rel_err, code = args.func(args)
    except SliceBergmanError as exc:
        print(to_json({"error": {"kind": exc.kind, "detail": str(exc)}}))
        return EXIT_INPUT
    except (ValueError, TypeError) as exc:
        print(to_json({"error": {"kind": SpecError.kind, "detail": str(exc)}}))
        return EXIT_INPUT
    print(to_json(payload))
    if args.csv:
        inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "csv", "command")}
        _append_csv(args.csv, args.command, inputs, value, abs_err, rel_err,
                    1e3 * (time.perf_counter() - started))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
