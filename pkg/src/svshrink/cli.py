"""``svshrink`` command line.

Exit status: 0 on success, 1 on usage errors, 2 on numeric or domain failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .denoise import aspect_ratio, denoise
from .exceptions import CrossingError, DomainError, MinimizerError, SVDConvergenceError
from .losses import get_loss
from .montecarlo import NoiseKind, SimConfig, run
from .noise import mp_median
from .shrinkers import SHRINKER_IDS, resolve_shrinker
from .solver import build_optimal_shrinker, format_number, loss_curve
from .spike_model import SpikeModel

LOSSES = ("frobenius", "operator", "nuclear")
EXIT_USAGE = 1
EXIT_NUMERIC = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
    return vals


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return v


def _id_list(text: str) -> list[str]:
    ids = [v.strip() for v in text.split(",") if v.strip()]
    bad = [v for v in ids if v not in SHRINKER_IDS]
    if bad or not ids:
        raise argparse.ArgumentTypeError(
            f"unknown shrinker(s) {bad}; choose from {', '.join(SHRINKER_IDS)}"
        )
    return ids


def read_matrix_csv(fh) -> np.ndarray:
    rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise DomainError("matrix CSV is empty")
    width = len(rows[0])
    for i, row in enumerate(rows, 1):
        if len(row) != width:
            raise DomainError(f"row {i} has {len(row)} entries, expected {width}")
    try:
        A = np.array([[float(c) for c in row] for row in rows])
    except ValueError as exc:
        raise DomainError(f"non-numeric matrix entry: {exc}") from None
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    return A


def write_matrix_csv(A: np.ndarray, fh) -> None:
    for row in np.atleast_2d(A):
        fh.write(",".join(format_number(v) for v in row) + "\n")


def _round_json(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(format_number(obj))
    if isinstance(obj, dict):
        return {k: _round_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_json(v) for v in obj]
    return obj


def _dump_json(obj, fh) -> None:
    json.dump(_round_json(obj), fh, indent=2, sort_keys=True)
    fh.write("\n")


def _emit(text: str, path: str | None, out) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_denoise(args, out):
    with open(args.input, newline="") as fh:
        Y = read_matrix_csv(fh)
    sh = resolve_shrinker("optimal", args.loss, SpikeModel(aspect_ratio(Y)))
    sigma = None if args.estimate_sigma else args.sigma
    Xhat, report = denoise(Y, sh, sigma=sigma, loss_id=args.loss)
    buf = io.StringIO()
    write_matrix_csv(Xhat, buf)
    _emit(buf.getvalue(), args.output, out)
    if args.report:
        with open(args.report, "w") as fh:
            _dump_json({**report.to_dict(), "version": __version__}, fh)


def cmd_eval(args, out):
    sh = resolve_shrinker(args.shrinker, args.loss, SpikeModel(args.beta))
    for y in args.y:
        out.write(f"{format_number(y)},{format_number(sh.eval(y))}\n")


def cmd_losscurve(args, out):
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not 0 < args.x_min < args.x_max:
        raise UsageError("need 0 < --x-min < --x-max")
    model = SpikeModel(args.beta)
    loss = get_loss(args.loss)
    xs = np.linspace(args.x_min, args.x_max, args.steps)
    curves = [
        loss_curve(loss, model, resolve_shrinker(sid, args.loss, model), xs, sid)
        for sid in args.shrinkers
    ]
    buf = io.StringIO()
    buf.write(",".join(["x"] + args.shrinkers) + "\n")
    for i, x in enumerate(xs):
        buf.write(",".join([format_number(x)] + [format_number(c.samples[i][1]) for c in curves]) + "\n")
    _emit(buf.getvalue(), args.output, out)


def cmd_solve(args, out):
    tab = build_optimal_shrinker(
        get_loss(args.loss), SpikeModel(args.beta), y_max=args.y_max, n_knots=args.knots
    )
    _emit(tab.to_csv(), args.output, out)


def cmd_mp_median(args, out):
    out.write(format_number(mp_median(args.beta, args.tol)) + "\n")


def cmd_simulate(args, out):
    cfg = SimConfig(
        n=args.n,
        beta=args.beta,
        spikes=tuple(args.spikes),
        noise_kind=NoiseKind(args.noise),
        loss_id=args.loss,
        shrinker_id=args.shrinker,
        reps=args.reps,
        seed=args.seed,
    )
    summary = run(cfg)
    buf = io.StringIO()
    _dump_json({**summary.to_dict(), "version": __version__}, buf)
    _emit(buf.getvalue(), args.json, out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="svshrink", description="Optimal singular value shrinkage.", allow_abbrev=False)
    p.add_argument("--version", action="version", version=f"svshrink {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    d = sub.add_parser("denoise", help="denoise a matrix stored as CSV", allow_abbrev=False)
    d.add_argument("--input", required=True, help="matrix CSV (no header, comma-separated rows)")
    d.add_argument("--loss", required=True, choices=LOSSES, help="loss the shrinker is optimal for")
    g = d.add_mutually_exclusive_group(required=True)
    g.add_argument("--sigma", type=_finite, help="known noise level of Y = X + sigma Z")
    g.add_argument("--estimate-sigma", action="store_true", help="estimate sigma from the median singular value")
    d.add_argument("--output", help="write the estimate here instead of standard output")
    d.add_argument("--report", help="write a JSON report of the shrinkage here")
    d.set_defaults(func=cmd_denoise)

    e = sub.add_parser("eval", help="evaluate a shrinker at given singular values", allow_abbrev=False)
    e.add_argument("--loss", required=True, choices=LOSSES, help="loss family")
    e.add_argument("--beta", required=True, type=_finite, help="aspect ratio m/n in (0, 1]")
    e.add_argument("--y", required=True, type=_float_list, help="comma-separated singular values (natural scale)")
    e.add_argument("--shrinker", default="optimal", choices=SHRINKER_IDS, help="shrinker id (default: optimal)")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("losscurve", help="asymptotic loss of shrinkers for one spike", allow_abbrev=False)
    c.add_argument("--loss", required=True, choices=LOSSES, help="loss family")
    c.add_argument("--beta", required=True, type=_finite, help="aspect ratio m/n in (0, 1]")
    c.add_argument("--x-min", required=True, type=_finite, help="smallest spike strength")
    c.add_argument("--x-max", required=True, type=_finite, help="largest spike strength")
    c.add_argument("--steps", required=True, type=int, help="number of evenly spaced spike strengths")
    c.add_argument("--shrinkers", type=_id_list, default=["optimal", "hard", "zero"],
                   help="comma-separated shrinker ids (default: optimal,hard,zero)")
    c.add_argument("--output", help="write CSV here instead of standard output")
    c.set_defaults(func=cmd_losscurve)

    s = sub.add_parser("solve", help="tabulate the optimal shrinker numerically", allow_abbrev=False)
    s.add_argument("--loss", required=True, choices=LOSSES, help="loss family")
    s.add_argument("--beta", required=True, type=_finite, help="aspect ratio m/n in (0, 1]")
    s.add_argument("--y-max", type=_finite, default=10.0, help="largest tabulated singular value (default: 10)")
    s.add_argument("--knots", type=int, default=512, help="number of knots, at least 16 (default: 512)")
    s.add_argument("--output", help="write CSV (y,eta) here instead of standard output")
    s.set_defaults(func=cmd_solve)

    mp = sub.add_parser("mp-median", help="median of the Marchenko-Pastur law", allow_abbrev=False)
    mp.add_argument("--beta", required=True, type=_finite, help="aspect ratio in (0, 1]")
    mp.add_argument("--tol", type=_finite, default=1e-12, help="bisection width (default: 1e-12)")
    mp.set_defaults(func=cmd_mp_median)

    sim = sub.add_parser("simulate", help="Monte Carlo run of the spiked model", allow_abbrev=False)
    sim.add_argument("--n", required=True, type=int, help="number of columns")
    sim.add_argument("--beta", required=True, type=_finite, help="aspect ratio; m = round(beta n)")
    sim.add_argument("--spikes", type=_float_list, default=[], help="comma-separated signal singular values, decreasing")
    sim.add_argument("--noise", choices=[k.value for k in NoiseKind], default="gaussian", help="noise law")
    sim.add_argument("--loss", choices=LOSSES, default="frobenius", help="loss to report")
    sim.add_argument("--shrinker", choices=SHRINKER_IDS, default="optimal", help="shrinker id")
    sim.add_argument("--reps", type=int, default=20, help="number of replicates")
    sim.add_argument("--seed", type=int, default=0, help="base seed")
    sim.add_argument("--json", help="write the JSON summary here instead of standard output")
    sim.set_defaults(func=cmd_simulate)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"svshrink {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (DomainError, CrossingError, MinimizerError, SVDConvergenceError, ValueError, KeyError) as exc:
        sys.stderr.write(f"svshrink {args.command}: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        sys.stderr.write(f"svshrink {args.command}: {exc}\n")
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
