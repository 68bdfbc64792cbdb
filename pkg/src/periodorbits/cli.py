"""Command-line entry point.

Exit status is 0 on success, 2 on invalid input or a failed numerical
precondition, and 3 when a request is refused for exceeding the compute budget.
"""

import argparse
import csv
import io
import json
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import dynamics, enumeration, order, universality
from .errors import DomainError, PartialLadderError, PrecisionFloorError, ResourceError

EXIT_OK, EXIT_INVALID, EXIT_REFUSED = 0, 2, 3


def fmt(v) -> str:
    """16 significant digits; plain notation on [0.01, 10)."""
    return format(float(v), ".16g")


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --- subcommands ---------------------------------------------------------------

def cmd_order(a) -> str:
    return order.compare(a.m, a.n) + "\n"


def cmd_classify(a) -> str:
    predicate = a.predicate.replace("-", "_")
    classes = enumeration.enumerate_classes(a.period, predicate, a.workers)
    return _json([c.as_json() for c in classes])


def _window(a):
    lo, hi = dynamics.default_window(a.family)
    lo = a.lo if a.lo is not None else lo
    hi = a.hi if a.hi is not None else hi
    return dynamics.ScanConfig(lo, hi, grid_density=a.density)


def cmd_scan(a) -> str:
    recs = dynamics.find_superstable(a.family, a.period, _window(a))
    return _csv(("parameter", "period", "appearance"), ((r.parameter, r.period, r.appearance) for r in recs))


def cmd_bifscan(a) -> str:
    if a.steps < 2 or a.samples < 1 or a.transient < 0:
        raise DomainError("need steps >= 2, samples >= 1 and a non-negative transient")
    if not 0.0 <= a.lo < a.hi <= 1.0:
        raise DomainError(f"parameter window [{a.lo}, {a.hi}] must lie inside [0, 1]")
    fam = dynamics.get_family(a.family)
    lams = np.linspace(a.lo, a.hi, a.steps)
    x = dynamics.iterate(fam, lams, np.full_like(lams, fam.x_max), a.transient)
    rows = []
    samples = []
    for _ in range(a.samples):
        x = fam(lams, x)
        samples.append(x)
    for i, lam in enumerate(lams):
        rows.extend((float(lam), float(s[i])) for s in samples)
    return _csv(("parameter", "x"), rows)


def cmd_feig(a) -> str:
    est = universality.cascade(a.family, a.q, a.appearance, a.smax)
    return _json(est.as_json())


def cmd_blockrate(a) -> str:
    params = universality.block_parameters(a.family, a.s, a.appearance, a.qmax)
    qs = sorted(params)
    expected = list(range(3, a.qmax + 1, 2))
    if qs != expected:
        raise DomainError(f"no {a.appearance}-th appearance found for 2^{a.s} q with q in "
                          f"{sorted(set(expected) - set(qs))}")
    lams = [params[q] for q in qs if q >= 5]
    ratios = universality.block_rate(lams)
    return _json({
        "family": a.family,
        "s": a.s,
        "appearance": a.appearance,
        "parameters": {str(q): params[q] for q in qs},
        "ratios": ratios,
        "rate": ratios[-1],
    })


def cmd_pattern(a) -> str:
    return _json(universality.pattern_row(a.n).as_json())


def cmd_gfun(a) -> str:
    if a.points < 2 or a.half_width <= 0:
        raise DomainError("need at least two grid points and a positive half width")
    grid = np.linspace(-a.half_width, a.half_width, a.points)
    ladder = dynamics.period_doubling_ladder(a.family, a.q, a.appearance, max(a.depth + 1, 2))
    alpha = universality.alpha_ratios(a.family, a.q, a.appearance, ladder)[-1]
    rows = []
    for n in range(a.depth + 1):
        sample = universality.universal_function_approx(a.family, a.q, a.appearance, n, grid, ladder, alpha)
        rows.extend((n, x, v) for x, v in zip(sample.grid, sample.values))
    return _csv(("depth", "x", "value"), rows)


def cmd_verify_pattern(a) -> str:
    recs = universality.scan_odd_records(a.family, a.qmax)
    return _json(universality.verify_pattern_against_scan(a.family, a.n, recs, a.qmax).as_json())


# Pinned configuration for the parameter table: appearances are counted from the
# bottom of the period-doubling cascade, and the density resolves every
# 16-orbit window below the period-3 window.
TABLE_LO = 0.45
TABLE_DENSITY = 2.0**20
TABLE_EXTRA_PERIODS = (16,)


def parameter_table(family: str, max_period: int) -> List[dynamics.SuperstableRecord]:
    if not 1 <= max_period <= 16:
        raise DomainError("max period must lie in 1..16")
    cfg = dynamics.ScanConfig(TABLE_LO, dynamics.default_window(family)[1], grid_density=TABLE_DENSITY)
    periods = sorted(set(range(1, max_period + 1)) | set(TABLE_EXTRA_PERIODS))
    recs = [r for p in periods for r in dynamics.find_superstable(family, p, cfg)]
    return sorted(recs, key=lambda r: r.parameter)


def cmd_reproduce(a) -> str:
    recs = parameter_table(a.family, a.max_period)
    return _csv(("parameter", "period", "appearance"), ((r.parameter, r.period, r.appearance) for r in recs))


# --- parser ----------------------------------------------------------------------

def _add_family(p, default="logistic"):
    p.add_argument("--family", default=default, choices=sorted(dynamics.FAMILIES),
                   help="unimodal family (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="periodorbits",
        description="Periodic-orbit combinatorics and universality numerics for interval maps.",
    )
    parser.add_argument("-o", "--output", help="write to this file instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", help="compare two periods in the Sharkovskii order",
                       description="Print LESS, GREATER or EQUAL for M relative to N in the Sharkovskii order.")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("classify", help="enumerate minimal or second minimal cyclic permutations",
                       description="List inverse-merged classes of minimal or second minimal cyclic "
                                   "permutations of one period, with transition digraphs, turning-point "
                                   "shapes and the catalog index of the nine second minimal 7-types.")
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--predicate", choices=("minimal", "second-minimal"), required=True)
    p.add_argument("--workers", type=int, default=1, help="processes for the search (default: 1)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", help="superstable parameters of one period",
                       description="Superstable parameters of least period P in a window, ranked by "
                                   "appearance, as CSV.")
    _add_family(p)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--lo", type=float, help="window start (default: family appearance window)")
    p.add_argument("--hi", type=float, help="window end (default: family appearance window)")
    p.add_argument("--density", type=float, help="grid points per unit parameter")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bifscan", help="raw bifurcation-diagram samples",
                       description="Attractor samples of the critical orbit on a uniform parameter grid, "
                                   "as plot-ready CSV.")
    _add_family(p)
    p.add_argument("--lo", type=float, default=0.7)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--transient", type=int, default=1000)
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_bifscan)

    p = sub.add_parser("feig", help="period-doubling rates of one window",
                       description="Follow the cascade of doublings of the window Q_J and report the "
                                   "parameter ladder, gap ratios delta, critical-distance ratios alpha "
                                   "and the extrapolated accumulation point.")
    _add_family(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--appearance", type=int, default=1)
    p.add_argument("--smax", type=int, default=4)
    p.set_defaults(func=cmd_feig)

    p = sub.add_parser("blockrate", help="accumulation rate of odd windows in a block",
                       description="Parameters of the J-th 2^S q orbits for odd q up to QMAX and the "
                                   "ratios of successive gaps; the last ratio estimates the block rate.")
    _add_family(p)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--appearance", type=int, default=1)
    p.add_argument("--qmax", type=int, default=31)
    p.set_defaults(func=cmd_blockrate)

    p = sub.add_parser("pattern", help="pattern row for an appearance bound",
                       description="Signed period increments, column spans and appearance indices of "
                                   "the pattern row for bound N.")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("gfun", help="universal-function approximants",
                       description="Rescaled iterates approximating the universal function of a cascade, "
                                   "centred on the critical point, for depths 0..DEPTH.")
    _add_family(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--appearance", type=int, default=1)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--half-width", type=float, default=0.35)
    p.set_defaults(func=cmd_gfun)

    p = sub.add_parser("verify-pattern", help="check a pattern row against scanned windows",
                       description="Compare the descending order of odd-period appearances up to QMAX "
                                   "with the walk predicted by the pattern row for bound N.")
    _add_family(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--qmax", type=int, default=13)
    p.set_defaults(func=cmd_verify_pattern)

    p = sub.add_parser("reproduce", help="regenerate the superstable parameter table",
                       description="Superstable parameters for periods 1..MAX_PERIOD and 16, with "
                                   "appearances counted from the bottom of the doubling cascade.")
    p.add_argument("target", choices=("appendix-c",))
    _add_family(p)
    p.add_argument("--max-period", type=int, default=9)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (DomainError, PartialLadderError, PrecisionFloorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
