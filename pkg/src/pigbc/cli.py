"""Command-line front end.

Every number printed here comes from the library modules; this file only
parses flags, lays out grids and formats output.

Output conventions
------------------
* JSON documents carry ``"schema": "pigbc/1"``. Unbounded values are
  ``null`` with a sibling ``*_unbounded`` flag.
* CSV: comma separated, ``.`` decimal point, 17 significant digits, header
  row first. A column that can be unbounded is followed by a
  ``<name>_unbounded`` column (0/1) and left empty when the flag is 1. Not
  applicable values are empty as well.
* ``--steps n`` means ``n`` intervals, i.e. ``n + 1`` points including both
  ends. ``--grid NX,NM`` counts points, ``NX, NM >= 2``. The default window
  is ``x in [0, 2]``, ``M in [0, 1]``.

Exit codes: 0 success, 1 usage error, 2 domain error. Errors go to stderr
prefixed with ``pigbc-error[usage]:`` or ``pigbc-error[domain]:``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import bounds, improve, regions
from .channel import Channel, compose, composition_rule, to_canonical
from .errors import DomainError

SCHEMA = "pigbc/1"
DEFAULT_GRID = (201, 101)
DEFAULT_WINDOW = (2.0, 1.0)
DEFAULT_STEPS = 200
COMPOSE_ORDER = "outer o inner (inner applied first)"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- formatting --------------------------------------------------------------


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v) or math.isinf(v):
            return ""
        return format(v, ".17g")
    return str(v)


class Table:
    """CSV table whose ``unbounded`` columns get an extra flag column."""

    def __init__(self, columns, unbounded=()):
        self.columns = list(columns)
        self.unbounded = set(unbounded)
        self.rows = []

    def header(self):
        out = []
        for c in self.columns:
            out.append(c)
            if c in self.unbounded:
                out.append(f"{c}_unbounded")
        return out

    def add(self, **row):
        cells = []
        for c in self.columns:
            v = row.get(c)
            if c in self.unbounded:
                inf = isinstance(v, float) and math.isinf(v)
                cells += [fmt(None if inf else v), fmt(inf)]
            else:
                cells.append(fmt(v))
        self.rows.append(cells)

    def write(self, stream):
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(self.header())
        w.writerows(self.rows)


def _json_clean(obj):
    if isinstance(obj, dict):
        return {k: _json_clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return None if (math.isnan(obj) or math.isinf(obj)) else obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(doc: dict, stream) -> None:
    doc = {"schema": SCHEMA, **_json_clean(doc)}
    json.dump(doc, stream, indent=2, allow_nan=False)
    stream.write("\n")


def _channel(args, xname="x", mname="m", label="channel") -> Channel:
    xv, mv = getattr(args, xname), getattr(args, mname)
    if xv is None or mv is None:
        flag = lambda n: "--" + n.replace("_", "-")
        raise UsageError(f"{label} needs {flag(xname)} and {flag(mname)}")
    return Channel(xv, mv)


def _pair(text: str, cast, name: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{name} expects two comma-separated values, got {text!r}")
    try:
        return cast(parts[0]), cast(parts[1])
    except ValueError:
        raise UsageError(f"{name} expects numbers, got {text!r}") from None


def _grid(args):
    nx, nm = _pair(args.grid, int, "--grid") if args.grid else DEFAULT_GRID
    if nx < 2 or nm < 2:
        raise UsageError("--grid dimensions must be at least 2")
    return nx, nm


def _window(args):
    xm, mm = _pair(args.window, float, "--window") if args.window else DEFAULT_WINDOW
    if not (xm > 0 and mm > 0 and math.isfinite(xm) and math.isfinite(mm)):
        raise UsageError("--window values must be positive and finite")
    return xm, mm


def _steps(args, lo_default, hi_default):
    lo = lo_default if args.x_from is None else args.x_from
    hi = hi_default if args.x_to is None else args.x_to
    n = DEFAULT_STEPS if args.steps is None else args.steps
    if n < 1:
        raise UsageError("--steps must be at least 1")
    if not hi >= lo:
        raise UsageError("--x-to must not be below --x-from")
    return np.linspace(lo, hi, n + 1)


def _format(args, default):
    return args.format or default


# --- subcommands ---------------------------------------------------------------


def cmd_classify(args, out):
    c = _channel(args)
    doc = {"channel": c.as_dict(), "kind": c.kind, **regions.classify(c).as_dict()}
    if _format(args, "json") == "json":
        write_json(doc, out)
    else:
        t = Table(["x", "M", "m_eb", "m_ad", "is_eb", "is_ad", "regime"])
        t.add(x=c.x, M=c.M, m_eb=doc["m_eb"], m_ad=doc["m_ad"], is_eb=doc["is_eb"],
              is_ad=doc["is_ad"], regime=doc["regime"])
        t.write(out)


def cmd_compose(args, out):
    inner = _channel(args, "x1", "m1", "inner channel")
    outer = _channel(args, "x2", "m2", "outer channel")
    c = compose(inner, outer)
    rule = composition_rule(to_canonical(inner), to_canonical(outer))
    if _format(args, "json") == "json":
        write_json(
            {
                "order": COMPOSE_ORDER,
                "inner": inner.as_dict(),
                "outer": outer.as_dict(),
                "result": c.as_dict(),
                "kind": c.kind,
                "rule": rule,
            },
            out,
        )
    else:
        t = Table(["x1", "M1", "x2", "M2", "x", "M", "kind", "rule"])
        t.add(x1=inner.x, M1=inner.M, x2=outer.x, M2=outer.M, x=c.x, M=c.M, kind=c.kind, rule=rule)
        t.write(out)


def cmd_bounds(args, out):
    c = _channel(args)
    rep = bounds.report(c)
    if _format(args, "json") == "json":
        write_json(rep.as_dict(), out)
    else:
        t = Table(["capacity", "name", "side", "applicable", "extrapolated", "value"], unbounded=["value"])
        for cap, entries in (("K_Q2", rep.k_q2), ("Q_P", rep.q_p)):
            for e in entries:
                t.add(capacity=cap, name=e.name, side=e.side, applicable=e.applicable,
                      extrapolated=e.extrapolated, value=e.value)
        t.write(out)


def _membership_label(in_low: bool, in_high: bool) -> str:
    if in_low and in_high:
        return "contact"
    if in_low:
        return "L"
    if in_high:
        return "H"
    return "neither"


def cmd_region(args, out):
    """Membership raster around a reference; a point query when ``--x/--m`` are given."""
    ref = _channel(args, "ref_x", "ref_m", "reference")
    if args.x is not None or args.m is not None:
        p = _channel(args)
        lo, hi = regions.in_low_ground(ref, p), regions.in_high_ground(ref, p)
        write_json(
            {"ref": ref.as_dict(), "point": p.as_dict(), "in_low": lo, "in_high": hi,
             "label": _membership_label(lo, hi)},
            out,
        )
        return
    nx, nm = _grid(args)
    xm, mm = _window(args)
    t = Table(["x", "M", "label", "in_low", "in_high"])
    # row-major: x' is the slow index, M' the fast one
    for xp in np.linspace(0.0, xm, nx):
        for mp in np.linspace(0.0, mm, nm):
            p = Channel(float(xp), float(mp))
            lo, hi = regions.in_low_ground(ref, p), regions.in_high_ground(ref, p)
            t.add(x=p.x, M=p.M, label=_membership_label(lo, hi), in_low=lo, in_high=hi)
    t.write(out)


def cmd_border(args, out):
    ref = _channel(args, "ref_x", "ref_m", "reference")
    if ref.x == 0:
        raise DomainError("border curves are undefined for a reference with x = 0")
    curve = regions.border_curve(ref)
    xm, _ = _window(args)
    t = Table(["x", "f1", "f2", "lower", "upper", "lower_piece", "upper_piece"])
    for xp in _steps(args, 0.0, xm):
        xp = float(xp)
        t.add(
            x=xp,
            f1=curve.f1(xp),
            f2=curve.f2(xp),
            lower=curve.lower(xp),
            upper=curve.upper(xp),
            lower_piece=curve.piece_at(xp, "low")[3],
            upper_piece=curve.piece_at(xp, "high")[3],
        )
    t.write(out)


def cmd_witness(args, out):
    ref = _channel(args, "ref_x", "ref_m", "reference")
    p = _channel(args, label="target")
    w = regions.witness_low_ground(ref, p)
    write_json({**w.as_dict(), "single_factor": w.single_factor}, out)


def cmd_improve(args, out):
    c = _channel(args)
    mode = args.mode or "upper"
    if mode == "q1":
        r = improve.improved_q1(c, tol=args.tol)
    elif mode == "q2":
        r = improve.improved_q2(c)
    elif mode == "upper":
        r = improve.improved_upper(c, tol=args.tol)
    else:
        raise UsageError(f"improve --mode must be q1, q2 or upper, got {mode!r}")
    write_json({"channel": c.as_dict(), "mode": mode, **r.as_dict()}, out)


def _envelope_table():
    cols = ["x", "M", *improve.ENVELOPE_LABELS, "best_upper", "best_label", "improved", "q1_branch",
            "lower_q", "zero_qp", "zero_all"]
    return Table(cols, unbounded=[*improve.ENVELOPE_LABELS, "best_upper"])


def _add_envelope(t: Table, c: Channel, tol: float):
    e = improve.best_upper_envelope(c, tol=tol)
    t.add(x=c.x, M=c.M, **e.values, best_upper=e.best, best_label=e.label, improved=e.improved,
          q1_branch=e.q1_branch, lower_q=e.lower, zero_qp=e.zero_q, zero_all=e.zero_all)


def _bounds_table():
    cols = ["x", "M", "plob_k", "lower_q2_k", "best_upper_q", "best_lower_q", "zero_qp", "zero_all"]
    return Table(cols, unbounded=["plob_k", "best_upper_q"])


def _add_bounds(t: Table, c: Channel, tol: float):
    rep = bounds.report(c)
    t.add(x=c.x, M=c.M, plob_k=rep.entry("K", "plob").value, lower_q2_k=rep.entry("K", "lower_q2_k").value,
          best_upper_q=rep.best_upper_q, best_lower_q=rep.best_lower_q, zero_qp=rep.zero_q,
          zero_all=rep.zero_all)


SWEEP_MODES = {"best-upper": (_envelope_table, _add_envelope), "bounds": (_bounds_table, _add_bounds)}


def sweep_points(args):
    """Points of a sweep in output order.

    ``--fixed-m`` sweeps ``x`` over ``[--x-from, --x-to]``; ``--fixed-x``
    sweeps ``M`` over the same flags (they bound the free variable). Without
    either, a ``--grid`` over ``--window`` is used, ``x`` as the slow index.
    """
    if args.fixed_m is not None and args.fixed_x is not None:
        raise UsageError("--fixed-m and --fixed-x are mutually exclusive")
    xm, mm = _window(args)
    if args.fixed_m is not None:
        return [Channel(float(x), args.fixed_m) for x in _steps(args, 0.0, xm)]
    if args.fixed_x is not None:
        return [Channel(args.fixed_x, float(m)) for m in _steps(args, 0.0, mm)]
    nx, nm = _grid(args)
    return [Channel(float(x), float(m)) for x in np.linspace(0.0, xm, nx) for m in np.linspace(0.0, mm, nm)]


def cmd_sweep(args, out):
    mode = args.mode or "best-upper"
    if mode not in SWEEP_MODES:
        raise UsageError(f"sweep --mode must be one of {', '.join(SWEEP_MODES)}, got {mode!r}")
    make, add = SWEEP_MODES[mode]
    t = make()
    for c in sweep_points(args):
        add(t, c, args.tol)
    if _format(args, "csv") == "csv":
        t.write(out)
    else:
        header = t.header()
        write_json({"mode": mode, "columns": header, "rows": t.rows}, out)


COMMANDS = {
    "classify": cmd_classify,
    "compose": cmd_compose,
    "bounds": cmd_bounds,
    "region": cmd_region,
    "border": cmd_border,
    "witness": cmd_witness,
    "improve": cmd_improve,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pigbc", description="Capacity regions and bounds of phase-insensitive Gaussian channels.")
    p.add_argument("command", choices=sorted(COMMANDS))
    for name in ("x", "m", "ref-x", "ref-m", "x1", "m1", "x2", "m2", "fixed-m", "fixed-x", "x-from", "x-to"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--steps", type=int, help=f"number of intervals (default {DEFAULT_STEPS})")
    p.add_argument("--grid", help="NX,NM point counts (default %d,%d)" % DEFAULT_GRID)
    p.add_argument("--window", help="XMAX,MMAX (default 2,1)")
    p.add_argument("--mode")
    p.add_argument("--tol", type=float, default=improve.DEFAULT_TOL)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", help="output path (default stdout)")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        if not (args.tol > 0):
            raise UsageError("--tol must be positive")
        if args.out:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                COMMANDS[args.command](args, fh)
        else:
            COMMANDS[args.command](args, stdout)
    except UsageError as e:
        print(f"pigbc-error[usage]: {e}", file=stderr)
        return 1
    except DomainError as e:
        print(f"pigbc-error[domain]: {e}", file=stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
