"""Command-line front-end: counting runs, point inspection, constant
evaluation, verification suites, and the anticanonical count, with CSV/JSON
emission.

Exit status: 0 on success, 1 on validation errors (malformed flags, inputs
that define no point, failed verification), 2 on internal assertion failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from math import isqrt

from .asymptotics import (
    constant_c,
    count_Nst,
    le_count_detailed,
    le_rudulier_prediction,
)
from .heights import (
    InternalCheckError,
    classify,
    discriminant,
    height2_st,
    le_height,
    le_height2,
)
from .hilb import HilbPoint, PointValidationError, enumerate_points
from .verify import SUITE_NAMES, run_suite

POINT_FIELDS = [
    "ell_a", "ell_b", "ell_c",
    "qbar_1", "qbar_2", "qbar_3",
    "q_lift_0", "q_lift_1", "q_lift_2", "q_lift_3", "q_lift_4", "q_lift_5",
    "covol2_I1", "covol2_I2", "height", "class", "disc",
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on malformed flags, with usage
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _int_triple(text: str) -> tuple[int, int, int]:
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected a,b,c")
    return tuple(parts)  # type: ignore[return-value]


def _int_six(text: str) -> tuple[int, ...]:
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("expected six quadric coefficients")
    return tuple(parts)


def build_parser() -> _Parser:
    p = _Parser(prog="hilb2", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker count (default: HILB2_THREADS or 1)")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("count", help="exact bounded-height point count")
    sp.add_argument("--s", type=_fraction, required=True)
    sp.add_argument("--t", type=_fraction, required=True)
    sp.add_argument("--B", type=_fraction, required=True)
    sp.add_argument("--const-M-max", type=int, default=120)
    sp.add_argument("--emit-points", action="store_true",
                    help="emit the point table instead of the summary")
    common(sp)

    sp = sub.add_parser("constant", help="leading constant with certified bracket")
    sp.add_argument("--ratio", type=float, required=True)
    sp.add_argument("--M-max", type=int, required=True)
    common(sp)

    sp = sub.add_parser("inspect", help="single-point report")
    sp.add_argument("--ell", type=_int_triple, required=True)
    sp.add_argument("--q", type=_int_six, required=True)
    common(sp)

    sp = sub.add_parser("verify", help="run a named verification suite")
    sp.add_argument("--suite", choices=SUITE_NAMES, required=True)
    sp.add_argument("--m-max", type=int, default=None)
    sp.add_argument("--box", type=int, default=None)
    sp.add_argument("--n-lattices", type=int, default=None)
    sp.add_argument("--height-bound", type=float, default=None)
    sp.add_argument("--a-max", type=int, default=None)
    sp.add_argument("--k-max", type=int, default=None)
    sp.add_argument("--b-values", default=None, help="comma-separated height bounds")
    common(sp)

    sp = sub.add_parser("le-count", help="exact anticanonical-height count")
    sp.add_argument("--B", type=_fraction, required=True)
    common(sp)

    return p


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("HILB2_THREADS")
    return max(1, int(env)) if env else 1


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _csv_text(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _flatten(obj, prefix="") -> dict:
    out = {}
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def height_field(z: HilbPoint, s: Fraction, t: Fraction) -> str:
    """Exact integer when the squared height is a perfect square, else 17
    significant digits."""
    if (s - t).denominator == 1 and t.denominator == 1:
        h2 = height2_st(z, s, t)
        if h2.denominator == 1:
            r = isqrt(h2.numerator)
            if r * r == h2.numerator:
                return str(r)
        val = float(h2) ** 0.5
    else:
        val = z.covol2_I1 ** (float(s - t) / 2.0) * z.covol2_I2 ** (float(t) / 2.0)
    return format(val, ".17g")


def point_row(z: HilbPoint, s: Fraction, t: Fraction) -> dict:
    d = discriminant(z)
    lift = z.q_lift()
    return {
        "ell_a": z.ell.a, "ell_b": z.ell.b, "ell_c": z.ell.c,
        "qbar_1": z.qbar[0], "qbar_2": z.qbar[1], "qbar_3": z.qbar[2],
        **{f"q_lift_{i}": lift[i] for i in range(6)},
        "covol2_I1": z.covol2_I1,
        "covol2_I2": z.covol2_I2,
        "height": height_field(z, s, t),
        "class": classify(z).value,
        "disc": d,
    }


def _cmd_count(args) -> int:
    threads = _threads(args)
    if args.s <= 0 or args.t <= 0:
        raise PointValidationError("s and t must be positive")
    if args.emit_points:
        rows = [point_row(z, args.s, args.t) for z in enumerate_points(args.s, args.t, args.B)]
        if args.format == "csv":
            _emit(args, _csv_text(rows, POINT_FIELDS))
        else:
            _emit(args, _json_text({"schema_version": 1, "points": rows}))
        return 0
    n = count_Nst(args.s, args.t, args.B, threads=threads)
    est = constant_c(float(args.s / args.t), args.const_M_max)
    c_mid = 0.5 * (est.lo + est.hi)
    pred = c_mid * float(args.B) ** (3.0 / float(args.t))
    report = {
        "schema_version": 1,
        "query": {"s": str(args.s), "t": str(args.t), "B": str(args.B)},
        "N": n,
        "c_bracket": {"low": est.lo, "high": est.hi},
        "prediction": pred,
        "rel_dev": n / pred - 1.0 if pred else None,
    }
    if args.format == "csv":
        flat = _flatten(report)
        _emit(args, _csv_text([flat], list(flat)))
    else:
        _emit(args, _json_text(report))
    return 0


def _cmd_constant(args) -> int:
    est = constant_c(args.ratio, args.M_max)
    report = {
        "schema_version": 1,
        "ratio": est.ratio,
        "M_max": est.M_max,
        "partial": est.partial,
        "tail_bound": est.tail_bound,
        "c_low": est.lo,
        "c_high": est.hi,
    }
    if args.format == "csv":
        flat = _flatten(report)
        _emit(args, _csv_text([flat], list(flat)))
    else:
        _emit(args, _json_text(report))
    return 0


def _cmd_inspect(args) -> int:
    from .hilb import canonicalize

    z = canonicalize(args.ell, args.q)
    h_le2 = le_height2(z)
    report = {
        "schema_version": 1,
        "ell": list(z.ell.triple),
        "qbar": list(z.qbar),
        "q_lift": list(z.q_lift()),
        "covol2_I1": z.covol2_I1,
        "covol2_I2": z.covol2_I2,
        "H1": z.covol2_I1 ** 0.5,
        "H2": z.covol2_I2 ** 0.5,
        "class": classify(z).value,
        "disc": discriminant(z),
        "H_Le": le_height(z),
        "H_Le2_exact": f"{h_le2.numerator}/{h_le2.denominator}",
    }
    if args.format == "csv":
        flat = _flatten(report)
        _emit(args, _csv_text([flat], list(flat)))
    else:
        _emit(args, _json_text(report))
    return 0


def _cmd_verify(args) -> int:
    overrides = {}
    if args.m_max is not None:
        overrides["m_max"] = args.m_max
    if args.box is not None:
        overrides["box"] = args.box
    if args.n_lattices is not None:
        overrides["n_lattices"] = args.n_lattices
    if args.height_bound is not None:
        overrides["height_bound"] = args.height_bound
    if args.a_max is not None:
        overrides["a_max"] = args.a_max
    if args.k_max is not None:
        overrides["k_max"] = args.k_max
    if args.b_values is not None:
        overrides["b_values"] = [Fraction(x) for x in args.b_values.split(",")]
    report = run_suite(args.suite, seed=args.seed, threads=_threads(args), **overrides)
    if args.format == "csv":
        rows = [
            {"suite": report["suite"], **c} for c in report["checks"]
        ]
        _emit(args, _csv_text(rows, ["suite", "name", "passed", "detail"]))
    else:
        _emit(args, _json_text(report))
    return 0 if report["passed"] else 1


def _cmd_le_count(args) -> int:
    rep = le_count_detailed(args.B, threads=_threads(args))
    pred = le_rudulier_prediction(float(args.B)) if args.B > 1 else None
    rep["prediction"] = pred
    rep["ratio_to_prediction"] = rep["total"] / pred if pred else None
    if args.format == "csv":
        flat = _flatten(rep)
        _emit(args, _csv_text([flat], list(flat)))
    else:
        _emit(args, _json_text(rep))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "count": _cmd_count,
        "constant": _cmd_constant,
        "inspect": _cmd_inspect,
        "verify": _cmd_verify,
        "le-count": _cmd_le_count,
    }
    try:
        return handlers[args.command](args)
    except (PointValidationError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (InternalCheckError, AssertionError) as exc:
        sys.stderr.write(f"internal check failed: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
