"""Command-line front end.

Every subcommand prints a report::

    {"command": ..., "inputs": ..., "outputs": ..., "residuals": [...], "timing": {...}}

Exit status is 0 on success, 1 when a claimed identity fails (a residual
is not the zero series) and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import io
from .diffpoly import ParseError
from .fitting import PrecisionDeficit, fit_algebraic_relation
from .logderiv import fit_j_operator, log_deriv, same_pgl2_orbit, schwarzian
from .modular import delta_series, j_series
from .prolong import arc_space, nabla
from .series import TruncatedSeries
from .weierstrass import SingularCurveError

ENV_PRECISION = "KOLCHIN_PRECISION_DEFAULT"


class InputError(Exception):
    pass


def default_precision(fallback: int = 60) -> int:
    raw = os.environ.get(ENV_PRECISION)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{ENV_PRECISION} must be an integer, got {raw!r}") from None


def residual_entry(label: str, r) -> dict:
    """Record a series claimed to be zero; ``max_nonzero`` must be null for a pass."""
    if isinstance(r, TruncatedSeries):
        worst = r.max_abs_coefficient()
        return {
            "label": label,
            "precision": r.precision,
            "max_nonzero": None if worst is None else io.rational_str(worst),
        }
    value = Fraction(r)
    return {"label": label, "precision": None, "max_nonzero": None if value == 0 else io.rational_str(abs(value))}


def _load(path):
    try:
        return io.load(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}") from None


def _bounds(text: str):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--bounds must be comma-separated integers, got {text!r}") from None


def cmd_prolong(args):
    X = io.variety_from_json(_load(args.variety))
    A = arc_space(X, args.order, args.derivations)
    inputs = {"variety": io.variety_to_json(X), "order": args.order, "derivations": args.derivations}
    return inputs, io.arc_space_to_json(A), []


def cmd_nabla(args):
    d = _load(args.point)
    coords = [io.value_from_json(c) for c in d["coords"]]
    n = args.derivations if args.derivations is not None else d.get("derivations")
    p = nabla(coords, args.order, n)
    residuals = []
    if "variety" in d:
        X = io.variety_from_json(d["variety"])
        A = arc_space(X, args.order, p.derivations)
        for i, r in enumerate(A.evaluate(p)):
            residuals.append(residual_entry(f"arc equation {i}", r))
    inputs = {"coords": [io.value_to_json(c) for c in coords], "order": args.order}
    return inputs, io.jetpoint_to_json(p), residuals


def cmd_schwarzian(args):
    f = io.series_from_json(_load(args.series))
    S = schwarzian(f, theta=args.theta)
    return {"series": io.series_to_json(f), "theta": args.theta}, io.series_to_json(S), []


def cmd_logderiv(args):
    G = io.group_from_json(_load(args.group))
    p = io.group_point_from_json(G, _load(args.point))
    n = args.derivations
    rows = log_deriv(G, p, n)
    out = [[io.value_to_json(v) for v in row] for row in rows]
    return {"group": io.group_to_json(G), "derivations": n}, out, []


def cmd_jcheck(args):
    N = args.precision if args.precision is not None else default_precision()
    if N < 20:
        raise InputError("jcheck needs --precision of at least 20")
    delta = delta_series(N + 1)
    j = j_series(N)
    J = fit_j_operator(N)
    outputs = {
        "delta_valuation": delta.valuation,
        "delta_leading": io.rational_str(delta.coefficient(delta.valuation)),
        "j_valuation": j.valuation,
        "j_constant": io.rational_str(j.coefficient(0)),
        "j_q1": io.rational_str(j.coefficient(1)),
        "R_numerator": [io.rational_str(c) for c in J.num],
        "R_denominator": [io.rational_str(c) for c in J.den],
    }
    # one extra term so the residuals are certified to precision N
    jr = j_series(N + 1)
    residuals = [residual_entry("chi_j(j(q))", J(jr))]
    for power in (2, 3):
        residuals.append(residual_entry(f"chi_j(j(q^{power}))", J(jr.scale_exponents(power))))
    residuals.append(residual_entry("j valuation + 1", Fraction(j.valuation + 1)))
    residuals.append(residual_entry("j constant term - 744", j.coefficient(0) - 744))
    residuals.append(residual_entry("j q-coefficient - 196884", j.coefficient(1) - 196884))
    return {"precision": N}, outputs, residuals


def cmd_fit(args):
    d = _load(args.samples)
    samples = [tuple(io.series_from_json(s) for s in sample) for sample in d["samples"]]
    bounds = _bounds(args.bounds)
    relations = fit_algebraic_relation(samples, bounds)
    residuals = []
    for i, rel in enumerate(relations):
        for k, sample in enumerate(samples):
            residuals.append(residual_entry(f"relation {i} on sample {k}", rel.substitute(dict(enumerate(sample)))))
    inputs = {"samples": [[io.series_to_json(s) for s in sample] for sample in samples], "bounds": list(bounds)}
    return inputs, [str(r) for r in relations], residuals


def cmd_orbit(args):
    a = io.series_from_json(_load(args.a))
    b = io.series_from_json(_load(args.b))
    decision = same_pgl2_orbit(a, b, args.order)
    out = {"same_orbit": decision.same,
           "witness": io.mobius_to_json(decision.witness) if decision.witness else None}
    residuals = []
    if decision.witness:
        M = decision.witness
        residuals.append(residual_entry("b*(gamma*a + delta) - (alpha*a + beta)",
                                        b * (M.c * a + M.d) - (M.a * a + M.b)))
    inputs = {"a": io.series_to_json(a), "b": io.series_to_json(b), "order": args.order}
    return inputs, out, residuals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="json")
    parser = argparse.ArgumentParser(prog="kolchin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prolong", parents=[common], help="arc space equations of an affine variety")
    p.add_argument("variety")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--derivations", type=int, default=1)
    p.set_defaults(func=cmd_prolong)

    p = sub.add_parser("nabla", parents=[common], help="prolong a point to a jet point")
    p.add_argument("point")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--derivations", type=int, default=None)
    p.set_defaults(func=cmd_nabla)

    p = sub.add_parser("schwarzian", parents=[common], help="Schwarzian derivative of a series")
    p.add_argument("series")
    p.add_argument("--theta", action="store_true", help="use q d/dq instead of d/dq")
    p.set_defaults(func=cmd_schwarzian)

    p = sub.add_parser("logderiv", parents=[common], help="logarithmic derivative on a commutative group")
    p.add_argument("group")
    p.add_argument("point")
    p.add_argument("--derivations", type=int, default=1)
    p.set_defaults(func=cmd_logderiv)

    p = sub.add_parser("jcheck", parents=[common], help="run the j-function pipeline")
    p.add_argument("--precision", type=int, default=None)
    p.set_defaults(func=cmd_jcheck)

    p = sub.add_parser("fit", parents=[common], help="fit polynomial relations to series samples")
    p.add_argument("samples")
    p.add_argument("--bounds", required=True, help="per-coordinate degree bounds, e.g. 2,1")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("orbit", parents=[common], help="decide constant Mobius equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--order", type=int, default=3)
    p.set_defaults(func=cmd_orbit)
    return parser


def render_text(report: dict) -> str:
    lines = [f"command: {' '.join(report['command'])}"]
    out = report["outputs"]
    if isinstance(out, dict):
        for k in sorted(out):
            lines.append(f"{k}: {json.dumps(out[k], sort_keys=True)}")
    elif isinstance(out, list):
        lines.extend(str(x) if not isinstance(x, (dict, list)) else json.dumps(x, sort_keys=True) for x in out)
    for r in report["residuals"]:
        status = "zero" if r["max_nonzero"] is None else f"NONZERO (max {r['max_nonzero']})"
        where = "(exact)" if r["precision"] is None else f"to precision {r['precision']}"
        lines.append(f"residual {r['label']}: {status} {where}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    start = time.perf_counter()
    try:
        inputs, outputs, residuals = args.func(args)
    except ParseError as e:
        print(f"error: parse error {e}", file=sys.stderr)
        return 2
    except PrecisionDeficit as e:
        print(f"error: {e} (required precision {e.required})", file=sys.stderr)
        return 2
    except (InputError, io.FormatError, SingularCurveError, KeyError, TypeError, ValueError,
            ZeroDivisionError, ArithmeticError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    report = {
        "command": list(argv if argv is not None else sys.argv[1:]),
        "inputs": inputs,
        "outputs": outputs,
        "residuals": residuals,
        "timing": {"seconds": round(time.perf_counter() - start, 6)},
    }
    if args.output == "text":
        print(render_text(report))
    else:
        print(io.dumps(report))
    return 1 if any(r["max_nonzero"] is not None for r in residuals) else 0


if __name__ == "__main__":
    sys.exit(main())
