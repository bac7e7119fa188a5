"""JSON encodings used by the command line.

Rationals are always strings such as ``"-3/2"`` or ``"7"``; floats are
rejected on input.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .diffpoly import DiffRing
from .logderiv import O, Elliptic, Ga, GroupSpec, Gm, MobiusTransform
from .prolong import AffineVariety, ArcSpacePresentation, JetPoint
from .series import MultiTaylorSeries, TruncatedSeries


class FormatError(ValueError):
    pass


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def rational(value) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value.strip()):
        return Fraction(value.strip())
    raise FormatError(f"expected an exact rational string like '3/2', got {value!r}")


def rational_str(c: Fraction) -> str:
    return str(Fraction(c))


def series_to_json(f: TruncatedSeries) -> dict:
    return {
        "var": f.var,
        "valuation": f.valuation,
        "precision": f.precision,
        "coeffs": [rational_str(c) for c in f.coeffs],
    }


def series_from_json(d: dict) -> TruncatedSeries:
    try:
        return TruncatedSeries(
            [rational(c) for c in d["coeffs"]], int(d["valuation"]), int(d["precision"]), d.get("var", "q"))
    except KeyError as e:
        raise FormatError(f"series object missing field {e}") from None


def multi_to_json(f: MultiTaylorSeries) -> dict:
    terms = sorted(f.terms.items(), key=lambda ac: (sum(ac[0]), ac[0]))
    return {
        "vars": list(f.vars),
        "degree": f.degree,
        "terms": {",".join(map(str, a)): rational_str(c) for a, c in terms},
    }


def multi_from_json(d: dict) -> MultiTaylorSeries:
    terms = {tuple(int(x) for x in k.split(",")): rational(v) for k, v in d["terms"].items()}
    return MultiTaylorSeries(terms, d["vars"], int(d["degree"]))


def value_to_json(v):
    if isinstance(v, TruncatedSeries):
        return series_to_json(v)
    if isinstance(v, MultiTaylorSeries):
        return multi_to_json(v)
    if isinstance(v, (int, Fraction)):
        return rational_str(v)
    raise TypeError(f"cannot encode {type(v).__name__}")


def value_from_json(d):
    if isinstance(d, dict):
        if "coeffs" in d:
            return series_from_json(d)
        if "terms" in d:
            return multi_from_json(d)
        raise FormatError(f"unrecognised value object with keys {sorted(d)}")
    return rational(d)


def variety_to_json(X: AffineVariety) -> dict:
    return {"ambient": X.ambient, "generators": [str(g) for g in X.generators]}


def variety_from_json(d: dict) -> AffineVariety:
    try:
        k = int(d["ambient"])
        gens = d.get("generators", [])
    except (KeyError, TypeError, ValueError):
        raise FormatError("variety needs an integer 'ambient' field") from None
    ring = DiffRing(k, 0)
    return AffineVariety(k, [ring.parse(g) for g in gens])


def jet_key(k: int, alpha) -> str:
    return f"x{k},({','.join(map(str, alpha))})"


def parse_jet_key(s: str):
    head, _, rest = s.partition(",")
    if not head.startswith("x") or not rest.startswith("(") or not rest.endswith(")"):
        raise FormatError(f"bad jet coordinate key {s!r}")
    inner = rest[1:-1]
    alpha = tuple(int(x) for x in inner.split(",")) if inner else ()
    return int(head[1:]), alpha


def _coord_order(item):
    (k, alpha), _ = item
    return (k, sum(alpha), alpha)


def jetpoint_to_json(p: JetPoint) -> dict:
    return {
        "order": p.order,
        "derivations": p.derivations,
        "coords": {jet_key(k, a): value_to_json(v) for (k, a), v in sorted(p.coords.items(), key=_coord_order)},
    }


def jetpoint_from_json(d: dict) -> JetPoint:
    coords = {parse_jet_key(k): value_from_json(v) for k, v in d["coords"].items()}
    n = d.get("derivations")
    if n is None:
        n = len(next(iter(coords))[1]) if coords else 1
    return JetPoint(int(d["order"]), int(n), coords)


def arc_space_to_json(A: ArcSpacePresentation) -> dict:
    return {
        "variety": variety_to_json(A.variety),
        "order": A.order,
        "derivations": A.derivations,
        "variables": [A.label(i) for i in range(len(A.coordinates))],
        "equations": [str(e) for e in A.equations],
    }


def group_from_json(d: dict) -> GroupSpec:
    factors = []
    for f in d["factors"]:
        kind = f["type"] if isinstance(f, dict) else f
        if kind == "Ga":
            factors.append(Ga())
        elif kind == "Gm":
            factors.append(Gm())
        elif kind == "Elliptic":
            factors.append(Elliptic(rational(f["g2"]), rational(f["g3"])))
        else:
            raise FormatError(f"unknown group factor {kind!r}")
    return GroupSpec(factors)


def group_to_json(G: GroupSpec) -> dict:
    out = []
    for f in G.factors:
        if isinstance(f, Elliptic):
            out.append({"type": "Elliptic", "g2": rational_str(f.g2), "g3": rational_str(f.g3)})
        else:
            out.append({"type": type(f).__name__})
    return {"factors": out}


def group_point_from_json(G: GroupSpec, d: dict):
    coords = d["coords"]
    if len(coords) != len(G.factors):
        raise FormatError(f"point has {len(coords)} coordinates, group has {len(G.factors)} factors")
    out = []
    for f, c in zip(G.factors, coords):
        if isinstance(f, Elliptic):
            out.append(O if c == "O" else (value_from_json(c["x"]), value_from_json(c["y"])))
        else:
            out.append(value_from_json(c))
    return tuple(out)


def mobius_to_json(M: MobiusTransform) -> list:
    return [rational_str(v) for v in M.normalized().entries]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def load(path: str):
    with open(path) as fh:
        return json.load(fh)
