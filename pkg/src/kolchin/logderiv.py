"""Logarithmic derivatives, Schwarzians and the j-covering operator.

Coordinates of points are rationals, :class:`TruncatedSeries`,
:class:`MultiTaylorSeries` or :class:`SeriesFraction`; every algorithm here
only uses ring arithmetic, division and ``derivative``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

from .diffpoly import DiffPolynomial, _derive
from .fitting import PrecisionDeficit, fit_algebraic_relation, leading_reduced_basis, nullspace
from .modular import j_series
from .series import TruncatedSeries
from .weierstrass import check_nonsingular


class NonGenericPointError(ValueError):
    pass


class CriticalGermError(ValueError):
    pass


def _is_zero(v) -> bool:
    if isinstance(v, (int, Fraction)):
        return v == 0
    return v.is_zero()


# groups


@dataclass(frozen=True)
class Ga:
    pass


@dataclass(frozen=True)
class Gm:
    pass


@dataclass(frozen=True)
class Elliptic:
    """``y^2 = 4x^3 - g2 x - g3``."""

    g2: Fraction
    g3: Fraction

    def __init__(self, g2, g3):
        object.__setattr__(self, "g2", Fraction(g2))
        object.__setattr__(self, "g3", Fraction(g3))
        check_nonsingular(self.g2, self.g3)

    def equation(self, x, y):
        return y * y - 4 * x * x * x + self.g2 * x + self.g3

    def contains(self, point) -> bool:
        if point is O:
            return True
        return _is_zero(self.equation(*point))


class _Identity:
    def __repr__(self):
        return "O"


O = _Identity()

Factor = Union[Ga, Gm, Elliptic]


@dataclass(frozen=True)
class GroupSpec:
    factors: Tuple[Factor, ...]

    def __init__(self, factors: Sequence[Factor]):
        object.__setattr__(self, "factors", tuple(factors))


def elliptic_neg(P):
    return O if P is O else (P[0], -P[1])


def elliptic_add(E: Elliptic, P, Q):
    """Chord-tangent sum on ``y^2 = 4x^3 - g2 x - g3``; ``O`` is the identity."""
    if P is O:
        return Q
    if Q is O:
        return P
    x1, y1 = P
    x2, y2 = Q
    if _is_zero(x1 - x2):
        if _is_zero(y1 + y2):
            return O
        lam = (12 * x1 * x1 - E.g2) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam / 4 - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return (x3, y3)


def group_add(G: GroupSpec, p, q):
    out = []
    for f, a, b in zip(G.factors, p, q):
        if isinstance(f, Ga):
            out.append(a + b)
        elif isinstance(f, Gm):
            out.append(a * b)
        else:
            out.append(elliptic_add(f, a, b))
    return tuple(out)


def _unit_inverse(f):
    if isinstance(f, (int, Fraction)):
        if f == 0:
            raise ZeroDivisionError("zero is not in the multiplicative group")
        return 1 / Fraction(f)
    if f.is_zero():
        raise ZeroDivisionError("multiplicative coordinate is not invertible")
    return 1 / f


def log_deriv(G: GroupSpec, p, n: int = 1) -> List[tuple]:
    """Kolchin logarithmic derivative: for each derivation ``i < n`` a tangent tuple.

    Per factor: ``d_i a`` on Ga, ``d_i f / f`` on Gm and ``d_i x / y`` on an
    elliptic factor (invariant differential ``dx/y``).
    """
    if len(p) != len(G.factors):
        raise ValueError(f"point has {len(p)} components, group has {len(G.factors)} factors")
    for f, a in zip(G.factors, p):
        coords = (a,) if not isinstance(f, Elliptic) or a is O else a
        for c in coords:
            nd = getattr(c, "nderivs", None)
            if nd is not None and nd != n:
                raise ValueError(f"derivation-count mismatch: {n} requested, coordinate has {nd}")
    prepared = []
    for f, a in zip(G.factors, p):
        if isinstance(f, Gm):
            prepared.append(_unit_inverse(a))
        elif isinstance(f, Elliptic):
            if a is O or _is_zero(a[1]):
                raise NonGenericPointError("non-generic elliptic point: identity or y = 0")
            prepared.append(1 / a[1] if not isinstance(a[1], (int, Fraction)) else 1 / Fraction(a[1]))
        else:
            prepared.append(None)
    out = []
    for i in range(n):
        row = []
        for f, a, inv in zip(G.factors, p, prepared):
            if isinstance(f, Ga):
                row.append(_derive(a, i))
            elif isinstance(f, Gm):
                row.append(_derive(a, i) * inv)
            else:
                row.append(_derive(a[0], i) * inv)
        out.append(tuple(row))
    return out


# Mobius transformations and the Schwarzian


@dataclass(frozen=True)
class MobiusTransform:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __init__(self, a, b, c, d):
        vals = [Fraction(v) for v in (a, b, c, d)]
        if vals[0] * vals[3] - vals[1] * vals[2] == 0:
            raise ValueError("degenerate Mobius transform: ad - bc = 0")
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def normalized(self) -> "MobiusTransform":
        """Scale so the first nonzero entry is 1."""
        lead = next(v for v in self.entries if v != 0)
        return MobiusTransform(*(v / lead for v in self.entries))

    def projectively_equal(self, other: "MobiusTransform") -> bool:
        return self.normalized() == other.normalized()

    def __call__(self, f):
        return mobius_apply(self, f)


def mobius_apply(M: MobiusTransform, f):
    den = M.c * f + M.d
    if _is_zero(den):
        raise ZeroDivisionError("Mobius denominator vanishes on this series")
    return (M.a * f + M.b) / den


def _derivation(theta: bool):
    if theta:
        return lambda f: f.theta()
    return lambda f: f.derivative()


def schwarzian(f: TruncatedSeries, theta: bool = False) -> TruncatedSeries:
    """``(f''/f')' - (f''/f')^2 / 2`` for ``d/dvar`` or, with ``theta``, ``var d/dvar``."""
    D = _derivation(theta)
    f1 = D(f)
    if f1.is_zero():
        raise CriticalGermError("critical germ: derivative is zero to precision")
    r = D(f1) / f1
    return D(r) - r * r / 2


@dataclass(frozen=True)
class OrbitDecision:
    same: bool
    witness: Optional[MobiusTransform] = None


def same_pgl2_orbit(a: TruncatedSeries, b: TruncatedSeries, order: int = 3) -> OrbitDecision:
    """Decide whether ``b = (alpha a + beta)/(gamma a + delta)`` for constants.

    Solves ``b (gamma a + delta) = alpha a + beta`` as a linear system over
    the coefficients of the series; a solution with nonzero determinant is the
    witness.  Both series must carry at least ``2*order + 8`` known terms.
    """
    if a.var != b.var:
        raise ValueError("series in different variables")
    need = 2 * order + 8
    for s in (a, b):
        if s.precision - min(s.valuation, 0) < need:
            raise PrecisionDeficit(f"orbit test at order {order} needs precision {need}", need)
        if s.derivative().is_zero():
            raise ValueError("orbit test needs nonconstant series")
    one = TruncatedSeries.constant(1, max(a.precision, b.precision), a.var)
    cols = [a, one, -(a * b), -b]
    hi = min(c.precision for c in cols)
    lo = min(min(c.valuation for c in cols), 0)
    rows = [[c.coefficient(e) for c in cols] for e in range(lo, hi)]
    kernel = leading_reduced_basis(nullspace(rows, 4), 4)
    witness = _nondegenerate(kernel)
    if witness is None:
        return OrbitDecision(False)
    return OrbitDecision(True, MobiusTransform(*witness).normalized())


def _nondegenerate(kernel):
    if not kernel:
        return None
    for coeffs in product(range(-2, 3), repeat=len(kernel)):
        if not any(coeffs):
            continue
        v = [sum(c * k[i] for c, k in zip(coeffs, kernel)) for i in range(4)]
        if v[0] * v[3] - v[1] * v[2] != 0:
            return v
    return None


# the j-covering


@dataclass(frozen=True)
class JOperator:
    """``x -> S_theta(x) + R(x) (theta x)^2`` with ``R = num/den`` (coefficients low to high)."""

    num: Tuple[Fraction, ...]
    den: Tuple[Fraction, ...]

    def rational(self, x: TruncatedSeries) -> TruncatedSeries:
        return _horner(self.num, x) / _horner(self.den, x)

    def __call__(self, x: TruncatedSeries) -> TruncatedSeries:
        tx = x.theta()
        if tx.is_zero():
            raise CriticalGermError("theta-derivative is not invertible")
        return schwarzian(x, theta=True) + self.rational(x) * tx * tx


def _horner(coeffs, x: TruncatedSeries):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def fit_j_operator(precision: int = 60, max_degree: int = 6) -> JOperator:
    """Fit ``R = P/Q`` so that ``S_theta(j) + R(j) (theta j)^2`` vanishes.

    Searches ``deg P, deg Q <= d`` for ``d = 0 .. max_degree`` and keeps the
    first ``d`` with a one-dimensional solution space; ``Q`` is made monic.
    """
    j = j_series(precision)
    s = schwarzian(j, theta=True)
    tj = j.theta()
    tj2 = tj * tj
    for d in range(max_degree + 1):
        powers = [TruncatedSeries.constant(1, j.precision + 2 * d, j.var)]
        for _ in range(d):
            powers.append(powers[-1] * j)
        cols = [p * tj2 for p in powers] + [p * s for p in powers]
        hi = min(c.precision for c in cols)
        lo = min(c.valuation for c in cols)
        if hi - lo < len(cols) + 4:
            raise PrecisionDeficit(f"fitting R with degree {d} needs more terms", precision + len(cols) + 4)
        rows = [[c.coefficient(e) for c in cols] for e in range(lo, hi)]
        kernel = nullspace(rows, len(cols))
        if not kernel:
            continue
        if len(kernel) > 1:
            raise ArithmeticError(f"non-unique R at degree {d}")
        v = kernel[0]
        num, den = v[: d + 1], v[d + 1:]
        lead = next(c for c in reversed(den) if c != 0)
        num = [c / lead for c in num]
        den = [c / lead for c in den]
        # P (theta j)^2 + Q S = 0 means R = P/Q
        return JOperator(tuple(_trim(num)), tuple(_trim(den)))
    raise ArithmeticError(f"no rational R with degree <= {max_degree}")


def _trim(cs):
    cs = list(cs)
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return cs


@lru_cache(maxsize=None)
def default_j_operator() -> JOperator:
    return fit_j_operator(60)


# Hecke correspondences

_HECKE_DEGREE = {1: 1, 2: 3, 3: 4}


@dataclass(frozen=True)
class HeckeRelation:
    level: int
    relation: DiffPolynomial
    residual: TruncatedSeries
    symmetric: bool


def swap_variables(p: DiffPolynomial) -> DiffPolynomial:
    return p.rename(p.ring, lambda v: (1 - v[0], v[1]))


def hecke_relation(N: int, precision: int = 60) -> HeckeRelation:
    """Fit the polynomial relation between ``j(q)`` and ``j(q^N)`` and re-check it at doubled precision."""
    if N not in _HECKE_DEGREE:
        raise ValueError("level must be 1, 2 or 3")
    deg = _HECKE_DEGREE[N]
    j = j_series(precision)
    relations = fit_algebraic_relation([(j, j.scale_exponents(N))], (deg, deg))
    if len(relations) != 1:
        raise ArithmeticError(f"expected one relation at level {N}, found {len(relations)}")
    rel = relations[0]
    # x^a y^b loses about a + N*b terms; pad so the residual reaches 2*precision
    jj = j_series(2 * precision + deg * (N + 1) + 1)
    residual = rel.substitute({0: jj, 1: jj.scale_exponents(N)}).truncate(2 * precision)
    symmetric = swap_variables(rel) in (rel, -rel)
    return HeckeRelation(N, rel, residual, symmetric)
