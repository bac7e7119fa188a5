"""Arc spaces of affine varieties and the prolongation map.

Jet coordinates use divided powers: the coordinate ``x_{k,alpha}`` of a
point is the ``eps^alpha`` coefficient of the Taylor expansion, so the
prolongation of a point ``a`` has ``x_{k,alpha} = d^alpha(a_k) / alpha!``.
With this convention the prolongation is a ring map into the truncated ring
and prolonged points satisfy the arc equations without factorial fixes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Dict, List, Mapping, Sequence, Tuple

from .diffpoly import DiffPolynomial, DiffRing, _derive
from .fitting import fit_algebraic_relation
from .series import TruncatedSeries

Alpha = Tuple[int, ...]

DEFAULT_ORDER = 3


def multi_indices(n: int, m: int) -> List[Alpha]:
    """All ``alpha`` with ``|alpha| <= m``, ordered by ``(|alpha|, alpha)``."""
    out = [a for a in product(range(m + 1), repeat=n) if sum(a) <= m]
    return sorted(out, key=lambda a: (sum(a), a))


@dataclass(frozen=True)
class AffineVariety:
    """Zero set of ``generators`` (order-0 polynomials) in affine ``ambient``-space."""

    ambient: int
    generators: Tuple[DiffPolynomial, ...]

    def __init__(self, ambient: int, generators: Sequence[DiffPolynomial] = ()):
        gens = []
        for g in generators:
            if g.ring.nvars != ambient:
                raise ValueError(f"generator {g} lives in {g.ring}, expected {ambient} variables")
            if g.max_order() != 0:
                raise ValueError(f"generator {g} involves derivatives")
            if not g.is_zero():
                gens.append(g)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def parse(cls, ambient: int, generators: Sequence[str]) -> "AffineVariety":
        ring = DiffRing(ambient, 0)
        return cls(ambient, [ring.parse(g) for g in generators])

    def contains(self, point: Sequence) -> bool:
        return all(_vanishes(g.substitute(dict(enumerate(point)))) for g in self.generators)

    def product(self, other: "AffineVariety") -> "AffineVariety":
        ring = DiffRing(self.ambient + other.ambient, 0)
        left = [g.rename(ring, lambda v: (v[0], ())) for g in self.generators]
        right = [g.rename(ring, lambda v: (v[0] + self.ambient, ())) for g in other.generators]
        return AffineVariety(ring.nvars, left + right)


def _vanishes(value) -> bool:
    if isinstance(value, (int, Fraction)):
        return value == 0
    return value.is_zero()


@dataclass(frozen=True)
class ArcSpacePresentation:
    """Coordinates and defining equations of the order-``order`` arc space.

    ``coordinates[i] = (k, alpha)`` names the i-th variable of ``ring``; the
    coordinates of one base variable are contiguous.
    """

    variety: AffineVariety
    order: int
    derivations: int
    coordinates: Tuple[Tuple[int, Alpha], ...]
    equations: Tuple[DiffPolynomial, ...]

    @property
    def ring(self) -> DiffRing:
        return DiffRing(len(self.coordinates), self.derivations)

    def index(self, k: int, alpha: Alpha) -> int:
        return self.coordinates.index((k, tuple(alpha)))

    def label(self, i: int) -> str:
        k, alpha = self.coordinates[i]
        return f"x{k},({','.join(map(str, alpha))})"

    def is_satisfied_by(self, point: "JetPoint") -> bool:
        return all(_vanishes(v) for v in self.evaluate(point))

    def evaluate(self, point: "JetPoint") -> list:
        images = {i: point.coords[c] for i, c in enumerate(self.coordinates)}
        return [eq.substitute(images) for eq in self.equations]


class _Truncated:
    """Element of ``A[eps_1..eps_n]/(eps)^(m+1)`` as a dict ``alpha -> coefficient``."""

    def __init__(self, n: int, m: int, terms: Dict[Alpha, object]):
        self.n, self.m, self.terms = n, m, terms

    def __add__(self, other):
        acc = dict(self.terms)
        for a, c in other.terms.items():
            acc[a] = acc[a] + c if a in acc else c
        return _Truncated(self.n, self.m, acc)

    def __mul__(self, other):
        acc = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                ab = tuple(i + j for i, j in zip(a, b))
                if sum(ab) > self.m:
                    continue
                acc[ab] = acc[ab] + x * y if ab in acc else x * y
        return _Truncated(self.n, self.m, acc)


def arc_space(X: AffineVariety, m: int, n: int) -> ArcSpacePresentation:
    """Equations of the arc space: the ``eps^alpha`` coefficients of ``f(sum x_{k,alpha} eps^alpha)``."""
    if m < 0 or n < 0:
        raise ValueError("order and derivation count must be non-negative")
    alphas = multi_indices(n, m)
    coords = tuple((k, a) for k in range(X.ambient) for a in alphas)
    ring = DiffRing(len(coords), n)
    zero_alpha = (0,) * n
    expansions = {
        k: _Truncated(n, m, {a: ring.var(k * len(alphas) + i) for i, a in enumerate(alphas)})
        for k in range(X.ambient)
    }
    equations = []
    for g in X.generators:
        total = _Truncated(n, m, {})
        for mono, c in g.terms:
            term = _Truncated(n, m, {zero_alpha: ring.const(c)})
            for (k, _), e in mono:
                for _ in range(e):
                    term = term * expansions[k]
            total = total + term
        equations.extend(total.terms.get(a, ring.zero) for a in alphas)
    return ArcSpacePresentation(X, m, n, coords, tuple(equations))


@dataclass(frozen=True)
class JetPoint:
    """Values of the jet coordinates ``(k, alpha)``, ``|alpha| <= order``."""

    order: int
    derivations: int
    coords: Mapping[Tuple[int, Alpha], object]

    def __post_init__(self):
        alphas = multi_indices(self.derivations, self.order)
        ks = {k for k, _ in self.coords}
        missing = [(k, a) for k in ks for a in alphas if (k, a) not in self.coords]
        if missing:
            raise ValueError(f"incomplete jet point, missing {missing[:3]}")

    @property
    def ambient(self) -> int:
        return len({k for k, _ in self.coords})

    def base_point(self) -> tuple:
        z = (0,) * self.derivations
        return tuple(self.coords[(k, z)] for k in range(self.ambient))

    def flat(self) -> tuple:
        """Coordinates in the variable order of :func:`arc_space`."""
        alphas = multi_indices(self.derivations, self.order)
        return tuple(self.coords[(k, a)] for k in range(self.ambient) for a in alphas)

    def __eq__(self, other):
        if not isinstance(other, JetPoint):
            return NotImplemented
        return (self.order, self.derivations, dict(self.coords)) == (
            other.order, other.derivations, dict(other.coords))

    def __hash__(self):
        return hash((self.order, self.derivations, tuple(sorted(self.coords.items(), key=lambda kv: kv[0]))))


def _nderivs(value, default):
    n = getattr(value, "nderivs", None)
    return default if n is None else n


def nabla(point: Sequence, m: int, n: int | None = None) -> JetPoint:
    """Prolong a point with coordinates in a differential ring to order ``m``.

    ``n`` defaults to the derivation count of the coordinates; rational
    coordinates are constants for any ``n``.
    """
    counts = {getattr(c, "nderivs") for c in point if getattr(c, "nderivs", None) is not None}
    if n is None:
        if len(counts) > 1:
            raise ValueError(f"coordinates disagree on derivation count: {sorted(counts)}")
        n = counts.pop() if counts else 1
    elif counts and counts != {n}:
        raise ValueError(f"derivation-count mismatch: requested {n}, coordinates have {sorted(counts)}")
    alphas = multi_indices(n, m)
    coords = {}
    for k, a in enumerate(point):
        derived = {(0,) * n: a}
        for alpha in alphas[1:]:
            i = max(j for j, x in enumerate(alpha) if x)
            lower = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
            derived[alpha] = _derive(derived[lower], i)
        for alpha in alphas:
            scale = 1
            for x in alpha:
                scale *= factorial(x)
            val = derived[alpha]
            coords[(k, alpha)] = val if scale == 1 else val * Fraction(1, scale)
    return JetPoint(m, n, coords)


def project(p: JetPoint, target: int) -> JetPoint:
    """Forget jet coordinates of order above ``target``."""
    if target > p.order or target < 0:
        raise ValueError(f"cannot project order {p.order} to order {target}")
    return JetPoint(target, p.derivations, {c: v for c, v in p.coords.items() if sum(c[1]) <= target})


def zero_section(point: Sequence, m: int, n: int = 1) -> JetPoint:
    """The jet of a constant point: all higher jet coordinates are zero."""
    for k, a in enumerate(point):
        if not isinstance(a, (int, Fraction)):
            nd = _nderivs(a, n)
            if any(not a.derivative(i).is_zero() for i in range(nd)):
                raise ValueError(f"coordinate {k} is not a constant")
    alphas = multi_indices(n, m)
    coords = {}
    for k, a in enumerate(point):
        for alpha in alphas:
            coords[(k, alpha)] = a if not any(alpha) else a * 0
    return JetPoint(m, n, coords)


def kolchin_closure_fit(points: Sequence[Sequence], m: int, degree_bounds: Sequence[int], n: int | None = None):
    """Polynomial relations on the order-``m`` arc space satisfied by every prolonged point.

    Each point is prolonged with :func:`nabla`; the jet coordinates, in the
    variable order of :func:`arc_space`, are handed to
    :func:`fit_algebraic_relation`.  The returned polynomials live in the
    arc-space ring.
    """
    jets = [nabla(p, m, n) for p in points]
    nd = jets[0].derivations
    ambient = len(points[0])
    ring = DiffRing(ambient * comb(m + nd, nd), nd)
    if len(degree_bounds) != ring.nvars:
        raise ValueError(f"need {ring.nvars} degree bounds, one per jet coordinate")
    samples = [_as_series(j.flat()) for j in jets]
    return fit_algebraic_relation(samples, degree_bounds, ring)


def _as_series(values):
    ref = next((v for v in values if isinstance(v, TruncatedSeries)), None)
    if ref is None:
        raise TypeError("relation fitting needs at least one series coordinate")
    out = []
    for v in values:
        if isinstance(v, TruncatedSeries):
            out.append(v)
        else:
            out.append(TruncatedSeries.constant(v, ref.precision, ref.var))
    return tuple(out)
