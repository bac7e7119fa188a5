"""Truncated power series with exact rational coefficients.

:class:`TruncatedSeries` is a Laurent series in one variable carrying its
absolute precision ``N``: every coefficient of an exponent below ``N`` is
known exactly and nothing is claimed beyond.  :class:`MultiTaylorSeries` is
a Taylor series in several variables truncated in total degree.  Both act as
differential rings (``derivative(i)``), which is what the rest of the package
feeds to :meth:`DiffPolynomial.substitute`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import lcm
from numbers import Rational
from typing import Dict, Iterable, Sequence, Tuple


class PrecisionError(ArithmeticError):
    pass


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, Rational)) and not isinstance(x, bool)


def _convolve(a: Sequence[Fraction], b: Sequence[Fraction], length: int):
    """First ``length`` coefficients of the product, via one common denominator."""
    da = lcm(*(c.denominator for c in a)) if a else 1
    db = lcm(*(c.denominator for c in b)) if b else 1
    ia = [c.numerator * (da // c.denominator) for c in a]
    ib = [c.numerator * (db // c.denominator) for c in b]
    den = da * db
    out = []
    for e in range(length):
        lo = max(0, e - len(ib) + 1)
        hi = min(e, len(ia) - 1)
        s = 0
        for i in range(lo, hi + 1):
            s += ia[i] * ib[e - i]
        out.append(Fraction(s, den))
    return out


class TruncatedSeries:
    """Laurent series ``sum_{e=valuation}^{precision-1} c_e var^e + O(var^precision)``.

    The stored coefficient at ``valuation`` is nonzero; the zero series has
    ``valuation == precision`` and no coefficients.
    """

    __slots__ = ("var", "valuation", "precision", "coeffs")
    nderivs = 1

    def __init__(self, coeffs: Iterable = (), valuation: int = 0, precision: int | None = None, var: str = "q"):
        cs = [_frac(c) for c in coeffs]
        if precision is None:
            precision = valuation + len(cs)
        cs = cs[: max(0, precision - valuation)]
        cs += [Fraction(0)] * (precision - valuation - len(cs))
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        self.var = var
        self.valuation = valuation + lead if lead < len(cs) else precision
        self.precision = precision
        self.coeffs: Tuple[Fraction, ...] = tuple(cs[lead:])

    # constructors

    @classmethod
    def from_dict(cls, terms: Dict[int, object], precision: int, var: str = "q"):
        if not terms:
            return cls.zero(precision, var)
        v = min(terms)
        cs = [Fraction(0)] * max(0, precision - v)
        for e, c in terms.items():
            if e < precision:
                cs[e - v] = _frac(c)
        return cls(cs, v, precision, var)

    @classmethod
    def zero(cls, precision: int, var: str = "q"):
        return cls((), precision, precision, var)

    @classmethod
    def constant(cls, c, precision: int, var: str = "q"):
        return cls([c], 0, precision, var)

    @classmethod
    def gen(cls, precision: int, var: str = "q"):
        return cls([1], 1, precision, var)

    @classmethod
    def exp(cls, precision: int, var: str = "q"):
        """``sum_m var^m / m!`` to the given precision."""
        cs, f = [], Fraction(1)
        for m in range(precision):
            cs.append(f)
            f /= m + 1
        return cls(cs, 0, precision, var)

    # access

    def coefficient(self, e: int) -> Fraction:
        if e >= self.precision:
            raise PrecisionError(f"coefficient of {self.var}^{e} beyond precision {self.precision}")
        if e < self.valuation:
            return Fraction(0)
        return self.coeffs[e - self.valuation]

    __getitem__ = coefficient

    def as_dict(self) -> Dict[int, Fraction]:
        return {self.valuation + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(e == 0 for e in self.as_dict())

    def truncate(self, precision: int) -> "TruncatedSeries":
        if precision > self.precision:
            raise PrecisionError(f"cannot raise precision {self.precision} to {precision}")
        return TruncatedSeries(self.coeffs, self.valuation, precision, self.var)

    def _same_var(self, other: "TruncatedSeries"):
        if other.var != self.var:
            raise ValueError(f"series in different variables: {self.var!r} vs {other.var!r}")

    # arithmetic

    def __add__(self, other):
        if _is_scalar(other):
            if other == 0 or self.precision <= 0:
                return self
            d = self.as_dict()
            d[0] = d.get(0, 0) + _frac(other)
            return TruncatedSeries.from_dict({e: c for e, c in d.items() if c != 0}, self.precision, self.var)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._same_var(other)
        n = min(self.precision, other.precision)
        v = min(self.valuation, other.valuation)
        if v >= n:
            return TruncatedSeries.zero(n, self.var)
        cs = [Fraction(0)] * (n - v)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                e = s.valuation + i
                if e >= n:
                    break
                cs[e - v] += c
        return TruncatedSeries(cs, v, n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.valuation, self.precision, self.var)

    def __sub__(self, other):
        if _is_scalar(other):
            return self + (-_frac(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            c = _frac(other)
            if c == 0:
                return TruncatedSeries.zero(self.precision, self.var)
            return TruncatedSeries([c * a for a in self.coeffs], self.valuation, self.precision, self.var)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._same_var(other)
        v = self.valuation + other.valuation
        n = min(self.precision + other.valuation, other.precision + self.valuation)
        if self.is_zero() or other.is_zero() or n <= v:
            return TruncatedSeries.zero(max(n, v) if n > v else n, self.var)
        return TruncatedSeries(_convolve(self.coeffs, other.coeffs, n - v), v, n, self.var)

    __rmul__ = __mul__

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse; relative precision is preserved."""
        if self.is_zero():
            raise ZeroDivisionError("inverting the zero series")
        u = self.coeffs
        r = len(u)
        inv0 = 1 / u[0]
        g = [inv0]
        for k in range(1, r):
            s = 0
            for i in range(1, k + 1):
                s += u[i] * g[k - i]
            g.append(-inv0 * s)
        return TruncatedSeries(g, -self.valuation, r - self.valuation, self.var)

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * (1 / _frac(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return self.invert() * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("integer exponents only")
        if e < 0:
            return self.invert() ** (-e)
        if e == 0:
            return TruncatedSeries.constant(1, self.precision - (self.valuation if self.valuation < 0 else 0), self.var)
        result, base = None, self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return (self.var, self.valuation, self.precision, self.coeffs) == (
                other.var, other.valuation, other.precision, other.coeffs)
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.valuation, self.precision, self.coeffs))

    # calculus

    def derivative(self, i: int = 0) -> "TruncatedSeries":
        """``d/d var``; absolute precision drops by one."""
        if i != 0:
            raise IndexError("a one-variable series has a single derivation (index 0)")
        d = {e - 1: e * c for e, c in self.as_dict().items() if e != 0}
        return TruncatedSeries.from_dict(d, self.precision - 1, self.var)

    def theta(self) -> "TruncatedSeries":
        """``var * d/d var``; precision is preserved."""
        d = {e: e * c for e, c in self.as_dict().items() if e != 0}
        return TruncatedSeries.from_dict(d, self.precision, self.var)

    def compose(self, g: "TruncatedSeries") -> "TruncatedSeries":
        """``self(g)`` for ``g`` of positive valuation."""
        if not isinstance(g, TruncatedSeries):
            raise TypeError("compose expects a TruncatedSeries")
        if g.is_zero() or g.valuation < 1:
            raise ValueError("compose requires an inner series of valuation >= 1")
        v, r = self.valuation, len(self.coeffs)
        if self.is_zero():
            return TruncatedSeries.zero(self.precision * g.valuation if self.precision > 0 else self.precision, g.var)
        tail = (self.precision - v) * g.valuation
        acc = TruncatedSeries.constant(self.coeffs[0], g.precision, g.var)
        power = None
        for k in range(1, r):
            power = g if power is None else power * g
            if power.valuation >= tail:
                break
            if self.coeffs[k]:
                acc = acc + power * self.coeffs[k]
        acc = acc.truncate(min(acc.precision, tail))
        if v:
            acc = acc * (g ** v)
        return acc

    def scale_exponents(self, n: int) -> "TruncatedSeries":
        """``self(var^n)`` for a positive integer ``n``."""
        if n < 1:
            raise ValueError("exponent scaling must be positive")
        return TruncatedSeries.from_dict({n * e: c for e, c in self.as_dict().items()}, n * self.precision, self.var)

    def sqrt(self) -> "TruncatedSeries":
        """Square root of a series with even valuation and square leading coefficient."""
        if self.is_zero() or self.valuation % 2:
            raise ValueError("no square root: zero series or odd valuation")
        a0 = self.coeffs[0]
        r0 = _rational_sqrt(a0)
        u = self.coeffs
        g = [r0]
        for k in range(1, len(u)):
            s = u[k] - sum(g[i] * g[k - i] for i in range(1, k))
            g.append(s / (2 * r0))
        return TruncatedSeries(g, self.valuation // 2, self.valuation // 2 + len(u), self.var)

    def max_abs_coefficient(self):
        return max((abs(c) for c in self.coeffs), default=None)

    def __repr__(self):
        terms = []
        for e, c in sorted(self.as_dict().items()):
            terms.append(f"{c}*{self.var}^{e}" if e else f"{c}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O({self.var}^{self.precision})>"


def _rational_sqrt(a: Fraction) -> Fraction:
    from math import isqrt

    if a < 0:
        raise ValueError(f"{a} has no rational square root")
    n, d = isqrt(a.numerator), isqrt(a.denominator)
    if n * n != a.numerator or d * d != a.denominator:
        raise ValueError(f"{a} has no rational square root")
    return Fraction(n, d)


Index = Tuple[int, ...]


class MultiTaylorSeries:
    """Taylor series in ``n`` variables with all terms of total degree ``< degree`` known."""

    __slots__ = ("vars", "degree", "terms")

    def __init__(self, terms: Dict[Index, object], nvars: int | Sequence[str], degree: int):
        self.vars = tuple(nvars) if not isinstance(nvars, int) else tuple(f"t{i + 1}" for i in range(nvars))
        self.degree = degree
        n = len(self.vars)
        clean = {}
        for a, c in terms.items():
            a = tuple(a)
            if len(a) != n:
                raise ValueError(f"multi-index {a} has wrong length for {n} variables")
            if sum(a) < degree and c != 0:
                clean[a] = _frac(c)
        self.terms: Dict[Index, Fraction] = clean

    @property
    def nderivs(self) -> int:
        return len(self.vars)

    @classmethod
    def variable(cls, i: int, nvars: int | Sequence[str], degree: int):
        n = nvars if isinstance(nvars, int) else len(nvars)
        a = tuple(1 if j == i else 0 for j in range(n))
        return cls({a: 1}, nvars, degree)

    @classmethod
    def constant(cls, c, nvars: int | Sequence[str], degree: int):
        n = nvars if isinstance(nvars, int) else len(nvars)
        return cls({(0,) * n: c}, nvars, degree)

    @property
    def valuation(self) -> int:
        return min((sum(a) for a in self.terms), default=self.degree)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(a) for a in self.terms)

    def coefficient(self, alpha: Index) -> Fraction:
        if sum(alpha) >= self.degree:
            raise PrecisionError(f"coefficient {alpha} beyond total degree {self.degree}")
        return self.terms.get(tuple(alpha), Fraction(0))

    def _check(self, other: "MultiTaylorSeries"):
        if other.vars != self.vars:
            raise ValueError(f"series in different variables: {self.vars} vs {other.vars}")

    def truncate(self, degree: int) -> "MultiTaylorSeries":
        if degree > self.degree:
            raise PrecisionError("cannot raise precision")
        return MultiTaylorSeries(self.terms, self.vars, degree)

    def __add__(self, other):
        if _is_scalar(other):
            other = MultiTaylorSeries.constant(other, self.vars, self.degree)
        if not isinstance(other, MultiTaylorSeries):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for a, c in other.terms.items():
            acc[a] = acc.get(a, 0) + c
        return MultiTaylorSeries(acc, self.vars, min(self.degree, other.degree))

    __radd__ = __add__

    def __neg__(self):
        return MultiTaylorSeries({a: -c for a, c in self.terms.items()}, self.vars, self.degree)

    def __sub__(self, other):
        if _is_scalar(other):
            return self + (-_frac(other))
        if not isinstance(other, MultiTaylorSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            c = _frac(other)
            return MultiTaylorSeries({a: c * x for a, x in self.terms.items()}, self.vars, self.degree)
        if not isinstance(other, MultiTaylorSeries):
            return NotImplemented
        self._check(other)
        d = min(self.degree + other.valuation, other.degree + self.valuation)
        acc: Dict[Index, Fraction] = {}
        for a, x in self.terms.items():
            sa = sum(a)
            for b, y in other.terms.items():
                if sa + sum(b) >= d:
                    continue
                ab = tuple(i + j for i, j in zip(a, b))
                acc[ab] = acc.get(ab, 0) + x * y
        return MultiTaylorSeries(acc, self.vars, d)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.invert() ** (-e)
        result = MultiTaylorSeries.constant(1, self.vars, self.degree)
        for _ in range(e):
            result = result * self
        return result

    def invert(self) -> "MultiTaylorSeries":
        """Inverse of a unit (nonzero constant term)."""
        c0 = self.terms.get((0,) * len(self.vars), Fraction(0))
        if c0 == 0:
            raise ZeroDivisionError("multivariate series is not a unit")
        # 1/(c0 (1 - h)) = (1/c0) sum h^k with h of valuation >= 1
        h = MultiTaylorSeries({a: -c / c0 for a, c in self.terms.items() if any(a)}, self.vars, self.degree)
        acc = MultiTaylorSeries.constant(1, self.vars, self.degree)
        power = acc
        for _ in range(1, self.degree):
            power = power * h
            if power.is_zero():
                break
            acc = acc + power
        return acc * (1 / c0)

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * (1 / _frac(other))
        if not isinstance(other, MultiTaylorSeries):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return self.invert() * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, MultiTaylorSeries):
            return (self.vars, self.degree, self.terms) == (other.vars, other.degree, other.terms)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, self.degree, tuple(sorted(self.terms.items()))))

    def derivative(self, i: int) -> "MultiTaylorSeries":
        """Partial derivative in the i-th variable (0-based); total degree drops by one."""
        if not 0 <= i < len(self.vars):
            raise IndexError(f"derivation index {i} out of range")
        acc = {}
        for a, c in self.terms.items():
            if a[i]:
                b = a[:i] + (a[i] - 1,) + a[i + 1:]
                acc[b] = c * a[i]
        return MultiTaylorSeries(acc, self.vars, self.degree - 1)

    def divide_monomial(self, alpha: Index) -> "MultiTaylorSeries":
        """Exact division by ``t^alpha``; every term must be divisible."""
        acc = {}
        for a, c in self.terms.items():
            b = tuple(x - y for x, y in zip(a, alpha))
            if min(b) < 0:
                raise ValueError(f"term {a} not divisible by {alpha}")
            acc[b] = c
        return MultiTaylorSeries(acc, self.vars, self.degree - sum(alpha))

    def monomial_content(self) -> Index:
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(a[i] for a in self.terms) for i in range(len(self.vars)))

    @classmethod
    def compose_univariate(cls, f: TruncatedSeries, g: "MultiTaylorSeries") -> "MultiTaylorSeries":
        """``f(g)`` for a Taylor series ``f`` and ``g`` with zero constant term."""
        if f.valuation < 0:
            raise ValueError("outer series must be a Taylor series")
        if g.terms.get((0,) * len(g.vars), 0) != 0:
            raise ValueError("inner series must have zero constant term")
        gv = g.valuation
        degree = min(g.degree, f.precision * gv if gv else g.degree)
        acc = MultiTaylorSeries({}, g.vars, degree)
        power = MultiTaylorSeries.constant(1, g.vars, degree)
        for e in range(f.precision):
            if e:
                power = power * g
            if power.is_zero():
                break
            c = f.coefficient(e)
            if c:
                acc = acc + power * c
        return acc.truncate(min(acc.degree, degree))

    def __repr__(self):
        items = sorted(self.terms.items(), key=lambda ac: (sum(ac[0]), ac[0]))
        body = " + ".join(f"{c}*{a}" for a, c in items) or "0"
        return f"<{body} + O(deg {self.degree})>"


def monomials_below(nvars: int, degree: int):
    for a in product(range(degree), repeat=nvars):
        if sum(a) < degree:
            yield a


class SeriesFraction:
    """Quotient ``num/den`` of multivariate Taylor series.

    A minimal fraction field used to run field-valued algorithms (the
    elliptic chord-tangent law) on two-variable Taylor data.  Common monomial
    factors are cancelled; other factors are not.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiTaylorSeries, den: MultiTaylorSeries | None = None):
        if den is None:
            den = MultiTaylorSeries.constant(1, num.vars, num.degree)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        common = tuple(min(a, b) for a, b in zip(num.monomial_content(), den.monomial_content()))
        if any(common) and not num.is_zero():
            num, den = num.divide_monomial(common), den.divide_monomial(common)
        self.num, self.den = num, den

    @property
    def nderivs(self):
        return len(self.num.vars)

    @property
    def relative_precision(self) -> int:
        """Total degree of information carried beyond the denominator's order."""
        return self.num.degree - self.den.valuation

    def _lift(self, other):
        if isinstance(other, SeriesFraction):
            return other
        if _is_scalar(other):
            return SeriesFraction(MultiTaylorSeries.constant(other, self.num.vars, self.num.degree))
        if isinstance(other, MultiTaylorSeries):
            return SeriesFraction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return SeriesFraction(self.num + other.num, self.den)
        return SeriesFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return SeriesFraction(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return SeriesFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by a fraction that is zero to precision")
        return SeriesFraction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return SeriesFraction(self.den, self.num) ** (-e)
        result = self._lift(1)
        for _ in range(e):
            result = result * self
        return result

    def derivative(self, i: int) -> "SeriesFraction":
        n, d = self.num, self.den
        return SeriesFraction(n.derivative(i) * d - n * d.derivative(i), d * d)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __repr__(self):
        return f"SeriesFraction({self.num!r}, {self.den!r})"
