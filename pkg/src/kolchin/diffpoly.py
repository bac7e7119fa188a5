"""Differential polynomial rings over the rationals.

A ring ``DiffRing(nvars, nderivs)`` holds polynomials in the jet variables
``d^alpha x_k`` where ``k < nvars`` and ``alpha`` is a multi-index of length
``nderivs``.  Coefficients are :class:`fractions.Fraction`.  Polynomials are
immutable and kept in a canonical form, so ``==`` is structural equality.

Text syntax (used by the CLI and fixtures)::

    3/2*x0^2 - d1^2 d2 x1*x0 + 7

``d{i}`` is the i-th derivation counted from 1 and binds to the variable
that follows it; ``^`` on a variable raises the whole jet variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Dict, Iterable, Mapping, Tuple

JetVar = Tuple[int, Tuple[int, ...]]
Monomial = Tuple[Tuple[JetVar, int], ...]


class ContextMismatch(ValueError):
    pass


class ParseError(ValueError):
    """Raised on malformed polynomial text; ``position`` is a 0-based column."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at column {position}: {text!r}")
        self.text = text
        self.position = position


def jet_key(v: JetVar):
    base, alpha = v
    return (sum(alpha), alpha, base)


def monomial_key(m: Monomial):
    """Graded order: total degree, then exponents of the largest variables first."""
    deg = sum(e for _, e in m)
    return (deg, tuple((jet_key(v), e) for v, e in reversed(m)))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


@dataclass(frozen=True)
class DiffRing:
    """Context of a differential polynomial ring: ``nvars`` base variables, ``nderivs`` derivations."""

    nvars: int
    nderivs: int

    def __post_init__(self):
        if self.nvars < 0 or self.nderivs < 0:
            raise ValueError("variable and derivation counts must be non-negative")

    def __str__(self):
        return f"DiffRing(nvars={self.nvars}, nderivs={self.nderivs})"

    @property
    def zero(self) -> "DiffPolynomial":
        return DiffPolynomial(self, {})

    @property
    def one(self) -> "DiffPolynomial":
        return self.const(1)

    def const(self, c) -> "DiffPolynomial":
        return DiffPolynomial(self, {(): _as_fraction(c)})

    def jet(self, base: int, alpha: Iterable[int] | None = None) -> "DiffPolynomial":
        alpha = tuple(alpha) if alpha is not None else (0,) * self.nderivs
        self._check_jet((base, alpha))
        return DiffPolynomial(self, {(((base, alpha), 1),): Fraction(1)})

    def var(self, base: int) -> "DiffPolynomial":
        return self.jet(base)

    def gens(self):
        return tuple(self.var(k) for k in range(self.nvars))

    def _check_jet(self, v: JetVar):
        base, alpha = v
        if not 0 <= base < self.nvars:
            raise IndexError(f"variable x{base} outside {self}")
        if len(alpha) != self.nderivs or any(a < 0 for a in alpha):
            raise IndexError(f"multi-index {alpha} invalid for {self}")

    def parse(self, text: str) -> "DiffPolynomial":
        return _Parser(self, text).parse()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: Dict[JetVar, int] = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda ve: jet_key(ve[0])))


class DiffPolynomial:
    """Element of a :class:`DiffRing`; immutable, canonical."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: DiffRing, terms: Mapping[Monomial, Fraction]):
        self.ring = ring
        canon = [(m, Fraction(c)) for m, c in terms.items() if c != 0]
        canon.sort(key=lambda mc: monomial_key(mc[0]), reverse=True)
        self.terms: Tuple[Tuple[Monomial, Fraction], ...] = tuple(canon)
        self._hash = None

    # construction helpers

    def _coerce(self, other) -> "DiffPolynomial":
        if isinstance(other, DiffPolynomial):
            if other.ring != self.ring:
                raise ContextMismatch(f"context mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return self.ring.const(other)
        return NotImplemented

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m, _ in self.terms)

    def constant_term(self) -> Fraction:
        for m, c in self.terms:
            if not m:
                return c
        return Fraction(0)

    def variables(self) -> set:
        return {v for m, _ in self.terms for v, _ in m}

    def max_order(self) -> int:
        return max((sum(a) for _, a in self.variables()), default=0)

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m, _ in self.terms), default=-1)

    def coefficient(self, monomial: Monomial) -> Fraction:
        return dict(self.terms).get(monomial, Fraction(0))

    def as_dict(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return DiffPolynomial(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return DiffPolynomial(self.ring, {m: -c for m, c in self.terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return DiffPolynomial(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers")
        result, base = self.ring.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, DiffPolynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    # differential structure

    def differentiate(self, i: int) -> "DiffPolynomial":
        """Apply the i-th derivation (0-based) using the Leibniz rule."""
        if not 0 <= i < self.ring.nderivs:
            raise IndexError(f"derivation index {i} out of range for {self.ring}")
        acc: Dict[Monomial, Fraction] = {}
        for m, c in self.terms:
            for pos, ((base, alpha), e) in enumerate(m):
                raised = (base, alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:])
                rest = list(m)
                if e == 1:
                    del rest[pos]
                else:
                    rest[pos] = ((base, alpha), e - 1)
                new = _mono_mul(tuple(rest), ((raised, 1),))
                acc[new] = acc.get(new, 0) + c * e
        return DiffPolynomial(self.ring, acc)

    derivative = differentiate

    def substitute(self, images: Mapping[int, object]):
        """Evaluate under the differential homomorphism determined by ``images``.

        ``images[k]`` is the image of ``x_k``; the image of ``d^alpha x_k`` is
        ``d^alpha`` applied in the target.  Targets supply ``derivative(i)`` and
        ring arithmetic with rational scalars.  Returns a rational when the
        polynomial is constant.
        """
        cache: Dict[JetVar, object] = {}
        for base, alpha in self.variables():
            if base not in images:
                raise KeyError(f"no image for variable x{base}")
            if any(alpha):
                _check_derivations(self.ring, images[base])
        total = None
        for m, c in self.terms:
            term = c
            for v, e in m:
                val = _jet_image(v, images, cache)
                term = term * (val if e == 1 else _power(val, e))
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def rename(self, ring: DiffRing, mapping: Callable[[JetVar], JetVar]) -> "DiffPolynomial":
        """Move to ``ring`` sending each jet variable through ``mapping``."""
        acc: Dict[Monomial, Fraction] = {}
        for m, c in self.terms:
            new: Monomial = ()
            for v, e in m:
                w = mapping(v)
                ring._check_jet(w)
                new = _mono_mul(new, ((w, e),))
            acc[new] = acc.get(new, 0) + c
        return DiffPolynomial(ring, acc)

    # printing

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"DiffPolynomial({self.ring.nvars}, {self.ring.nderivs}, {format_poly(self)!r})"


def _check_derivations(ring: DiffRing, value):
    n = getattr(value, "nderivs", None)
    if n is not None and n != ring.nderivs:
        raise ValueError(
            f"derivation-count mismatch: ring has {ring.nderivs}, target has {n}"
        )


def _derive(value, i: int):
    if isinstance(value, (int, Fraction)):
        return Fraction(0)
    return value.derivative(i)


def _jet_image(v: JetVar, images, cache):
    if v in cache:
        return cache[v]
    base, alpha = v
    if not any(alpha):
        val = images[base]
    else:
        i = max(j for j, a in enumerate(alpha) if a)
        lower = (base, alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:])
        val = _derive(_jet_image(lower, images, cache), i)
    cache[v] = val
    return val


def _power(val, e: int):
    result = val
    for _ in range(e - 1):
        result = result * val
    return result


# text format

def _format_jet(v: JetVar) -> str:
    base, alpha = v
    parts = []
    for i, a in enumerate(alpha):
        if a == 1:
            parts.append(f"d{i + 1}")
        elif a > 1:
            parts.append(f"d{i + 1}^{a}")
    parts.append(f"x{base}")
    return " ".join(parts)


def format_poly(p: DiffPolynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for idx, (m, c) in enumerate(p.terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        factors = [_format_jet(v) + (f"^{e}" if e > 1 else "") for v, e in m]
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<d>d\d+)|(?P<x>x\d+)|(?P<op>[-+*^()]))"
)


class _Parser:
    def __init__(self, ring: DiffRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                while text[pos].isspace():
                    pos += 1
                raise ParseError("unexpected character", text, pos)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def error(self, message):
        pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise ParseError(message, self.text, pos)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> DiffPolynomial:
        if not self.tokens:
            self.error("empty expression")
        p = self.expr()
        if self.i < len(self.tokens):
            self.error("unexpected token")
        return p

    def expr(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            p = self.term()
            if val == "-":
                p = -p
        else:
            p = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, _ = self.peek()
            if kind != "num" or "/" in val:
                self.error("expected integer exponent")
            self.take()
            base = base ** int(val)
        return base

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return self.ring.const(Fraction(val))
        if kind == "op" and val == "(":
            self.take()
            p = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return p
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        if kind in ("d", "x"):
            return self.jet()
        self.error("expected a number, variable or '('")

    def jet(self):
        alpha = [0] * self.ring.nderivs
        while self.peek()[0] == "d":
            _, val, _ = self.peek()
            i = int(val[1:])
            if not 1 <= i <= self.ring.nderivs:
                self.error(f"derivation d{i} outside 1..{self.ring.nderivs}")
            self.take()
            e = 1
            if self.peek()[1] == "^" and self.i + 1 < len(self.tokens) and self.tokens[self.i + 1][0] == "num":
                self.take()
                _, ev, _ = self.peek()
                if "/" in ev:
                    self.error("expected integer exponent")
                self.take()
                e = int(ev)
            alpha[i - 1] += e
        kind, val, _ = self.peek()
        if kind != "x":
            self.error("expected variable after derivative prefix")
        k = int(val[1:])
        if k >= self.ring.nvars:
            self.error(f"variable x{k} outside x0..x{self.ring.nvars - 1}")
        self.take()
        return self.ring.jet(k, alpha)


def parse_poly(text: str, nvars: int, nderivs: int) -> DiffPolynomial:
    return DiffRing(nvars, nderivs).parse(text)
