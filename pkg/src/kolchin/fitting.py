"""Algebraic relations among series, found as null spaces of exact matrices."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import List, Sequence

from .diffpoly import DiffPolynomial, DiffRing, Monomial, monomial_key
from .series import PrecisionError, TruncatedSeries


class PrecisionDeficit(PrecisionError):
    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


def rref(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Basis of ``{v : A v = 0}``, one vector per free column."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def leading_reduced_basis(basis: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Canonical basis of the span: pivots at the highest columns, monic, highest first.

    Every vector has a distinct leading (highest nonzero) column and is zero at
    the leading columns of the others.
    """
    if not basis:
        return []
    flipped = [list(reversed(v)) for v in basis]
    red, _ = rref(flipped, ncols)
    return [list(reversed(v)) for v in red]


def box_monomials(bounds: Sequence[int]):
    """Exponent tuples ``e`` with ``e_i <= bounds[i]``, in increasing monomial order."""
    exps = list(product(*(range(b + 1) for b in bounds)))
    return sorted(exps, key=lambda e: monomial_key(_exp_to_monomial(e)))


def _exp_to_monomial(e, nderivs: int = 0) -> Monomial:
    zero = (0,) * nderivs
    return tuple(((k, zero), x) for k, x in enumerate(e) if x)


def _monomial_values(sample: Sequence[TruncatedSeries], exps):
    powers = []
    for s in sample:
        ps = [None, s]
        powers.append(ps)
    out = []
    for e in exps:
        val = None
        for k, x in enumerate(e):
            if not x:
                continue
            ps = powers[k]
            while len(ps) <= x:
                ps.append(ps[-1] * ps[1])
            val = ps[x] if val is None else val * ps[x]
        out.append(val)
    return out


def _rows_for(values):
    """Coefficient rows over the window where every monomial series is known.

    ``None`` stands for the constant monomial 1.
    """
    series = [v for v in values if v is not None]
    hi = min(v.precision for v in series) if series else 1
    lo = min([v.valuation for v in series] + ([0] if None in values else []))
    rows = []
    for e in range(lo, hi):
        rows.append([
            (Fraction(1) if e == 0 else Fraction(0)) if v is None else v.coefficient(e)
            for v in values
        ])
    return rows


def fit_algebraic_relation(samples, degree_bounds: Sequence[int], ring: DiffRing | None = None) -> List[DiffPolynomial]:
    """Polynomials with per-variable degrees ``<= degree_bounds`` vanishing on every sample.

    ``samples`` is a list of tuples of series in one common variable.  The
    result is the canonical basis of the null space of the evaluation matrix
    (see :func:`leading_reduced_basis`), as polynomials in ``x0 .. x{k-1}``.
    """
    samples = [tuple(s) for s in samples]
    if not samples:
        raise ValueError("no samples")
    k = len(degree_bounds)
    if any(len(s) != k for s in samples):
        raise ValueError(f"every sample needs {k} coordinates")
    var = samples[0][0].var
    if any(c.var != var for s in samples for c in s):
        raise ValueError("all series must share one variable")
    ring = ring or DiffRing(k, 0)
    exps = box_monomials(degree_bounds)
    rows = []
    for s in samples:
        rows.extend(_rows_for(_monomial_values(s, exps)))
    if len(rows) < len(exps):
        deficit = len(exps) - len(rows)
        have = max(c.precision for s in samples for c in s)
        raise PrecisionDeficit(
            f"{len(exps)} monomials but only {len(rows)} known coefficients; "
            f"raise precision to at least {have + deficit}",
            have + deficit,
        )
    basis = leading_reduced_basis(nullspace(rows, len(exps)), len(exps))
    return [_vector_to_poly(v, exps, ring) for v in basis]


def _vector_to_poly(v, exps, ring: DiffRing) -> DiffPolynomial:
    return DiffPolynomial(ring, {_exp_to_monomial(e, ring.nderivs): c for e, c in zip(exps, v) if c})


def evaluate_relation(poly: DiffPolynomial, sample: Sequence) -> object:
    return poly.substitute(dict(enumerate(sample)))
