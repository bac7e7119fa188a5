from fractions import Fraction

import pytest

from kolchin.diffpoly import DiffRing
from kolchin.fitting import PrecisionDeficit, fit_algebraic_relation, nullspace, rref
from kolchin.logderiv import hecke_relation
from kolchin.series import TruncatedSeries

R = DiffRing(2, 0)
X, Y = R.gens()


def _in_span(target, basis):
    """Exact membership test by solving for coefficients over the monomials."""
    monos = sorted({m for p in basis + [target] for m, _ in p.terms})
    rows = [[p.coefficient(m) for p in basis] + [target.coefficient(m)] for m in monos]
    _, pivots = rref(rows, len(basis) + 1)
    return len(basis) not in pivots


def test_rref_and_nullspace():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    _, pivots = rref(rows, 3)
    assert pivots == [0]
    ns = nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert sum(a * b for a, b in zip(rows[0], v)) == 0


def test_parabola_relation():
    t = TruncatedSeries.gen(12, "t")
    rels = fit_algebraic_relation([(t, t * t)], (2, 1))
    assert X ** 2 - Y in rels
    assert _in_span(Y - X ** 2, rels)


def test_diagonal_relation():
    t = TruncatedSeries.gen(8, "t")
    rels = fit_algebraic_relation([(t, t)], (1, 1))
    assert _in_span(Y - X, rels)
    assert not _in_span(Y - 2 * X, rels)


def test_precision_deficit_reports_requirement():
    t = TruncatedSeries.gen(3, "t")
    with pytest.raises(PrecisionDeficit) as info:
        fit_algebraic_relation([(t, t * t)], (2, 2))
    assert info.value.required > 3
    t = TruncatedSeries.gen(info.value.required, "t")
    rels = fit_algebraic_relation([(t, t * t)], (2, 2))
    assert _in_span(Y - X ** 2, rels)


def test_relations_vanish_at_doubled_precision():
    t = TruncatedSeries.gen(20, "t")
    f = t + t ** 3
    rels = fit_algebraic_relation([(t, f)], (3, 1))
    t2 = TruncatedSeries.gen(40, "t")
    for r in rels:
        assert r.substitute({0: t2, 1: t2 + t2 ** 3}).is_zero()


def test_no_relation_for_transcendental_pair():
    t = TruncatedSeries.gen(40, "t")
    assert fit_algebraic_relation([(t, TruncatedSeries.exp(40, "t"))], (3, 3)) == []


def test_mixed_variables_rejected():
    with pytest.raises(ValueError):
        fit_algebraic_relation([(TruncatedSeries.gen(5, "t"), TruncatedSeries.gen(5, "q"))], (1, 1))


def test_phi2_fit_then_verify():
    h = hecke_relation(2, 60)
    degs = {}
    for m, _ in h.relation.terms:
        for (base, _), e in m:
            degs[base] = max(degs.get(base, 0), e)
    assert degs == {0: 3, 1: 3}
    assert h.residual.is_zero() and h.residual.precision == 120
    assert h.symmetric
