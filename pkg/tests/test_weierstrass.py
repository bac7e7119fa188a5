import random
from fractions import Fraction

import pytest

import randgen
from kolchin.series import TruncatedSeries
from kolchin.weierstrass import SingularCurveError, weierstrass_p, weierstrass_residual


def _random_curve(rng):
    while True:
        g2, g3 = randgen.rational(rng, 9), randgen.rational(rng, 9)
        if g2 ** 3 - 27 * g3 ** 2:
            return g2, g3


def test_low_coefficients():
    g2, g3 = Fraction(3), Fraction(-5, 2)
    p = weierstrass_p(g2, g3, 10)
    assert p.valuation == -2 and p.coefficient(-2) == 1
    assert p.coefficient(0) == 0
    assert p.coefficient(2) == g2 / 20
    assert p.coefficient(4) == g3 / 28
    assert p.coefficient(6) == g2 ** 2 / 1200


@pytest.mark.parametrize("seed", range(5))
def test_ode_residual_zero(seed):
    g2, g3 = _random_curve(random.Random(seed))
    p = weierstrass_p(g2, g3, 46)
    r = weierstrass_residual(p, g2, g3)
    assert r.is_zero() and r.precision >= 40


def test_residual_detects_wrong_series():
    p = weierstrass_p(1, 1, 20)
    bad = p + TruncatedSeries.from_dict({6: 1}, 20, "z")
    assert not weierstrass_residual(bad, 1, 1).is_zero()


def test_singular_curve_rejected():
    with pytest.raises(SingularCurveError):
        weierstrass_p(3, 1, 10)
    with pytest.raises(SingularCurveError):
        weierstrass_p(0, 0, 10)
