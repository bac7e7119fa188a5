"""Laurent expansion of the Weierstrass function for ``y^2 = 4x^3 - g2 x - g3``."""

from __future__ import annotations

from fractions import Fraction

from .series import MultiTaylorSeries, SeriesFraction, TruncatedSeries


class SingularCurveError(ValueError):
    pass


def discriminant(g2, g3) -> Fraction:
    return Fraction(g2) ** 3 - 27 * Fraction(g3) ** 2


def check_nonsingular(g2, g3):
    if discriminant(g2, g3) == 0:
        raise SingularCurveError(f"singular Weierstrass data: g2={g2}, g3={g3}")


def weierstrass_coefficients(g2, g3, count: int):
    """``c_2 .. c_count`` with ``p(z) = z^-2 + sum c_m z^(2m-2)``."""
    g2, g3 = Fraction(g2), Fraction(g3)
    c = {2: g2 / 20, 3: g3 / 28}
    for m in range(4, count + 1):
        s = sum(c[h] * c[m - h] for h in range(2, m - 1))
        c[m] = Fraction(3, (2 * m + 1) * (m - 3)) * s
    return {m: c[m] for m in range(2, count + 1)}


def weierstrass_p(g2, g3, precision: int, var: str = "z") -> TruncatedSeries:
    """``p(z)`` known for every exponent below ``precision``."""
    check_nonsingular(g2, g3)
    if precision < -1:
        raise ValueError("precision must be at least -1")
    count = max(1, precision // 2 + 1)
    c = weierstrass_coefficients(g2, g3, count)
    terms = {-2: Fraction(1)}
    terms.update({2 * m - 2: v for m, v in c.items() if 2 * m - 2 < precision})
    return TruncatedSeries.from_dict(terms, precision, var)


def weierstrass_residual(p: TruncatedSeries, g2, g3) -> TruncatedSeries:
    """``p'^2 - 4 p^3 + g2 p + g3``, the zero series for a genuine solution."""
    dp = p.derivative()
    return dp * dp - 4 * p * p * p + Fraction(g2) * p + Fraction(g3)


def weierstrass_point(g2, g3, u):
    """``(p(u), p'(u))`` for a multivariate series ``u`` with zero constant term.

    Returned as :class:`SeriesFraction` pairs ``(X/u^2, Y/u^3)`` where ``X, Y``
    are Taylor series, so no negative powers are ever stored.
    """
    p = weierstrass_p(g2, g3, u.degree + 3)
    shifted = TruncatedSeries.from_dict({e + 2: c for e, c in p.as_dict().items()}, p.precision + 2, p.var)
    dp = p.derivative()
    dshifted = TruncatedSeries.from_dict({e + 3: c for e, c in dp.as_dict().items()}, dp.precision + 3, p.var)
    X = MultiTaylorSeries.compose_univariate(shifted, u)
    Y = MultiTaylorSeries.compose_univariate(dshifted, u)
    return SeriesFraction(X, u * u), SeriesFraction(Y, u * u * u)
