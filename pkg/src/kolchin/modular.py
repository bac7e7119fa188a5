"""q-expansions of level-one modular forms: E4, E6, the discriminant and j."""

from __future__ import annotations

from functools import lru_cache

from .series import TruncatedSeries


def divisor_sigma(n: int, k: int) -> int:
    total, d = 0, 1
    while d * d <= n:
        if n % d == 0:
            total += d ** k
            if d * d != n:
                total += (n // d) ** k
        d += 1
    return total


_EISENSTEIN = {4: (3, 240), 6: (5, -504)}


@lru_cache(maxsize=None)
def eisenstein(weight: int, precision: int) -> TruncatedSeries:
    """``E_weight`` with ``precision`` terms (exponents ``0 .. precision-1``)."""
    if weight not in _EISENSTEIN:
        raise ValueError(f"weight must be 4 or 6, got {weight}")
    if precision < 1:
        raise ValueError("precision must be at least 1")
    k, scale = _EISENSTEIN[weight]
    return TruncatedSeries([1] + [scale * divisor_sigma(m, k) for m in range(1, precision)], 0, precision)


@lru_cache(maxsize=None)
def delta_series(precision: int) -> TruncatedSeries:
    """``(E4^3 - E6^2) / 1728`` to absolute precision ``precision``."""
    e4, e6 = eisenstein(4, precision), eisenstein(6, precision)
    return (e4 * e4 * e4 - e6 * e6) / 1728


@lru_cache(maxsize=None)
def j_series(precision: int) -> TruncatedSeries:
    """The j-invariant with ``precision`` terms, i.e. exponents ``-1 .. precision-2``."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    n = precision + 1
    e4 = eisenstein(4, n)
    j = (e4 * e4 * e4) / delta_series(n)
    return j.truncate(precision - 1)


def j_of_power(power: int, precision: int) -> TruncatedSeries:
    """``j(q^power)`` built from :func:`j_series` with ``precision`` terms."""
    return j_series(precision).scale_exponents(power)
