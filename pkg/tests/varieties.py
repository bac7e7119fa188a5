"""Affine varieties with explicit parametrizations, used as arc-space fixtures.

Each entry maps a parameter ``u`` (any series supporting ring operations
and division by units) to a point of the variety.
"""

from kolchin.prolong import AffineVariety


def _circle(u):
    d = 1 + u * u
    return ((1 - u * u) / d, 2 * u / d)


FIXTURES = {
    "parabola": (AffineVariety.parse(2, ["x0^2 - x1"]), lambda u: (u, u * u)),
    "circle": (AffineVariety.parse(2, ["x0^2 + x1^2 - 1"]), _circle),
    "cusp": (AffineVariety.parse(2, ["x1^2 - x0^3"]), lambda u: (u * u, u * u * u)),
    "node": (AffineVariety.parse(2, ["x1^2 - x0^2*(x0 + 1)"]), lambda u: (u * u - 1, u * (u * u - 1))),
    "twisted_cubic": (
        AffineVariety.parse(3, ["x1 - x0^2", "x2 - x0*x1", "x0*x2 - x1^2"]),
        lambda u: (u, u * u, u * u * u),
    ),
    "hyperbola": (AffineVariety.parse(2, ["x0*x1 - 1"]), lambda u: (1 + u, 1 / (1 + u))),
    "line": (AffineVariety.parse(1, []), lambda u: (u,)),
}
