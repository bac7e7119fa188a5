"""Exact differential algebra: jet spaces, logarithmic derivatives and Schwarzians."""

from .diffpoly import DiffPolynomial, DiffRing, ParseError, parse_poly
from .fitting import PrecisionDeficit, fit_algebraic_relation
from .logderiv import (
    O,
    Elliptic,
    Ga,
    GroupSpec,
    Gm,
    JOperator,
    MobiusTransform,
    OrbitDecision,
    elliptic_add,
    fit_j_operator,
    group_add,
    hecke_relation,
    log_deriv,
    mobius_apply,
    same_pgl2_orbit,
    schwarzian,
)
from .modular import delta_series, eisenstein, j_series
from .prolong import (
    AffineVariety,
    ArcSpacePresentation,
    JetPoint,
    arc_space,
    kolchin_closure_fit,
    nabla,
    project,
    zero_section,
)
from .series import MultiTaylorSeries, PrecisionError, SeriesFraction, TruncatedSeries
from .weierstrass import weierstrass_p

__version__ = "0.1.0"
