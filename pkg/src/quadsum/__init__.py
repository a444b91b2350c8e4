"""Exact evaluation and bound checking for incomplete quadratic exponential sums

    S(f, n, m) = 2^-n * sum_{x in {-1,1}^n} x_1...x_n * exp(2*pi*i*f(x)/m)

for quadratic f over Z_m, m odd.
"""

from .cyclotomic import CycInt, RootParams, chebyshev_q, cyc_abs, cyc_is_zero, root_params
from .polynomial import FamilySpec, QuadPoly, canonical_form, forest_distance, graph_of, parse_poly
from .sums import SumValue, eval_gray, eval_naive, sweep_family

__version__ = "0.1.0"

__all__ = [
    "CycInt",
    "FamilySpec",
    "QuadPoly",
    "RootParams",
    "SumValue",
    "canonical_form",
    "chebyshev_q",
    "cyc_abs",
    "cyc_is_zero",
    "eval_gray",
    "eval_naive",
    "forest_distance",
    "graph_of",
    "parse_poly",
    "root_params",
    "sweep_family",
]
