"""Modulus 3: replacing x1...xn by Legendre symbols and expanding into complete sums.

For y in {-1, 0, 1}, (y|3) = (e(y) - e(-y)) / (i sqrt 3) with e(y) = w^y, w a
cube root of unity.  On the cube each product x_a x_b is +-1, so pairing the
variables by a permutation sigma turns x1...xn into a product of such factors;
expanding gives signed sums of w^g over the cube with no sign character.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .cyclotomic import CycInt, cyc_is_zero
from .polynomial import QuadPoly
from .sums import eval_gray, monomial_table

I_SQRT3 = 1j * math.sqrt(3.0)


def legendre3(y: int) -> int:
    return (0, 1, -1)[y % 3]


def legendre_identity_check() -> bool:
    """(y|3) (w - w^2) == w^y - w^-y exactly for y in {-1, 0, 1}; w - w^2 = i sqrt 3."""
    i_sqrt3 = CycInt.root(3, 1) - CycInt.root(3, 2)
    return all(
        cyc_is_zero(CycInt.root(3, y) - CycInt.root(3, -y) - i_sqrt3 * legendre3(y))
        for y in (-1, 0, 1)
    )


def _check_sigma(n: int, sigma: Sequence[int] | None) -> tuple[int, ...]:
    if sigma is None:
        return tuple(range(1, n + 1))
    sigma = tuple(int(v) for v in sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"sigma must be a permutation of 1..{n}, got {list(sigma)}")
    return sigma


@dataclass(frozen=True)
class Decomposition:
    """S(f) = scale * sum(sign * S'(g)) over the terms (sign, g).

    S'(g) = 2^-n sum over the cube of w^g(x), without the sign character.
    """

    sigma: tuple[int, ...]
    terms: tuple[tuple[int, QuadPoly], ...]
    factors: int

    @property
    def scale(self) -> complex:
        return I_SQRT3 ** (-self.factors)

    def recombine(self) -> complex:
        return self.scale * sum(sign * complete_sum(g) for sign, g in self.terms)

    def to_dict(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "factors": self.factors,
            "scale": {"re": self.scale.real, "im": self.scale.imag},
            "terms": [{"sign": s, "poly": g.to_dict()} for s, g in self.terms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def complete_sum_exact(g: QuadPoly) -> CycInt:
    """sum over x in {-1,1}^n of w^g(x), exactly."""
    mono, _ = monomial_table(g.n)
    vals = (np.array(g.digits(), dtype=np.int64) @ mono) % g.m
    return CycInt.from_counts(np.bincount(vals, minlength=g.m).tolist())


def complete_sum(g: QuadPoly) -> complex:
    return complex(complete_sum_exact(g)) / 2.0**g.n


def decompose_m3(f: QuadPoly, sigma: Sequence[int] | None = None) -> Decomposition:
    """Pair x_sigma(1)x_sigma(2), x_sigma(3)x_sigma(4), ...; odd n ends on the
    single factor x_sigma(n).  Each factor contributes e(+-y), so there are
    2^ceil(n/2) terms g = f + sum eps_j y_j with sign prod eps_j.
    """
    if f.m != 3:
        raise ValueError(f"decompose_m3 needs m = 3, got m = {f.m}")
    n = f.n
    sigma = _check_sigma(n, sigma)
    pairs = [(sigma[2 * j], sigma[2 * j + 1]) for j in range(n // 2)]
    single = sigma[-1] if n % 2 else None
    factors = len(pairs) + (single is not None)
    terms = []
    for eps in itertools.product((1, -1), repeat=factors):
        g = f
        for e, (u, v) in zip(eps, pairs):
            i, j = min(u, v), max(u, v)
            g = g.with_edge(i, j, g.a.get((i, j), 0) + e)
        if single is not None:
            b = list(g.b)
            b[single - 1] += eps[-1]
            g = QuadPoly(n, 3, g.a, tuple(b))
        terms.append((math.prod(eps), g))
    return Decomposition(sigma, tuple(terms), factors)


def det_mod3(mat: np.ndarray) -> int:
    """Determinant modulo 3 by Gaussian elimination."""
    a = np.array(mat, dtype=np.int64) % 3
    size = a.shape[0]
    det = 1
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r, col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        det = det * a[col, col] % 3
        inv = int(a[col, col])  # 1 and 2 are their own inverses mod 3
        for r in range(col + 1, size):
            if a[r, col]:
                a[r] = (a[r] - a[r, col] * inv * a[col]) % 3
    return det % 3


def form_matrix_mod3(h: QuadPoly) -> np.ndarray:
    """Symmetric matrix of the quadratic part: off-diagonal a_ij / 2 = 2 a_ij mod 3."""
    mat = np.zeros((h.n, h.n), dtype=np.int64)
    for (i, j), v in h.a.items():
        mat[i - 1, j - 1] = mat[j - 1, i - 1] = (2 * v) % 3
    return mat


def is_nonsingular_mod3(h: QuadPoly) -> bool:
    if h.m != 3:
        raise ValueError(f"is_nonsingular_mod3 needs m = 3, got m = {h.m}")
    return det_mod3(form_matrix_mod3(h)) != 0


@dataclass(frozen=True)
class NonsingularBoundCheck:
    applicable: bool
    holds: bool | None
    norm: float
    bound: float
    sigma: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "holds": self.holds,
            "norm": self.norm,
            "bound": self.bound,
            "sigma": list(self.sigma),
            "failed": self.holds is False,
        }


def verify_nonsingular_bound(n: int, f: QuadPoly, sigma: Sequence[int] | None = None,
                     odd_variant: bool = False) -> NonsingularBoundCheck:
    """If every term of the decomposition has a nonsingular quadratic part,
    check |S(f)| <= (sqrt 3 / 2)^floor(n/2).

    Odd n is only accepted with odd_variant=True.
    """
    if f.m != 3:
        raise ValueError(f"verify_nonsingular_bound needs m = 3, got m = {f.m}")
    if n != f.n:
        raise ValueError(f"n={n} does not match the polynomial (n={f.n})")
    if n % 2 and not odd_variant:
        raise ValueError("odd n needs odd_variant=True")
    dec = decompose_m3(f, sigma)
    applicable = all(is_nonsingular_mod3(g) for _, g in dec.terms)
    norm = eval_gray(f).norm
    bound = (math.sqrt(3.0) / 2.0) ** (n // 2)
    holds = norm <= bound + 1e-9 if applicable else None
    return NonsingularBoundCheck(applicable, holds, norm, bound, dec.sigma)


def pairings(n: int) -> Iterator[tuple[int, ...]]:
    """One sigma per distinct way of pairing the variables.

    Even n gives (n-1)!! perfect matchings; odd n also picks the unpaired
    variable, which is placed last.
    """
    def matchings(items: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if not items:
            yield ()
            return
        first, rest = items[0], items[1:]
        for k, other in enumerate(rest):
            for tail in matchings(rest[:k] + rest[k + 1:]):
                yield (first, other) + tail

    everything = tuple(range(1, n + 1))
    if n % 2 == 0:
        yield from matchings(everything)
        return
    for lone in everything:
        for m in matchings(tuple(v for v in everything if v != lone)):
            yield m + (lone,)


def find_applicable_sigma(f: QuadPoly, max_n: int = 8) -> tuple[int, ...] | None:
    """First pairing whose decomposition terms are all nonsingular, if any."""
    if f.n > max_n:
        raise ValueError(f"pairing search is limited to n <= {max_n}")
    for sigma in pairings(f.n):
        dec = decompose_m3(f, sigma)
        if all(is_nonsingular_mod3(g) for _, g in dec.terms):
            return sigma
    return None
