"""Exact arithmetic in Z[w], w = exp(2*pi*i/m), plus the root-of-unity parameters.

Elements are stored as exponent-coefficient vectors in Z[x]/(x^m - 1). They are
only reduced modulo the cyclotomic polynomial when deciding equality with zero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np


def _check_modulus(m: int) -> None:
    if not isinstance(m, (int, np.integer)) or m < 3 or m % 2 == 0:
        raise ValueError(f"modulus must be an odd integer >= 3, got {m!r}")


# ---------------------------------------------------------------------------
# integer polynomials (ascending coefficient lists)


def _poly_trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod_monic(p: Sequence[int], d: Sequence[int]) -> tuple[list[int], list[int]]:
    """Long division of integer polynomials by a monic divisor."""
    if d[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(p)
    deg_d = len(d) - 1
    if len(rem) <= deg_d:
        return [0], _poly_trim(rem) if rem else [0]
    quot = [0] * (len(rem) - deg_d)
    for k in range(len(rem) - 1, deg_d - 1, -1):
        coef = rem[k]
        if coef:
            quot[k - deg_d] = coef
            for j in range(deg_d + 1):
                rem[k - deg_d + j] -= coef * d[j]
    return _poly_trim(quot), _poly_trim(rem[:deg_d] or [0])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    den = [1]
    for d in range(1, m):
        if m % d == 0:
            den = _poly_mul(den, cyclotomic_polynomial(d))
    quot, rem = _poly_divmod_monic(num, den)
    if any(rem):
        raise ArithmeticError(f"x^{m}-1 not divisible by product of lower cyclotomics")
    return tuple(quot)


@lru_cache(maxsize=None)
def _reduction_matrix(m: int) -> np.ndarray:
    """Integer matrix R with (vector @ R) = coefficients of vector mod Phi_m."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    rows = []
    for j in range(m):
        basis = [0] * j + [1]
        _, rem = _poly_divmod_monic(basis, phi)
        rows.append(rem + [0] * (deg - len(rem)))
    return np.array(rows, dtype=np.int64)


def reduce_mod_phi(coeffs: Sequence[int], m: int) -> list[int]:
    """Reduce an exponent vector of length m modulo Phi_m, exactly."""
    _, rem = _poly_divmod_monic([int(c) for c in coeffs], cyclotomic_polynomial(m))
    deg = len(cyclotomic_polynomial(m)) - 1
    return rem + [0] * (deg - len(rem))


def batch_is_zero(vectors: np.ndarray, m: int) -> np.ndarray:
    """Row-wise zero test for an (N, m) integer array of exponent vectors."""
    red = _reduction_matrix(m)
    vectors = np.asarray(vectors)
    bound = int(np.abs(vectors).max(initial=0)) * int(np.abs(red).max()) * m
    if bound >= 2**62:
        rows = [reduce_mod_phi(v, m) for v in vectors.tolist()]
        return np.array([not any(r) for r in rows], dtype=bool)
    return ~np.any(vectors.astype(np.int64) @ red, axis=1)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CycInt:
    """An element sum_j coeffs[j] * w^j of Z[w], w a primitive m-th root of unity."""

    modulus: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_modulus(self.modulus)
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.modulus:
            raise ValueError(f"expected {self.modulus} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, m: int) -> CycInt:
        return cls(m, (0,) * m)

    @classmethod
    def root(cls, m: int, k: int = 1, coef: int = 1) -> CycInt:
        """coef * w^k."""
        c = [0] * m
        c[k % m] = coef
        return cls(m, tuple(c))

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> CycInt:
        return cls(len(counts), tuple(counts))

    def _same(self, other: CycInt) -> None:
        if not isinstance(other, CycInt):
            raise TypeError(f"expected CycInt, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __add__(self, other: CycInt) -> CycInt:
        self._same(other)
        return CycInt(self.modulus, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: CycInt) -> CycInt:
        self._same(other)
        return CycInt(self.modulus, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CycInt:
        return CycInt(self.modulus, tuple(-a for a in self.coeffs))

    def __mul__(self, other: CycInt | int) -> CycInt:
        if isinstance(other, (int, np.integer)):
            return CycInt(self.modulus, tuple(a * int(other) for a in self.coeffs))
        self._same(other)
        m = self.modulus
        out = [0] * m
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % m] += a * b
        return CycInt(m, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CycInt:
        if k < 0:
            raise ValueError("negative powers are not in Z[w]")
        result = CycInt.root(self.modulus, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> CycInt:
        """Complex conjugate: w^j -> w^(m-j)."""
        m = self.modulus
        return CycInt(m, tuple(self.coeffs[(-j) % m] for j in range(m)))

    def is_zero(self) -> bool:
        return cyc_is_zero(self)

    def equals(self, other: CycInt) -> bool:
        """Equality as complex numbers (not as vectors)."""
        return cyc_is_zero(self - other)

    def reduced(self) -> list[int]:
        return reduce_mod_phi(self.coeffs, self.modulus)

    def as_integer(self) -> int | None:
        """The rational integer this element equals, or None if it is not one."""
        red = self.reduced()
        if any(red[1:]):
            return None
        return red[0]

    def __complex__(self) -> complex:
        m = self.modulus
        total = 0j
        for j, a in enumerate(self.coeffs):
            if a:
                total += a * cmath.exp(2j * math.pi * j / m)
        return total

    def __abs__(self) -> float:
        return cyc_abs(self)


def cyc_arith(a: CycInt, b: CycInt | None, op: str) -> CycInt:
    """Functional front end: op in {'add', 'sub', 'mul', 'conj'}."""
    if op == "conj":
        return a.conj()
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def cyc_is_zero(a: CycInt) -> bool:
    return not any(a.reduced())


def cyc_abs(a: CycInt) -> float:
    # index order 0..m-1 for reproducibility
    m = a.modulus
    re = 0.0
    im = 0.0
    for j, c in enumerate(a.coeffs):
        if c:
            t = 2.0 * math.pi * j / m
            re += c * math.cos(t)
            im += c * math.sin(t)
    return math.hypot(re, im)


def roots_of_unity(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootParams:
    m: int
    c: int
    q: float
    r: float
    s: float

    @property
    def half_q(self) -> float:
        return self.q / 2.0

    def conjectured_bound(self, n: int) -> float:
        """(q/2)^floor((n+1)/2), the conjectured sharp maximum of |S| in n variables."""
        return self.half_q ** ((n + 1) // 2)


def root_params(m: int) -> RootParams:
    """c, q, r, s for modulus m.

    r and s are on the magnitude scale: r = 2cos(3pi/2m) is the second-largest
    |w^y - w^-y| and s = 2cos(pi/m) the second-largest |w^y + w^-y|.
    """
    _check_modulus(m)
    return RootParams(
        m=m,
        c=(m + 1) // 4,
        q=2.0 * math.cos(math.pi / (2 * m)),
        r=2.0 * math.cos(3 * math.pi / (2 * m)),
        s=2.0 * math.cos(math.pi / m),
    )


def distinct_desc(values, tol: float = 1e-9) -> list[float]:
    """Distinct values, largest first, merging those within tol."""
    out: list[float] = []
    for v in sorted(values, reverse=True):
        if not out or out[-1] - v > tol:
            out.append(float(v))
    return out


def brute_force_extremes(m: int) -> dict[str, float]:
    """Largest and second-largest |w^y -/+ w^-y| over y mod m, by enumeration."""
    _check_modulus(m)
    w = roots_of_unity(m)
    diff = distinct_desc(abs(w[y] - w[-y % m]) for y in range(m))
    summ = distinct_desc(abs(w[y] + w[-y % m]) for y in range(m))
    return {
        "q": diff[0],
        "r": diff[1] if len(diff) > 1 else 0.0,
        "sum_max": summ[0],
        "s": summ[1] if len(summ) > 1 else 0.0,
    }


# ---------------------------------------------------------------------------
# Chebyshev polynomials normalised so that Q_k(2cos t) = 2cos(kt)


@dataclass(frozen=True)
class ChebSeq:
    degree: int
    coeffs: tuple[int, ...]  # ascending powers

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@lru_cache(maxsize=None)
def chebyshev_coeffs(k: int) -> ChebSeq:
    if k < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = [2], [0, 1]
    if k == 0:
        return ChebSeq(0, tuple(prev))
    for _ in range(k - 1):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return ChebSeq(k, tuple(cur))


def chebyshev_q(k: int, x: float) -> float:
    """Q_k(x) by the three-term recurrence Q_{k+1} = x Q_k - Q_{k-1}."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = 2.0, x
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, x * cur - prev
    return cur
