"""Exact family moments of |S| and the moment-based tail bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cyclotomic import CycInt, batch_is_zero, cyc_is_zero
from .polynomial import FamilySpec
from .sums import DEFAULT_BUDGET, FamilyBatch, sweep_family

TAIL_TOL = 1e-12


class MomentConsistencyError(ArithmeticError):
    """A family moment numerator failed to reduce to a rational integer."""


def geometric_char_sum(m: int, r: int) -> CycInt:
    """sum over a mod m of w^(a r), exactly."""
    total = CycInt.zero(m)
    for a in range(m):
        total = total + CycInt.root(m, a * r)
    return total


def _cyclic_autocorr(c: np.ndarray, m: int) -> np.ndarray:
    """Rows of c times their conjugates: out[:, k] = sum_j c[:, j] c[:, j-k]."""
    out = np.empty_like(c)
    for k in range(m):
        out[:, k] = (c * np.roll(c, k, axis=1)).sum(axis=1)
    return out


def _cyclic_mul(x: np.ndarray, y: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros_like(x)
    for j in range(m):
        out += x[:, j:j + 1] * np.roll(y, j, axis=1)
    return out


class MomentCollector:
    """Exact running sum of (St * conj(St))^(r/2) over the family."""

    def __init__(self, n: int, m: int, r: int) -> None:
        self.n, self.m, self.r = n, m, r
        self.total = [0] * m
        self.members = 0
        self.zeros = 0

    def feed(self, batch: FamilyBatch) -> None:
        m, half = self.m, self.r // 2
        wide = (2 ** (self.r * self.n)) * len(batch) >= 2**62
        c = batch.counts.astype(object if wide else np.int64)
        sq = _cyclic_autocorr(c, m)
        acc = sq
        for _ in range(half - 1):
            acc = _cyclic_mul(acc, sq, m)
        w = batch.weights.astype(object if wide else np.int64)
        col = (acc * w[:, None]).sum(axis=0)
        self.total = [t + int(v) for t, v in zip(self.total, col)]
        self.members += int(batch.weights.sum())
        self.zeros += int(batch.weights[batch_is_zero(batch.counts, m)].sum())

    def merge(self, other: MomentCollector) -> None:
        self.total = [a + b for a, b in zip(self.total, other.total)]
        self.members += other.members
        self.zeros += other.zeros


def m2_all(n: int) -> Fraction:
    return Fraction(1, 2**n)


def m2_homogeneous(n: int) -> Fraction:
    return Fraction(1 + (-1) ** n, 2**n)


def m6_bound(n: int) -> Fraction:
    """Sixth-moment upper bound (9n(n-1) + (9n+1) 2^(2-2n)) / 4 * 2^(-3n) for m > 3."""
    return (9 * n * (n - 1) + (9 * n + 1) * Fraction(4, 4**n)) / 4 / Fraction(2 ** (3 * n))


@dataclass
class MomentReport:
    spec: FamilySpec
    r: int
    exact: Fraction
    predicted: Fraction | None = None
    bound: Fraction | None = None
    zero_count: int = 0
    numerator_vector: list[int] = field(default_factory=list)

    @property
    def value(self) -> float:
        return float(self.exact)

    @property
    def matches_prediction(self) -> bool | None:
        return None if self.predicted is None else self.exact == self.predicted

    @property
    def within_bound(self) -> bool | None:
        if self.bound is None:
            return None
        return self.exact <= self.bound or self.value <= float(self.bound) + 1e-12

    @property
    def failed(self) -> bool:
        return self.matches_prediction is False or self.within_bound is False

    def to_dict(self) -> dict:
        def frac(x: Fraction | None) -> dict | None:
            if x is None:
                return None
            return {
                "value": f"{x.numerator}/{x.denominator}",
                "numerator": str(x.numerator),
                "denominator": str(x.denominator),
                "float": float(x),
            }

        return {
            "family": self.spec.describe(),
            "r": self.r,
            "moment": frac(self.exact),
            "predicted": frac(self.predicted),
            "bound": frac(self.bound),
            "matches_prediction": self.matches_prediction,
            "within_bound": self.within_bound,
            "zero_sums": self.zero_count,
            "failed": self.failed,
        }


def moment_exact(spec: FamilySpec, r: int, *, budget: int = DEFAULT_BUDGET,
                 threads: int | None = None) -> MomentReport:
    """M_r = (sum_f (St conj St)^(r/2)) / (|F| 2^(rn)), exactly.

    The numerator is accumulated as an element of Z[w]; it is invariant under
    the Galois action on an enumerated family, so its reduction modulo the
    cyclotomic polynomial has to be a rational integer.
    """
    if r % 2 or r not in (2, 4, 6):
        raise ValueError(f"moment order must be 2, 4 or 6, got {r}")
    if not spec.exhaustive:
        raise ValueError("exact moments need an enumerated family (all, homogeneous, linear)")
    n, m = spec.n, spec.m
    acc = sweep_family(spec, lambda: MomentCollector(n, m, r), budget=budget, threads=threads)
    num = CycInt(m, tuple(acc.total)).as_integer()
    if num is None:
        raise MomentConsistencyError(
            f"moment numerator {acc.total} for {spec.describe()} is not a rational integer"
        )
    exact = Fraction(num, acc.members * 2 ** (r * n))
    if not 0 <= exact <= 1:
        raise MomentConsistencyError(f"moment {exact} outside [0, 1]")
    predicted = bound = None
    if r == 2 and spec.kind == "all":
        predicted = m2_all(n)
    elif r == 2 and spec.kind == "homogeneous":
        predicted = m2_homogeneous(n)
    elif r == 6 and spec.kind == "all" and m > 3:
        bound = m6_bound(n)
    return MomentReport(spec, r, exact, predicted, bound, acc.zeros, acc.total)


# ---------------------------------------------------------------------------
# tails


@dataclass(frozen=True)
class TailReport:
    n: int
    m: int
    gamma: float
    lower: float
    upper: float
    empirical: float | None = None

    @property
    def epsilon(self) -> float:
        return self.gamma**self.n

    @property
    def sandwiched(self) -> bool | None:
        if self.empirical is None:
            return None
        return self.lower <= self.empirical <= self.upper

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "lower": self.lower,
            "upper": self.upper,
            "empirical": self.empirical,
            "sandwiched": self.sandwiched,
            "failed": self.sandwiched is False,
        }


def tail_bounds(n: int, m: int, gamma: float) -> TailReport:
    """Bounds on Prob(|S| >= gamma^n) for f uniform over all quadratics.

    Lower from M_2 = 2^-n; upper from M_2 and, for m > 3, from the sixth moment
    with coefficient 9n(n+1)/4.
    """
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    g2n = gamma ** (2 * n)
    lower = 0.0 if g2n >= 1.0 else max(0.0, (2.0**-n - g2n) / (1.0 - g2n))
    base = 2.0 * gamma * gamma
    upper = min(1.0, base**-n)
    if m > 3:
        upper = min(upper, 9 * n * (n + 1) / 4 * base ** (-3 * n))
    return TailReport(n, m, gamma, lower, upper)


class TailCollector:
    def __init__(self, n: int, gammas: Sequence[float]) -> None:
        self.eps = np.array([g**n for g in gammas])
        self.hits = np.zeros(len(gammas), dtype=np.int64)
        self.members = 0

    def feed(self, batch: FamilyBatch) -> None:
        over = batch.norms[:, None] >= self.eps[None, :] - TAIL_TOL
        self.hits += (over * batch.weights[:, None]).sum(axis=0)
        self.members += int(batch.weights.sum())

    def merge(self, other: TailCollector) -> None:
        self.hits += other.hits
        self.members += other.members


def empirical_tail(spec: FamilySpec, gammas: float | Sequence[float], *,
                   budget: int = DEFAULT_BUDGET, threads: int | None = None) -> list[TailReport]:
    """Fraction of the family with |S| >= gamma^n, next to the moment bounds."""
    gammas = [gammas] if isinstance(gammas, (int, float)) else list(gammas)
    acc = sweep_family(spec, lambda: TailCollector(spec.n, gammas), budget=budget, threads=threads)
    out = []
    for g, hits in zip(gammas, acc.hits):
        b = tail_bounds(spec.n, spec.m, g)
        out.append(TailReport(spec.n, spec.m, g, b.lower, b.upper, int(hits) / acc.members))
    return out


def char_sum_identity_holds(m: int, r: int) -> bool:
    s = geometric_char_sum(m, r)
    expected = CycInt.root(m, 0, m) if r % m == 0 else CycInt.zero(m)
    return cyc_is_zero(s - expected)
