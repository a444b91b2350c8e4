"""Evaluation of the incomplete sums over {-1, 1}^n.

For f in n variables the unnormalised sum is

    St(f) = sum over x in {-1,1}^n of (x_1 ... x_n) * w^f(x)

and S(f) = St(f) / 2^n.  St(f) is kept exactly as a CycInt whose j-th
coefficient is the signed count of points x with f(x) = j (mod m).

Point x is indexed by the bitmask y with bit i-1 set iff x_i = -1.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Protocol

import numba
import numpy as np

from .cyclotomic import CycInt, roots_of_unity
from .polynomial import FamilySpec, QuadPoly, iter_family_digits, n_pairs, pair_index

MAX_EVAL_N = 30
MAX_BATCH_N = 16
DEFAULT_BUDGET = 200_000_000


class BudgetError(RuntimeError):
    """A family is larger than the configured evaluation budget."""


def default_threads() -> int:
    return max(1, int(os.environ.get("QUADSUM_THREADS", "1")))


@dataclass(frozen=True)
class SumValue:
    unnormalized: CycInt
    n: int

    @property
    def norm(self) -> float:
        return abs(self.unnormalized) / 2.0**self.n

    @property
    def value(self) -> complex:
        """S(f) as a complex number."""
        return complex(self.unnormalized) / 2.0**self.n


def _guard(f: QuadPoly) -> None:
    if f.n > MAX_EVAL_N:
        raise ValueError(
            f"n={f.n} exceeds the exhaustive-evaluation guard ({MAX_EVAL_N}); "
            "use eval_gray on a smaller instance or sample polynomials instead"
        )


def eval_naive(f: QuadPoly) -> SumValue:
    """Direct evaluation of f at every point of the cube, block by block."""
    _guard(f)
    n, m = f.n, f.m
    counts = np.zeros(m, dtype=np.int64)
    total = 1 << n
    block = min(total, 1 << 18)
    shifts = np.arange(n, dtype=np.int64)
    for lo in range(0, total, block):
        y = np.arange(lo, min(lo + block, total), dtype=np.int64)
        x = 1 - 2 * ((y[:, None] >> shifts) & 1)
        vals = x @ np.array(f.b, dtype=np.int64)
        for (i, j), v in f.a.items():
            vals += v * x[:, i - 1] * x[:, j - 1]
        vals %= m
        odd = np.bitwise_count(y.astype(np.uint64)) & 1
        counts += np.bincount(vals[odd == 0], minlength=m)
        counts -= np.bincount(vals[odd == 1], minlength=m)
    return SumValue(CycInt.from_counts(counts.tolist()), n)


@numba.njit(cache=True)
def _gray_walk(A, b, m):
    n = b.shape[0]
    x = np.ones(n, dtype=np.int64)
    h = np.empty(n, dtype=np.int64)
    f = 0
    for i in range(n):
        s = b[i]
        for j in range(n):
            s += A[i, j]
        h[i] = s % m
        f += b[i]
        for j in range(i + 1, n):
            f += A[i, j]
    f %= m
    counts = np.zeros(m, dtype=np.int64)
    sign = 1
    counts[f] += 1
    for t in range(1, 1 << n):
        i = 0
        while not (t >> i) & 1:
            i += 1
        xi = x[i]
        f = (f - 2 * xi * h[i]) % m
        for j in range(n):
            a = A[j, i]
            if a != 0:
                h[j] = (h[j] - 2 * xi * a) % m
        x[i] = -xi
        sign = -sign
        counts[f] += sign
    return counts


def eval_gray(f: QuadPoly) -> SumValue:
    """Same sum as eval_naive, walking the cube in Gray-code order.

    Flipping x_i changes f by -2 x_i (sum_j a_ij x_j + b_i); the bracket is kept
    for every i and patched in O(n) per step.
    """
    _guard(f)
    counts = _gray_walk(f.matrix(), np.array(f.b, dtype=np.int64), f.m)
    return SumValue(CycInt.from_counts(counts.tolist()), f.n)


# ---------------------------------------------------------------------------
# batched evaluation of many polynomials with the same (n, m)


@lru_cache(maxsize=32)
def monomial_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(K x 2^n) values of the flat monomials at every point, and the parity row."""
    y = np.arange(1 << n, dtype=np.int64)
    x = 1 - 2 * ((y[:, None] >> np.arange(n)) & 1)
    rows = [x[:, i - 1] * x[:, j - 1] for i, j in pair_index(n)]
    rows += [x[:, i] for i in range(n)]
    mono = np.array(rows, dtype=np.int64).reshape(n_pairs(n) + n, 1 << n)
    parity = np.bitwise_count(y.astype(np.uint64)) & 1
    return mono, parity.astype(bool)


def batch_counts(n: int, m: int, digits: np.ndarray) -> np.ndarray:
    """Exact St(f) exponent vectors (N x m) for a block of flat digit rows."""
    if n > MAX_BATCH_N:
        raise ValueError(f"batched evaluation supports n <= {MAX_BATCH_N}")
    mono, odd = monomial_table(n)
    digits = np.asarray(digits, dtype=np.int64)
    out = np.empty((digits.shape[0], m), dtype=np.int64)
    step = max(1, (1 << 22) >> n)
    for lo in range(0, digits.shape[0], step):
        block = digits[lo:lo + step]
        vals = (block @ mono) % m
        rows = np.arange(block.shape[0], dtype=np.int64)[:, None] * m
        keys = vals + rows
        size = block.shape[0] * m
        pos = np.bincount(keys[:, ~odd].ravel(), minlength=size)
        neg = np.bincount(keys[:, odd].ravel(), minlength=size)
        out[lo:lo + step] = (pos - neg).reshape(block.shape[0], m)
    return out


def norms_from_counts(n: int, m: int, counts: np.ndarray) -> np.ndarray:
    """|S| for each row of exponent vectors (index order 0..m-1)."""
    return np.abs(counts @ roots_of_unity(m)) / 2.0**n


@dataclass
class FamilyBatch:
    """A block of family members with their exact sums.

    `weights` counts how many family members each row stands for (orbit sizes
    when evaluating symmetry representatives, else ones).
    """

    n: int
    m: int
    digits: np.ndarray
    counts: np.ndarray
    weights: np.ndarray | None = None
    norms: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.norms = norms_from_counts(self.n, self.m, self.counts)
        if self.weights is None:
            self.weights = np.ones(len(self.digits), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.digits)

    def poly(self, i: int) -> QuadPoly:
        return QuadPoly.from_digits(self.n, self.m, self.digits[i].tolist())

    def value(self, i: int) -> SumValue:
        return SumValue(CycInt.from_counts(self.counts[i].tolist()), self.n)


def make_batch(n: int, m: int, digits: np.ndarray, weights: np.ndarray | None = None) -> FamilyBatch:
    return FamilyBatch(n, m, digits, batch_counts(n, m, digits), weights)


class Collector(Protocol):
    """Reduction over family members.

    feed() may be called any number of times with disjoint batches, and merge()
    must be associative and commutative with exact state, so the sweep result
    does not depend on how the family is partitioned between workers.
    """

    def feed(self, batch: FamilyBatch) -> None: ...

    def merge(self, other: "Collector") -> None: ...


class MaxCollector:
    """Largest |S| seen and one member attaining it."""

    def __init__(self) -> None:
        self.max_norm = -1.0
        self.digits: tuple[int, ...] | None = None

    def feed(self, batch: FamilyBatch) -> None:
        if len(batch) == 0:
            return
        i = int(np.argmax(batch.norms))
        if batch.norms[i] > self.max_norm:
            self.max_norm = float(batch.norms[i])
            self.digits = tuple(batch.digits[i].tolist())

    def merge(self, other: MaxCollector) -> None:
        if other.max_norm > self.max_norm or (
            other.max_norm == self.max_norm and other.digits is not None
            and (self.digits is None or other.digits < self.digits)
        ):
            self.max_norm, self.digits = other.max_norm, other.digits


class CountCollector:
    """Number of members visited (weighted)."""

    def __init__(self) -> None:
        self.count = 0

    def feed(self, batch: FamilyBatch) -> None:
        self.count += int(batch.weights.sum())

    def merge(self, other: CountCollector) -> None:
        self.count += other.count


def check_budget(spec: FamilySpec, budget: int) -> None:
    if spec.kind in ("random", "explicit"):
        return
    if spec.size > budget:
        raise BudgetError(
            f"family {spec.kind} n={spec.n} m={spec.m} has {spec.size} members, "
            f"over the budget of {budget}; use a random-sample family instead"
        )


def sweep_family(spec: FamilySpec, collector: Callable[[], Collector], *,
                 budget: int = DEFAULT_BUDGET, threads: int | None = None,
                 chunk: int = 1 << 13) -> Collector:
    """Visit every family member once, feeding exact sums to a collector.

    Enumerated kinds are walked in odometer order; random-sample kinds draw
    `count` members from numpy's PCG64 seeded with spec.seed.  The index range
    is split into one contiguous slice per worker, each with a private
    collector; the partial collectors are merged at the end.
    """
    check_budget(spec, budget)
    threads = default_threads() if threads is None else max(1, threads)
    size = spec.size
    bounds = [size * k // threads for k in range(threads + 1)]

    def work(lo: int, hi: int) -> Collector:
        acc = collector()
        for digits in iter_family_digits(spec, chunk=chunk, start=lo, stop=hi):
            acc.feed(make_batch(spec.n, spec.m, digits))
        return acc

    if threads == 1:
        return work(0, size)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(work, bounds[:-1], bounds[1:]))
    head = parts[0]
    for part in parts[1:]:
        head.merge(part)
    return head

