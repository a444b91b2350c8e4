"""Fourier expansion of w^f over the cube {-1, 1}^n.

Coefficients are normalised, c_S = 2^-n sum_y w^f(y) prod_{i in S} y_i, so that
the coefficient of the full set is S(f) itself and sum_S |c_S|^2 = 1.
Subsets are bitmasks with variable i on bit i-1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numba
import numpy as np

from .cyclotomic import root_params, roots_of_unity
from .polynomial import QuadPoly, forest_distance, graph_of
from .sums import monomial_table

MAX_NAIVE_N = 16
MAX_FWHT_N = 26


def lam(m: int, a: int) -> complex:
    """Odd edge factor (w^a - w^-a) / 2."""
    t = 2 * math.pi * (a % m) / m
    return 1j * math.sin(t)


def mu(m: int, a: int) -> complex:
    """Even edge factor (w^a + w^-a) / 2."""
    return complex(math.cos(2 * math.pi * (a % m) / m), 0.0)


@dataclass(frozen=True)
class Spectrum:
    n: int
    m: int
    table: np.ndarray  # complex, indexed by subset bitmask

    def __getitem__(self, subset: int) -> complex:
        return complex(self.table[subset])

    @property
    def full(self) -> complex:
        return complex(self.table[-1])

    def max_abs(self) -> float:
        return float(np.abs(self.table).max())

    def parseval(self) -> float:
        return float(np.sum(np.abs(self.table) ** 2))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bitmask", "re", "im", "abs"])
        for s, c in enumerate(self.table):
            w.writerow([s, repr(float(c.real)), repr(float(c.imag)), repr(float(abs(c)))])
        return buf.getvalue()


def cube_values(f: QuadPoly) -> np.ndarray:
    """w^f(y) for every point y of the cube."""
    mono, _ = monomial_table(f.n)
    vals = (np.array(f.digits(), dtype=np.int64) @ mono) % f.m
    return roots_of_unity(f.m)[vals]


@numba.njit(cache=True)
def _character_sums(re, im, parity):
    size = re.shape[0]
    out_re = np.empty(size)
    out_im = np.empty(size)
    for s in range(size):
        acc_re = 0.0
        acc_im = 0.0
        for y in range(size):
            if parity[s & y]:
                acc_re -= re[y]
                acc_im -= im[y]
            else:
                acc_re += re[y]
                acc_im += im[y]
        out_re[s] = acc_re
        out_im[s] = acc_im
    return out_re, out_im


def spectrum_naive(f: QuadPoly) -> Spectrum:
    """Each coefficient straight from its defining sum, O(4^n)."""
    if f.n > MAX_NAIVE_N:
        raise ValueError(f"spectrum_naive is O(4^n); n={f.n} exceeds {MAX_NAIVE_N}")
    n = f.n
    g = cube_values(f)
    parity = (np.bitwise_count(np.arange(1 << n, dtype=np.uint64)) & 1).astype(np.uint8)
    re, im = _character_sums(np.ascontiguousarray(g.real), np.ascontiguousarray(g.imag), parity)
    return Spectrum(n, f.m, (re + 1j * im) / (1 << n))


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform of a length-2^n vector (butterflies)."""
    a = np.array(values, dtype=complex, copy=True)
    size = a.shape[0]
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        lo = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = lo - v[:, 1, :]
        h *= 2
    return a


def spectrum_fwht(f: QuadPoly) -> Spectrum:
    if f.n > MAX_FWHT_N:
        raise ValueError(f"spectrum_fwht needs 2^n memory; n={f.n} exceeds {MAX_FWHT_N}")
    return Spectrum(f.n, f.m, fwht(cube_values(f)) / (1 << f.n))


# ---------------------------------------------------------------------------
# trees and forests


def _strip_order(n: int, adj: list[set[int]], comp: list[int]) -> tuple[list[tuple[int, int]], int]:
    """Leaf-removal order (leaf, neighbour) for one tree component; returns it and the last vertex."""
    deg = {v: len(adj[v]) for v in comp}
    alive = set(comp)
    nbrs = {v: set(adj[v]) for v in comp}
    leaves = sorted(v for v in comp if deg[v] == 1)
    order = []
    while len(alive) > 1:
        j = leaves.pop()
        (i,) = nbrs[j]
        order.append((j, i))
        alive.discard(j)
        nbrs[i].discard(j)
        if len(nbrs[i]) == 1:
            leaves.append(i)
    return order, next(iter(alive))


def coeff_tree(f: QuadPoly, subset: int) -> complex:
    """c_S for f whose graph is a forest, by stripping leaves.

    Each vertex v carries a local factor alpha_v + beta_v x_v, starting from
    mu(b_v) + lam(b_v) x_v.  Removing a leaf j hanging off i via edge weight e
    sums x_j out of (alpha_j + beta_j x_j)(mu(e) + lam(e) x_i x_j), keeping the
    x_j^1 part when j is in S and the x_j^0 part otherwise, and multiplies the
    result into i's factor.  A component's last vertex contributes alpha or beta;
    components multiply.
    """
    g = graph_of(f)
    if forest_distance(g) != 0:
        raise ValueError("coeff_tree needs a forest; use spectrum_fwht for general graphs")
    m = f.m
    alpha = {v: mu(m, f.b[v - 1]) for v in range(1, f.n + 1)}
    beta = {v: lam(m, f.b[v - 1]) for v in range(1, f.n + 1)}
    adj = [set() for _ in range(f.n + 1)]
    for i, j in g.edges:
        adj[i].add(j)
        adj[j].add(i)
    result = 1.0 + 0j
    for comp in g.components():
        order, root = _strip_order(f.n, adj, comp)
        for j, i in order:
            e = f.a[(min(i, j), max(i, j))]
            le, me = lam(m, e), mu(m, e)
            if subset >> (j - 1) & 1:
                c0, c1 = beta[j] * me, alpha[j] * le
            else:
                c0, c1 = alpha[j] * me, beta[j] * le
            a0, a1 = alpha[i], beta[i]
            alpha[i] = a0 * c0 + a1 * c1
            beta[i] = a0 * c1 + a1 * c0
        result *= beta[root] if subset >> (root - 1) & 1 else alpha[root]
    return result


def spectrum_tree(f: QuadPoly) -> Spectrum:
    """Every c_S by the leaf-stripping recursion, vectorised over subsets."""
    g = graph_of(f)
    if forest_distance(g) != 0:
        raise ValueError("spectrum_tree needs a forest; use spectrum_fwht for general graphs")
    n, m = f.n, f.m
    subsets = np.arange(1 << n, dtype=np.int64)
    inside = [None] + [(subsets >> (v - 1) & 1).astype(bool) for v in range(1, n + 1)]
    alpha = {v: np.full(1 << n, mu(m, f.b[v - 1])) for v in range(1, n + 1)}
    beta = {v: np.full(1 << n, lam(m, f.b[v - 1])) for v in range(1, n + 1)}
    adj = [set() for _ in range(n + 1)]
    for i, j in g.edges:
        adj[i].add(j)
        adj[j].add(i)
    table = np.ones(1 << n, dtype=complex)
    for comp in g.components():
        order, root = _strip_order(n, adj, comp)
        for j, i in order:
            e = f.a[(min(i, j), max(i, j))]
            le, me = lam(m, e), mu(m, e)
            c0 = np.where(inside[j], beta[j] * me, alpha[j] * me)
            c1 = np.where(inside[j], alpha[j] * le, beta[j] * le)
            a0, a1 = alpha[i], beta[i]
            alpha[i] = a0 * c0 + a1 * c1
            beta[i] = a0 * c1 + a1 * c0
        table *= np.where(inside[root], beta[root], alpha[root])
    return Spectrum(n, m, table)


@dataclass(frozen=True)
class ForestCertificate:
    k: int
    threshold: float
    applicable: bool
    bound: float
    conjectured: float

    @property
    def certified(self) -> float:
        """The value |S(f)| is asserted not to exceed when applicable."""
        return max(self.bound, self.conjectured)


def forest_bound_certificate(f: QuadPoly) -> ForestCertificate:
    """Edge-deletion certificate: k = circuit rank of G(f).

    Applicable when k <= (n-2) log2(2/q); the bound is then 2^(k/2) (q/2)^(n-1),
    which reduces to (q/2)^(n-1) when G(f) is a forest.
    """
    rp = root_params(f.m)
    n = f.n
    k = forest_distance(graph_of(f))
    threshold = (n - 2) * math.log2(2.0 / rp.q)
    applicable = k == 0 or k <= threshold
    bound = 2.0 ** (k / 2) * rp.half_q ** (n - 1) if applicable else math.inf
    return ForestCertificate(k, threshold, applicable, bound, rp.conjectured_bound(n))
