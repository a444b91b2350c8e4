"""Quadratic polynomials over Z_m with no diagonal or constant terms.

A polynomial in n variables is stored as its off-diagonal coefficients a[i, j]
(1-based, i < j, zero entries omitted) and linear coefficients b[1..n].  The
flat coefficient layout used for enumeration and for the lexicographic order is
a in row-major order (12, 13, ..., 1n, 23, ...) followed by b.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .cyclotomic import _check_modulus

KINDS = ("all", "homogeneous", "linear", "explicit", "random")


class PolyError(ValueError):
    """Malformed or out-of-range polynomial input."""


@lru_cache(maxsize=None)
def pair_index(n: int) -> tuple[tuple[int, int], ...]:
    """The (i, j) pairs, 1-based with i < j, in row-major order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class QuadPoly:
    n: int
    m: int
    a: Mapping[tuple[int, int], int] = field(default_factory=dict)
    b: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise PolyError(f"n must be a positive integer, got {self.n!r}")
        try:
            _check_modulus(self.m)
        except ValueError as exc:
            raise PolyError(str(exc)) from None
        n, m = int(self.n), int(self.m)
        b = tuple(int(v) % m for v in self.b) if self.b else (0,) * n
        if len(b) != n:
            raise PolyError(f"expected {n} linear coefficients, got {len(b)}")
        a: dict[tuple[int, int], int] = {}
        for key, val in dict(self.a).items():
            i, j = (int(key[0]), int(key[1]))
            if i == j:
                raise PolyError(f"diagonal term x{i}^2 is not allowed")
            if i > j:
                raise PolyError(f"quadratic term key ({i},{j}) must have i < j")
            if not (1 <= i and j <= n):
                raise PolyError(f"index ({i},{j}) out of range for n={n}")
            v = int(val) % m
            if v:
                a[(i, j)] = v
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "a", dict(sorted(a.items())))
        object.__setattr__(self, "b", b)

    # -- identity -------------------------------------------------------

    def digits(self) -> tuple[int, ...]:
        """Flat coefficient sequence: a row-major, then b."""
        return tuple(self.a.get(p, 0) for p in pair_index(self.n)) + self.b

    @classmethod
    def from_digits(cls, n: int, m: int, digits: Sequence[int]) -> QuadPoly:
        k = n_pairs(n)
        if len(digits) != k + n:
            raise PolyError(f"expected {k + n} digits for n={n}, got {len(digits)}")
        a = {p: int(d) for p, d in zip(pair_index(n), digits[:k]) if int(d) % m}
        return cls(n, m, a, tuple(int(d) for d in digits[k:]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadPoly):
            return NotImplemented
        return (self.n, self.m, self.digits()) == (other.n, other.m, other.digits())

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.digits()))

    def __repr__(self) -> str:
        return f"QuadPoly({self.pretty()!r}, m={self.m})"

    def pretty(self) -> str:
        terms = [f"{v}*x{i}*x{j}" for (i, j), v in self.a.items()]
        terms += [f"{v}*x{i + 1}" for i, v in enumerate(self.b) if v]
        return " + ".join(terms) if terms else "0"

    # -- structure ------------------------------------------------------

    @property
    def is_homogeneous(self) -> bool:
        return not any(self.b)

    def homogeneous_part(self) -> QuadPoly:
        return QuadPoly(self.n, self.m, self.a, (0,) * self.n)

    def matrix(self) -> np.ndarray:
        """Symmetric n x n integer matrix with A[i,j] = A[j,i] = a_ij (0-based)."""
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), v in self.a.items():
            A[i - 1, j - 1] = A[j - 1, i - 1] = v
        return A

    def __call__(self, x: Sequence[int]) -> int:
        """f(x) mod m for x in {-1, 1}^n (any integers work)."""
        val = sum(v * x[i - 1] * x[j - 1] for (i, j), v in self.a.items())
        val += sum(bk * xk for bk, xk in zip(self.b, x))
        return val % self.m

    def __add__(self, other: QuadPoly) -> QuadPoly:
        if (self.n, self.m) != (other.n, other.m):
            raise PolyError("cannot add polynomials with different n or m")
        a = dict(self.a)
        for p, v in other.a.items():
            a[p] = a.get(p, 0) + v
        return QuadPoly(self.n, self.m, a, tuple(x + y for x, y in zip(self.b, other.b)))

    def scaled(self, k: int) -> QuadPoly:
        return QuadPoly(self.n, self.m, {p: v * k for p, v in self.a.items()}, tuple(v * k for v in self.b))

    def with_edge(self, i: int, j: int, value: int) -> QuadPoly:
        """Copy with a_ij replaced (not added to)."""
        if i > j:
            i, j = j, i
        a = dict(self.a)
        a[(i, j)] = value
        return QuadPoly(self.n, self.m, a, self.b)

    # -- serialisation --------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "a": {f"{i},{j}": v for (i, j), v in self.a.items()},
            "b": list(self.b),
        }

    def to_json(self) -> str:
        """Canonical text: keys sorted, no whitespace."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def poly_from_dict(obj: Mapping) -> QuadPoly:
    if not isinstance(obj, Mapping):
        raise PolyError("polynomial JSON must be an object")
    missing = {"n", "m", "b"} - set(obj)
    if missing:
        raise PolyError(f"polynomial JSON is missing keys: {sorted(missing)}")
    n, m = obj["n"], obj["m"]
    if not isinstance(n, int) or not isinstance(m, int) or isinstance(n, bool) or isinstance(m, bool):
        raise PolyError("n and m must be integers")
    if m < 3 or m % 2 == 0:
        raise PolyError(f"modulus must be odd and >= 3, got m={m}")
    b = obj["b"]
    if not isinstance(b, list) or not all(isinstance(v, int) for v in b):
        raise PolyError("b must be a list of integers")
    if len(b) != n:
        raise PolyError(f"b must have length n={n}, got {len(b)}")
    raw_a = obj.get("a", {})
    if not isinstance(raw_a, Mapping):
        raise PolyError('a must be an object mapping "i,j" to integers')
    a = {}
    for key, val in raw_a.items():
        try:
            i, j = (int(t) for t in str(key).split(","))
        except ValueError:
            raise PolyError(f'bad quadratic key {key!r}; expected "i,j"') from None
        if not isinstance(val, int):
            raise PolyError(f"coefficient for {key!r} must be an integer")
        if i >= j:
            raise PolyError(f"quadratic key {key!r} must satisfy i < j (no diagonal terms)")
        if i < 1 or j > n:
            raise PolyError(f"quadratic key {key!r} out of range for n={n}")
        a[(i, j)] = val
    return QuadPoly(n, m, a, tuple(b))


def parse_poly(text: str) -> QuadPoly:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolyError(f"malformed polynomial JSON: {exc}") from None
    return poly_from_dict(obj)


# ---------------------------------------------------------------------------
# the graph G(f)


@dataclass(frozen=True)
class PolyGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists (1-based)."""
        adj = self.adjacency()
        seen = [False] * (self.n + 1)
        comps = []
        for s in range(1, self.n + 1):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_forest(self) -> bool:
        return forest_distance(self) == 0


def graph_of(f: QuadPoly) -> PolyGraph:
    return PolyGraph(f.n, tuple(sorted(f.a)))


def forest_distance(g: PolyGraph) -> int:
    """Minimum number of edges to delete to leave a forest: |E| - |V| + #components."""
    parent = list(range(g.n + 1))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    comps = g.n
    for i, j in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            comps -= 1
    return len(g.edges) - g.n + comps


# ---------------------------------------------------------------------------
# symmetry: variable permutations x sign flips x global negation


def _target_layout(n: int, perm: Sequence[int]) -> tuple[list[int], list[int]]:
    """For a 0-based permutation, the source flat position of each target position
    and the sign form (bitmask over s_0..s_{n-1}, bit n = global negation)."""
    k = n_pairs(n)
    pos = {p: t for t, p in enumerate(pair_index(n))}
    src = [0] * (k + n)
    form = [0] * (k + n)
    for s, (i, j) in enumerate(pair_index(n)):
        pi, pj = sorted((perm[i - 1] + 1, perm[j - 1] + 1))
        t = pos[(pi, pj)]
        src[t] = s
        form[t] = (1 << (i - 1)) ^ (1 << (j - 1)) ^ (1 << n)
    for i in range(n):
        t = k + perm[i]
        src[t] = k + i
        form[t] = (1 << i) ^ (1 << n)
    return src, form


def _min_over_signs(m: int, values: Sequence[int], forms: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest sign assignment, chosen greedily over GF(2)."""
    basis: dict[int, tuple[int, int]] = {}  # pivot bit -> (vector, parity)
    out = []
    for v, fm in zip(values, forms):
        if v == 0:
            out.append(0)
            continue
        vec, par = fm, 0
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                break
            bv, bp = basis[top]
            vec ^= bv
            par ^= bp
        if vec == 0:
            out.append(v if par == 0 else m - v)
            continue
        want = 0 if v < m - v else 1
        basis[vec.bit_length() - 1] = (vec, par ^ want)
        out.append(min(v, m - v))
    return tuple(out)


CANONICAL_MAX_N = 9


def canonical_form(f: QuadPoly) -> QuadPoly:
    """Lexicographically smallest representative of f's symmetry orbit.

    The group is generated by permutations of the variables, sign flips
    x_i -> -x_i and the global negation f -> -f; |S(f)| is constant on orbits.
    """
    n, m = f.n, f.m
    if n > CANONICAL_MAX_N:
        raise PolyError(f"canonical_form enumerates n! permutations; n={n} exceeds {CANONICAL_MAX_N}")
    digits = f.digits()
    best: tuple[int, ...] | None = None
    for perm in itertools.permutations(range(n)):
        src, form = _target_layout(n, perm)
        cand = _min_over_signs(m, [digits[s] for s in src], form)
        if best is None or cand < best:
            best = cand
    return QuadPoly.from_digits(n, m, best)


@lru_cache(maxsize=16)
def group_action_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All group elements as (src, sign) arrays of shape (|G|, K), K = n(n+1)/2.

    Element acts on a flat digit vector d by d'[t] = sign[t] * d[src[t]] (mod m).
    """
    srcs, signs = [], []
    for perm in itertools.permutations(range(n)):
        src, form = _target_layout(n, perm)
        src_arr = np.array(src, dtype=np.int64)
        form_arr = np.array(form, dtype=np.int64)
        for flips in range(1 << (n + 1)):
            par = np.array([bin(fm & flips).count("1") & 1 for fm in form], dtype=np.int64)
            srcs.append(src_arr)
            signs.append(1 - 2 * par)
    return np.array(srcs), np.array(signs)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    n: int
    m: int
    count: int | None = None
    seed: int | None = None
    polys: tuple[QuadPoly, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        _check_modulus(self.m)
        if self.kind == "random" and (self.count is None or self.count < 1):
            raise ValueError("random-sample families need a positive count")
        if self.kind == "explicit":
            for p in self.polys:
                if (p.n, p.m) != (self.n, self.m):
                    raise ValueError("explicit family members must share n and m")

    @property
    def exhaustive(self) -> bool:
        return self.kind in ("all", "homogeneous", "linear")

    @property
    def free_positions(self) -> np.ndarray:
        """Flat positions that vary over the family (for enumerated kinds)."""
        k = n_pairs(self.n)
        if self.kind == "homogeneous":
            return np.arange(k)
        if self.kind == "linear":
            return np.arange(k, k + self.n)
        return np.arange(k + self.n)

    @property
    def size(self) -> int:
        if self.kind == "explicit":
            return len(self.polys)
        if self.kind == "random":
            return int(self.count)
        return self.m ** len(self.free_positions)

    def describe(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "m": self.m, "size": self.size}
        if self.kind == "random":
            out.update(count=self.count, seed=self.seed)
        return out


def index_to_digits(spec: FamilySpec, idx: np.ndarray) -> np.ndarray:
    """Odometer decoding (little-endian over the free positions) to full flat digits."""
    idx = np.asarray(idx, dtype=np.int64)
    free = spec.free_positions
    out = np.zeros((idx.size, n_pairs(spec.n) + spec.n), dtype=np.int64)
    rest = idx.copy()
    for pos in free:
        out[:, pos] = rest % spec.m
        rest //= spec.m
    return out


def digits_to_index(spec: FamilySpec, digits: np.ndarray) -> np.ndarray:
    free = spec.free_positions
    weights = spec.m ** np.arange(len(free), dtype=np.int64)
    return np.asarray(digits)[..., free] @ weights


def lex_keys(m: int, digits: np.ndarray) -> np.ndarray:
    """Big-endian base-m integer of each digit row; orders rows lexicographically."""
    k = digits.shape[-1]
    weights = m ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return digits @ weights


def iter_family_digits(spec: FamilySpec, chunk: int = 1 << 14, start: int = 0,
                       stop: int | None = None) -> Iterator[np.ndarray]:
    """Digit matrices for family members [start, stop) in chunks."""
    stop = spec.size if stop is None else stop
    if spec.kind == "explicit":
        rows = [p.digits() for p in spec.polys[start:stop]]
        for lo in range(0, len(rows), chunk):
            yield np.array(rows[lo:lo + chunk], dtype=np.int64).reshape(-1, n_pairs(spec.n) + spec.n)
        return
    if spec.kind == "random":
        full = random_digits(spec)
        for lo in range(start, stop, chunk):
            yield full[lo:min(lo + chunk, stop)]
        return
    for lo in range(start, stop, chunk):
        yield index_to_digits(spec, np.arange(lo, min(lo + chunk, stop), dtype=np.int64))


def random_digits(spec: FamilySpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    return rng.integers(0, spec.m, size=(spec.count, n_pairs(spec.n) + spec.n), dtype=np.int64)


def iter_family(spec: FamilySpec) -> Iterator[QuadPoly]:
    for block in iter_family_digits(spec):
        for row in block.tolist():
            yield QuadPoly.from_digits(spec.n, spec.m, row)


def orbit_representatives(spec: FamilySpec) -> tuple[np.ndarray, np.ndarray]:
    """Canonical representatives of the symmetry orbits covering an enumerated family.

    Returns (digits of each canonical form, orbit size).  The orbit sizes sum to
    spec.size.
    """
    if not spec.exhaustive:
        raise ValueError("orbit enumeration needs an enumerated family kind")
    srcs, signs = group_action_arrays(spec.n)
    m = spec.m
    visited = np.zeros(spec.size, dtype=bool)
    reps, sizes = [], []
    ptr = 0
    block = 1 << 16
    while ptr < spec.size:
        free = np.flatnonzero(~visited[ptr:ptr + block])
        if free.size == 0:
            ptr += block
            continue
        i = ptr + int(free[0])
        d = index_to_digits(spec, np.array([i]))[0]
        images = (d[srcs] * signs) % m
        idx = np.unique(digits_to_index(spec, images))
        visited[idx] = True
        best = images[int(np.argmin(lex_keys(m, images)))]
        reps.append(best)
        sizes.append(idx.size)
    return np.array(reps, dtype=np.int64), np.array(sizes, dtype=np.int64)


def sign_variants(f: QuadPoly) -> Iterable[QuadPoly]:
    """Every polynomial obtained by independently negating each term of f."""
    terms = [("a", p, v) for p, v in f.a.items()] + [("b", i, v) for i, v in enumerate(f.b) if v]
    for signs in itertools.product((1, -1), repeat=len(terms)):
        a, b = {}, list(f.b)
        for s, (kind, key, v) in zip(signs, terms):
            if kind == "a":
                a[key] = s * v
            else:
                b[key] = s * v
        yield QuadPoly(f.n, f.m, a, tuple(b))


def family_size_all(n: int, m: int) -> int:
    return m ** (n * (n + 1) // 2)


def log_family_size(n: int, m: int) -> float:
    return n * (n + 1) / 2 * math.log10(m)
