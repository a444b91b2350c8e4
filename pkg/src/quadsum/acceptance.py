"""The acceptance checks, one function per criterion.

Each returns a CheckResult whose `detail` is JSON-ready and free of timings,
so repeated runs with the same seed serialise identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cyclotomic import brute_force_extremes, chebyshev_q, root_params
from .extremal import (
    one_variable_submax,
    search,
    two_variable_summary,
    verify_gap,
    verify_sharpness,
)
from .fourier import (
    forest_bound_certificate,
    spectrum_fwht,
    spectrum_naive,
    spectrum_tree,
)
from .legendre3 import decompose_m3, legendre_identity_check, verify_nonsingular_bound
from .moments import empirical_tail, m2_all, m2_homogeneous, moment_exact
from .polynomial import FamilySpec, QuadPoly, iter_family, pair_index
from .sums import eval_gray, eval_naive

DEFAULT_SEED = 20240601

M2_GRID = ((1, 3), (1, 5), (1, 7), (2, 3), (2, 5), (2, 7), (3, 3), (3, 5), (3, 7), (4, 3))
M6_GRID = ((2, 5), (2, 7), (3, 5))
SEARCH_GRID = ((2, 3), (2, 5), (2, 7), (3, 3), (3, 5), (4, 3))
TAIL_GAMMAS = tuple(round(0.75 + 0.05 * k, 2) for k in range(6))


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.title}"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "failed": not self.passed,
            "detail": self.detail,
            "counterexamples": self.counterexamples[:20],
        }


# ---------------------------------------------------------------------------
# random generators


def random_poly(rng: np.random.Generator, n: int, m: int) -> QuadPoly:
    a = {p: int(v) for p, v in zip(pair_index(n), rng.integers(0, m, len(pair_index(n))))}
    return QuadPoly(n, m, a, tuple(int(v) for v in rng.integers(0, m, n)))


def random_tree_edges(rng: np.random.Generator, n: int) -> list[tuple[int, int]]:
    order = rng.permutation(n) + 1
    return [tuple(sorted((int(order[k]), int(order[rng.integers(0, k)])))) for k in range(1, n)]


def random_forest(rng: np.random.Generator, n: int, m: int, keep: float = 1.0) -> QuadPoly:
    """Random spanning tree with nonzero edge weights; each edge survives with prob keep."""
    a = {e: int(rng.integers(1, m)) for e in random_tree_edges(rng, n) if rng.random() < keep}
    return QuadPoly(n, m, a, tuple(int(v) for v in rng.integers(0, m, n)))


def add_random_edges(rng: np.random.Generator, f: QuadPoly, k: int) -> QuadPoly:
    missing = [p for p in pair_index(f.n) if p not in f.a]
    picks = rng.choice(len(missing), size=min(k, len(missing)), replace=False)
    a = dict(f.a)
    for i in picks:
        a[missing[int(i)]] = int(rng.integers(1, f.m))
    return QuadPoly(f.n, f.m, a, f.b)


# ---------------------------------------------------------------------------


def criterion_1(seed: int = DEFAULT_SEED) -> CheckResult:
    rows, bad = [], []
    for n, m in M2_GRID:
        rep = moment_exact(FamilySpec("all", n, m), 2)
        ok = rep.exact == m2_all(n)
        rows.append({"n": n, "m": m, "moment": str(rep.exact), "ok": ok})
        if not ok:
            bad.append(rep.to_dict())
    return CheckResult(1, "exact second moment over all quadratics is 2^-n", not bad,
                       {"grid": rows}, bad)


def criterion_2(seed: int = DEFAULT_SEED) -> CheckResult:
    rows, bad = [], []
    for n, m in M2_GRID:
        rep = moment_exact(FamilySpec("homogeneous", n, m), 2)
        size = FamilySpec("homogeneous", n, m).size
        ok = rep.exact == m2_homogeneous(n) and (n % 2 == 0 or rep.zero_count == size)
        rows.append({"n": n, "m": m, "moment": str(rep.exact), "zero_sums": rep.zero_count,
                     "size": size, "ok": ok})
        if not ok:
            bad.append(rep.to_dict())
    return CheckResult(2, "exact homogeneous second moment, odd n sums vanish", not bad,
                       {"grid": rows}, bad)


def criterion_3(seed: int = DEFAULT_SEED) -> CheckResult:
    rows, bad = [], []
    for n, m in M6_GRID:
        rep = moment_exact(FamilySpec("all", n, m), 6)
        ok = bool(rep.within_bound)
        rows.append({"n": n, "m": m, "moment": str(rep.exact), "bound": str(rep.bound), "ok": ok})
        if not ok:
            bad.append(rep.to_dict())
    return CheckResult(3, "sixth moment below its bound", not bad, {"grid": rows}, bad)


def criterion_4(seed: int = DEFAULT_SEED) -> CheckResult:
    bad = [{"n": n, "m": m} for m in range(3, 16, 2) for n in range(1, 25)
           if not verify_sharpness(n, m)]
    return CheckResult(4, "extremal polynomial attains (q/2)^floor((n+1)/2), n <= 24, m <= 15",
                       not bad, {"cases": 24 * 7}, bad)


_search_cache: dict = {}


def _search_grid():
    if not _search_cache:
        for n, m in SEARCH_GRID:
            _search_cache[(n, m)] = search(FamilySpec("all", n, m), use_symmetry=True)
    return _search_cache


def criterion_5(seed: int = DEFAULT_SEED) -> CheckResult:
    rows, bad = [], []
    for (n, m), rep in _search_grid().items():
        ok = rep.attains_conjecture and rep.witnesses_match
        rows.append({"n": n, "m": m, "max": rep.max_norm, "conjectured": rep.conjectured,
                     "witnesses": len(rep.max_witnesses),
                     "extra": [w.to_dict() for w in rep.extra_witnesses], "ok": ok})
        if not ok:
            bad.append(rep.to_dict())
    return CheckResult(5, "exhaustive maximum and witness orbits", not bad, {"grid": rows}, bad)


def criterion_6(seed: int = DEFAULT_SEED) -> CheckResult:
    rows, bad = [], []
    for (n, m), rep in _search_grid().items():
        ok = verify_gap(rep)
        rows.append({"n": n, "m": m, "second": rep.second_norm, "gap_bound": rep.gap_bound,
                     "ok": ok})
        if not ok:
            bad.append({"n": n, "m": m, "second_witnesses":
                        [w.to_dict() for w in rep.second_witnesses]})
    return CheckResult(6, "second largest value below (q/2)^(floor((n+1)/2)+1)", not bad,
                       {"grid": rows}, bad)


def criterion_7(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 7)
    worst_ratio, worst_err, bad = 0.0, 0.0, []
    for _ in range(200):
        n = int(rng.integers(2, 15))
        m = int(rng.choice([3, 5, 7, 9]))
        f = random_forest(rng, n, m)
        ref = spectrum_naive(f).table
        tree = spectrum_tree(f).table
        bound = root_params(m).half_q ** (n - 1)
        err = float(np.abs(tree - ref).max())
        top = float(np.abs(tree).max())
        worst_err = max(worst_err, err)
        worst_ratio = max(worst_ratio, top / bound)
        if err > 1e-9 or top > bound + 1e-9:
            bad.append({"poly": f.to_dict(), "max_coeff": top, "bound": bound, "error": err})
    return CheckResult(7, "tree coefficients below (q/2)^(n-1), recursion matches brute force",
                       not bad, {"trees": 200, "seed": seed + 7, "worst_error": worst_err,
                                 "worst_ratio": worst_ratio}, bad)


def criterion_8(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 8)
    bad, by_k = [], {}
    checked = 0
    while checked < 500:
        if checked % 2 == 0:
            n = int(rng.integers(2, 17))
            m = int(rng.choice(range(3, 16, 2)))
            f = random_forest(rng, n, m, keep=float(rng.uniform(0.5, 1.0)))
        else:
            n = int(rng.integers(7, 21))
            thr = (n - 2) * math.log2(2.0 / root_params(3).q)
            f = add_random_edges(rng, random_forest(rng, n, 3), int(rng.integers(1, int(thr) + 1)))
        cert = forest_bound_certificate(f)
        if not cert.applicable:
            continue
        checked += 1
        by_k[cert.k] = by_k.get(cert.k, 0) + 1
        norm = eval_gray(f).norm
        if norm > cert.certified + 1e-9:
            bad.append({"poly": f.to_dict(), "norm": norm, "certified": cert.certified, "k": cert.k})
    worst_growth = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 13))
        m = int(rng.choice(range(3, 16, 2)))
        f = random_forest(rng, n, m, keep=float(rng.uniform(0.5, 1.0)))
        g = add_random_edges(rng, f, 1)
        before = spectrum_fwht(f).max_abs()
        after = spectrum_fwht(g).max_abs()
        worst_growth = max(worst_growth, after / before)
        if after > math.sqrt(2) * before + 1e-9:
            bad.append({"forest": f.to_dict(), "with_edge": g.to_dict(),
                        "before": before, "after": after})
    return CheckResult(8, "forest-distance certificate and sqrt(2) edge growth", not bad,
                       {"certificates": checked, "by_k": {str(k): v for k, v in sorted(by_k.items())},
                        "edge_pairs": 200, "worst_growth": worst_growth, "seed": seed + 8}, bad)


def criterion_9(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 9)
    bad = []
    worst_fwht, worst_parseval = 0.0, 0.0
    for _ in range(100):
        n = int(rng.integers(1, 13))
        m = int(rng.choice(range(3, 16, 2)))
        f = random_poly(rng, n, m)
        fast, ref = spectrum_fwht(f), spectrum_naive(f)
        err = float(np.abs(fast.table - ref.table).max())
        par = abs(fast.parseval() - 1.0)
        worst_fwht, worst_parseval = max(worst_fwht, err), max(worst_parseval, par)
        if err > 1e-9 or par > 1e-9:
            bad.append({"poly": f.to_dict(), "fwht_error": err, "parseval_error": par})
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        m = int(rng.choice(range(3, 16, 2)))
        f = random_poly(rng, n, m)
        if eval_gray(f).unnormalized != eval_naive(f).unnormalized:
            bad.append({"poly": f.to_dict(), "gray_vs_naive": "mismatch"})
    return CheckResult(9, "Walsh-Hadamard, Gray-code and Parseval agree with brute force",
                       not bad, {"worst_fwht_error": worst_fwht, "worst_parseval_error": worst_parseval,
                                 "seed": seed + 9}, bad)


def criterion_10(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 10)
    bad = []
    worst = 0.0
    for t in rng.uniform(0, 2 * math.pi, 1000):
        for k in range(33):
            err = abs(chebyshev_q(k, 2 * math.cos(t)) - 2 * math.cos(k * t))
            worst = max(worst, err)
            if err > 1e-12:
                bad.append({"k": k, "theta": float(t), "error": err})
    for m in range(3, 100, 2):
        rp, bf = root_params(m), brute_force_extremes(m)
        if (abs(chebyshev_q(3, rp.q) - bf["r"]) > 1e-12 or abs(chebyshev_q(2, rp.q) - bf["s"]) > 1e-12
                or abs(rp.q - bf["q"]) > 1e-12):
            bad.append({"m": m, "q": rp.q, "brute": bf})
    return CheckResult(10, "Chebyshev identity and r = Q3(q), s = Q2(q)", not bad,
                       {"worst_error": worst, "seed": seed + 10}, bad)


def criterion_11(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 11)
    bad = []
    if not legendre_identity_check():
        bad.append({"legendre_identity": False})
    worst = 0.0
    applicable = held = 0
    for n in (2, 3, 4, 5, 6):
        for _ in range(100):
            f = random_poly(rng, n, 3)
            sigma = [int(v) + 1 for v in rng.permutation(n)]
            err = abs(decompose_m3(f, sigma).recombine() - eval_naive(f).value)
            worst = max(worst, err)
            if err > 1e-9:
                bad.append({"poly": f.to_dict(), "sigma": sigma, "error": err})
            check = verify_nonsingular_bound(n, f, sigma, odd_variant=bool(n % 2))
            if check.applicable:
                applicable += 1
                held += bool(check.holds)
                if not check.holds:
                    bad.append({"poly": f.to_dict(), **check.to_dict()})
    for f in iter_family(FamilySpec("all", 2, 3)):
        check = verify_nonsingular_bound(2, f)
        if check.applicable:
            applicable += 1
            held += bool(check.holds)
            if not check.holds:
                bad.append({"poly": f.to_dict(), **check.to_dict()})
    return CheckResult(11, "modulus-3 pairing decomposition and nonsingular bound", not bad,
                       {"worst_error": worst, "applicable": applicable, "held": held,
                        "seed": seed + 11}, bad)


def criterion_12(seed: int = DEFAULT_SEED) -> CheckResult:
    rows, bad = [], []
    for n, m in SEARCH_GRID:
        for rep in empirical_tail(FamilySpec("all", n, m), TAIL_GAMMAS):
            rows.append(rep.to_dict())
            if not rep.sandwiched:
                bad.append(rep.to_dict())
    return CheckResult(12, "empirical tails lie between the moment bounds", not bad,
                       {"rows": rows}, bad)


def criterion_13(seed: int = DEFAULT_SEED) -> CheckResult:
    bad = []
    one = [one_variable_submax(m) for m in range(3, 100, 2)]
    bad += [r for r in one if not r["ok"]]
    two = [two_variable_summary(m) for m in range(3, 16, 2)]
    bad += [r for r in two if not r["ok"]]
    return CheckResult(13, "one- and two-variable value spectra", not bad,
                       {"one_variable_worst": max(r["worst"] / r["bound"] for r in one),
                        "two_variable": [{k: r[k] for k in ("m", "max", "second", "third", "ok")}
                                         for r in two]}, bad)


CRITERIA: dict[int, Callable[..., CheckResult]] = {
    k: globals()[f"criterion_{k}"] for k in range(1, 14)
}


def run_all(seed: int = DEFAULT_SEED, only: list[int] | None = None) -> list[CheckResult]:
    return [CRITERIA[k](seed) for k in (only or sorted(CRITERIA))]
