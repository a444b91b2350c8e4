import cmath
import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quadsum.polynomial import QuadPoly, pair_index

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

odd_moduli = st.sampled_from([3, 5, 7, 9, 11, 13, 15])


@st.composite
def quad_polys(draw, min_n=1, max_n=6, moduli=odd_moduli):
    n = draw(st.integers(min_n, max_n))
    m = draw(moduli)
    pairs = pair_index(n)
    a = dict(zip(pairs, draw(st.lists(st.integers(0, m - 1), min_size=len(pairs), max_size=len(pairs)))))
    b = draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    return QuadPoly(n, m, a, tuple(b))


def brute_sum(f: QuadPoly) -> complex:
    """Plain-Python reference for S(f): loop over the cube with complex floats."""
    total = 0j
    for x in itertools.product((1, -1), repeat=f.n):
        val = sum(v * x[i - 1] * x[j - 1] for (i, j), v in f.a.items())
        val += sum(bk * xk for bk, xk in zip(f.b, x))
        sign = 1
        for xk in x:
            sign *= xk
        total += sign * cmath.exp(2j * cmath.pi * val / f.m)
    return total / 2**f.n


def brute_coeff(f: QuadPoly, subset: int) -> complex:
    total = 0j
    for x in itertools.product((1, -1), repeat=f.n):
        val = sum(v * x[i - 1] * x[j - 1] for (i, j), v in f.a.items())
        val += sum(bk * xk for bk, xk in zip(f.b, x))
        chi = 1
        for k in range(f.n):
            if subset >> k & 1:
                chi *= x[k]
        total += chi * cmath.exp(2j * cmath.pi * val / f.m)
    return total / 2**f.n


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import SUMMARY
    except ImportError:
        return
    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in sorted(SUMMARY, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
