import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadsum.cyclotomic import (
    CycInt,
    brute_force_extremes,
    chebyshev_coeffs,
    chebyshev_q,
    cyc_abs,
    cyc_arith,
    cyc_is_zero,
    cyclotomic_polynomial,
    root_params,
)

from conftest import odd_moduli


def test_product_with_conjugate_m3():
    a = CycInt(3, (0, 1, 1))
    prod = cyc_arith(a, cyc_arith(a, None, "conj"), "mul")
    assert prod.coeffs == (2, 1, 1)
    assert prod.as_integer() == 1


def test_difference_with_itself_is_zero_vector():
    a = CycInt(7, (3, -1, 0, 4, 2, 0, 9))
    assert cyc_arith(a, a, "sub").coeffs == (0,) * 7


def test_root_times_inverse_root():
    for m in (3, 5, 9, 15):
        assert (CycInt.root(m, 1) * CycInt.root(m, m - 1)).coeffs == (1,) + (0,) * (m - 1)


def test_modulus_mismatch():
    with pytest.raises(ValueError):
        CycInt.root(3) + CycInt.root(5)


@pytest.mark.parametrize("m", [2, 4, 1, 0])
def test_bad_modulus(m):
    with pytest.raises(ValueError):
        CycInt.zero(m)


def test_is_zero_examples():
    assert cyc_is_zero(CycInt(3, (1, 1, 1)))
    assert not cyc_is_zero(CycInt(3, (1, 0, 0)))
    assert cyc_is_zero(CycInt(5, (2, 2, 2, 2, 2)))


def test_abs_examples():
    assert cyc_abs(CycInt(3, (0, 1, -1))) == pytest.approx(math.sqrt(3), abs=1e-12)
    assert cyc_abs(CycInt.zero(7)) == 0.0
    assert cyc_abs(CycInt(5, (0, 1, 0, 0, -1))) == pytest.approx(2 * math.sin(2 * math.pi / 5), abs=1e-12)
    assert cyc_abs(CycInt(5, (0, 1, 0, 0, -1))) == pytest.approx(1.9021130, abs=1e-7)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(9) == (1, 0, 0, 1, 0, 0, 1)
    # Phi_15 = x^8 - x^7 + x^5 - x^4 + x^3 - x + 1
    assert cyclotomic_polynomial(15) == (1, -1, 0, 1, -1, 1, 0, -1, 1)


def test_composite_modulus_zero_test():
    # 1 + w^5 + w^10 = 0 for m = 15 although not all roots are summed
    assert cyc_is_zero(CycInt(15, tuple(1 if j % 5 == 0 else 0 for j in range(15))))
    assert not cyc_is_zero(CycInt(15, tuple(1 if j % 5 == 0 and j < 10 else 0 for j in range(15))))


def test_is_zero_agrees_with_abs_on_random_vectors():
    rnd = random.Random(7)
    for _ in range(10_000):
        m = rnd.choice([3, 5, 7, 9, 15])
        a = CycInt(m, tuple(rnd.randint(-2, 2) for _ in range(m)))
        assert cyc_is_zero(a) == (cyc_abs(a) < 1e-9)


@given(odd_moduli, st.data())
def test_abs_of_norm_is_square(m, data):
    coeffs = data.draw(st.lists(st.integers(-50, 50), min_size=m, max_size=m))
    a = CycInt(m, tuple(coeffs))
    assert cyc_abs(a * a.conj()) == pytest.approx(cyc_abs(a) ** 2, rel=1e-9, abs=1e-9)


@given(odd_moduli, st.data())
def test_ring_laws(m, data):
    vec = st.lists(st.integers(-9, 9), min_size=m, max_size=m).map(lambda v: CycInt(m, tuple(v)))
    a, b, c = data.draw(vec), data.draw(vec), data.draw(vec)
    assert (a * (b + c)).coeffs == (a * b + a * c).coeffs
    assert (a * b).coeffs == (b * a).coeffs
    assert (a * b).conj().coeffs == (a.conj() * b.conj()).coeffs
    assert complex(a * b) == pytest.approx(complex(a) * complex(b), abs=1e-8)


def test_big_integers_do_not_overflow():
    a = CycInt(3, (2**80, 0, -(2**80)))
    assert (a * a).coeffs == (2**160, 2**160, -(2**161))
    assert cyc_is_zero((a * a) - (a * a))
    assert (a + a).coeffs[0] == 2**81


def test_root_params_examples():
    p3 = root_params(3)
    assert p3.c == 1 and p3.q == pytest.approx(math.sqrt(3), abs=1e-12)
    p7 = root_params(7)
    assert p7.c == 2 and p7.q == pytest.approx(1.9498558, abs=1e-7)
    assert root_params(5).r == pytest.approx(1.1755705, abs=1e-7)
    with pytest.raises(ValueError):
        root_params(4)


@pytest.mark.parametrize("m", range(3, 100, 2))
def test_q_is_the_maximum_attained_only_at_plus_minus_c(m):
    p = root_params(m)
    assert math.sqrt(3) - 1e-12 <= p.q < 2
    w = [complex(CycInt.root(m, y)) for y in range(m)]
    for y in range(m):
        d = abs(w[y] - w[-y % m])
        assert d <= p.q + 1e-12
        assert (abs(d - p.q) < 1e-12) == (y in (p.c, m - p.c))
    bf = brute_force_extremes(m)
    assert p.r == pytest.approx(bf["r"], abs=1e-12)
    assert p.s == pytest.approx(bf["s"], abs=1e-12)


def test_chebyshev_examples():
    assert chebyshev_q(2, 2.0) == pytest.approx(2.0)
    q5 = 2 * math.cos(math.pi / 10)
    assert chebyshev_q(3, q5) == pytest.approx(1.1755705, abs=1e-7)
    assert chebyshev_coeffs(5).coeffs == (0, 5, 0, -5, 0, 1)
    assert chebyshev_coeffs(0).coeffs == (2,)
    assert chebyshev_coeffs(1).coeffs == (0, 1)


def test_chebyshev_identity_random_angles():
    rnd = random.Random(3)
    for _ in range(1000):
        t = rnd.uniform(0, math.pi)
        for k in range(33):
            assert abs(chebyshev_q(k, 2 * math.cos(t)) - 2 * math.cos(k * t)) <= 1e-12


@pytest.mark.parametrize("k", range(1, 20))
def test_chebyshev_coefficients_match_recurrence(k):
    seq = chebyshev_coeffs(k)
    assert seq.coeffs[-1] == 1
    assert all(isinstance(c, int) for c in seq.coeffs)
    for x in (-1.7, 0.3, 1.9):
        assert seq(x) == pytest.approx(chebyshev_q(k, x), abs=1e-9)
