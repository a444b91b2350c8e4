import math
from fractions import Fraction

import pytest

from quadsum.moments import (
    MomentCollector,
    empirical_tail,
    geometric_char_sum,
    char_sum_identity_holds,
    m6_bound,
    moment_exact,
    tail_bounds,
)
from quadsum.polynomial import FamilySpec, iter_family
from quadsum.sums import eval_gray


@pytest.mark.parametrize("n, m", [(1, 3), (1, 5), (2, 3), (2, 5), (3, 3), (2, 7)])
def test_second_moment_is_exactly_two_to_minus_n(n, m):
    rep = moment_exact(FamilySpec("all", n, m), 2)
    assert rep.exact == Fraction(1, 2**n)
    assert rep.matches_prediction


@pytest.mark.parametrize("n, m", [(1, 3), (2, 5), (3, 5), (4, 3), (3, 7)])
def test_homogeneous_second_moment(n, m):
    spec = FamilySpec("homogeneous", n, m)
    rep = moment_exact(spec, 2)
    assert rep.exact == Fraction(1 + (-1) ** n, 2**n)
    if n % 2:
        assert rep.zero_count == spec.size


def test_homogeneous_three_five_is_zero():
    assert moment_exact(FamilySpec("homogeneous", 3, 5), 2).exact == 0


@pytest.mark.parametrize("n, m, r", [(2, 3, 4), (2, 5, 6), (3, 3, 6), (2, 7, 4)])
def test_moments_agree_with_float_average(n, m, r):
    spec = FamilySpec("all", n, m)
    norms = [eval_gray(f).norm for f in iter_family(spec)]
    assert float(moment_exact(spec, r).exact) == pytest.approx(sum(x**r for x in norms) / len(norms),
                                                              rel=1e-9, abs=1e-15)


def test_sixth_moment_bound_example():
    rep = moment_exact(FamilySpec("all", 2, 5), 6)
    assert float(rep.bound) == pytest.approx((9 * 2 + 19 * 2**-2) / 4 / 2**6)
    assert rep.within_bound and not rep.failed
    assert m6_bound(2) == Fraction(91, 1024)


def test_sixth_moment_bound_not_applied_at_m3():
    assert moment_exact(FamilySpec("all", 2, 3), 6).bound is None


def test_denominator_divides_family_scale():
    spec = FamilySpec("all", 3, 3)
    rep = moment_exact(spec, 4)
    assert (spec.size * 2 ** (4 * 3)) % rep.exact.denominator == 0


def test_bad_orders_and_families():
    with pytest.raises(ValueError):
        moment_exact(FamilySpec("all", 2, 3), 3)
    with pytest.raises(ValueError):
        moment_exact(FamilySpec("all", 2, 3), 8)
    with pytest.raises(ValueError):
        moment_exact(FamilySpec("random", 2, 3, count=5, seed=1), 2)


def test_moment_report_json_fields():
    d = moment_exact(FamilySpec("all", 2, 3), 2).to_dict()
    assert d["moment"] == {"value": "1/4", "numerator": "1", "denominator": "4", "float": 0.25}
    assert d["failed"] is False


def test_collector_merge_is_order_free():
    from quadsum.sums import make_batch
    from quadsum.polynomial import index_to_digits
    import numpy as np

    spec = FamilySpec("all", 2, 5)
    d = index_to_digits(spec, np.arange(125))
    whole = MomentCollector(2, 5, 6)
    whole.feed(make_batch(2, 5, d))
    left, right = MomentCollector(2, 5, 6), MomentCollector(2, 5, 6)
    left.feed(make_batch(2, 5, d[:40]))
    right.feed(make_batch(2, 5, d[40:]))
    right.merge(left)
    assert right.total == whole.total and right.members == 125


@pytest.mark.parametrize("m", range(3, 16, 2))
def test_geometric_character_sum(m):
    for r in range(m):
        assert char_sum_identity_holds(m, r)
    assert geometric_char_sum(m, 0).coeffs[0] == m


def test_tail_bound_examples():
    t = tail_bounds(4, 5, 1 / math.sqrt(2))
    assert t.lower == pytest.approx(0, abs=1e-15) and t.upper == pytest.approx(1.0)
    one = tail_bounds(3, 5, 1.0)
    assert one.lower == 0 and one.upper == pytest.approx(min(2**-3, 9 * 3 * 4 / 4 * 2**-9))
    t = tail_bounds(2, 5, 0.9)
    assert t.upper == pytest.approx(min(1, 1.62**-2, 9 * 2 * 3 / 4 * 1.62**-6))


def test_tail_m3_skips_the_sixth_moment_term():
    assert tail_bounds(3, 3, 0.9).upper == pytest.approx(min(1, 1.62**-3))


def test_tail_gamma_range():
    for g in (0, -0.5, 1.2):
        with pytest.raises(ValueError):
            tail_bounds(2, 3, g)


def test_empirical_tail_hand_example():
    (rep,) = empirical_tail(FamilySpec("all", 1, 3), 0.8)
    assert rep.empirical == pytest.approx(2 / 3)


def test_tiny_gamma_counts_nonzero_sums():
    spec = FamilySpec("all", 2, 5)
    (rep,) = empirical_tail(spec, 1e-3)
    nonzero = sum(1 for f in iter_family(spec) if eval_gray(f).norm > 1e-12)
    assert rep.empirical == pytest.approx(nonzero / 125)


def test_tail_sandwich_two_five():
    gammas = [0.75, 0.8, 0.85, 0.9, 0.95, 1.0]
    for rep in empirical_tail(FamilySpec("all", 2, 5), gammas):
        assert rep.sandwiched, rep
        assert rep.to_dict()["failed"] is False
