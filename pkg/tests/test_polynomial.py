import itertools
import json

import numpy as np
import pytest
from hypothesis import given

from quadsum.polynomial import (
    FamilySpec,
    PolyError,
    QuadPoly,
    canonical_form,
    digits_to_index,
    forest_distance,
    graph_of,
    group_action_arrays,
    index_to_digits,
    iter_family,
    lex_keys,
    orbit_representatives,
    parse_poly,
    sign_variants,
)
from quadsum.sums import eval_gray

from conftest import quad_polys


def test_parse_basic():
    f = parse_poly('{"n":2,"m":3,"a":{"1,2":1},"b":[0,0]}')
    assert f.a == {(1, 2): 1} and f.b == (0, 0)


def test_parse_reduces_mod_m():
    assert parse_poly('{"n":1,"m":5,"a":{},"b":[6]}').b == (1,)
    assert parse_poly('{"n":2,"m":5,"a":{"1,2":-1},"b":[0,0]}').a == {(1, 2): 4}


def test_zero_coefficients_are_dropped():
    assert parse_poly('{"n":2,"m":5,"a":{"1,2":5},"b":[0,0]}').a == {}


@pytest.mark.parametrize("text, fragment", [
    ('{"n":2,"m":4,"a":{},"b":[0,0]}', "odd"),
    ('{"n":2,"m":3,"a":{"2,1":1},"b":[0,0]}', "i < j"),
    ('{"n":2,"m":3,"a":{"1,1":1},"b":[0,0]}', "i < j"),
    ('{"n":2,"m":3,"a":{"1,3":1},"b":[0,0]}', "out of range"),
    ('{"n":2,"m":3,"a":{},"b":[0]}', "length"),
    ('{"n":2,"m":3,"a":{"x":1},"b":[0,0]}', "bad quadratic key"),
    ('{"n":2,"m":3', "malformed"),
    ('{"n":2,"m":3,"a":{}}', "missing"),
    ('[1,2]', "object"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(PolyError, match=fragment):
        parse_poly(text)


def test_constructor_rejects_diagonal():
    with pytest.raises(PolyError):
        QuadPoly(2, 3, {(1, 1): 1})


@given(quad_polys())
def test_json_roundtrip(f):
    text = f.to_json()
    assert " " not in text
    assert json.loads(text) == json.loads(json.dumps(json.loads(text), sort_keys=True))
    assert parse_poly(text) == f
    assert QuadPoly.from_digits(f.n, f.m, f.digits()) == f


def test_graph_examples():
    assert graph_of(QuadPoly(3, 5, {(1, 2): 1, (2, 3): 1})).edges == ((1, 2), (2, 3))
    assert graph_of(QuadPoly(3, 5, {}, (1, 2, 3))).edges == ()
    tri = graph_of(QuadPoly(3, 5, {(1, 2): 1, (2, 3): 1, (1, 3): 1}))
    assert forest_distance(tri) == 1
    k4 = graph_of(QuadPoly(4, 5, {p: 1 for p in itertools.combinations(range(1, 5), 2)}))
    assert forest_distance(k4) == 3


def _has_cycle(g) -> bool:
    adj = g.adjacency()
    seen = set()
    for s in range(1, g.n + 1):
        if s in seen:
            continue
        stack = [(s, 0)]
        while stack:
            v, parent = stack.pop()
            if v in seen:
                return True
            seen.add(v)
            stack += [(w, v) for w in adj[v] if w != parent]
    return False


@given(quad_polys(max_n=7))
def test_forest_distance_zero_iff_acyclic(f):
    g = graph_of(f)
    assert (forest_distance(g) == 0) == (not _has_cycle(g))
    assert sum(len(c) for c in g.components()) == f.n


def test_k4_needs_three_deletions():
    edges = list(itertools.combinations(range(1, 5), 2))
    for drop in itertools.combinations(edges, 2):
        rest = {e: 1 for e in edges if e not in drop}
        assert forest_distance(graph_of(QuadPoly(4, 3, rest))) > 0
    assert any(forest_distance(graph_of(QuadPoly(4, 3, {e: 1 for e in edges if e not in d}))) == 0
               for d in itertools.combinations(edges, 3))


def test_canonical_examples():
    assert canonical_form(QuadPoly(2, 5, {(1, 2): 4})) == QuadPoly(2, 5, {(1, 2): 1})
    got = canonical_form(QuadPoly(3, 5, {(2, 3): 1}))
    assert len(got.a) == 1 and got.b == (0, 0, 0)
    # the lexicographically smallest layout puts the lone edge last in row-major order
    assert got == min((QuadPoly(3, 5, {p: 1}) for p in [(1, 2), (1, 3), (2, 3)]),
                      key=lambda p: p.digits())


def _orbit_min_bruteforce(f: QuadPoly) -> tuple[int, ...]:
    srcs, signs = group_action_arrays(f.n)
    d = np.array(f.digits())
    images = (d[srcs] * signs) % f.m
    return tuple(images[int(np.argmin(lex_keys(f.m, images)))].tolist())


@given(quad_polys(max_n=4))
def test_canonical_form_matches_whole_group_minimum(f):
    assert canonical_form(f).digits() == _orbit_min_bruteforce(f)


@given(quad_polys(max_n=5))
def test_canonical_form_is_idempotent_and_norm_invariant(f):
    g = canonical_form(f)
    assert canonical_form(g) == g
    assert abs(eval_gray(g).norm - eval_gray(f).norm) <= 1e-12


def test_orbits_partition_small_family():
    spec = FamilySpec("all", 2, 3)
    reps, sizes = orbit_representatives(spec)
    assert sizes.sum() == 27
    by_canon = {}
    for f in iter_family(spec):
        by_canon.setdefault(canonical_form(f), []).append(f)
    assert {QuadPoly.from_digits(2, 3, r.tolist()) for r in reps} == set(by_canon)
    got = {QuadPoly.from_digits(2, 3, r.tolist()): int(s) for r, s in zip(reps, sizes)}
    assert got == {k: len(v) for k, v in by_canon.items()}


@pytest.mark.parametrize("kind, n, m, size", [
    ("all", 1, 3, 3), ("all", 2, 5, 125), ("homogeneous", 3, 3, 27), ("linear", 3, 5, 125),
    ("all", 3, 3, 729),
])
def test_family_sizes(kind, n, m, size):
    spec = FamilySpec(kind, n, m)
    assert spec.size == size
    members = list(iter_family(spec))
    assert len(members) == size == len(set(members))
    if kind == "homogeneous":
        assert all(f.is_homogeneous for f in members)
    if kind == "linear":
        assert all(not f.a for f in members)


def test_odometer_is_little_endian_and_invertible():
    spec = FamilySpec("all", 2, 3)
    d = index_to_digits(spec, np.arange(27))
    assert d[1].tolist() == [1, 0, 0] and d[3].tolist() == [0, 1, 0]
    assert digits_to_index(spec, d).tolist() == list(range(27))
    assert [f.b[0] for f in iter_family(FamilySpec("all", 1, 3))] == [0, 1, 2]


def test_random_family_is_seeded():
    a = [f.digits() for f in iter_family(FamilySpec("random", 4, 7, count=50, seed=9))]
    b = [f.digits() for f in iter_family(FamilySpec("random", 4, 7, count=50, seed=9))]
    c = [f.digits() for f in iter_family(FamilySpec("random", 4, 7, count=50, seed=10))]
    assert a == b and a != c


def test_family_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec("all", 2, 4)
    with pytest.raises(ValueError):
        FamilySpec("random", 2, 3)
    with pytest.raises(ValueError):
        FamilySpec("bogus", 2, 3)


def test_sign_variants_count():
    f = QuadPoly(3, 7, {(1, 2): 2}, (0, 0, 2))
    assert len(set(sign_variants(f))) == 4
