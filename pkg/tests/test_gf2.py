"""Tests for bit-packed GF(2) linear algebra."""
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asq import gf2


def exhaustive_span(vectors, dim):
    """Oracle: the span as a frozenset, by enumerating all combinations."""
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return frozenset(out)


def test_rref_small():
    # {110, 011} in d=3 reduces to pivots e1 and e2.
    s = gf2.rref([0b011, 0b110], 3)
    assert s.basis == (0b101, 0b110)
    assert exhaustive_span(s.basis, 3) == exhaustive_span([0b011, 0b110], 3)


def test_rref_empty():
    s = gf2.rref([], 8)
    assert s.rank == 0 and s.basis == ()


def test_rref_canonical_under_generating_set():
    rng = random.Random(7)
    base = [0b10010001, 0b01100000, 0b00011100, 0b00000011]
    target = gf2.rref(base, 8)
    vecs = sorted(exhaustive_span(base, 8) - {0})
    for _ in range(100):
        gens = rng.sample(vecs, rng.randint(4, 9))
        if gf2.rank_of(gens, 8) < 4:
            continue
        assert gf2.rref(gens, 8) == target


@given(st.lists(st.integers(0, 255), max_size=6), st.lists(st.integers(0, 255), max_size=6))
@settings(max_examples=200)
def test_dimension_formula(avecs, bvecs):
    a = gf2.rref(avecs, 8)
    b = gf2.rref(bvecs, 8)
    s = gf2.span(a, b)
    m = gf2.meet(a, b)
    assert s.rank + m.rank == a.rank + b.rank
    # Meet/span agree with the exhaustive membership oracle.
    sa = exhaustive_span(avecs, 8)
    sb = exhaustive_span(bvecs, 8)
    assert exhaustive_span(m.basis, 8) == sa & sb
    assert exhaustive_span(s.basis, 8) == exhaustive_span(list(sa | sb), 8)


@given(st.lists(st.integers(0, 1023), max_size=10), st.integers(0, 1023))
@settings(max_examples=200)
def test_membership_matches_exhaustive(vecs, v):
    s = gf2.rref(vecs, 10)
    assert gf2.contains(s, v) == (v in exhaustive_span(vecs, 10))


def test_meet_with_full_space():
    full = gf2.rref([1 << i for i in range(8)], 8)
    a = gf2.rref([0b00001011, 0b11000000], 8)
    assert gf2.meet(a, full) == a


def test_meet_planes_in_common_4space():
    # Two distinct planes of a common 4-space intersect in rank >= 2.
    four = [1, 2, 4, 8]
    a = gf2.rref([1, 2, 4], 8)
    b = gf2.rref([1, 2, 8], 8)
    assert gf2.meet(a, b).rank >= 2 * 3 - 4


def test_subspace_vectors():
    s = gf2.rref([3, 5], 4)
    assert sorted(gf2.subspace_vectors(s)) == sorted(exhaustive_span([3, 5], 4))


def test_enumerate_counts():
    assert sum(1 for _ in gf2.enumerate_subspaces(3, 1)) == 7
    assert gf2.subspace_count(8, 3) == 97155
    for d in range(0, 6):
        for k in range(0, d + 1):
            subs = list(gf2.enumerate_subspaces(d, k))
            assert len(subs) == gf2.subspace_count(d, k)
            assert len(set(s.key() for s in subs)) == len(subs)
            for s in subs:
                assert s.rank == k


def test_enumerate_counts_d8_k3():
    n = sum(1 for _ in gf2.enumerate_subspaces(8, 3))
    assert n == 97155


def test_enumerate_zero_subspace():
    assert list(gf2.enumerate_subspaces(8, 0)) == [gf2.rref([], 8)]


def test_format_parse_roundtrip():
    v, d = gf2.parse_vector("10100000")
    assert (v, d) == (0b00000101, 8)
    assert gf2.format_vector(v, d) == "10100000"
    for x in range(256):
        w, _ = gf2.parse_vector(gf2.format_vector(x, 8))
        assert w == x


def test_kernel_and_solve():
    rng = random.Random(3)
    for _ in range(50):
        rows = [rng.randrange(256) for _ in range(rng.randint(1, 6))]
        ker = gf2.kernel(rows, 8)
        for v in gf2.subspace_vectors(ker):
            assert all(bin(v & r).count("1") % 2 == 0 for r in rows)
        # Kernel dimension complements the row rank.
        assert ker.rank == 8 - gf2.rank_of(rows, 8)
        target = sum((rng.randint(0, 1) << j) for j in range(len(rows)))
        x = gf2.solve(rows, 8, target)
        if x is not None:
            assert all((bin(x & rows[j]).count("1") % 2) == ((target >> j) & 1)
                       for j in range(len(rows)))


def test_complement_basis():
    a = gf2.rref([0b011, 0b101], 4)
    comp = gf2.complement_basis(a)
    assert gf2.rank_of(list(a.basis) + list(comp), 4) == 4
    assert len(comp) == 4 - a.rank


def test_dimension_errors():
    with pytest.raises(ValueError):
        gf2.rref([256], 8)
    with pytest.raises(ValueError):
        gf2.span(gf2.rref([1], 4), gf2.rref([1], 5))
