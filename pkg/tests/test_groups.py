"""Group tables, subgroup machinery and the cocycle constructions."""
import random

import numpy as np
import pytest

from asq import groups
from asq.groups import (
    TABLE4_IDS,
    HeisenbergGroup,
    Subgroup,
    abelian_type,
    center,
    centralizer,
    complements,
    cyclic,
    derived,
    dihedral8,
    direct_product,
    elementary_abelian,
    enumerate_elem_abelian_subgroups,
    exponent,
    frattini,
    is_normal,
    load_group,
    modular_c9_c3,
    order8_catalogue,
    order27_catalogue,
    order_histogram,
    product_set,
    quaternion8,
    quotient,
    save_group,
    subgroup_generate,
    table4_group,
)


def test_identity_and_inverses():
    for G in order8_catalogue() + order27_catalogue():
        assert G.op(0, 3) == 3
        for g in range(G.n):
            assert G.op(g, G.inverse(g)) == 0
        G.check_associativity()


def test_catalogues():
    o8 = order8_catalogue()
    o27 = order27_catalogue()
    assert len(o8) == 5 and all(G.n == 8 for G in o8)
    assert len(o27) == 5 and all(G.n == 27 for G in o27)
    # the five order-8 types are distinguished by element-order histograms
    # except Q8 vs C8... check pairwise non-isomorphism via (histogram,
    # abelianness) which does separate all five
    sigs = {(tuple(sorted(order_histogram(G).items())), G.is_abelian())
            for G in o8}
    assert len(sigs) == 5


def test_heisenberg_structure():
    H = HeisenbergGroup(3)
    assert H.n == 27 and not H.is_abelian() and exponent(H) == 3
    z = center(H)
    assert z.order == 3
    assert derived(H).elements == z.elements
    assert frattini(H).elements == z.elements


def test_subgroup_generate_and_normality():
    H = HeisenbergGroup(3)
    z = center(H)
    assert is_normal(H, z)
    one = subgroup_generate(H, [])
    assert one.elements == (0,)
    full = subgroup_generate(H, list(range(1, 5)))
    assert full.order in (3, 9, 27)


def test_product_set_sizes():
    H = HeisenbergGroup(3)
    z = center(H)
    a = subgroup_generate(H, [z.elements[1]])
    nonc = next(g for g in range(1, H.n) if g not in z)
    b = subgroup_generate(H, [nonc])
    ab = product_set(H, a.elements, b.elements)
    # |AB| = |A||B|/|A cap B|
    meet = set(a.elements) & set(b.elements)
    assert len(ab) == a.order * b.order // len(meet)


def test_quotient_and_complements():
    G = elementary_abelian(4)
    n = subgroup_generate(G, [1])
    Q, proj = quotient(G, n)
    assert Q.n == 8 and Q.is_abelian()
    comps = complements(Subgroup(G, tuple(range(16))), n)
    # hyperplanes of F_2^4 avoiding the vector 1: 15 - 7 = 8
    assert len(comps) == 8
    for c in comps:
        assert c.order == 8 and set(c.elements) & set(n.elements) == {0}


def test_direct_product():
    G = direct_product(dihedral8(), cyclic(2))
    assert G.n == 16 and not G.is_abelian()
    G.check_associativity()


def test_table1_fingerprints():
    # centres C2^3 / C4xC2 / C2 / C2, Frattini subgroup C2 throughout
    want = {
        "208a": (2, 2, 2),
        "210b": (4, 2),
        "211p": (2,),
        "212m": (2,),
    }
    for ident in TABLE4_IDS:
        G = table4_group(ident)
        assert G.n == 512
        z = center(G)
        assert abelian_type(G, z.elements) == want[ident], ident
        f = frattini(G)
        assert f.order == 2 and abelian_type(G, f.elements) == (2,), ident


def test_table4_rejects_unknown():
    with pytest.raises((KeyError, ValueError)):
        table4_group("999z")


def test_enumerate_elem_abelian():
    G = elementary_abelian(3)
    subs = enumerate_elem_abelian_subgroups(G, 4)
    # 2-dim subspaces of F_2^3: Gaussian coefficient [3 choose 2]_2 = 7
    assert len(subs) == 7
    # avoiding a single nonzero vector leaves the 2-spaces missing it:
    # 7 - [2 choose 1]_2 = 4
    fewer = enumerate_elem_abelian_subgroups(G, 4, avoid=[(0, 1)])
    assert len(fewer) == 4


def test_centralizer_quaternion():
    Q = quaternion8()
    z = center(Q)
    assert z.order == 2
    for g in range(Q.n):
        c = centralizer(Q, [g])
        assert c.order in (4, 8)
        assert set(z.elements) <= set(c.elements)


def test_modular_c9_c3():
    G = modular_c9_c3()
    assert G.n == 27 and not G.is_abelian() and exponent(G) == 9


def test_save_load_roundtrip():
    for G in [HeisenbergGroup(3), dihedral8(), table4_group("211p")]:
        G2 = load_group(save_group(G))
        assert G2.n == G.n
        assert np.array_equal(np.asarray(G2.mul), np.asarray(G.mul))


def test_load_group_rejects_garbage():
    with pytest.raises(ValueError):
        load_group("nonsense\n")
    with pytest.raises(ValueError):
        load_group("kind: table\nn: 2\n0 1\n1 1\n")  # not a group
