"""AS-axioms, the derived invariants, PDS/Kantor checks and filters."""
import random

import pytest

from asq.asconfig import (
    ASConfiguration,
    check_as_axioms,
    check_kantor,
    check_pds,
    clique_size_qplus1,
    delta,
    enough_subgroups,
    extraspecial_quotient_exists,
    kantor_from_as,
    lemma41_invariants,
    parse_config,
    save_config,
    structural_filter,
)
from asq.groups import (
    HeisenbergGroup,
    Subgroup,
    cyclic,
    dihedral8,
    direct_product,
    elementary_abelian,
    product_set,
    quaternion8,
    subgroup_generate,
    table4_group,
)
from asq.search import brute_force_as_configs


@pytest.fixture(scope="module")
def heis_cfg():
    H = HeisenbergGroup(3)
    cfgs = brute_force_as_configs(H)
    assert cfgs
    return H, cfgs[0]


def test_axioms_on_known_config(heis_cfg):
    G, cfg = heis_cfg
    rep = check_as_axioms(G, cfg)
    assert rep["ok"] and rep["witness"] is None
    assert rep["as1_normal"] and rep["pairwise_trivial"] and rep["as2_triple"]


def test_axioms_reject_perturbation(heis_cfg):
    # swap the last member for an order-3 subgroup outside the family
    G, cfg = heis_cfg
    keys = {u.key() for u in cfg.subgroups}
    orders = G.element_orders()
    other = next(
        s for g in range(1, G.n) if orders[g] == 3
        for s in [subgroup_generate(G, [g])] if s.key() not in keys
    )
    bad = ASConfiguration(G, cfg.q, cfg.subgroups[:-1] + (other,))
    rep = check_as_axioms(G, bad)
    assert not rep["ok"] and rep["witness"] is not None


def test_orientation_reduction(heis_cfg):
    # with pairwise trivial meets, U_iU_j cap U_k = 1 for one ordering
    # of {i,j,k} forces all six orderings
    G, cfg = heis_cfg
    subs = cfg.subgroups
    for i in range(len(subs)):
        for j in range(len(subs)):
            for k in range(len(subs)):
                if len({i, j, k}) < 3:
                    continue
                prod = set(product_set(G, subs[i].elements, subs[j].elements))
                assert prod & subs[k].element_set() == {0}, (i, j, k)


def test_lemma41_invariants(heis_cfg):
    G, cfg = heis_cfg
    rep = lemma41_invariants(G, cfg)
    assert rep["ok"], rep


def test_delta_and_pds(heis_cfg):
    G, cfg = heis_cfg
    d = delta(cfg)
    # (q+2) subgroups of order q sharing only the identity
    assert len(d) == (cfg.q + 2) * (cfg.q - 1)
    assert all(int(G.inv[x]) in set(d) for x in d)
    lam, mu = check_pds(G, d)
    assert (lam, mu) == (cfg.q - 2, cfg.q + 2)


def test_pds_rejects_non_pds():
    G = cyclic(8)
    with pytest.raises(ValueError):
        check_pds(G, (1, 7, 2, 6))


def test_kantor_family(heis_cfg):
    G, cfg = heis_cfg
    fam = kantor_from_as(cfg)
    assert len(fam.F) == cfg.q + 1
    rep = check_kantor(G, fam, cfg.q, cfg.q)
    assert rep["ok"], rep
    # wrong parameters must fail the size axioms
    assert not check_kantor(G, fam, cfg.q - 1, cfg.q + 1)["ok"]


def test_config_roundtrip(heis_cfg):
    G, cfg = heis_cfg
    cfg2 = parse_config(save_config(cfg), G)
    assert [u.elements for u in cfg2.subgroups] == [u.elements for u in cfg.subgroups]


def test_parse_config_errors(heis_cfg):
    G, _ = heis_cfg
    with pytest.raises(ValueError):
        parse_config("nope", G)
    with pytest.raises(ValueError):
        parse_config("q: 3\nU0: 1\n", G)  # wrong line count
    # semantic failure is deferred with validate=False
    text = "q: 3\n" + "\n".join(f"U{i}: 0" for i in range(5))
    cfg = parse_config(text, G, validate=False)
    with pytest.raises(ValueError):
        parse_config(text, G)
    assert cfg.q == 3


def test_structural_filter_passes_candidates():
    for ident in ("208a", "210b", "211p", "212m"):
        rep = structural_filter(table4_group(ident))
        assert rep.passed, (ident, rep)


def test_structural_filter_negative_control():
    # D8 x C2^6 has an extraspecial image of order 8 and must fail
    D = direct_product(dihedral8(), elementary_abelian(6))
    rep = structural_filter(D)
    assert not rep.passed
    assert rep.conditions["no_extraspecial_image"] is False
    wit = extraspecial_quotient_exists(D)
    assert wit is not None and D.n // wit.order in (8, 32)


def test_structural_filter_abelian_fails():
    rep = structural_filter(elementary_abelian(9))
    assert not rep.passed and rep.conditions["nonabelian"] is False


def test_extraspecial_quotient_small():
    # D8 and Q8 are their own extraspecial images
    for G in (dihedral8(), quaternion8()):
        wit = extraspecial_quotient_exists(G)
        assert wit is not None and wit.order == 1
    assert extraspecial_quotient_exists(elementary_abelian(3)) is None


def test_enough_subgroups_and_clique():
    # C2^3 admits configurations at q = 2, D8 and Q8 do not
    C = elementary_abelian(3)
    assert enough_subgroups(C, 2) and clique_size_qplus1(C, 2)
    for G in (dihedral8(), quaternion8()):
        assert not enough_subgroups(G, 2)
        assert not clique_size_qplus1(G, 2)
