"""AS-configuration and Kantor-family verification, partial difference
sets, and the structural filters that rule candidate groups in or out.

An AS-configuration in a group G of order q^3 is a tuple of subgroups
U_0, ..., U_{q+1} of order q with U_0 normal (AS1) and U_i U_j cap U_k
trivial for distinct i, j, k (AS2).  This module verifies those axioms,
derives the associated Kantor family and partial difference set, and
implements the group-theoretic filter predicates used to cut the
order-512 candidate list down to four groups.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import gf2
from ._kernels import difference_counts
from .groups import (
    FiniteGroup,
    Subgroup,
    _prime_of,
    agemo,
    center,
    conjugate_subgroup,
    derived,
    enumerate_elem_abelian_subgroups,
    exponent,
    frattini,
    is_normal,
    product_set,
    quotient,
    subgroup_generate,
)

__all__ = [
    "ASConfiguration",
    "KantorFamily",
    "FilterReport",
    "check_as_axioms",
    "delta",
    "check_pds",
    "kantor_from_as",
    "check_kantor",
    "lemma41_invariants",
    "structural_filter",
    "extraspecial_quotient_exists",
    "good_subgroups",
    "enough_subgroups",
    "clique_size_qplus1",
    "parse_config",
    "save_config",
]


@dataclass(frozen=True)
class ASConfiguration:
    """Subgroups U_0, ..., U_{q+1} of order q in a group of order q^3."""

    group: FiniteGroup
    q: int
    subgroups: Tuple[Subgroup, ...]

    @property
    def u0(self) -> Subgroup:
        return self.subgroups[0]

    def __repr__(self) -> str:
        return f"ASConfiguration(q={self.q}, |G|={self.group.n})"


@dataclass(frozen=True)
class KantorFamily:
    """(F, F*) with the containment pairing F[i] <= Fstar[i]."""

    F: Tuple[Subgroup, ...]
    Fstar: Tuple[Subgroup, ...]


def _validate(G: FiniteGroup, cfg: ASConfiguration) -> None:
    q = cfg.q
    if G.n != q**3:
        raise ValueError(f"group order {G.n} is not q^3 for q={q}")
    if len(cfg.subgroups) != q + 2:
        raise ValueError(f"expected q+2={q + 2} subgroups, got {len(cfg.subgroups)}")
    keys = set()
    for i, u in enumerate(cfg.subgroups):
        if u.order != q:
            raise ValueError(f"subgroup U{i} has order {u.order}, expected {q}")
        if u.key() in keys:
            raise ValueError(f"duplicate subgroup U{i}")
        keys.add(u.key())


def check_as_axioms(G: FiniteGroup, cfg: ASConfiguration) -> Dict[str, object]:
    """Verify (AS1) and (AS2).

    Once all pairwise intersections are trivial, one orientation per
    unordered triple suffices: u_i u_j = u_k with nontrivial factors
    rearranges to a nontrivial membership witness in every orientation.
    """
    _validate(G, cfg)
    subs = cfg.subgroups
    report: Dict[str, object] = {
        "as1_normal": is_normal(G, subs[0]),
        "pairwise_trivial": True,
        "as2_triple": True,
        "witness": None,
    }
    n = len(subs)
    sets = [u.element_set() for u in subs]
    for i in range(n):
        for j in range(i + 1, n):
            if sets[i] & sets[j] != {0}:
                report["pairwise_trivial"] = False
                report["witness"] = {"pair": [i, j]}
                break
        if not report["pairwise_trivial"]:
            break
    if report["pairwise_trivial"]:
        for i in range(n):
            for j in range(i + 1, n):
                prod = set(product_set(G, subs[i].elements, subs[j].elements))
                for k in range(j + 1, n):
                    if prod & sets[k] != {0}:
                        report["as2_triple"] = False
                        report["witness"] = {"triple": [i, j, k]}
                        break
                if not report["as2_triple"]:
                    break
            if not report["as2_triple"]:
                break
    report["ok"] = bool(
        report["as1_normal"] and report["pairwise_trivial"] and report["as2_triple"]
    )
    return report


def delta(cfg: ASConfiguration) -> Tuple[int, ...]:
    """The union of the U_i minus the identity."""
    out: set = set()
    for u in cfg.subgroups:
        out |= u.element_set()
    out.discard(0)
    return tuple(sorted(out))


def check_pds(G: FiniteGroup, delta_elems: Sequence[int]) -> Tuple[int, int]:
    """Partial-difference-set check: counts of g = s t^{-1} over s, t in
    the set must be one constant on the set and another off it.

    Returns (lambda, mu); raises ValueError with a witness otherwise.
    """
    d = [int(x) for x in delta_elems]
    ds = set(d)
    if 0 in ds:
        raise ValueError("difference set contains the identity")
    if any(int(G.inv[x]) not in ds for x in d):
        raise ValueError("difference set is not inverse-closed")
    counts = difference_counts(G.mul, G.inv, np.asarray(d, dtype=np.int64))
    lam: Optional[int] = None
    mu: Optional[int] = None
    for g in range(1, G.n):
        c = int(counts[g])
        if g in ds:
            if lam is None:
                lam = c
            elif lam != c:
                raise ValueError(f"non-constant count {c} != {lam} at element {g}")
        else:
            if mu is None:
                mu = c
            elif mu != c:
                raise ValueError(f"non-constant count {c} != {mu} at element {g}")
    assert lam is not None and mu is not None
    return lam, mu


def kantor_from_as(cfg: ASConfiguration) -> KantorFamily:
    """F = {U_i : i >= 1}, F* = {U_0 U_i : i >= 1}."""
    G = cfg.group
    u0 = cfg.subgroups[0]
    F = cfg.subgroups[1:]
    Fstar = tuple(
        Subgroup(G, product_set(G, u0.elements, u.elements)) for u in F
    )
    return KantorFamily(tuple(F), Fstar)


def check_kantor(G: FiniteGroup, fam: KantorFamily, s: int, t: int) -> Dict[str, object]:
    """Kantor-family axioms for an order-(s, t) coset geometry."""
    report: Dict[str, object] = {"sizes": True, "k1": True, "k2": True, "k3": True,
                                 "witness": None}
    if len(fam.F) != t + 1 or len(fam.Fstar) != t + 1:
        report["sizes"] = False
        report["witness"] = {"family_size": len(fam.F)}
    fsets = [a.element_set() for a in fam.F]
    starsets = [a.element_set() for a in fam.Fstar]
    for i, (a, astar) in enumerate(zip(fam.F, fam.Fstar)):
        if a.order != s or astar.order != s * t or not fsets[i] <= starsets[i]:
            report["sizes"] = False
            report["witness"] = {"index": i}
    if not report["sizes"]:
        report["ok"] = False
        return report
    # K1: each A* contains exactly one member of F.
    for i, astar in enumerate(starsets):
        inside = [j for j, f in enumerate(fsets) if f <= astar]
        if inside != [i]:
            report["k1"] = False
            report["witness"] = {"k1": [i, inside]}
    # K2: A* meets every member of F outside it trivially.
    for i, astar in enumerate(starsets):
        for j, f in enumerate(fsets):
            if j != i and astar & f != {0}:
                report["k2"] = False
                report["witness"] = {"k2": [i, j]}
    # K3: AB cap C trivial for distinct A, B, C in F.
    m = len(fam.F)
    for i in range(m):
        for j in range(i + 1, m):
            prod = set(product_set(G, fam.F[i].elements, fam.F[j].elements))
            for k in range(m):
                if k in (i, j):
                    continue
                if prod & fsets[k] != {0}:
                    report["k3"] = False
                    report["witness"] = {"k3": [i, j, k]}
    report["ok"] = bool(report["k1"] and report["k2"] and report["k3"])
    return report


def lemma41_invariants(G: FiniteGroup, cfg: ASConfiguration) -> Dict[str, object]:
    """The six structural consequences of the AS axioms.

    (i) Phi(G) <= U_0; (ii) each U_i (i > 0) elementary abelian;
    (iii) U_i^g <= U_0 U_i; (iv) the U_0 U_i cover G; (v) unique
    factorisation g = u_i u_k for g in U_0 U_j off U_0 and U_j;
    (vi) G = U_i U_j U_k for distinct triples.
    """
    _validate(G, cfg)
    q = cfg.q
    p = _prime_of(q)
    subs = cfg.subgroups
    u0set = subs[0].element_set()
    report: Dict[str, object] = {"witness": None}
    report["phi_in_u0"] = frattini(G).element_set() <= u0set

    orders = G.element_orders()
    elem_ab = True
    for u in subs[1:]:
        els = u.elements
        if any(int(orders[g]) > p for g in els):
            elem_ab = False
        if any(G.mul[a, b] != G.mul[b, a] for a in els for b in els):
            elem_ab = False
    report["ui_elementary_abelian"] = elem_ab

    stars = [set(product_set(G, subs[0].elements, u.elements)) for u in subs[1:]]
    conj_ok = True
    for u, star in zip(subs[1:], stars):
        for g in range(G.n):
            if any(G.conjugate(h, g) not in star for h in u.elements):
                conj_ok = False
                report["witness"] = {"conjugate": g}
                break
        if not conj_ok:
            break
    report["conjugates_in_u0ui"] = conj_ok

    cover: set = set()
    for star in stars:
        cover |= star
    report["cover"] = len(cover) == G.n

    # (v): for g in U_0 U_j off U_0 and U_j, and each i != j (i >= 1),
    # exactly one factorisation g = u_i u_k with u_i in U_i and a
    # nontrivial u_k in some U_k (k != i).
    unique_fact = True
    nsubs = len(subs)
    for j in range(1, nsubs - 1):
        star = stars[j - 1]
        uj = subs[j].element_set()
        for g in sorted(star - u0set - uj):
            for i in range(1, nsubs):
                if i == j:
                    continue
                count = 0
                for ui in subs[i].elements:
                    rest = int(G.mul[G.inv[ui], g])  # u_i * rest = g
                    if rest == 0:
                        continue
                    for k in range(nsubs):
                        if k != i and rest in subs[k].element_set():
                            count += 1
                if count != 1:
                    unique_fact = False
                    report["witness"] = {"factorisation": [g, i, count]}
                    break
            if not unique_fact:
                break
        if not unique_fact:
            break
    report["unique_factorisation"] = unique_fact

    # (vi): G = U_0 U_j U_k.  U_0 U_j is a subgroup meeting U_k trivially,
    # so the product has order q^3.  (For three positive indices the
    # middle product is not a subgroup and the count can genuinely drop:
    # at q = 3 every configuration gives |U_i U_j U_k| = 18, so the
    # clause is only sound with U_0 involved.)
    triple_prod = True
    for j in range(1, nsubs):
        for k in range(j + 1, nsubs):
            if len(product_set(G, sorted(stars[j - 1]), subs[k].elements)) != G.n:
                triple_prod = False
                report["witness"] = {"triple_product": [0, j, k]}
    report["triple_products"] = triple_prod

    report["ok"] = all(
        report[k]
        for k in (
            "phi_in_u0",
            "ui_elementary_abelian",
            "conjugates_in_u0ui",
            "cover",
            "unique_factorisation",
            "triple_products",
        )
    )
    return report


# ----------------------------------------------------------------------
# structural filters


@dataclass
class FilterReport:
    """Outcome of the candidate-group filter predicates."""

    passed: bool
    conditions: Dict[str, bool]
    notes: Dict[str, object] = field(default_factory=dict)


def _cube_root(n: int) -> int:
    q = round(n ** (1 / 3))
    for cand in (q - 1, q, q + 1):
        if cand > 0 and cand**3 == n:
            return cand
    raise ValueError(f"group order {n} is not a cube")


def _is_elem_abelian(G: FiniteGroup, elems: Sequence[int], p: int) -> bool:
    orders = G.element_orders()
    if any(int(orders[g]) > p for g in elems):
        return False
    return all(G.mul[a, b] == G.mul[b, a] for a in elems for b in elems)


def _abelian_basis(G: FiniteGroup, elems: Sequence[int]) -> List[int]:
    """A minimal generating set of an elementary abelian 2-subgroup,
    chosen greedily in element order."""
    basis: List[int] = []
    span = {0}
    for g in elems:
        if g not in span:
            basis.append(g)
            span |= {int(G.mul[x, g]) for x in span}
    return basis


def _elem_ab_subgroups(G: FiniteGroup, big: Subgroup, order: int) -> List[Subgroup]:
    """All subgroups of a given order of an elementary abelian subgroup."""
    basis = _abelian_basis(G, big.elements)
    r = len(basis)
    k = order.bit_length() - 1
    out = []
    for sub in gf2.enumerate_subspaces(r, k):
        els = {0}
        for row in sub.basis:
            g = 0
            for i in range(r):
                if (row >> i) & 1:
                    g = int(G.mul[g, basis[i]])
            els |= {int(G.mul[x, g]) for x in els}
        out.append(Subgroup(G, tuple(sorted(els))))
    return out


def _preimage(G: FiniteGroup, proj: np.ndarray, elems: Sequence[int]) -> Subgroup:
    idx = np.nonzero(np.isin(proj, np.asarray(list(elems))))[0]
    return Subgroup(G, tuple(int(x) for x in idx))


def structural_filter(G: FiniteGroup) -> FilterReport:
    """The necessary conditions a group of order q^3 must satisfy to
    admit an AS-configuration, quantified over candidate subgroups
    U_0/Phi of the Frattini quotient.

    For odd q only the Frattini-size bound applies.  For 2-groups the
    conditions are: nonabelian; |Phi| <= q; some index-q candidate U_0
    containing Phi satisfies (i) U_0 <= Z(G) implies exponent 4 and
    U_0 = Z(G) with U_0^2 = G^2 = Phi(G); (ii) Z(G) not elementary
    abelian implies Z(G) <= U_0; (iii) U_0 elementary abelian implies
    exponent 4, Z(G) elementary abelian, U_0 not inside Z(G); and no
    extraspecial epimorphic image of order 8 or 32.
    """
    q = _cube_root(G.n)
    p = _prime_of(G.n)
    conditions: Dict[str, bool] = {}
    notes: Dict[str, object] = {}
    frat = frattini(G)
    conditions["frattini_small"] = frat.order <= q
    if p != 2:
        return FilterReport(conditions["frattini_small"], conditions, notes)

    conditions["nonabelian"] = not G.is_abelian()
    if not conditions["nonabelian"]:
        notes["abelian_bypass"] = True
    if not (conditions["nonabelian"] and conditions["frattini_small"]):
        conditions["u0_candidate"] = False
    elif frat.order == q:
        # U_0 is forced to be the Frattini subgroup itself.
        z = center(G)
        zset, u0set = z.element_set(), frat.element_set()
        flag = zset < u0set  # Z(G) < U_0 strictly
        flag = flag and (not _is_elem_abelian(G, frat.elements, 2) or exponent(G) == 4)
        conditions["u0_candidate"] = flag
    else:
        Q, proj = quotient(G, frat)
        z = center(G)
        zset = z.element_set()
        exp = exponent(G)
        z_elem_ab = _is_elem_abelian(G, z.elements, 2)
        g2 = agemo(G, 1).element_set()
        fratset = frat.element_set()
        full = Subgroup(Q, tuple(range(Q.n)))
        found = False
        for sub in _elem_ab_subgroups(Q, full, q // frat.order):
            u0 = _preimage(G, proj, sub.elements)
            u0set = u0.element_set()
            in_z = u0set <= zset
            flag = (not in_z) or (exp == 4 and u0set == zset)
            flag = flag and (z_elem_ab or zset <= u0set)
            if flag and _is_elem_abelian(G, u0.elements, 2):
                flag = exp == 4 and z_elem_ab and not in_z
            if flag and in_z:
                sq = subgroup_generate(G, {G.power(g, 2) for g in u0.elements})
                flag = sq.element_set() == g2 == fratset
            if flag:
                found = True
                break
        conditions["u0_candidate"] = found

    wit = extraspecial_quotient_exists(G)
    conditions["no_extraspecial_image"] = wit is None
    if wit is not None:
        notes["extraspecial_kernel_order"] = wit.order
    return FilterReport(all(conditions.values()), conditions, notes)


def _is_extraspecial(G: FiniteGroup) -> bool:
    z = center(G)
    if z.order != 2:
        return False
    return derived(G).elements == z.elements and frattini(G).elements == z.elements


def _index2_subgroups(G: FiniteGroup, H: Subgroup) -> List[Subgroup]:
    """Index-2 subgroups of an abelian subgroup H: kernels of the
    nonzero characters of H / H^2."""
    sq = subgroup_generate(G, {G.power(h, 2) for h in H.elements})
    basis = []
    span = set(sq.elements)
    spanlist = list(sq.elements)
    for h in H.elements:
        if h not in span:
            basis.append(h)
            spanlist += [int(G.mul[x, h]) for x in spanlist]
            span = set(spanlist)
    r = len(basis)
    # coordinates of each element of H over the basis mod squares
    sqset = sq.element_set()
    coord: Dict[int, int] = {}
    for v in range(1 << r):
        g = 0
        for i in range(r):
            if (v >> i) & 1:
                g = int(G.mul[g, basis[i]])
        for s in sq.elements:
            coord[int(G.mul[s, g])] = v
    out = []
    for w in range(1, 1 << r):
        els = tuple(h for h in H.elements if bin(coord[h] & w).count("1") % 2 == 0)
        out.append(Subgroup(G, els))
    return out


def extraspecial_quotient_exists(G: FiniteGroup) -> Optional[Subgroup]:
    """A normal subgroup N of index 8 or 32 with extraspecial quotient,
    or None.

    Every extraspecial image of order 8 or 32 has class 2 and exponent
    4, so it factors through G / <g^4, [[G,G],G]>; inside a class-2
    exponent-4 group with |G'| = 2, the kernel of such an image meets
    G' trivially, hence is central and of index 2 in Z(G).  Larger G'
    reduces to that case by quotienting an index-2 subgroup of G'.
    """
    if G.n < 8 or _prime_of(G.n) != 2:
        return None
    der = derived(G)
    if der.order == 1:
        return None
    gens = {G.power(g, 4) for g in range(G.n)}
    gens |= {G.commutator(d, g) for d in der.elements for g in range(G.n)}
    K = subgroup_generate(G, gens)
    if K.order > 1:
        Q, proj = quotient(G, K)
        wit = extraspecial_quotient_exists(Q)
        return None if wit is None else _preimage(G, proj, wit.elements)
    # G now has class <= 2 and exponent <= 4.
    if der.order > 2:
        for M in _index2_subgroups(G, der):  # G' is central, so M is normal
            Q, proj = quotient(G, M)
            wit = extraspecial_quotient_exists(Q)
            if wit is not None:
                return _preimage(G, proj, wit.elements)
        return None
    c = der.elements[1]
    z = center(G)
    for index in (8, 32):
        if G.n % index:
            continue
        target = G.n // index
        if target == 1:
            if _is_extraspecial(G):
                return Subgroup(G, (0,))
            continue
        # N central with N cap G' = 1 forces N of index 2 in Z(G).
        if z.order != 2 * target:
            continue
        for N in _index2_subgroups(G, z):
            if c in N.element_set():
                continue
            Q, _ = quotient(G, N)
            if _is_extraspecial(Q):
                return N
    return None


# ----------------------------------------------------------------------
# subgroup counting and the compatibility clique


def good_subgroups(G: FiniteGroup, q: int) -> List[Subgroup]:
    """Non-normal subgroups of order q meeting Phi(G) trivially.

    In a 2-group, H cap Phi = 1 forces H elementary abelian (squares
    and commutators land in Phi), so the elementary abelian enumeration
    is exhaustive.
    """
    frat = frattini(G)
    subs = enumerate_elem_abelian_subgroups(G, q, avoid=[frat.elements])
    zset = center(G).element_set()
    if frat.element_set() <= zset:
        # With Phi central, h^g = h [h,g] and [h,g] in Phi, so such an H
        # is normal exactly when it is central.
        return [s for s in subs if not s.element_set() <= zset]
    return [s for s in subs if not is_normal(G, s)]


def enough_subgroups(G: FiniteGroup, q: int) -> bool:
    """At least q+1 pairwise non-conjugate non-normal subgroups of
    order q meeting Phi(G) trivially (vacuously true for abelian G,
    which is settled separately)."""
    if G.is_abelian():
        return True
    subs = good_subgroups(G, q)
    seen: set = set()
    classes = 0
    for s in subs:
        if s.key() in seen:
            continue
        orbit = {conjugate_subgroup(s, g).key() for g in range(G.n)}
        seen |= orbit
        classes += 1
        if classes >= q + 1:
            return True
    return False


def clique_size_qplus1(G: FiniteGroup, q: int) -> bool:
    """Is there a set of q+1 good subgroups pairwise satisfying
    Phi cap HK = Phi cap KH = K cap Phi H = H cap Phi K = 1?

    All four conditions are equivalent to Phi H cap Phi K = Phi, which
    depends only on the products Phi H; subgroups sharing a product are
    never adjacent, so the search runs on the distinct products.
    """
    if G.is_abelian():
        return True
    subs = good_subgroups(G, q)
    if len(subs) < q + 1:
        return False
    frat = frattini(G)
    stars = sorted({product_set(G, frat.elements, s.elements) for s in subs})
    m = len(stars)
    words = (G.n + 63) // 64
    masks = np.zeros((m, words), dtype=np.uint64)
    for i, star in enumerate(stars):
        for g in star:
            masks[i, g >> 6] |= np.uint64(1 << (g & 63))
    from ._kernels import popcount16_table

    m16 = masks.view(np.uint16).reshape(m, -1)
    adj = np.zeros((m, m), dtype=bool)
    chunk = max(1, (1 << 24) // (m16.shape[1] * m + 1))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        ands = m16[lo:hi, None, :] & m16[None, :, :]
        counts = popcount16_table[ands].sum(axis=2, dtype=np.int64)
        adj[lo:hi] = counts == frat.order
    np.fill_diagonal(adj, False)

    target = q + 1

    def extend(clique_len: int, cand: np.ndarray) -> bool:
        if clique_len == target:
            return True
        if clique_len + int(cand.sum()) < target:
            return False
        for v in np.nonzero(cand)[0]:
            nxt = cand & adj[v]
            nxt[: v + 1] = False
            if extend(clique_len + 1, nxt):
                return True
            cand[v] = False
            if clique_len + int(cand.sum()) < target:
                return False
        return False

    return extend(0, np.ones(m, dtype=bool))


# ----------------------------------------------------------------------
# configuration file format


def parse_config(text: str, G: FiniteGroup, validate: bool = True) -> ASConfiguration:
    """Line 1 'q: <n>', then q+2 lines 'U<i>: g1 g2 ...'.

    With validate=False only the syntax is enforced, so a caller can
    report semantic problems (wrong orders, duplicates) as verdicts
    rather than parse errors."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("q:"):
        raise ValueError("configuration file must start with 'q: <n>'")
    q = int(lines[0].split(":", 1)[1])
    body = lines[1:]
    if len(body) != q + 2:
        raise ValueError(f"expected {q + 2} subgroup lines, found {len(body)}")
    subs = []
    for i, ln in enumerate(body):
        label, _, rest = ln.partition(":")
        if label.strip() != f"U{i}":
            raise ValueError(f"line {i + 2}: expected label U{i}, got {label!r}")
        gens = [int(x) for x in rest.split()]
        subs.append(subgroup_generate(G, gens))
    cfg = ASConfiguration(G, q, tuple(subs))
    if validate:
        _validate(G, cfg)
    return cfg


def save_config(cfg: ASConfiguration) -> str:
    out = [f"q: {cfg.q}"]
    for i, u in enumerate(cfg.subgroups):
        gens = u.gens or u.elements[1:]
        out.append(f"U{i}: " + " ".join(str(g) for g in gens))
    return "\n".join(out) + "\n"
