"""Symmetry-pruned exhaustive searches: singular pseudo-arc enumeration
over the plane catalogue of a quadratic form, lifting arcs to candidate
subgroups, and AS-configuration backtracking at group level.

Pipeline shape: arc_seeds finds one canonical representative per orbit
of partial pseudo-arcs (orderly generation with minimal-image
rejection), extend_arcs completes them by depth-first search, lift_arc
turns arc planes into Frattini-complement candidate pools, and
as_backtrack searches those pools for (q+1)-families; a separate
complete_with_U0 pass adjoins the normal member.
"""
from __future__ import annotations

import multiprocessing
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import gf2
from ._kernels import pairwise_disjoint
from .asconfig import ASConfiguration, _cube_root, _elem_ab_subgroups, _preimage, check_as_axioms
from .groups import (
    CocycleGroup,
    FiniteGroup,
    Subgroup,
    center,
    complements,
    enumerate_elem_abelian_subgroups,
    frattini,
    is_normal,
    product_set,
    quotient,
    subgroup_generate,
)
from .permgroup import PermGroup, is_min_image, min_image
from .quadform import QuadraticForm, apply_matrix, isometry_generators, singular_subspaces

__all__ = [
    "PseudoArc",
    "SearchTrace",
    "PlaneCatalogue",
    "plane_action",
    "is_partial_pseudo_arc",
    "arc_seeds",
    "extend_arcs",
    "lift_arc",
    "as_backtrack",
    "complete_with_U0",
    "lemma53_counts",
    "minus_type_obstruction",
    "brute_force_as_configs",
]


@dataclass(frozen=True)
class PseudoArc:
    """m totally singular n-spaces, every three spanning the ambient
    space; members index into a PlaneCatalogue."""

    form: QuadraticForm
    members: Tuple[int, ...]


@dataclass
class SearchTrace:
    seed: Optional[Tuple[int, ...]]
    nodes: int = 0
    solutions: int = 0
    wall_time: float = 0.0


def plane_action(form: QuadraticForm, planes: Sequence[gf2.Subspace]) -> PermGroup:
    """The isometry generators as permutations of the plane catalogue."""
    index = {p.key(): i for i, p in enumerate(planes)}
    perms = []
    for g in isometry_generators(form):
        img = [
            index[gf2.rref([apply_matrix(g, b) for b in p.basis], form.dim).key()]
            for p in planes
        ]
        perms.append(img)
    return PermGroup(perms, len(planes))


class PlaneCatalogue:
    """Immutable search context: the totally singular planes of a form,
    bit-packed membership masks, the pairwise-disjointness matrix, and
    (where the form admits a structural generator set) the plane action
    of its isometry group."""

    def __init__(self, form: QuadraticForm, symmetry: bool = True):
        self.form = form
        self.planes: List[gf2.Subspace] = singular_subspaces(form, 3)
        self.n = len(self.planes)
        self.index: Dict[Tuple[int, ...], int] = {
            p.key(): i for i, p in enumerate(self.planes)
        }
        self.masks: List[int] = []
        for p in self.planes:
            m = 0
            for v in gf2.subspace_vectors(p):
                m |= 1 << v
            self.masks.append(m)
        words = ((1 << form.dim) + 63) // 64
        arr = np.zeros((self.n, words), dtype=np.uint64)
        for i, m in enumerate(self.masks):
            for w in range(words):
                arr[i, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
        self.disjoint = pairwise_disjoint(arr)
        self.group: Optional[PermGroup] = plane_action(form, self.planes) if symmetry else None
        self._span: Dict[Tuple[int, int], Tuple[int, int]] = {}

    def span_mask(self, i: int, j: int) -> Tuple[int, int]:
        """(membership mask, rank) of W_i + W_j, cached."""
        key = (i, j) if i < j else (j, i)
        hit = self._span.get(key)
        if hit is None:
            sp = gf2.span(self.planes[i], self.planes[j])
            m = 0
            for v in gf2.subspace_vectors(sp):
                m |= 1 << v
            hit = (m, sp.rank)
            self._span[key] = hit
        return hit

    def triple_spans(self, i: int, j: int, k: int) -> bool:
        """Does W_i + W_j + W_k fill the space?  By the dimension
        formula this needs |(W_i+W_j) cap W_k| = 2^(rank_ij + 3 - d)."""
        m, r = self.span_mask(i, j)
        need = r + 3 - self.form.dim
        if need < 0:
            return False
        return (m & self.masks[k]).bit_count() == (1 << need)

    def compatible(self, s: Sequence[int], x: int) -> bool:
        """Is s + [x] still a partial pseudo-arc?"""
        dj = self.disjoint
        for a in s:
            if not dj[a, x]:
                return False
        for ii in range(len(s)):
            for jj in range(ii + 1, len(s)):
                if not self.triple_spans(s[ii], s[jj], x):
                    return False
        return True


def is_partial_pseudo_arc(form: QuadraticForm, planes: Sequence[gf2.Subspace]) -> bool:
    """Every pair meets trivially and every triple spans the space."""
    planes = list(planes)
    d = form.dim
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            if gf2.meet(planes[i], planes[j]).rank != 0:
                return False
            for k in range(j + 1, len(planes)):
                vecs = planes[i].basis + planes[j].basis + planes[k].basis
                if gf2.rank_of(vecs, d) != d:
                    return False
    return True


def arc_seeds(cat: PlaneCatalogue, seed_size: int,
              trace: Optional[SearchTrace] = None) -> List[Tuple[int, ...]]:
    """One canonical representative (lexicographic orbit minimum) per
    orbit of partial pseudo-arcs of the given size.

    Orderly generation: a canonical set is only ever extended by a
    point larger than its maximum that is minimal in its orbit under
    the pointwise stabiliser (a non-minimal extension is never
    canonical), and the extension is kept iff it is its own minimal
    image."""
    group = cat.group
    if group is None:
        raise ValueError("arc_seeds needs a plane symmetry group")
    t0 = time.monotonic()
    out: List[Tuple[int, ...]] = []

    def rec(s: List[int], node: PermGroup) -> None:
        if trace is not None:
            trace.nodes += 1
        if len(s) == seed_size:
            out.append(tuple(s))
            return
        mx = s[-1] if s else -1
        for x in np.unique(node.orbit_min):
            x = int(x)
            if x <= mx:
                continue
            if not cat.compatible(s, x):
                continue
            cand = s + [x]
            if is_min_image(group, cand):
                rec(cand, node.stabilizer(x))

    rec([], group)
    if trace is not None:
        trace.solutions = len(out)
        trace.wall_time = time.monotonic() - t0
    return out


def _extend_one(cat: PlaneCatalogue, seed: Tuple[int, ...],
                target: int) -> Tuple[List[Tuple[int, ...]], int]:
    """All completions of one seed to size target (raw, not deduped).
    Returns (completions, node count)."""
    s = list(seed)
    seedset = set(s)
    cands = [x for x in range(cat.n) if x not in seedset and cat.compatible(s, x)]
    results: List[Tuple[int, ...]] = []
    nodes = 0

    def dfs(cur: List[int], pool: List[int]) -> None:
        nonlocal nodes
        nodes += 1
        need = target - len(cur)
        if need == 0:
            results.append(tuple(sorted(cur)))
            return
        for pos, c in enumerate(pool):
            if len(pool) - pos < need:
                break
            nxt = []
            for d in pool[pos + 1:]:
                if not cat.disjoint[c, d]:
                    continue
                if all(cat.triple_spans(a, c, d) for a in cur):
                    nxt.append(d)
            dfs(cur + [c], nxt)

    dfs(s, cands)
    return results, nodes


_POOL_CTX: Optional[Tuple[PlaneCatalogue, int]] = None


def _pool_worker(seed: Tuple[int, ...]) -> Tuple[List[Tuple[int, ...]], int]:
    cat, target = _POOL_CTX
    return _extend_one(cat, seed, target)


def extend_arcs(cat: PlaneCatalogue, seeds: Sequence[Tuple[int, ...]],
                target: int, threads: int = 1,
                traces: Optional[List[SearchTrace]] = None) -> List[PseudoArc]:
    """All completions of the seeds to size target, deduplicated up to
    the catalogue symmetry by minimal image (by sorted tuple when the
    catalogue carries no symmetry group)."""
    global _POOL_CTX
    seeds = list(seeds)
    if threads > 1 and len(seeds) > 1:
        _POOL_CTX = (cat, target)
        try:
            with multiprocessing.get_context("fork").Pool(threads) as pool:
                raw = pool.map(_pool_worker, seeds, chunksize=1)
        finally:
            _POOL_CTX = None
    else:
        raw = [_extend_one(cat, s, target) for s in seeds]
    canon: Dict[Tuple[int, ...], None] = {}
    for seed, (completions, nodes) in zip(seeds, raw):
        if traces is not None:
            tr = SearchTrace(seed=tuple(seed), nodes=nodes,
                             solutions=len(completions))
            traces.append(tr)
        for comp in completions:
            if cat.group is not None:
                comp = min_image(cat.group, comp)
            canon.setdefault(comp, None)
    return [PseudoArc(cat.form, members) for members in sorted(canon)]


# ----------------------------------------------------------------------
# lifting to group level


def lift_arc(G: CocycleGroup, planes: Sequence[gf2.Subspace]
             ) -> Tuple[List[Subgroup], List[gf2.Subspace]]:
    """For each plane: its full preimage (order 16) under the Frattini
    quotient, then every complement of Phi(G) inside it.  Returns the
    combined candidate pool (sorted by canonical key) and any planes
    whose preimage had no complement (dropped)."""
    frat = frattini(G)
    top = 1 << G.d
    pool: List[Subgroup] = []
    dropped: List[gf2.Subspace] = []
    for p in planes:
        elems = []
        for v in gf2.subspace_vectors(p):
            elems.append(v)
            elems.append(v | top)
        pre = Subgroup(G, tuple(sorted(elems)))
        comps = complements(pre, frat)
        if not comps:
            dropped.append(p)
            continue
        pool.extend(comps)
    pool.sort(key=lambda s: s.key())
    return pool, dropped


def as_backtrack(G: FiniteGroup, candidates: Sequence[Subgroup], target: int,
                 trace: Optional[SearchTrace] = None
                 ) -> List[Tuple[Subgroup, ...]]:
    """All target-sized subsets of the candidates in which every third
    member meets every pairwise product trivially: U_a U_b cap U_c = 1
    for each pair {a, b} already placed and each new c.  For families
    of size >= 3 this forces pairwise trivial intersections and, by
    orientation rearrangement, the full AS2 condition."""
    cands = sorted(candidates, key=lambda s: s.key())
    n = len(cands)
    masks = []
    for s in cands:
        m = 0
        for e in s.elements:
            m |= 1 << e
        masks.append(m)
    prod_cache: Dict[Tuple[int, int], int] = {}

    def pmask(i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        v = prod_cache.get(key)
        if v is None:
            v = 0
            for e in product_set(G, cands[i].elements, cands[j].elements):
                v |= 1 << e
            prod_cache[key] = v
        return v

    out: List[Tuple[Subgroup, ...]] = []
    t0 = time.monotonic()

    def dfs(cur: List[int], start: int) -> None:
        if trace is not None:
            trace.nodes += 1
        if len(cur) == target:
            out.append(tuple(cands[i] for i in cur))
            return
        for c in range(start, n):
            if n - c < target - len(cur):
                break
            ok = True
            for ii in range(len(cur)):
                for jj in range(ii + 1, len(cur)):
                    if masks[c] & pmask(cur[ii], cur[jj]) != 1:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                dfs(cur + [c], c + 1)

    dfs([], 0)
    if trace is not None:
        trace.solutions = len(out)
        trace.wall_time = time.monotonic() - t0
    return out


def _order_q_subgroups(G: FiniteGroup, q: int) -> List[Subgroup]:
    orders = G.element_orders()
    found: Dict[Tuple[int, ...], Subgroup] = {}
    if q in (2, 3):
        for g in range(1, G.n):
            if orders[g] == q:
                s = subgroup_generate(G, (g,))
                found.setdefault(s.key(), s)
    elif q == 4:
        for g in range(1, G.n):
            if orders[g] == 4:
                s = subgroup_generate(G, (g,))
                found.setdefault(s.key(), s)
        invol = [g for g in range(1, G.n) if orders[g] == 2]
        for ai, a in enumerate(invol):
            for b in invol[ai + 1:]:
                if G.mul[a, b] != G.mul[b, a]:
                    continue
                s = subgroup_generate(G, (a, b))
                if s.order == 4:
                    found.setdefault(s.key(), s)
    else:
        raise ValueError(f"order-{q} subgroup enumeration not supported")
    return [found[k] for k in sorted(found)]


def complete_with_U0(G: FiniteGroup, family: Sequence[Subgroup]
                     ) -> List[ASConfiguration]:
    """All completions of a (q+1)-family to a full AS-configuration:
    normal U_0 of order q containing Phi(G), checked against AS2."""
    q = _cube_root(G.n)
    frat = frattini(G)
    if q % frat.order:
        return []
    cands: List[Subgroup]
    if frat.order == q:
        cands = [frat]
    elif frat.order == 1:
        cands = _order_q_subgroups(G, q)
    else:
        Q, proj = quotient(G, frat)
        full = Subgroup(Q, tuple(range(Q.n)))
        cands = [
            _preimage(G, proj, s.elements)
            for s in _elem_ab_subgroups(Q, full, q // frat.order)
        ]
    fam_keys = {u.key() for u in family}
    out: List[ASConfiguration] = []
    for u0 in cands:
        if u0.order != q or u0.key() in fam_keys or not is_normal(G, u0):
            continue
        cfg = ASConfiguration(G, q, (u0,) + tuple(family))
        if check_as_axioms(G, cfg)["ok"]:
            out.append(cfg)
    return out


# ----------------------------------------------------------------------
# the order-512 rule-out computations that do not go through arcs


def _product_mask(G: FiniteGroup, A: Sequence[int], B: Sequence[int]) -> np.ndarray:
    m = np.zeros(G.n, dtype=bool)
    m[list(product_set(G, A, B))] = True
    m[0] = False
    return m


def lemma53_counts(G: FiniteGroup, rng=None) -> Dict[str, object]:
    """The orbit-free counting argument for the mixed-radical group:
    fix U_0 = Z(G) and any valid (U_1, U_2); count the pool of
    elementary abelian order-8 subgroups meeting U_0U_1, U_0U_2, U_1U_2
    trivially, then for each third choice the compatible fourth pool,
    and finally search the pool for families of size 6 (three pool
    members beyond U_0, U_1, U_2)."""
    u0 = center(G)
    if u0.order != 8:
        raise ValueError("expected |Z(G)| = 8")
    pool1 = enumerate_elem_abelian_subgroups(G, 8, avoid=[u0.elements])
    u1 = rng.choice(pool1) if rng is not None else pool1[0]
    p01 = product_set(G, u0.elements, u1.elements)
    pool2 = enumerate_elem_abelian_subgroups(G, 8, avoid=[p01])
    u2 = rng.choice(pool2) if rng is not None else pool2[0]
    p02 = product_set(G, u0.elements, u2.elements)
    p12 = product_set(G, u1.elements, u2.elements)
    pool = enumerate_elem_abelian_subgroups(G, 8, avoid=[p01, p02, p12])
    n = len(pool)

    membership = np.zeros((n, G.n), dtype=bool)
    for i, u in enumerate(pool):
        membership[i, list(u.elements)] = True
    membership[:, 0] = False
    bad = np.zeros((n, G.n), dtype=bool)
    base = (u0, u1, u2)
    for i, u3 in enumerate(pool):
        for b in base:
            bad[i] |= _product_mask(G, b.elements, u3.elements)
    overlap = bad.astype(np.uint8) @ membership.T.astype(np.uint8)
    compat = overlap == 0
    if not np.array_equal(compat, compat.T):  # pragma: no cover
        raise AssertionError("compatibility relation is not symmetric")
    counts = compat.sum(axis=1)
    vals, reps = np.unique(counts, return_counts=True)
    distribution = {int(v): int(c) for v, c in zip(vals, reps)}

    # the size-6 search: for each third choice U_3 with a nonempty
    # fourth pool, no six members of that pool can join
    # (U_0, U_1, U_2, U_3) - which would complete the configuration.
    # Depth-first, one orientation tested per new triple; the blocked
    # mask accumulates U_x U_c products that future members must avoid.
    size6 = 0
    max_partial = 0
    order = np.arange(n)
    pmask_cache: Dict[Tuple[int, int], np.ndarray] = {}

    def pmask(i: int, j: int) -> np.ndarray:
        key = (i, j) if i < j else (j, i)
        v = pmask_cache.get(key)
        if v is None:
            v = _product_mask(G, pool[i].elements, pool[j].elements)
            pmask_cache[key] = v
        return v

    def dfs(third: int, cur: List[int], cands: np.ndarray) -> None:
        nonlocal size6, max_partial
        max_partial = max(max_partial, len(cur))
        if len(cur) == 6:
            size6 += 1
            return
        for pos in range(len(cands)):
            if len(cands) - pos < 6 - len(cur):
                break
            c = int(cands[pos])
            rest = cands[pos + 1:]
            rest = rest[compat[c][rest]]
            blocked = pmask(third, c).copy()
            for x in cur:
                blocked |= pmask(x, c)
            rest = rest[~(membership[rest] & blocked).any(axis=1)]
            dfs(third, cur + [c], rest)

    for a in range(n):
        pool_a = order[compat[a]]
        if len(pool_a):
            dfs(a, [], pool_a)
    return {
        "max_partial_beyond_third": max_partial,
        "u1": u1,
        "u2": u2,
        "pool": n,
        "distribution": distribution,
        "size6_families": size6,
    }


def minus_type_obstruction(G: CocycleGroup) -> Dict[str, object]:
    """The centraliser obstruction for the minus-type group: for every
    totally singular plane W and every lifted candidate U over it,
    C_G(U) is exactly the preimage of W^perp; since Z(G) has order 2,
    three pairwise-compatible candidates cannot coexist.  The arc
    pipeline is run independently and must confirm zero families."""
    form = G.form
    z = center(G)
    report: Dict[str, object] = {"center_order": z.order}
    cat = PlaneCatalogue(form)
    top = 1 << G.d
    comm = np.asarray(G.mul) == np.asarray(G.mul).T
    centraliser_ok = True
    n_candidates = 0
    for p in cat.planes:
        rows = [form.bilinear_row(b) for b in p.basis]
        perp = [v for v in range(1 << G.d)
                if all(bin(r & v).count("1") % 2 == 0 for r in rows)]
        pre_perp = sorted([v for v in perp] + [v | top for v in perp])
        pool, dropped = lift_arc(G, [p])
        if dropped:
            centraliser_ok = False
            continue
        for u in pool:
            n_candidates += 1
            cz = np.nonzero(comm[:, list(u.elements)].all(axis=1))[0]
            if [int(x) for x in cz] != pre_perp:
                centraliser_ok = False
    report["n_planes"] = cat.n
    report["n_candidates"] = n_candidates
    report["centralizer_is_perp_preimage"] = centraliser_ok
    seeds = arc_seeds(cat, 6)
    arcs = extend_arcs(cat, seeds, 9)
    report["seeds"] = len(seeds)
    report["arcs"] = len(arcs)
    families = 0
    for arc in arcs:  # pragma: no cover - expected to be empty
        pool, _ = lift_arc(G, [cat.planes[i] for i in arc.members])
        families += len(as_backtrack(G, pool, 9))
    report["families"] = families
    report["ok"] = bool(centraliser_ok and z.order == 2 and families == 0)
    return report


def brute_force_as_configs(G: FiniteGroup) -> List[ASConfiguration]:
    """Ground-truth oracle: enumerate every order-q subgroup, search all
    (q+2)-families by plain backtracking (no symmetry), then emit one
    configuration per normal member acting as U_0."""
    if G.n not in (8, 27, 64):
        raise ValueError("brute force supports orders 8, 27 and 64 only")
    q = _cube_root(G.n)
    subs = _order_q_subgroups(G, q)
    m = len(subs)
    masks = np.zeros(m, dtype=np.uint64)
    for i, s in enumerate(subs):
        v = 0
        for e in s.elements:
            v |= 1 << e
        masks[i] = v
    prod_cache: Dict[Tuple[int, int], np.uint64] = {}

    def pmask(i: int, j: int) -> np.uint64:
        key = (i, j)
        v = prod_cache.get(key)
        if v is None:
            acc = 0
            for e in product_set(G, subs[i].elements, subs[j].elements):
                acc |= 1 << e
            v = np.uint64(acc)
            prod_cache[key] = v
        return v

    one = np.uint64(1)
    families: List[Tuple[int, ...]] = []
    target = q + 2

    def dfs(cur: List[int], pool: np.ndarray) -> None:
        if len(cur) == target:
            families.append(tuple(cur))
            return
        for pos in range(len(pool)):
            if len(pool) - pos < target - len(cur):
                break
            c = int(pool[pos])
            rest = pool[pos + 1:]
            keep = (masks[rest] & masks[c]) == one
            for a in cur:
                keep &= (masks[rest] & pmask(a, c)) == one
            dfs(cur + [c], rest[keep])

    dfs([], np.arange(m))
    out: List[ASConfiguration] = []
    for fam in families:
        for u0i in fam:
            if not is_normal(G, subs[u0i]):
                continue
            rest = tuple(subs[i] for i in fam if i != u0i)
            cfg = ASConfiguration(G, q, (subs[u0i],) + rest)
            if check_as_axioms(G, cfg)["ok"]:
                out.append(cfg)
    return out
