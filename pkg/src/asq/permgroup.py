"""Permutation groups on 0..n-1: stabiliser chains, orbits, and
lexicographically minimal images of point sets.

Permutations are numpy int32 arrays p with p[i] = image of i.  compose(p, q)
applies p first, then q.  The minimal-image routine is the isomorph
rejector behind all symmetry-pruned searches: min_image(G, S) returns the
lexicographically least sorted tuple in the orbit of the set S under G,
computed by stabiliser-chain backtracking (never by materialising the
orbit of S).
"""
from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

__all__ = ["compose", "inverse", "identity", "PermGroup", "min_image", "is_min_image"]


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int32)


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """p followed by q."""
    return q[p]


def inverse(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=p.dtype)
    return out


def _is_identity(p: np.ndarray) -> bool:
    return bool(np.all(p == np.arange(len(p), dtype=p.dtype)))


def _perm_key(p: np.ndarray) -> bytes:
    return p.tobytes()


class _Level:
    """One level of a stabiliser chain: a base point, the strong
    generators fixing all earlier base points, and a transversal.

    Transversal entries, once computed, are never replaced; this keeps
    previously verified Schreier generators verified (membership proofs
    do not expire), so the `checked` cache stays sound.
    """

    __slots__ = ("base", "gens", "transversal", "checked")

    def __init__(self, base: int):
        self.base = base
        self.gens: List[np.ndarray] = []
        self.transversal: Dict[int, np.ndarray] = {}
        self.checked: set = set()

    def extend_orbit(self, n: int) -> None:
        tr = self.transversal
        if self.base not in tr:
            tr[self.base] = identity(n)
        queue = list(tr.keys())
        while queue:
            x = queue.pop()
            ux = tr[x]
            for g in self.gens:
                y = int(g[x])
                if y not in tr:
                    tr[y] = compose(ux, g)
                    queue.append(y)


class StabChain:
    """Deterministic Schreier-Sims stabiliser chain (provably complete
    after complete(); order() of a partial chain never overestimates)."""

    def __init__(self, n: int):
        self.n = n
        self.levels: List[_Level] = []

    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= len(lv.transversal)
        return out

    def sift(self, p: np.ndarray, start: int = 0) -> Tuple[Optional[np.ndarray], int]:
        """Factor p through transversals; returns (residue, level) where
        residue is None iff p factors completely (membership proof)."""
        g = p
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            x = int(g[lv.base])
            if x == lv.base:
                continue
            u = lv.transversal.get(x)
            if u is None:
                return g, i
            g = compose(g, inverse(u))
        if _is_identity(g):
            return None, len(self.levels)
        return g, len(self.levels)

    def _install(self, r: np.ndarray, first: int, last: int) -> None:
        """Add the sift residue r, which fixes base[0..last-1], to the
        generator sets of levels first..last (extending the base when
        last is one past the end)."""
        if last == len(self.levels):
            moved = int(np.nonzero(r != np.arange(self.n, dtype=np.int32))[0][0])
            self.levels.append(_Level(moved))
        for i in range(first, last + 1):
            lv = self.levels[i]
            lv.gens.append(r)
            lv.extend_orbit(self.n)

    def add_gen(self, p: np.ndarray) -> bool:
        """Sift an external generator and install its residue.  Returns
        True if the chain grew."""
        r, lvl = self.sift(p)
        if r is None:
            return False
        self._install(r, 0, lvl)
        return True

    def complete(self) -> None:
        """Classic Schreier-Sims closure: verify that every Schreier
        generator of every level sifts to identity through the levels
        below it; install failures and re-verify downward."""
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            dirty = False
            for x in sorted(lv.transversal):
                ux = lv.transversal[x]
                for gi in range(len(lv.gens)):
                    if (x, gi) in lv.checked:
                        continue
                    g = lv.gens[gi]
                    y = int(g[x])
                    s = compose(compose(ux, g), inverse(lv.transversal[y]))
                    r, lvl = self.sift(s, i + 1)
                    lv.checked.add((x, gi))
                    if r is not None:
                        self._install(r, i + 1, lvl)
                        i = min(lvl, len(self.levels) - 1)
                        dirty = True
                        break
                if dirty:
                    break
            if not dirty:
                i -= 1

    def strong_gens(self) -> List[np.ndarray]:
        seen = {}
        for lv in self.levels:
            for g in lv.gens:
                seen.setdefault(_perm_key(g), g)
        return list(seen.values())


def _build_chain(gens: Sequence[np.ndarray], n: int) -> StabChain:
    chain = StabChain(n)
    for g in gens:
        chain.add_gen(np.asarray(g, dtype=np.int32))
    chain.complete()
    return chain


class PermGroup:
    """A permutation group given by generators, with cached stabiliser
    structure for orbit/transversal/minimal-image queries."""

    def __init__(self, gens: Iterable[Sequence[int]], degree: int,
                 order: Optional[int] = None):
        arrs = []
        seen = set()
        for g in gens:
            a = np.asarray(g, dtype=np.int32)
            if len(a) != degree:
                raise ValueError("generator degree mismatch")
            k = _perm_key(a)
            if k not in seen and not _is_identity(a):
                seen.add(k)
                arrs.append(a)
        self.gens = arrs
        self.n = degree
        self._order = order
        self._inv_gens: Optional[List[np.ndarray]] = None
        self._orbmin: Optional[np.ndarray] = None
        self._pred: Optional[np.ndarray] = None
        self._edge: Optional[np.ndarray] = None
        self._children: Dict[int, "PermGroup"] = {}

    # -- order ---------------------------------------------------------

    def order(self) -> int:
        if self._order is None:
            self._order = _build_chain(self.gens, self.n).order()
        return self._order

    # -- orbit structure (BFS forests rooted at orbit minima) ----------

    def _ensure_orbits(self) -> None:
        if self._orbmin is not None:
            return
        n = self.n
        orbmin = np.full(n, -1, dtype=np.int32)
        pred = np.full(n, -1, dtype=np.int32)
        edge = np.full(n, -1, dtype=np.int32)
        for root in range(n):
            if orbmin[root] != -1:
                continue
            orbmin[root] = root
            frontier = [root]
            while frontier:
                nxt = []
                for x in frontier:
                    for gi, g in enumerate(self.gens):
                        y = int(g[x])
                        if orbmin[y] == -1:
                            orbmin[y] = root
                            pred[y] = x
                            edge[y] = gi
                            nxt.append(y)
                frontier = nxt
        self._orbmin = orbmin
        self._pred = pred
        self._edge = edge
        self._inv_gens = [inverse(g) for g in self.gens]

    @property
    def orbit_min(self) -> np.ndarray:
        """orbit_min[x] = least point in the orbit of x."""
        self._ensure_orbits()
        return self._orbmin

    def orbits(self) -> List[List[int]]:
        self._ensure_orbits()
        out: Dict[int, List[int]] = {}
        for x in range(self.n):
            out.setdefault(int(self._orbmin[x]), []).append(x)
        return [out[k] for k in sorted(out)]

    def to_orbit_min(self, x: int) -> np.ndarray:
        """A group element t with t[x] = orbit_min[x]."""
        self._ensure_orbits()
        t = None
        while self._pred[x] != -1:
            step = self._inv_gens[int(self._edge[x])]
            t = step if t is None else compose(t, step)
            x = int(self._pred[x])
        return identity(self.n) if t is None else t

    # -- point stabiliser (known-order Schreier generators) ------------

    def stabilizer(self, point: int) -> "PermGroup":
        child = self._children.get(point)
        if child is not None:
            return child
        n = self.n
        tr: Dict[int, np.ndarray] = {point: identity(n)}
        order_here = self.order()
        frontier = [point]
        orbit_list = [point]
        while frontier:
            nxt = []
            for x in frontier:
                ux = tr[x]
                for g in self.gens:
                    y = int(g[x])
                    if y not in tr:
                        tr[y] = compose(ux, g)
                        nxt.append(y)
                        orbit_list.append(y)
            frontier = nxt
        target, rem = divmod(order_here, len(tr))
        if rem:
            raise AssertionError("orbit size does not divide the group order")
        chain = StabChain(n)
        done = target == 1
        if not done:
            for x in orbit_list:
                ux = tr[x]
                for g in self.gens:
                    y = int(g[x])
                    s = compose(compose(ux, g), inverse(tr[y]))
                    chain.add_gen(s)
                    if chain.order() == target:
                        done = True
                        break
                if done:
                    break
        if not done:
            # All Schreier generators are in; closure certifies the order.
            chain.complete()
            if chain.order() != target:  # pragma: no cover
                raise AssertionError("stabiliser closure missed the target order")
        child = PermGroup(chain.strong_gens(), n, order=target)
        self._children[point] = child
        return child

    def __repr__(self) -> str:
        o = self._order if self._order is not None else "?"
        return f"PermGroup(degree={self.n}, gens={len(self.gens)}, order={o})"


def min_image(group: PermGroup, points: Sequence[int],
              upper: Optional[Sequence[int]] = None) -> Optional[Tuple[int, ...]]:
    """Lexicographically least sorted tuple in the orbit of the set.

    With `upper` given (a sorted tuple), returns None as soon as the
    minimum is proven strictly smaller than `upper` - the fast path for
    canonicity testing during orderly generation.
    """
    node = group
    cands: set[FrozenSet[int]] = {frozenset(int(x) for x in points)}
    res: List[int] = []
    k = len(next(iter(cands)))
    if k != len(points):
        raise ValueError("duplicate points in set")
    for depth in range(k):
        if node.order() == 1:
            best = min(tuple(sorted(t)) for t in cands)
            out = tuple(res) + best
            if upper is not None and out < tuple(upper):
                return None
            return out
        om = node.orbit_min
        mu = min(int(om[x]) for t in cands for x in t)
        res.append(mu)
        if upper is not None:
            if mu < upper[depth]:
                return None
        new: set[FrozenSet[int]] = set()
        for t in cands:
            if min(int(om[x]) for x in t) != mu:
                continue
            for s in t:
                if int(om[s]) == mu:
                    tau = node.to_orbit_min(s)
                    new.add(frozenset(int(tau[x]) for x in t if x != s))
        node = node.stabilizer(mu)
        cands = new
    return tuple(res)


def is_min_image(group: PermGroup, points: Sequence[int]) -> bool:
    """True iff sorted(points) is the minimal image of its own orbit."""
    srt = tuple(sorted(int(x) for x in points))
    return min_image(group, srt, upper=srt) is not None
