"""Point-line incidence geometries: the two coset constructions and
full generalised-quadrangle verification.

A geometry of order (s, t) has s+1 points per line, t+1 lines per
point, and for every non-incident point-line pair exactly one point of
the line collinear with the point.  Both constructions take a verified
AS-configuration / Kantor family and hand the result to verify_gq,
which is the arbiter for all order claims.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .asconfig import ASConfiguration, KantorFamily
from .groups import FiniteGroup, product_set

__all__ = [
    "IncidenceGeometry",
    "as_quadrangle",
    "kantor_quadrangle",
    "verify_gq",
    "collinearity_srg",
    "regular_point",
    "transpose",
    "export_text",
]


@dataclass
class IncidenceGeometry:
    """Lines as sorted tuples of point indices, plus label maps."""

    n_points: int
    lines: List[Tuple[int, ...]]
    point_labels: List[object] = field(default_factory=list)
    line_labels: List[object] = field(default_factory=list)

    def incidence_matrix(self) -> np.ndarray:
        inc = np.zeros((self.n_points, len(self.lines)), dtype=bool)
        for j, ln in enumerate(self.lines):
            if len(set(ln)) != len(ln):
                raise ValueError(f"line {j} repeats a point")
            inc[list(ln), j] = True
        return inc

    def collinearity(self) -> np.ndarray:
        """Adjacency matrix of the collinearity graph (diagonal False)."""
        inc = self.incidence_matrix()
        common = inc.astype(np.int32) @ inc.astype(np.int32).T
        adj = common > 0
        np.fill_diagonal(adj, False)
        return adj


def as_quadrangle(cfg: ASConfiguration) -> IncidenceGeometry:
    """Points: the q^3 group elements; lines: the right cosets U_i g of
    all q+2 subgroups (the coset count (q+2)q^2 = (t+1)(st+1) for order
    (q-1, q+1) requires including U_0's cosets)."""
    from .asconfig import check_as_axioms

    G = cfg.group
    rep = check_as_axioms(G, cfg)
    if not rep["ok"]:
        raise ValueError(f"not an AS-configuration: {rep}")
    lines: List[Tuple[int, ...]] = []
    labels: List[object] = []
    for i, u in enumerate(cfg.subgroups):
        seen: set = set()
        uarr = np.asarray(u.elements, dtype=np.intp)
        for g in range(G.n):
            coset = tuple(sorted(int(x) for x in G.mul[uarr, g]))
            if coset not in seen:
                seen.add(coset)
                lines.append(coset)
                labels.append(("coset", i, coset[0]))
    return IncidenceGeometry(G.n, lines,
                             point_labels=[("element", g) for g in range(G.n)],
                             line_labels=labels)


def kantor_quadrangle(G: FiniteGroup, fam: KantorFamily, s: int, t: int) -> IncidenceGeometry:
    """The coset geometry of a Kantor family: points are the group
    elements, the cosets A*g, and a symbol infinity; lines are the
    cosets Ag and symbols [A]."""
    from .asconfig import check_kantor

    rep = check_kantor(G, fam, s, t)
    if not rep["ok"]:
        raise ValueError(f"not a Kantor family: {rep}")
    point_labels: List[object] = [("element", g) for g in range(G.n)]
    star_cosets: Dict[Tuple[int, Tuple[int, ...]], int] = {}
    for i, astar in enumerate(fam.Fstar):
        arr = np.asarray(astar.elements, dtype=np.intp)
        for g in range(G.n):
            coset = tuple(sorted(int(x) for x in G.mul[arr, g]))
            key = (i, coset)
            if key not in star_cosets:
                star_cosets[key] = G.n + len(star_cosets)
                point_labels.append(("star", i, coset[0]))
    infinity = G.n + len(star_cosets)
    point_labels.append(("infinity",))
    n_points = infinity + 1

    lines: List[Tuple[int, ...]] = []
    line_labels: List[object] = []
    for i, a in enumerate(fam.F):
        arr = np.asarray(a.elements, dtype=np.intp)
        seen: set = set()
        for g in range(G.n):
            coset = tuple(sorted(int(x) for x in G.mul[arr, g]))
            if coset in seen:
                continue
            seen.add(coset)
            # the unique coset of A* containing Ag (both contain g)
            astar_arr = np.asarray(fam.Fstar[i].elements, dtype=np.intp)
            star = tuple(sorted(int(x) for x in G.mul[astar_arr, coset[0]]))
            lines.append(coset + (star_cosets[(i, star)],))
            line_labels.append(("coset", i, coset[0]))
    for i in range(len(fam.F)):
        members = tuple(idx for (j, _), idx in star_cosets.items() if j == i)
        lines.append(tuple(sorted(members)) + (infinity,))
        line_labels.append(("bracket", i))
    return IncidenceGeometry(n_points, lines, point_labels, line_labels)


def verify_gq(geom: IncidenceGeometry) -> Tuple[int, int]:
    """Full generalised-quadrangle axiom scan; returns (s, t) or raises
    ValueError with the first violated axiom and a witness."""
    inc = geom.incidence_matrix()
    line_sizes = inc.sum(axis=0)
    if line_sizes.min() != line_sizes.max():
        j = int(np.argmin(line_sizes))
        raise ValueError(f"line {j} has {line_sizes[j]} points, others differ")
    s = int(line_sizes[0]) - 1
    degrees = inc.sum(axis=1)
    if degrees.min() != degrees.max():
        p = int(np.argmin(degrees))
        raise ValueError(f"point {p} lies on {degrees[p]} lines, others differ")
    t = int(degrees[0]) - 1
    common = inc.astype(np.int32) @ inc.astype(np.int32).T
    np.fill_diagonal(common, 0)
    if common.max() > 1:
        p, r = np.unravel_index(int(np.argmax(common)), common.shape)
        raise ValueError(f"points {p} and {r} lie on {common[p, r]} common lines")
    adj = common > 0
    counts = adj.astype(np.int32) @ inc.astype(np.int32)
    bad = (counts != 1) & ~inc
    if bad.any():
        p, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
        raise ValueError(
            f"point {p} sees {counts[p, j]} points of non-incident line {j}"
        )
    return s, t


def collinearity_srg(geom: IncidenceGeometry) -> Tuple[int, int, int, int]:
    """(v, k, lambda, mu) of the collinearity graph; raises if the
    graph is not strongly regular."""
    adj = geom.collinearity()
    v = geom.n_points
    degs = adj.sum(axis=1)
    if degs.min() != degs.max():
        raise ValueError("collinearity graph is not regular")
    k = int(degs[0])
    common = adj.astype(np.int32) @ adj.astype(np.int32).T
    lam_vals = common[adj]
    off = ~adj
    np.fill_diagonal(off, False)
    mu_vals = common[off]
    if lam_vals.min() != lam_vals.max() or mu_vals.min() != mu_vals.max():
        raise ValueError("collinearity graph is not strongly regular")
    return v, k, int(lam_vals[0]), int(mu_vals[0])


def regular_point(geom: IncidenceGeometry, p: int,
                  expected: Optional[int] = None) -> bool:
    """Is |{p, r}^{perp perp}| = t+1 for every r not collinear with p?

    perp sets follow the convention x in x^perp.
    """
    adj = geom.collinearity()
    if expected is None:
        inc = geom.incidence_matrix()
        expected = int(inc.sum(axis=1)[0])  # t + 1
    closed = adj.copy()
    np.fill_diagonal(closed, True)
    for r in range(geom.n_points):
        if r == p or adj[p, r]:
            continue
        perp = closed[p] & closed[r]
        hull = np.all(closed[:, perp], axis=1)
        if int(hull.sum()) != expected:
            return False
    return True


def transpose(geom: IncidenceGeometry) -> IncidenceGeometry:
    """The dual geometry: points become lines and vice versa."""
    inc = geom.incidence_matrix()
    lines = [tuple(int(x) for x in np.nonzero(inc[p])[0]) for p in range(geom.n_points)]
    return IncidenceGeometry(len(geom.lines), lines,
                             point_labels=list(geom.line_labels),
                             line_labels=list(geom.point_labels))


def export_text(geom: IncidenceGeometry) -> str:
    out = [f"line {j}: " + " ".join(str(p) for p in ln)
           for j, ln in enumerate(geom.lines)]
    return "\n".join(out) + "\n"
