"""Exact linear algebra over GF(2) with bit-packed vectors.

A vector in F_2^d is an int with the low d bits used; bit i is the
coefficient of e_{i+1}.  A subspace is a tuple of basis vectors in
reduced row-echelon form, which doubles as a canonical key.
"""
from __future__ import annotations

from typing import Iterable, Iterator, List, Tuple

__all__ = [
    "MAX_DIM",
    "Subspace",
    "rref",
    "span",
    "meet",
    "contains",
    "subspace_vectors",
    "enumerate_subspaces",
    "rank_of",
    "complement_basis",
    "kernel",
    "solve",
    "format_vector",
    "parse_vector",
    "subspace_count",
]

MAX_DIM = 16


def _check_dim(dim: int) -> None:
    if not 0 <= dim <= MAX_DIM:
        raise ValueError(f"ambient dimension must be in 0..{MAX_DIM}, got {dim}")


def _check_vector(v: int, dim: int) -> None:
    if v < 0 or v >> dim:
        raise ValueError(f"vector {v} does not fit in dimension {dim}")


class Subspace:
    """A subspace of F_2^dim, stored as a reduced row-echelon basis."""

    __slots__ = ("dim", "basis")

    def __init__(self, dim: int, basis: Tuple[int, ...]):
        # Callers should construct through rref(); this trusts its input.
        self.dim = dim
        self.basis = basis

    @property
    def rank(self) -> int:
        return len(self.basis)

    def key(self) -> Tuple[int, ...]:
        """Canonical key: the RREF rows as an int tuple."""
        return self.basis

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.dim == other.dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.basis))

    def __repr__(self) -> str:
        rows = ", ".join(format_vector(v, self.dim) for v in self.basis)
        return f"Subspace(dim={self.dim}, [{rows}])"

    def __contains__(self, v: int) -> bool:
        return contains(self, v)

    def __iter__(self) -> Iterator[int]:
        return subspace_vectors(self)


def rref(vectors: Iterable[int], dim: int) -> Subspace:
    """Reduced row-echelon basis of the span of the given vectors."""
    _check_dim(dim)
    rows: List[int] = []
    for v in vectors:
        _check_vector(v, dim)
        for r in rows:
            low = r & -r
            if v & low:
                v ^= r
        if v:
            low = v & -v
            rows = [r ^ v if r & low else r for r in rows]
            rows.append(v)
    rows.sort(key=lambda r: r & -r)
    return Subspace(dim, tuple(rows))


def rank_of(vectors: Iterable[int], dim: int) -> int:
    """Rank of a set of vectors (no basis reduction kept)."""
    rows: List[int] = []
    for v in vectors:
        for r in rows:
            v = min(v, v ^ r)
        if v:
            rows.append(v)
            rows.sort(reverse=True)
    return len(rows)


def span(a: Subspace, b: Subspace) -> Subspace:
    """Smallest subspace containing both operands."""
    if a.dim != b.dim:
        raise ValueError("ambient dimension mismatch")
    return rref(a.basis + b.basis, a.dim)


def meet(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces, via the Zassenhaus trick."""
    if a.dim != b.dim:
        raise ValueError("ambient dimension mismatch")
    d = a.dim
    # Zassenhaus: rows (x|x) for x in a and (y|0) for y in b, eliminating
    # on the first block (stored in the high bits so it wins pivots); the
    # reduced rows whose first block vanished carry an intersection basis.
    rows = [(v << d) | v for v in a.basis] + [v << d for v in b.basis]
    mask = (1 << d) - 1
    reduced: List[int] = []
    for v in rows:
        for r in reduced:
            v = min(v, v ^ r)
        if v:
            reduced.append(v)
    inter = [v & mask for v in reduced if (v >> d) == 0]
    return rref(inter, d)


def contains(s: Subspace, v: int) -> bool:
    """Membership of a vector in a subspace."""
    _check_vector(v, s.dim)
    for r in s.basis:
        if v & (r & -r):
            v ^= r
    return v == 0


def subspace_vectors(s: Subspace) -> Iterator[int]:
    """All 2^rank vectors of a subspace, Gray-code free, zero first."""
    k = len(s.basis)
    for m in range(1 << k):
        v = 0
        mm = m
        i = 0
        while mm:
            if mm & 1:
                v ^= s.basis[i]
            mm >>= 1
            i += 1
        yield v


def complement_basis(s: Subspace) -> Tuple[int, ...]:
    """Standard basis vectors completing s to the full space."""
    pivots = 0
    for r in s.basis:
        pivots |= r & -r
    return tuple(1 << i for i in range(s.dim) if not (pivots >> i) & 1)


def kernel(rows: List[int], dim: int) -> Subspace:
    """Kernel of the linear map x -> (x . row_i)_i given by bit rows."""
    _check_dim(dim)
    basis = []
    # Column-style elimination on the transpose: track, for each standard
    # basis vector, its image and combine to kill images greedily.
    pairs = [(1 << i, sum(((rows[j] >> i) & 1) << j for j in range(len(rows))))
             for i in range(dim)]
    reduced: List[Tuple[int, int]] = []
    for vec, img in pairs:
        for rvec, rimg in reduced:
            if img & (rimg & -rimg):
                img ^= rimg
                vec ^= rvec
        if img:
            reduced.append((vec, img))
        else:
            basis.append(vec)
    return rref(basis, dim)


def solve(rows: List[int], dim: int, target: int) -> int | None:
    """One solution x of (x . row_i) = target_i, or None."""
    aug = [(rows[j] | ((target >> j & 1) << dim)) for j in range(len(rows))]
    sol = kernel(aug, dim + 1)
    for v in subspace_vectors(sol):
        if (v >> dim) & 1:
            return v & ((1 << dim) - 1)
    return None


def format_vector(v: int, dim: int) -> str:
    """Little-endian bit string; '10100000' is e1+e3 in d=8."""
    _check_vector(v, dim)
    return "".join("1" if (v >> i) & 1 else "0" for i in range(dim))


def parse_vector(s: str, dim: int | None = None) -> Tuple[int, int]:
    """Inverse of format_vector; returns (vector, dim)."""
    s = s.strip()
    if dim is None:
        dim = len(s)
    if len(s) != dim or set(s) - {"0", "1"}:
        raise ValueError(f"bad bit string {s!r} for dimension {dim}")
    v = 0
    for i, c in enumerate(s):
        if c == "1":
            v |= 1 << i
    return v, dim


def subspace_count(d: int, k: int) -> int:
    """Gaussian binomial [d choose k]_2."""
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= (1 << (d - i)) - 1
        den *= (1 << (k - i)) - 1
    return num // den


def enumerate_subspaces(d: int, k: int) -> Iterator[Subspace]:
    """Every k-subspace of F_2^d exactly once, in a fixed canonical order.

    Iterates over pivot-column sets, then over assignments of the free
    entries of the reduced echelon form.
    """
    _check_dim(d)
    if k < 0 or k > d:
        return
    if k == 0:
        yield Subspace(d, ())
        return
    from itertools import combinations

    for pivots in combinations(range(d), k):
        pivset = set(pivots)
        # Free positions of row i: columns j > pivots[i], j not a pivot.
        free = [[j for j in range(p + 1, d) if j not in pivset] for p in pivots]
        total = sum(len(f) for f in free)
        for assign in range(1 << total):
            rows = []
            pos = 0
            for i, p in enumerate(pivots):
                row = 1 << p
                for j in free[i]:
                    if (assign >> pos) & 1:
                        row |= 1 << j
                    pos += 1
                rows.append(row)
            yield Subspace(d, tuple(rows))
