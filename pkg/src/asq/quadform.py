"""Quadratic forms on F_2^d: radicals, Witt type, singular subspaces,
isometry-group generators, equivalence, and the field-reduction arc.

A form is stored by its upper-triangular coefficient matrix M with
Q(x) = x^T M x; the polarisation B = M + M^T is alternating.  Matrices
acting on F_2^d are tuples g of d ints, g[i] = image of e_{i+1}, so the
action is apply_matrix(g, v) = XOR of g[i] over the set bits of v.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import gf2
from .gf2 import Subspace

__all__ = [
    "QuadraticForm",
    "FormClass",
    "preset",
    "PRESETS",
    "load_form",
    "save_form",
    "radicals",
    "singular_subspaces",
    "isometry_generators",
    "forms_equivalent",
    "field_reduction_arc",
    "gamma_forms",
    "FieldReductionArc",
    "apply_matrix",
    "mat_mul",
    "mat_identity",
    "mat_inverse",
    "transvection",
    "preserves_form",
]


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


class QuadraticForm:
    """Q(x) = x^T M x over F_2 with M upper triangular."""

    __slots__ = ("dim", "coeff", "_brows")

    def __init__(self, dim: int, coeff: Tuple[int, ...]):
        if len(coeff) != dim:
            raise ValueError("coefficient matrix must have dim rows")
        mask = (1 << dim) - 1
        self.dim = dim
        # Keep only the upper triangle (j >= i) of each row.
        self.coeff = tuple((row & mask) & ~((1 << i) - 1) for i, row in enumerate(coeff))
        brows = []
        for i in range(dim):
            row = self.coeff[i] & ~(1 << i)  # strict upper part
            for j in range(i):
                row |= ((self.coeff[j] >> i) & 1) << j
            brows.append(row)
        self._brows = tuple(brows)

    def evaluate(self, v: int) -> int:
        """Q(v) = sum over i <= j of M_ij v_i v_j."""
        if v >> self.dim:
            raise ValueError("vector outside ambient dimension")
        acc = 0
        x = v
        while x:
            i = (x & -x).bit_length() - 1
            acc ^= _parity(self.coeff[i] & v)
            x &= x - 1
        return acc

    def bilinear(self, u: int, v: int) -> int:
        """B(u, v) with B = M + M^T."""
        if (u | v) >> self.dim:
            raise ValueError("vector outside ambient dimension")
        acc = 0
        x = u
        while x:
            i = (x & -x).bit_length() - 1
            acc ^= _parity(self._brows[i] & v)
            x &= x - 1
        return acc

    def bilinear_row(self, u: int) -> int:
        """The vector w with B(u, v) = parity(w & v) for all v."""
        acc = 0
        x = u
        while x:
            i = (x & -x).bit_length() - 1
            acc ^= self._brows[i]
            x &= x - 1
        return acc

    def key(self) -> Tuple[int, ...]:
        return self.coeff

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuadraticForm)
            and self.dim == other.dim
            and self.coeff == other.coeff
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.coeff))

    def __repr__(self) -> str:
        terms = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                if (self.coeff[i] >> j) & 1:
                    terms.append(f"x{i + 1}x{j + 1}" if i != j else f"x{i + 1}^2")
        return f"QuadraticForm(d={self.dim}, {' + '.join(terms) or '0'})"


@dataclass(frozen=True)
class FormClass:
    """Equivalence invariants: induced Witt type and radical dimensions.

    tag is '+' or '-' when SRad(Q) = Rad(B) (the induced form on V/Rad is
    then nondegenerate and has a well-defined type) and 'mixed' when the
    radical carries an anisotropic vector, in which case the type of a
    complement is not an invariant.
    """

    tag: str
    rad_dim: int
    srad_dim: int

    @property
    def degenerate(self) -> bool:
        return self.rad_dim > 0


def _terms_to_coeff(dim: int, terms: List[Tuple[int, int]]) -> Tuple[int, ...]:
    rows = [0] * dim
    for i, j in terms:
        a, b = min(i, j), max(i, j)
        rows[a] ^= 1 << b
    return tuple(rows)


PRESETS: Dict[str, QuadraticForm] = {
    "plus8": QuadraticForm(8, _terms_to_coeff(8, [(0, 1), (2, 3), (4, 5), (6, 7)])),
    "minus8": QuadraticForm(
        8, _terms_to_coeff(8, [(0, 1), (2, 3), (4, 5), (6, 6), (6, 7), (7, 7)])
    ),
    "deg-hyp6": QuadraticForm(8, _terms_to_coeff(8, [(0, 1), (2, 3), (4, 5)])),
    "deg-c4": QuadraticForm(8, _terms_to_coeff(8, [(0, 1), (2, 3), (4, 5), (6, 6)])),
}


def preset(name: str) -> QuadraticForm:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown form preset {name!r}; have {sorted(PRESETS)}")


def load_form(text: str) -> QuadraticForm:
    """Parse the form file format: 'dim d' then d rows of d bits."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dim"):
        raise ValueError("form file must start with 'dim d'")
    d = int(lines[0].split()[1])
    if len(lines) != d + 1:
        raise ValueError(f"expected {d} matrix rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        v, _ = gf2.parse_vector(ln, d)
        rows.append(v)
    return QuadraticForm(d, tuple(rows))


def save_form(q: QuadraticForm) -> str:
    out = [f"dim {q.dim}"]
    out += [gf2.format_vector(row, q.dim) for row in q.coeff]
    return "\n".join(out) + "\n"


def radicals(q: QuadraticForm) -> Tuple[Subspace, Subspace, FormClass]:
    """Rad(B), SRad(Q) and the classification invariants."""
    d = q.dim
    rad = gf2.kernel(list(q._brows), d)
    srad_basis = []
    aniso = None
    for r in rad.basis:
        if q.evaluate(r):
            if aniso is None:
                aniso = r
            else:
                srad_basis.append(r ^ aniso)
        else:
            srad_basis.append(r)
    srad = gf2.rref(srad_basis, d)
    comp = gf2.complement_basis(rad)
    comp_space = Subspace(d, comp)  # standard vectors are already RREF
    zeros = sum(1 for v in gf2.subspace_vectors(comp_space) if q.evaluate(v) == 0)
    if srad.rank == rad.rank:
        m2 = d - rad.rank  # = 2m, the nondegenerate part is even-dimensional
        if m2 == 0:
            tag = "+"
        else:
            plus_zeros = (1 << (m2 - 1)) + (1 << (m2 // 2 - 1))
            tag = "+" if zeros == plus_zeros else "-"
    else:
        tag = "mixed"
    return rad, srad, FormClass(tag, rad.rank, srad.rank)


def singular_vectors(q: QuadraticForm) -> List[int]:
    """All nonzero v with Q(v) = 0."""
    return [v for v in range(1, 1 << q.dim) if q.evaluate(v) == 0]


def singular_subspaces(q: QuadraticForm, k: int) -> List[Subspace]:
    """All totally singular k-subspaces, in canonical key order.

    Extends singular subspaces a point at a time through the B-perp
    filter: a singular vector v extends S iff B(v, S) = 0, and then the
    whole of <S, v> is automatically singular.
    """
    if k > q.dim:
        return []
    if k == 0:
        return [gf2.rref([], q.dim)]
    points = singular_vectors(q)
    level: Dict[Tuple[int, ...], Subspace] = {}
    for v in points:
        s = gf2.rref([v], q.dim)
        level[s.key()] = s
    for _ in range(k - 1):
        nxt: Dict[Tuple[int, ...], Subspace] = {}
        for s in level.values():
            perp_rows = [q.bilinear_row(b) for b in s.basis]
            for v in points:
                if gf2.contains(s, v):
                    continue
                if any(_parity(row & v) for row in perp_rows):
                    continue
                t = gf2.rref(list(s.basis) + [v], q.dim)
                nxt[t.key()] = t
        level = nxt
    return [level[kk] for kk in sorted(level)]


# ----------------------------------------------------------------------
# matrices acting on F_2^d


def mat_identity(d: int) -> Tuple[int, ...]:
    return tuple(1 << i for i in range(d))


def apply_matrix(g: Tuple[int, ...], v: int) -> int:
    out = 0
    x = v
    while x:
        i = (x & -x).bit_length() - 1
        out ^= g[i]
        x &= x - 1
    return out


def mat_mul(g: Tuple[int, ...], h: Tuple[int, ...]) -> Tuple[int, ...]:
    """Composition: apply g first, then h."""
    return tuple(apply_matrix(h, gi) for gi in g)


def mat_inverse(g: Tuple[int, ...]) -> Tuple[int, ...]:
    d = len(g)
    # Gauss-Jordan on [g | I].
    aug = [(g[i], 1 << i) for i in range(d)]
    out = [0] * d
    used: List[Tuple[int, int]] = []
    for a, b in aug:
        for ra, rb in used:
            if a & (ra & -ra):
                a ^= ra
                b ^= rb
        if a == 0:
            raise ValueError("matrix is singular")
        used = [(ra ^ a, rb ^ b) if ra & (a & -a) else (ra, rb) for ra, rb in used]
        used.append((a, b))
    for a, b in used:
        out[(a & -a).bit_length() - 1] = b
    return tuple(out)


def transvection(q: QuadraticForm, v: int) -> Tuple[int, ...]:
    """Orthogonal transvection x -> x + B(x, v) v; requires Q(v) = 1."""
    if q.evaluate(v) != 1:
        raise ValueError("transvections need an anisotropic vector")
    return tuple(
        (1 << i) ^ (v if q.bilinear(1 << i, v) else 0) for i in range(q.dim)
    )


def preserves_form(q: QuadraticForm, g: Tuple[int, ...]) -> bool:
    """Exhaustive check that Q(gx) = Q(x) for all x."""
    return all(q.evaluate(apply_matrix(g, v)) == q.evaluate(v) for v in range(1 << q.dim))


def isometry_generators(q: QuadraticForm) -> List[Tuple[int, ...]]:
    """Generators of the stabiliser of Q in GL(d, 2).

    Nondegenerate case: all orthogonal transvections.  Degenerate case
    with SRad = Rad: transvection lifts plus GL(Rad) plus shears into the
    singular radical.  The mixed case (anisotropic radical vector) is
    excluded; group-level automorphisms handle it instead.
    """
    rad, srad, cls = radicals(q)
    if cls.tag == "mixed":
        raise ValueError("mixed-radical forms have no structural generator set here")
    d = q.dim
    gens = [transvection(q, v) for v in range(1, 1 << d) if q.evaluate(v) == 1]
    if rad.rank:
        comp = gf2.complement_basis(rad)
        rb = rad.basis
        m = len(rb)
        if m >= 2:
            # cycle and a single transvection generate GL(m, 2)
            cyc = {rb[i]: rb[(i + 1) % m] for i in range(m)}
            gens.append(_map_on_basis(d, comp, cyc))
            tv = {rb[0]: rb[0] ^ rb[1]}
            gens.append(_map_on_basis(d, comp + tuple(rb[1:]), tv))
        for c in comp:
            for s in srad.basis:
                gens.append(_map_on_basis(d, tuple(x for x in comp if x != c) + rb, {c: c ^ s}))
    return gens


def _map_on_basis(d: int, fixed: Tuple[int, ...], images: Dict[int, int]) -> Tuple[int, ...]:
    """Matrix fixing `fixed` pointwise and mapping the keys of `images`.

    The union of `fixed` and the keys must be a basis of F_2^d.
    """
    basis = list(fixed) + list(images)
    imgs = list(fixed) + [images[b] for b in images]
    # Reduce the (basis vector, image) pairs so each e_i can be expressed
    # in the given basis and mapped through.
    reduced: List[Tuple[int, int]] = []
    for b, im in zip(basis, imgs):
        for rb, rim in reduced:
            if b & (rb & -rb):
                b ^= rb
                im ^= rim
        if b == 0:
            raise ValueError("given vectors are dependent")
        reduced = [(rb ^ b, rim ^ im) if rb & (b & -b) else (rb, rim) for rb, rim in reduced]
        reduced.append((b, im))
    out = []
    for i in range(d):
        v = 1 << i
        img = 0
        for rb, rim in reduced:
            if v & (rb & -rb):
                v ^= rb
                img ^= rim
        if v:
            raise ValueError("given vectors do not span the space")
        out.append(img)
    return tuple(out)


# ----------------------------------------------------------------------
# equivalence


def _normal_basis(q: QuadraticForm) -> Tuple[List[int], FormClass]:
    """A basis b_1.. with Q(sum y_i b_i) in normal form.

    Layout: hyperbolic pairs, then an anisotropic pair for '-' type, then
    one anisotropic radical vector for mixed forms, then SRad.
    """
    rad, srad, cls = radicals(q)
    d = q.dim
    aniso_rad = None
    if cls.tag == "mixed":
        for r in rad.basis:
            if q.evaluate(r):
                aniso_rad = r
                break
        else:  # pragma: no cover
            raise AssertionError("mixed class without anisotropic radical vector")
    # Work inside a complement of the radical, refining to hyperbolic pairs.
    space = list(gf2.complement_basis(rad))
    pairs: List[Tuple[int, int]] = []
    aniso_pair: Optional[Tuple[int, int]] = None
    while space:
        vecs = [v for v in gf2.subspace_vectors(gf2.rref(space, d)) if v]
        sing = next((v for v in vecs if q.evaluate(v) == 0), None)
        if sing is None:
            if len(space) != 2:  # pragma: no cover
                raise AssertionError("anisotropic part larger than a plane")
            a, b = vecs[0], next(v for v in vecs if q.bilinear(vecs[0], v))
            aniso_pair = (a, b)
            break
        u = sing
        w = next(v for v in vecs if q.bilinear(u, v))
        w ^= u if q.evaluate(w) else 0
        pairs.append((u, w))
        # restrict to the perp of the pair inside the current space
        rows = [q.bilinear_row(u), q.bilinear_row(w)]
        new_space = []
        cur = gf2.rref([], d)
        for v in vecs:
            if _parity(rows[0] & v) or _parity(rows[1] & v):
                continue
            if not gf2.contains(cur, v):
                new_space.append(v)
                cur = gf2.rref(new_space, d)
        space = new_space
    if aniso_pair is not None and aniso_rad is not None:
        # x^2 + xy + y^2 + r^2 rewrites hyperbolically via (x+r, y+r).
        a, b = aniso_pair
        pairs.append((a ^ aniso_rad, b ^ aniso_rad))
        aniso_pair = None
    basis: List[int] = []
    for a, b in pairs:
        basis += [a, b]
    if aniso_pair is not None:
        basis += list(aniso_pair)
    if aniso_rad is not None:
        basis.append(aniso_rad)
    basis += list(srad.basis)
    assert len(basis) == d and gf2.rank_of(basis, d) == d
    return basis, cls


def forms_equivalent(q1: QuadraticForm, q2: QuadraticForm) -> Optional[Tuple[int, ...]]:
    """An invertible g with Q2(x) = Q1(g x) for all x, or None."""
    if q1.dim != q2.dim:
        raise ValueError("ambient dimension mismatch")
    _, _, c1 = radicals(q1)
    _, _, c2 = radicals(q2)
    if c1 != c2:
        return None
    b1, _ = _normal_basis(q1)
    b2, _ = _normal_basis(q2)
    # A_i maps coordinate vectors to the normal basis: Q_i(A_i y) = N(y).
    a1 = tuple(b1)
    a2 = tuple(b2)
    g = mat_mul(mat_inverse(a2), a1)  # x -> A1(A2^{-1} x)
    if not all(q2.evaluate(v) == q1.evaluate(apply_matrix(g, v)) for v in range(1 << q1.dim)):
        raise AssertionError("normal-form reduction produced a non-witness")
    return g


# ----------------------------------------------------------------------
# field reduction (F_8^3 -> F_2^9)

_F8_MUL = [[0] * 8 for _ in range(8)]
for _a in range(1, 8):
    for _b in range(1, 8):
        _p = 0
        _x, _y = _a, _b
        for _ in range(3):
            if _y & 1:
                _p ^= _x
            _y >>= 1
            _x <<= 1
            if _x & 8:
                _x ^= 0b1011  # alpha^3 = alpha + 1
        _F8_MUL[_a][_b] = _p


def f8_mul(a: int, b: int) -> int:
    return _F8_MUL[a][b]


def f8_pow(a: int, n: int) -> int:
    out = 1
    for _ in range(n):
        out = f8_mul(out, a)
    return out


def f8_trace(a: int) -> int:
    return (f8_pow(a, 1) ^ f8_pow(a, 2) ^ f8_pow(a, 4)) & 1


def _embed9(x: int, y: int, z: int) -> int:
    return x | (y << 3) | (z << 6)


def _gamma_form(gamma: int) -> QuadraticForm:
    """Q_gamma(x, y, z) = T(gamma (xy + z^2)) as a form on F_2^9."""

    def q(v: int) -> int:
        x, y, z = v & 7, (v >> 3) & 7, (v >> 6) & 7
        return f8_trace(f8_mul(gamma, f8_mul(x, y) ^ f8_mul(z, z)))

    rows = [0] * 9
    for i in range(9):
        rows[i] |= q(1 << i) << i
    for i in range(9):
        for j in range(i + 1, 9):
            b = q((1 << i) | (1 << j)) ^ q(1 << i) ^ q(1 << j)
            rows[i] |= b << j
    return QuadraticForm(9, tuple(rows))


def gamma_forms() -> Dict[int, QuadraticForm]:
    """The seven forms Q_gamma, gamma in F_8 nonzero."""
    return {g: _gamma_form(g) for g in range(1, 8)}


@dataclass(frozen=True)
class FieldReductionArc:
    form: QuadraticForm  # Q on F_2^9 (explicit coordinates)
    planes: Tuple[Subspace, ...]  # 9 pairwise disjoint singular planes
    quotient_form: QuadraticForm  # induced form on F_2^8
    quotient_arc: Tuple[Subspace, ...]  # images of the planes
    quotient_radical: Subspace  # pi_0 = Rad of the induced bilinear form


def field_reduction_arc() -> FieldReductionArc:
    """The conic xy + z^2 = 0 over F_8, field-reduced and quotiented."""
    form = QuadraticForm(
        9,
        _terms_to_coeff(9, [(0, 3), (1, 5), (2, 4), (6, 6)]),
    )
    # points of the conic: (1, y, y^4) for y in F_8, plus (0, 1, 0)
    pts = [(1, y, f8_pow(y, 4)) for y in range(8)] + [(0, 1, 0)]
    planes = []
    for (x, y, z) in pts:
        vecs = [
            _embed9(f8_mul(lam, x), f8_mul(lam, y), f8_mul(lam, z))
            for lam in (1, 2, 4)
        ]
        planes.append(gf2.rref(vecs, 9))
    # quotient by P = <(0,0,alpha)> = bit 7
    def project(v: int) -> int:
        return (v & 0x7F) | ((v >> 1) & 0x80)

    def lift(v: int) -> int:
        return (v & 0x7F) | ((v & 0x80) << 1)

    rows = [0] * 8
    for i in range(8):
        rows[i] |= form.evaluate(lift(1 << i)) << i
    for i in range(8):
        for j in range(i + 1, 8):
            b = (
                form.evaluate(lift((1 << i) | (1 << j)))
                ^ form.evaluate(lift(1 << i))
                ^ form.evaluate(lift(1 << j))
            )
            rows[i] |= b << j
    qform = QuadraticForm(8, tuple(rows))
    qarc = tuple(
        gf2.rref([project(v) for v in gf2.subspace_vectors(p)], 8) for p in planes
    )
    qrad, _, _ = radicals(qform)
    return FieldReductionArc(form, tuple(planes), qform, qarc, qrad)
