"""Quadratic forms over F_2, their singular planes and isometries."""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asq import gf2
from asq.quadform import (
    PRESETS,
    QuadraticForm,
    apply_matrix,
    field_reduction_arc,
    forms_equivalent,
    isometry_generators,
    load_form,
    mat_inverse,
    mat_mul,
    preset,
    preserves_form,
    radicals,
    gamma_forms,
    save_form,
    singular_subspaces,
    singular_vectors,
    transvection,
)

DIMS = st.integers(min_value=1, max_value=10)


@st.composite
def form_and_vectors(draw, n_vectors=2):
    d = draw(DIMS)
    coeff = tuple(draw(st.integers(0, (1 << d) - 1)) for _ in range(d))
    vs = [draw(st.integers(0, (1 << d) - 1)) for _ in range(n_vectors)]
    return QuadraticForm(d, coeff), vs


@settings(max_examples=200)
@given(form_and_vectors())
def test_polarisation_identity(fv):
    q, (u, v) = fv
    assert q.evaluate(u ^ v) ^ q.evaluate(u) ^ q.evaluate(v) == q.bilinear(u, v)


@settings(max_examples=100)
@given(form_and_vectors(3))
def test_bilinear_is_symmetric_alternating(fv):
    q, (u, v, w) = fv
    assert q.bilinear(u, v) == q.bilinear(v, u)
    assert q.bilinear(u, u) == 0
    assert q.bilinear(u ^ v, w) == q.bilinear(u, w) ^ q.bilinear(v, w)


def test_preset_radical_types():
    # (tag, rad dim, srad dim) pins each of the four squaring forms.
    want = {
        "plus8": ("+", 0, 0),
        "minus8": ("-", 0, 0),
        "deg-hyp6": ("+", 2, 2),
        "deg-c4": ("mixed", 2, 1),
    }
    for name, (tag, rd, sd) in want.items():
        rad, srad, cls = radicals(preset(name))
        assert (cls.tag, cls.rad_dim, cls.srad_dim) == (tag, rd, sd), name
        assert rad.rank == rd and srad.rank == sd


def test_plane_counts():
    counts = {"plus8": 2025, "minus8": 765, "deg-hyp6": 3215, "deg-c4": 1395}
    for name, n in counts.items():
        assert len(singular_subspaces(preset(name), 3)) == n, name


def test_singular_vectors_counts():
    # nondegenerate O^+/O^- nonzero counts in dim 8: 2^7 +- 2^3 - 1.
    assert len(singular_vectors(preset("plus8"))) == 128 + 8 - 1
    assert len(singular_vectors(preset("minus8"))) == 128 - 8 - 1


def test_save_load_roundtrip():
    for name in PRESETS:
        q = preset(name)
        assert load_form(save_form(q)) == q


def test_transvections_preserve_form():
    rng = random.Random(3)
    for name in PRESETS:
        q = preset(name)
        nonsingular = [v for v in range(1, 1 << q.dim) if q.evaluate(v) == 1]
        for v in rng.sample(nonsingular, 10):
            t = transvection(q, v)
            assert preserves_form(q, t)
            assert mat_mul(t, t) == tuple(1 << i for i in range(q.dim))


def test_isometry_generators_preserve_form():
    for name in ("plus8", "minus8", "deg-hyp6"):
        q = preset(name)
        for g in isometry_generators(q):
            assert preserves_form(q, g)
            # invertibility
            gi = mat_inverse(g)
            assert mat_mul(g, gi) == tuple(1 << i for i in range(q.dim))


def test_isometry_generators_refuse_mixed_radical():
    with pytest.raises(ValueError):
        isometry_generators(preset("deg-c4"))


def test_forms_equivalent_orientation():
    # forms_equivalent(q1, q2) returns g with q2(x) = q1(g x).
    qs = gamma_forms()
    base = list(qs.values())[0]
    for q2 in qs.values():
        g = forms_equivalent(base, q2)
        assert g is not None
        for v in range(1 << base.dim):
            assert q2.evaluate(v) == base.evaluate(apply_matrix(g, v))


def test_forms_inequivalent_types():
    assert forms_equivalent(preset("plus8"), preset("minus8")) is None


def test_field_reduction_arc():
    arc = field_reduction_arc()
    assert len(arc.planes) == 9
    d = arc.form.dim
    for p in arc.planes:
        assert p.rank == 3
        for v in gf2.subspace_vectors(p):
            assert arc.form.evaluate(v) == 0
    # pairwise trivial meets
    for i in range(9):
        for j in range(i + 1, 9):
            assert gf2.meet(arc.planes[i], arc.planes[j]).rank == 0
    # quotient data: 8-dimensional degenerate form carrying the 9 images
    assert arc.quotient_form.dim == 8
    assert len(arc.quotient_arc) == 9
    assert radicals(arc.quotient_form)[2].degenerate
