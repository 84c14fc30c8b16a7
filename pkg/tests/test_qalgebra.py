import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CLASSICAL, cached_structures, cached_table
from qmink import qalgebra as qa
from qmink.catalog import CaseSpec
from qmink.matrixcore import flip

DEFORMED = [CaseSpec(1, t=0.7), CaseSpec(2, c=1.0), CaseSpec(3, c=1.0, r=1.5), CaseSpec(4, c=0.5),
            CaseSpec(5, t=0.3), CaseSpec(6, c=2.0), CaseSpec(7, t=0.3)]


def x(i):
    return qa.Poly.gen(i)


def word(spec, *letters):
    return cached_table(spec).word_poly(list(letters))


def test_poly_basics():
    p = qa.Poly({(1, 0, 0, 0): 2.0, (0, 0, 0, 0): 1e-15})
    assert p.degree() == 1 and len(p.terms) == 1
    assert (p - p).is_zero()
    assert p * 0.5 == x(0)
    assert qa.Poly().degree() == -1


def test_classical_commutes():
    rt = cached_table(CLASSICAL)
    assert rt.order == qa.DEFAULT_ORDER
    for i, j in itertools.combinations(range(4), 2):
        assert qa.multiply(x(j), x(i), rt) == qa.multiply(x(i), x(j), rt)
        ((pair, c),) = rt.coeffs[(j, i)]
        assert pair == (i, j) and abs(c - 1) < 1e-12


@pytest.mark.parametrize("spec", DEFORMED, ids=str)
def test_ordered_products_are_kept(spec):
    rt = cached_table(spec)
    a, b = rt.order[0], rt.order[1]
    prod = qa.multiply(x(a), x(b), rt)
    e = [0, 0, 0, 0]
    e[a] += 1
    e[b] += 1
    assert prod == qa.Poly({tuple(e): 1})


def test_star_examples():
    rt = cached_table(CaseSpec(1, t=0.7))
    assert qa.star(x(0), rt) == x(0)
    p = (2 + 1j) * qa.multiply(x(0), x(1), rt)
    assert qa.star(p, rt) == (2 - 1j) * qa.multiply(x(1), x(0), rt)


def test_derivative_examples():
    spec = CaseSpec(1, t=0.7)
    ss, rt = cached_structures(spec), cached_table(spec)
    for i in range(4):
        assert qa.derive(i, qa.Poly.const(1), ss, rt).is_zero()
        for k in range(4):
            assert qa.derive(i, x(k), ss, rt) == qa.Poly.const(float(i == k))
    R4 = ss.R4
    for i, k, l in itertools.product(range(4), repeat=3):
        expect = qa.Poly.const(0)
        if i == k:
            expect = expect + x(l)
        for n in range(4):
            expect = expect + R4[k, l, i, n] * x(n)
        assert qa.derive(i, word(spec, k, l), ss, rt).close_to(expect, 1e-12)


def test_classical_calculus():
    ss, rt = cached_structures(CLASSICAL), cached_table(CLASSICAL)
    x0sq = word(CLASSICAL, 0, 0)
    assert qa.derive(0, x0sq, ss, rt) == 2 * x(0)
    assert qa.laplacian(x0sq, ss, rt) == qa.Poly.const(2)
    assert qa.laplacian(word(CLASSICAL, 0, 1), ss, rt).is_zero()


def test_dirac_on_constants_and_pairing():
    ss, rt = cached_structures(CLASSICAL), cached_table(CLASSICAL)
    one = qa.Poly.const(1)
    for a in range(4):
        phi = qa.Bispinor.basis(a, one)
        assert all(c.is_zero() for c in qa.dirac_apply(phi, ss, rt).components)
        assert qa.lagrangian(phi, 0.0, ss, rt).is_zero()
    e0, e2 = qa.Bispinor.basis(0, one), qa.Bispinor.basis(2, one)
    assert qa.pairing(e0, e0, ss, rt).is_zero()
    assert qa.pairing(e0, e2, ss, rt) == qa.Poly.const(ss.K[0, 0])
    assert qa.lagrangian(e0, 1.0, ss, rt).is_zero()
    with pytest.raises(ValueError):
        qa.lagrangian(e0, -1.0, ss, rt)


@pytest.mark.parametrize("spec", DEFORMED + [CLASSICAL], ids=str)
def test_pbw_dimensions(spec):
    R, rt = cached_structures(spec).R, cached_table(spec)
    for d, expect in ((2, 10), (3, 20), (4, 35)):
        assert qa.pbw_dimension(R, d) == expect
        assert qa.normal_form_span(rt, d) == expect
    assert qa.table_residual(rt) <= 1e-9


@pytest.mark.parametrize("spec", DEFORMED, ids=str)
def test_associativity(spec):
    out = qa.associativity_defect(cached_table(spec), pairs=20)
    assert out["triples"] <= 1e-9
    assert out["pairs_relative"] <= 1e-6


def test_explicit_order_and_bad_inputs():
    R = flip(4, 4)
    assert qa.build_rewrite_table(R, order=(3, 2, 1, 0)).order == (3, 2, 1, 0)
    with pytest.raises(ValueError):
        qa.build_rewrite_table(R, order=(0, 0, 1, 2))
    with pytest.raises(qa.PivotFailure):
        qa.build_rewrite_table(np.eye(16), order=qa.DEFAULT_ORDER)
    with pytest.raises(qa.PivotFailure):
        qa.build_rewrite_table(2 * np.eye(16))
    with pytest.raises(qa.NonTermination):
        qa.build_rewrite_table(-np.eye(16))


# -- properties ----------------------------------------------------------------

SPECS = st.sampled_from(DEFORMED)


@st.composite
def polys(draw, max_degree=3):
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        d = draw(st.integers(0, max_degree))
        m = draw(st.sampled_from(qa.monomials(d)))
        re = draw(st.floats(-2, 2))
        im = draw(st.floats(-2, 2))
        terms[m] = complex(re, im)
    return qa.Poly(terms)


@settings(max_examples=30, deadline=None)
@given(SPECS, polys(), polys())
def test_star_is_antilinear_antihomomorphism(spec, p, q):
    rt = cached_table(spec)
    assert qa.star(qa.star(p, rt), rt).close_to(p, 1e-8)
    lhs = qa.star(qa.multiply(p, q, rt), rt)
    rhs = qa.multiply(qa.star(q, rt), qa.star(p, rt), rt)
    assert lhs.close_to(rhs, 1e-8 * max(1.0, lhs.max_abs()))


@settings(max_examples=30, deadline=None)
@given(SPECS, polys(), polys(), st.integers(0, 3), st.complex_numbers(max_magnitude=3))
def test_derivative_is_linear(spec, p, q, i, z):
    ss, rt = cached_structures(spec), cached_table(spec)
    lhs = qa.derive(i, p + z * q, ss, rt)
    rhs = qa.derive(i, p, ss, rt) + z * qa.derive(i, q, ss, rt)
    assert lhs.close_to(rhs, 1e-9 * max(1.0, lhs.max_abs()))


@settings(max_examples=20, deadline=None)
@given(SPECS, polys(2), polys(2), polys(2))
def test_product_is_associative(spec, p, q, r):
    rt = cached_table(spec)
    lhs = qa.multiply(qa.multiply(p, q, rt), r, rt)
    rhs = qa.multiply(p, qa.multiply(q, r, rt), rt)
    assert lhs.close_to(rhs, 1e-6 * max(1.0, lhs.max_abs()))


@settings(max_examples=20, deadline=None)
@given(SPECS, polys(3), st.integers(0, 3))
def test_box_commutes_with_derivatives(spec, p, i):
    ss, rt = cached_structures(spec), cached_table(spec)
    lhs = qa.laplacian(qa.derive(i, p, ss, rt), ss, rt)
    rhs = qa.derive(i, qa.laplacian(p, ss, rt), ss, rt)
    assert lhs.close_to(rhs, 1e-8 * max(1.0, lhs.max_abs()))
