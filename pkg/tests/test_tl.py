"""Diagram algebra: basis enumeration, composition, projectors, coefficient laws."""

import random

import pytest
from hypothesis import given, strategies as st

from pretzeljones import tl
from pretzeljones.qring import ONE, ZERO, HalfLaurent, RatFunc, qbinom, qfact, qint
from pretzeljones.tl import Matching, TLElement, compose, enumerate_basis, tl_mul


def U(n, i):
    return Matching.cupcap(n, i)


def ident(n):
    return Matching.identity(n)


# --- matchings and the basis ------------------------------------------------


def test_catalan_counts():
    assert [len(enumerate_basis(n)) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]


def test_basis_sorted_and_unique():
    for n in range(1, 7):
        basis = enumerate_basis(n)
        assert list(basis) == sorted(basis)
        assert len(set(basis)) == len(basis)


def test_identity_and_generators_in_basis():
    for n in range(1, 7):
        basis = set(enumerate_basis(n))
        assert ident(n) in basis
        for i in range(1, n):
            assert U(n, i) in basis


def test_nonplanar_rejected():
    # two transposed through strands
    with pytest.raises(ValueError):
        Matching((3, 2, 1, 0))


def test_non_involution_rejected():
    with pytest.raises(ValueError):
        Matching((1, 2, 0, 3))


def test_text_roundtrip():
    for n in range(1, 6):
        for m in enumerate_basis(n):
            assert Matching.from_text(m.to_text()) == m
    assert U(2, 1).to_text() == "(1 2)(3 4)"


def test_through_count():
    assert ident(4).through_count() == 4
    assert U(2, 1).through_count() == 0
    assert U(3, 1).through_count() == 1
    assert tl.rect_matching(1, 2, 1, 1).through_count() == 3


def test_mirrors_are_involutions_and_planar():
    for n in range(1, 6):
        for m in enumerate_basis(n):
            assert m.hmirror().hmirror() == m
            assert m.vmirror().vmirror() == m
    assert U(3, 1).vmirror() == U(3, 2)
    assert U(3, 1).hmirror() == U(3, 1)


# --- composition ------------------------------------------------------------


def test_compose_identity():
    for n in range(1, 6):
        for m in enumerate_basis(n):
            assert compose(ident(n), m) == (m, 0)
            assert compose(m, ident(n)) == (m, 0)


def test_compose_cupcap_square():
    r, loops = compose(U(2, 1), U(2, 1))
    assert r == U(2, 1) and loops == 1


def test_compose_zigzag():
    r, loops = compose(U(3, 1), U(3, 2))
    assert loops == 0
    assert r == tl.rect_matching(0, 1, 1, 0)
    r2, loops2 = compose(U(3, 2), U(3, 1))
    assert loops2 == 0
    assert r2 == tl.rect_matching(0, 1, 1, 0).vmirror()


def test_compose_associative_on_diagrams():
    rng = random.Random(7)
    for n in (2, 3, 4, 5):
        basis = enumerate_basis(n)
        for _ in range(30):
            a, b, c = (TLElement.basis(rng.choice(basis)) for _ in range(3))
            assert tl_mul(tl_mul(a, b), c) == tl_mul(a, tl_mul(b, c))


def test_tl_mul_bilinear():
    n = 3
    a = TLElement(n, {U(n, 1): qint(2), ident(n): ONE})
    b = TLElement(n, {U(n, 2): HalfLaurent.monomial(1)})
    c = TLElement(n, {U(n, 1): -ONE})
    left = tl_mul(a, b + c)
    assert left == tl_mul(a, b) + tl_mul(a, c)


def test_packed_and_plain_products_agree():
    # force both code paths on the same product and compare
    n = 4
    big = tl._w_table(n)
    lhs = tl._tl_mul_packed(big, big)
    rhs = TLElement(n)
    acc = rhs.terms
    for ma, ca in big.terms.items():
        for mb, cb in big.terms.items():
            r, loops = compose(ma, mb)
            c = ca * cb * tl.delta_power(loops)
            s = acc.get(r, 0) + c
            if s:
                acc[r] = s
            elif r in acc:
                del acc[r]
    assert lhs == rhs


# --- projectors ---------------------------------------------------------------


def test_projector_two_strands():
    jw = tl.jones_wenzl(2)
    assert jw.terms[ident(2)] == RatFunc(1)
    assert jw.terms[U(2, 1)] == RatFunc(1, qint(2))


def test_projector_identity_coefficient_is_one():
    for n in range(1, 7):
        assert tl.jones_wenzl(n).terms[ident(n)] == RatFunc(1)


@pytest.mark.parametrize("n", range(2, 7))
def test_projector_idempotent(n):
    jw = tl.jones_wenzl(n)
    assert tl_mul(jw, jw) == jw


@pytest.mark.parametrize("n", range(2, 7))
def test_projector_annihilates_cupcaps(n):
    jw = tl.jones_wenzl(n)
    for i in range(1, n):
        u = TLElement.basis(U(n, i))
        assert not tl_mul(jw, u)
        assert not tl_mul(u, jw)


def test_scaled_table_matches_projector():
    for n in range(1, 7):
        w = tl._w_table(n)
        jw = tl.jones_wenzl(n)
        fact = qfact(n)
        for m in set(w.terms) | set(jw.terms):
            assert RatFunc(w.terms[m]) == jw.terms[m] * fact


def test_jw_coefficient_lookup():
    assert tl.jw_coefficient(ident(5)) == qfact(5)
    assert tl.jw_coefficient(U(2, 1)) == ONE
    assert tl.jw_coefficient(tl.rect_matching(0, 1, 1, 0)) == qint(2)


# --- closed-form coefficients -------------------------------------------------


def test_rect_matching_shapes():
    assert tl.rect_matching(2, 0, 0, 0) == ident(2)
    assert tl.rect_matching(0, 1, 0, 0) == U(2, 1)
    assert tl.rect_matching(0, 1, 0, 1) == U(3, 1)
    assert tl.rect_matching(1, 1, 0, 0) == U(3, 2)
    with pytest.raises(ValueError):
        tl.rect_matching(0, 0, 0, 0)
    with pytest.raises(ValueError):
        tl.rect_matching(-1, 1, 0, 0)


def test_rect_coefficients_match_table():
    for n in range(1, 6):
        for x in range(n + 1):
            for y in range((n - x) // 2 + 1):
                for z in range(n - x - 2 * y + 1):
                    t = n - x - 2 * y - z
                    d = tl.rect_matching(x, y, z, t)
                    assert tl.jw_coefficient(d) == tl.kho_coeff_rect(x, y, z, t), \
                        (x, y, z, t)


def test_rect_coefficients_positive_leading():
    # the whole family carries leading sign +1 in this loop convention
    for n in range(1, 6):
        for x in range(n + 1):
            for y in range((n - x) // 2 + 1):
                for z in range(n - x - 2 * y + 1):
                    t = n - x - 2 * y - z
                    c = tl.jw_coefficient(tl.rect_matching(x, y, z, t))
                    assert c.leading_sign() == 1


def test_cupshift_ratio_laws():
    for n in range(2, 6):
        for x in range(n + 1):
            for y in range(1, (n - x) // 2 + 1):
                for z in range(n - x - 2 * y + 1):
                    t = n - x - 2 * y - z
                    p = tl.jw_coefficient(tl.rect_matching(x, y, z, t))
                    # slide the arc block left past the x strands
                    left = tl.jw_coefficient(tl.rect_matching(0, y, x + z, t))
                    assert p == tl.kho_coeff_cupshift(x, y) * left
                    # slide the right throughs into the slant block
                    right = tl.jw_coefficient(tl.rect_matching(x, y, z + t, 0))
                    assert p == qbinom(t + y, t) * right


def test_kho_coeff_examples():
    assert tl.kho_coeff_rect(1, 1, 0, 0) == qint(2) * qint(2)
    assert tl.kho_coeff_rect(0, 1, 0, 1) == qint(2) * qint(2)
    assert tl.kho_coeff_rect(0, 1, 1, 0) == qint(2)
    assert tl.kho_coeff_rect(3, 0, 0, 0) == qfact(3)
    assert tl.kho_coeff_cupshift(0, 3) == ONE
    with pytest.raises(ValueError):
        tl.kho_coeff_rect(0, 0, 0, 0)


# --- algebra sanity under hypothesis -----------------------------------------


@st.composite
def small_elements(draw, n=3):
    basis = enumerate_basis(n)
    size = draw(st.integers(min_value=1, max_value=3))
    terms = {}
    for _ in range(size):
        m = basis[draw(st.integers(min_value=0, max_value=len(basis) - 1))]
        e = draw(st.integers(min_value=-4, max_value=4))
        c = draw(st.integers(min_value=-3, max_value=3))
        terms[m] = terms.get(m, ZERO) + HalfLaurent.monomial(2 * e, c)
    return TLElement(n, {m: c for m, c in terms.items() if c})


@given(small_elements(), small_elements(), small_elements())
def test_mul_associative(a, b, c):
    assert tl_mul(tl_mul(a, b), c) == tl_mul(a, tl_mul(b, c))


@given(small_elements(), small_elements())
def test_mul_distributes(a, b):
    i = TLElement.identity(3)
    assert tl_mul(a + i, b) == tl_mul(a, b) + b
