import random

import pytest
from sympy import QQ

from catalog_io import parse_algebra
from errors import AmbientMismatch, NotHomogeneous, ParseError
from exterior import (
    Form,
    Multivector,
    basis,
    boundary,
    boundary_matrix,
    cdiff,
    d_matrix,
    pairing,
    parse_form,
    parse_multivector,
    sort_sign,
)
from scalar import QQ_t, parse_rational_function


def e(text, n=6):
    return parse_form(text, n)


def test_basis_is_lexicographic():
    assert basis(4, 2) == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    assert basis(3, 0) == ((),)
    assert basis(3, 4) == ()


@pytest.mark.parametrize(
    "indices, sign, ordered",
    [((1, 2), 1, (1, 2)), ((2, 1), -1, (1, 2)), ((3, 1, 2), 1, (1, 2, 3)), ((1, 3, 1), 0, None)],
)
def test_sort_sign(indices, sign, ordered):
    assert sort_sign(indices) == (sign, ordered)


def test_wedge_is_graded_commutative():
    a, b = e("e1 + e2"), e("e34")
    assert a.wedge(b) == b.wedge(a)
    c = e("e5")
    assert a.wedge(c) == -c.wedge(a)
    assert c.wedge(c).is_zero


def test_parse_and_render():
    form = e("e16 + e25 - 1/2*e34")
    assert str(form) == "e16 + e25 - 1/2*e34"
    assert form.coefficient((3, 4)) == QQ(-1, 2)
    assert str(e("-2*e12 + 3")) == "3 - 2*e12"
    assert str(parse_multivector("e_12 + 2*e_34", 4)) == "e_12 + 2*e_34"


def test_parse_reorders_indices():
    assert e("e21") == -e("e12")
    assert e("e11").is_zero


@pytest.mark.parametrize("text", ["e17", "e12 e34", "e", "e12 + *"])
def test_parse_form_errors(text):
    with pytest.raises(ParseError):
        e(text)


def test_parse_multivector_requires_prefix():
    with pytest.raises(ParseError):
        parse_multivector("e12", 4)


def test_degree_of_mixed_form():
    with pytest.raises(NotHomogeneous):
        _ = e("e1 + e12").degree


def test_combining_different_ambients():
    with pytest.raises(AmbientMismatch):
        e("e1") + parse_form("e1", 4)


def test_vector_round_trip_in_lexicographic_basis():
    form = e("e13 - e26")
    vec = form.to_vector(2)
    assert Form.from_vector(vec, 2, 6) == form
    assert vec[basis(6, 2).index((1, 3))] == QQ(1)


def test_cdiff_on_generators():
    g = parse_algebra("(0^4,12,13)")
    assert cdiff(g, e("e5")) == e("e12")
    assert cdiff(g, e("e6")) == e("e13")
    assert cdiff(g, e("e56")) == e("e126 - e135")
    assert cdiff(g, e("e14")).is_zero


def test_cdiff_squares_to_zero():
    g = parse_algebra("(0^3,12,13+14,24)")
    for idx in basis(6, 2):
        a = Form.monomial(idx, 6)
        assert cdiff(g, cdiff(g, a)).is_zero


def test_boundary_on_bivectors():
    g = parse_algebra("(0,0,12)")
    # [e_1, e_2] = -e_3 and the boundary of x ^ y is -[x, y]
    assert boundary(g, parse_multivector("e_12", 3)) == parse_multivector("e_3", 3)


def test_boundary_is_dual_to_d():
    g = parse_algebra("(0,0,0,12,13,24)")
    for degree in range(g.dim):
        assert d_matrix(g, degree).transpose().to_list() == boundary_matrix(g, degree + 1).to_list()


def test_pairing_of_monomials():
    a = e("2*e12 + e34")
    v = parse_multivector("e_12 + e_34 + e_56", 6)
    assert pairing(a, v) == QQ(3)
    with pytest.raises(AmbientMismatch):
        pairing(a, parse_multivector("e_12", 4))


def test_multivector_and_form_do_not_mix():
    with pytest.raises(AmbientMismatch):
        Form.monomial((1,), 3) + Multivector.monomial((1,), 3)


def random_form(rng, degree, n):
    out = Form.zero(n)
    for idx in basis(n, degree):
        c = rng.choice((-2, -1, 0, 0, 0, 1, 3))
        if c:
            out = out + Form.monomial(idx, n, c)
    return out


@pytest.mark.parametrize("algebra", ["(0^3,12,13+14,24)", "(0,0,23,-24)", "(23,-13,12,0)"])
def test_leibniz_rule_on_random_pairs(algebra):
    g = parse_algebra(algebra)
    rng = random.Random(algebra)
    for _ in range(70):
        p = rng.randint(0, g.dim - 1)
        q = rng.randint(0, g.dim - 1 - p)
        a, b = random_form(rng, p, g.dim), random_form(rng, q, g.dim)
        sign = -1 if p % 2 else 1
        expected = cdiff(g, a).wedge(b) + a.wedge(cdiff(g, b)).scale(sign)
        assert cdiff(g, a.wedge(b)) == expected


def test_render_function_field_coefficients():
    a = Form(2, {(1, 2): parse_rational_function("t + 1")}, QQ_t)
    assert a.render() == "(t + 1)*e12"
    b = Form(2, {(1,): QQ_t.one, (2,): -QQ_t.one}, QQ_t)
    assert b.render() == "e1 - e2"
