import random
from fractions import Fraction

import pytest
from sympy import Poly, QQ, symbols

from errors import ParseError, PoleError, ZeroPolynomial
from scalar import (
    QQ_t,
    all_roots_real,
    lift,
    parse_rational,
    parse_rational_function,
    rational,
    render_rational,
    render_scalar,
    rf_eval,
    sturm_real_root_count,
)

x = symbols("x")


@pytest.mark.parametrize(
    "value, expected",
    [(3, QQ(3)), ("-2/4", QQ(-1, 2)), (Fraction(6, 9), QQ(2, 3)), ("7", QQ(7))],
)
def test_rational_coercion(value, expected):
    assert rational(value) == expected


def test_rational_rejects_bool():
    with pytest.raises(TypeError):
        rational(True)


@pytest.mark.parametrize("text", ["1/0", "abc", "1.5", ""])
def test_parse_rational_errors(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_render_rational_normalizes_sign():
    assert render_rational(QQ(3, -6)) == "-1/2"
    assert render_rational(QQ(4, 2)) == "2"


def test_rational_function_canonical_form():
    a = parse_rational_function("(t^2-1)/(t-1)")
    b = parse_rational_function("t+1")
    assert a == b
    assert render_scalar(a) == "t + 1"


def test_rational_function_implicit_multiplication():
    assert parse_rational_function("2t") == parse_rational_function("2*t")


def test_parse_rational_function_error():
    with pytest.raises(ParseError):
        parse_rational_function("t +* 1")


def test_rf_eval_and_pole():
    f = parse_rational_function("2*t*(1-t)/((1-t)^2+t^2)")
    assert rf_eval(f, "1/2") == QQ(1)
    assert rf_eval(f, 0) == QQ(0)
    g = parse_rational_function("1/(2*t-1)")
    with pytest.raises(PoleError) as info:
        rf_eval(g, "1/2")
    assert info.value.t0 == "1/2"


def test_rf_eval_constant():
    assert rf_eval(QQ(5), 3) == QQ(5)


def test_lift_into_function_field():
    c = lift(QQ(2, 3), QQ_t)
    assert c == QQ_t.convert(QQ(2, 3))
    assert lift(2, QQ) == QQ(2)


def test_sturm_counts_roots_in_interval():
    p = Poly((x - 1) * (x - 2) * (x + 3), x, domain=QQ)
    assert sturm_real_root_count(p) == 3
    assert sturm_real_root_count(p, 0, 5) == 2
    assert sturm_real_root_count(p, "1/2", "3/2") == 1
    assert sturm_real_root_count(p, -4, "1/2") == 1
    assert sturm_real_root_count(p, 2, 1) == 0


def test_sturm_ignores_complex_roots():
    p = Poly((x**2 + 1) * (x - 5), x, domain=QQ)
    assert sturm_real_root_count(p) == 1
    assert not all_roots_real(p)


def test_all_roots_real_with_multiplicity():
    p = Poly((x - 1) ** 3 * (x + 2), x, domain=QQ)
    assert all_roots_real(p)


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        sturm_real_root_count(Poly(0, x, domain=QQ))


def random_rational(rng, nonzero=False):
    while True:
        q = rational(Fraction(rng.randint(-40, 40), rng.randint(1, 25)))
        if q or not nonzero:
            return q


def test_field_axioms_on_random_rationals():
    rng = random.Random(11)
    for _ in range(300):
        a, b, c = (random_rational(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        d = random_rational(rng, nonzero=True)
        assert d * (1 / d) == QQ(1)


def random_rational_function(rng):
    coeffs = [rng.randint(-5, 5) for _ in range(5)]
    return parse_rational_function(
        f"({coeffs[0]}*t^2 + {coeffs[1]}*t + {coeffs[2]})/({coeffs[3]}*t + {coeffs[4] or 1})"
    )


def test_rf_eval_is_additive_and_multiplicative_away_from_poles():
    rng = random.Random(23)
    checked = 0
    while checked < 200:
        f, g = random_rational_function(rng), random_rational_function(rng)
        t0 = random_rational(rng)
        try:
            fv, gv = rf_eval(f, t0), rf_eval(g, t0)
        except PoleError:
            continue
        assert rf_eval(f + g, t0) == fv + gv
        assert rf_eval(f * g, t0) == fv * gv
        checked += 1


def random_squarefree(rng):
    """A squarefree polynomial with known real roots, possibly times x^2 + c."""
    candidates = sorted({QQ(n, d) for n in range(-6, 7) for d in (1, 2, 3)})
    roots = rng.sample(candidates, rng.randint(1, 4))
    p = Poly(rng.choice((-3, -1, 2, 5)), x, domain=QQ)
    for r in roots:
        p = p * Poly(x - QQ.to_sympy(r), x, domain=QQ)
    if rng.random() < 0.5:
        p = p * Poly(x**2 + rng.choice((1, 2, 7)), x, domain=QQ)
    return p, roots


def test_sturm_count_matches_known_roots():
    rng = random.Random(3)
    for _ in range(200):
        p, roots = random_squarefree(rng)
        assert p.degree() <= 6
        assert sturm_real_root_count(p) == len(roots)
        # endpoints with denominator 7 never hit a root
        lo, hi = sorted(QQ(rng.choice([m for m in range(-50, 50) if m % 7]), 7) for _ in range(2))
        expected = sum(1 for r in roots if lo < r <= hi)
        assert sturm_real_root_count(p, lo, hi) == expected
        assert all_roots_real(p) == (p.degree() == len(roots))
