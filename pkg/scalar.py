"""Exact field tower: rationals, univariate polynomials, rational functions in t.

All arithmetic is delegated to sympy's domains. ``QQ`` elements are always
reduced with positive denominators, and ``QQ_t`` elements are kept in sympy's
canonical cancelled form, so equality is structural in both fields.
"""
import logging
from fractions import Fraction

from sympy import Integer, Poly, QQ, Symbol, sstr
from sympy import Rational as SympyRational
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)

from errors import ParseError, PoleError, ZeroPolynomial

logger = logging.getLogger(__name__)

t = Symbol("t")
QQ_t = QQ.frac_field(t)

Rational = type(QQ(1))
RationalFunction = type(QQ_t.one)
Polynomial = Poly

NEG_INF = "-oo"
POS_INF = "+oo"

_TRANSFORMS = standard_transformations + (convert_xor, implicit_multiplication)


def rational(value):
    """Coerce an int, Fraction, 'p/q' string or QQ element to QQ."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    return QQ.convert(value)


def parse_rational(text, offset=0):
    raw = text.strip()
    try:
        if "/" in raw:
            num, den = raw.split("/", 1)
            den = int(den)
            if den == 0:
                raise ParseError(offset, f"zero denominator in {text!r}")
            return QQ(int(num), den)
        return QQ(int(raw))
    except ValueError:
        raise ParseError(offset, f"not a rational number: {text!r}")


def render_rational(q):
    q = rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_scalar(c):
    """Render a QQ or QQ(t) element; rationals as 'p/q'."""
    if isinstance(c, Rational):
        return render_rational(c)
    return sstr(QQ_t.to_sympy(c))


def lift(c, domain):
    """Embed a rational constant into ``domain`` (QQ or QQ(t))."""
    if domain == QQ:
        return rational(c)
    return domain.convert_from(rational(c), QQ)


def parse_rational_function(text, offset=0):
    """Parse an expression in t such as '2*t*(1-t)/((1-t)^2+t^2)'."""
    try:
        expr = parse_expr(
            text,
            local_dict={"t": t},
            global_dict={"Integer": Integer, "Rational": SympyRational, "Symbol": Symbol},
            transformations=_TRANSFORMS,
        )
        value = QQ_t.from_sympy(expr)
    except ParseError:
        raise
    except Exception as e:
        raise ParseError(offset, f"not a rational function of t: {text!r} ({e})")
    return value


def rf_eval(f, t0):
    """Evaluate a rational function at a rational point."""
    t0 = rational(t0)
    if not hasattr(f, "denom"):
        return rational(f)
    den = f.denom(t0)
    if den == 0:
        raise PoleError(render_rational(t0))
    return QQ.convert(f.numer(t0)) / QQ.convert(den)


def _sign_at(poly, point):
    if point is NEG_INF or point is POS_INF:
        lc = poly.LC()
        if lc == 0:
            return 0
        sign = 1 if lc > 0 else -1
        if point is NEG_INF and poly.degree() % 2 == 1:
            sign = -sign
        return sign
    value = poly.eval(point)
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def _variations(sequence, point):
    signs = [s for s in (_sign_at(p, point) for p in sequence) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_real_root_count(p, lo=None, hi=None):
    """Distinct real roots of ``p`` in (lo, hi]; ``None`` bounds are infinite."""
    if p.is_zero:
        raise ZeroPolynomial("Sturm count of the zero polynomial")
    p = p.set_domain(QQ)
    sequence = p.sturm()
    a = NEG_INF if lo is None else QQ.to_sympy(rational(lo))
    b = POS_INF if hi is None else QQ.to_sympy(rational(hi))
    if lo is not None and hi is not None and rational(lo) >= rational(hi):
        return 0
    count = _variations(sequence, a) - _variations(sequence, b)
    logger.debug(f"Sturm count for {p.as_expr()} on ({a}, {b}]: {count}")
    return count


def all_roots_real(p):
    """True iff every complex root of ``p`` is real."""
    if p.is_zero:
        raise ZeroPolynomial("spectrum of the zero polynomial")
    square_free = p.set_domain(QQ).sqf_part()
    return sturm_real_root_count(square_free) == square_free.degree()
