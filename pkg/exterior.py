"""Exterior algebra of g* (forms) and of g (multivectors).

Monomials are strictly increasing 1-based index tuples, and the basis of each
degree is ordered lexicographically. Forms print as ``e14 + 2*e23 - 1/2*e56``,
multivectors as ``e_14 + 2*e_23``.
"""
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from sympy import QQ

from errors import AmbientMismatch, NotHomogeneous, ParseError
from linalg import matrix
from scalar import Rational, lift, parse_rational, render_rational, render_scalar

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def basis(n, degree):
    if degree < 0 or degree > n:
        return ()
    return tuple(combinations(range(1, n + 1), degree))


@lru_cache(maxsize=None)
def basis_index(n, degree):
    return {idx: i for i, idx in enumerate(basis(n, degree))}


def sort_sign(indices):
    """Sort an index sequence, returning (sign, sorted tuple); sign 0 on a repeat."""
    seq = list(indices)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(seq, seq[1:]):
        if a == b:
            return 0, None
    return sign, tuple(seq)


@dataclass(frozen=True)
class _Graded:
    n: int
    terms: dict = field(default_factory=dict)
    domain: object = QQ

    PREFIX = "e"

    def __post_init__(self):
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(idx)
            if any(b <= a for a, b in zip(idx, idx[1:])) or any(i < 1 or i > self.n for i in idx):
                raise AmbientMismatch(f"bad monomial {idx} for n = {self.n}")
            if c:
                clean[idx] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, n, domain=QQ):
        return cls(n, {}, domain)

    @classmethod
    def monomial(cls, idx, n, coeff=1, domain=QQ):
        sign, ordered = sort_sign(idx)
        if sign == 0:
            return cls.zero(n, domain)
        return cls(n, {ordered: domain.convert(coeff) * sign}, domain)

    @classmethod
    def from_vector(cls, vector, degree, n, domain=QQ):
        terms = {idx: c for idx, c in zip(basis(n, degree), vector) if c}
        return cls(n, terms, domain)

    def _like(self, terms):
        return type(self)(self.n, terms, self.domain)

    def _check(self, other):
        if type(other) is not type(self) or other.n != self.n or other.domain != self.domain:
            raise AmbientMismatch(f"cannot combine {type(self).__name__}(n={self.n}) with {other!r}")

    @property
    def is_zero(self):
        return not self.terms

    @property
    def degrees(self):
        return sorted({len(idx) for idx in self.terms})

    @property
    def degree(self):
        degrees = self.degrees
        if len(degrees) > 1:
            raise NotHomogeneous(f"mixed degrees {degrees}")
        return degrees[0] if degrees else None

    def coefficient(self, idx):
        return self.terms.get(tuple(idx), self.domain.zero)

    def to_vector(self, degree):
        index = basis_index(self.n, degree)
        out = [self.domain.zero] * len(index)
        for idx, c in self.terms.items():
            if len(idx) != degree:
                raise NotHomogeneous(f"term {idx} is not of degree {degree}")
            out[index[idx]] = c
        return out

    def convert(self, domain):
        return type(self)(self.n, {idx: domain.convert(c) for idx, c in self.terms.items()}, domain)

    def scale(self, c):
        c = self.domain.convert(c)
        return self._like({idx: c * v for idx, v in self.terms.items()})

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for idx, c in other.terms.items():
            terms[idx] = terms.get(idx, self.domain.zero) + c
        return self._like(terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._like({idx: -c for idx, c in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def wedge(self, other):
        self._check(other)
        terms = {}
        zero = self.domain.zero
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                sign, idx = sort_sign(i + j)
                if sign:
                    terms[idx] = terms.get(idx, zero) + (a * b if sign > 0 else -(a * b))
        return self._like(terms)

    __xor__ = wedge

    def __eq__(self, other):
        if not isinstance(other, _Graded):
            return NotImplemented
        return type(self) is type(other) and self.n == other.n and self.terms == other.terms

    __hash__ = None

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms, key=lambda i: (len(i), i)):
            negative, coeff = _coefficient_text(self.terms[idx])
            name = (self.PREFIX + "".join(str(i) for i in idx)) if idx else ""
            if name and coeff:
                body = f"{coeff}*{name}"
            else:
                body = name or coeff or "1"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"{type(self).__name__}({self.render()!r}, n={self.n})"


def _coefficient_text(c):
    """(negative, text) with text '' for a unit coefficient."""
    if isinstance(c, Rational):
        negative = c < 0
        magnitude = -c if negative else c
        return negative, "" if magnitude == 1 else render_rational(magnitude)
    if c == 1:
        return False, ""
    if c == -1:
        return True, ""
    return False, f"({render_scalar(c)})"


class Form(_Graded):
    """Element of Λ•(g*)."""

    PREFIX = "e"


class Multivector(_Graded):
    """Element of Λ•(g)."""

    PREFIX = "e_"


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(e_?)?(\d*)\s*")


def _parse_terms(text, n, domain, cls):
    body = text.strip()
    if body in ("", "0"):
        return cls.zero(n, domain)
    result = cls.zero(n, domain)
    pos = 0
    first = True
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos:
            raise ParseError(pos, f"unexpected {body[pos:]!r}")
        sign, coeff, prefix, digits = m.groups()
        if not first and not sign:
            raise ParseError(pos, "expected '+' or '-' between terms")
        if prefix is None and coeff is None:
            raise ParseError(pos, "empty term")
        if prefix is not None and prefix != cls.PREFIX:
            raise ParseError(pos, f"expected prefix {cls.PREFIX!r}, got {prefix!r}")
        if prefix is not None and not digits:
            raise ParseError(pos, "missing indices")
        value = parse_rational(coeff, pos) if coeff else QQ(1)
        if sign == "-":
            value = -value
        idx = tuple(int(ch) for ch in digits) if prefix else ()
        if any(i < 1 or i > n for i in idx):
            raise ParseError(pos, f"index out of range in {digits!r}")
        result = result + cls.monomial(idx, n, lift(value, domain), domain)
        pos = m.end()
        first = False
    return result


def parse_form(text, n, domain=QQ):
    """Parse 'e16 + e25 - 1/2*e34' into a Form."""
    return _parse_terms(text, n, domain, Form)


def parse_multivector(text, n, domain=QQ):
    return _parse_terms(text, n, domain, Multivector)


def pairing(alpha, v):
    """Monomial contraction <alpha, v>."""
    if alpha.n != v.n:
        raise AmbientMismatch("pairing of different ambient dimensions")
    total = alpha.domain.zero
    for idx, c in alpha.terms.items():
        w = v.terms.get(idx)
        if w:
            total += c * w
    return total


@lru_cache(maxsize=None)
def d_generator(g, k, domain=QQ):
    """d e^k read off the structure constants."""
    terms = {(l, m): lift(c, domain) for (l, m, kk), c in g.structure_constants if kk == k}
    return Form(g.dim, terms, domain)


def cdiff(g, a):
    """Chevalley-Eilenberg differential, extended as an antiderivation."""
    if a.n != g.dim:
        raise AmbientMismatch(f"form over n = {a.n} for an algebra of dimension {g.dim}")
    domain = a.domain
    terms = {}
    for idx, c in a.terms.items():
        for pos, k in enumerate(idx):
            dk = d_generator(g, k, domain)
            for (l, m), coef in dk.terms.items():
                sign, new = sort_sign(idx[:pos] + (l, m) + idx[pos + 1:])
                if not sign:
                    continue
                if (pos % 2 == 1) != (sign < 0):
                    value = -(coef * c)
                else:
                    value = coef * c
                terms[new] = terms.get(new, domain.zero) + value
    return Form(a.n, terms, domain)


def boundary(g, v):
    """Chevalley-Eilenberg boundary on multivectors:
    d(x1^...^xl) = sum_{a<b} (-1)^(a+b) [xa, xb] ^ x1^..^xa^..^xb^..^xl.
    """
    if v.n != g.dim:
        raise AmbientMismatch(f"multivector over n = {v.n} for an algebra of dimension {g.dim}")
    domain = v.domain
    terms = {}
    for idx, c in v.terms.items():
        ell = len(idx)
        for a in range(ell):
            for b in range(a + 1, ell):
                rest = idx[:a] + idx[a + 1:b] + idx[b + 1:]
                outer = -1 if (a + b) % 2 else 1
                for k, coef in g.bracket_basis(idx[a], idx[b]).items():
                    sign, new = sort_sign((k,) + rest)
                    if not sign:
                        continue
                    value = lift(coef, domain) * c
                    if sign * outer < 0:
                        value = -value
                    terms[new] = terms.get(new, domain.zero) + value
    return Multivector(v.n, terms, domain)


@lru_cache(maxsize=None)
def d_matrix(g, degree, domain=QQ):
    """Matrix of d: Λ^degree -> Λ^(degree+1) acting on coordinate columns."""
    n = g.dim
    source = basis(n, degree)
    target_dim = len(basis(n, degree + 1))
    rows = [[domain.zero] * len(source) for _ in range(target_dim)]
    for j, idx in enumerate(source):
        if degree + 1 > n:
            break
        image = cdiff(g, Form.monomial(idx, n, 1, domain))
        for i, c in enumerate(image.to_vector(degree + 1)):
            rows[i][j] = c
    logger.debug(f"d matrix in degree {degree}: {target_dim}x{len(source)}")
    return matrix(rows, len(source), domain)


@lru_cache(maxsize=None)
def boundary_matrix(g, degree, domain=QQ):
    """Matrix of the boundary Λ_degree -> Λ_(degree-1)."""
    n = g.dim
    source = basis(n, degree)
    target_dim = len(basis(n, degree - 1))
    rows = [[domain.zero] * len(source) for _ in range(target_dim)]
    if degree >= 1:
        for j, idx in enumerate(source):
            image = boundary(g, Multivector.monomial(idx, n, 1, domain))
            for i, c in enumerate(image.to_vector(degree - 1)):
                rows[i][j] = c
    return matrix(rows, len(source), domain)
