"""Exact dense linear algebra and subspace calculus over QQ or QQ(t).

Matrices are sympy ``DomainMatrix`` values acting on column vectors. Subspaces
are stored as the nonzero rows of their reduced row echelon form, so two equal
subspaces always compare equal structurally.
"""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from errors import AmbientMismatch, InclusionViolated

logger = logging.getLogger(__name__)

ExactMatrix = DomainMatrix


# Build a DomainMatrix from nested sequences, converting every entry
def matrix(rows, ncols, domain=QQ):
    rows = [[domain.convert(x) for x in row] for row in rows]
    for row in rows:
        if len(row) != ncols:
            raise AmbientMismatch(f"row of length {len(row)} in a {ncols}-column matrix")
    return DomainMatrix(rows, (len(rows), ncols), domain)


def identity(n, domain=QQ):
    return matrix([[domain.one if i == j else domain.zero for j in range(n)] for i in range(n)], n, domain)


def entries(m):
    return m.to_list()


def mat_vec(m, v):
    rows = m.to_list()
    zero = m.domain.zero
    out = []
    for row in rows:
        acc = zero
        for a, x in zip(row, v):
            if a and x:
                acc += a * x
        out.append(acc)
    return out


# Reduced row echelon form: (echelon, rank, pivot columns)
def rref(m):
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0:
        return m, 0, ()
    echelon, pivots = m.rref()
    return echelon, len(pivots), tuple(pivots)


def is_zero_vector(v):
    return all(not x for x in v)


@dataclass(frozen=True, eq=False)
class Subspace:
    ambient_dim: int
    domain: object
    rows: Tuple[Tuple, ...]
    pivots: Tuple[int, ...]

    @classmethod
    def zero(cls, ambient_dim, domain=QQ):
        return cls(ambient_dim, domain, (), ())

    @classmethod
    def whole(cls, ambient_dim, domain=QQ):
        return cls.from_rows(identity(ambient_dim, domain).to_list(), ambient_dim, domain)

    @classmethod
    def from_rows(cls, rows, ambient_dim, domain=QQ):
        rows = [list(r) for r in rows]
        if not rows or ambient_dim == 0:
            return cls.zero(ambient_dim, domain)
        echelon, rank, pivots = rref(matrix(rows, ambient_dim, domain))
        basis = tuple(tuple(r) for r in echelon.to_list()[:rank])
        return cls(ambient_dim, domain, basis, pivots)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def basis(self):
        return matrix(self.rows, self.ambient_dim, self.domain)

    def vectors(self):
        return [list(r) for r in self.rows]

    def reduce(self, v):
        """Normal form of ``v`` modulo this subspace (zero at every pivot)."""
        if len(v) != self.ambient_dim:
            raise AmbientMismatch(f"vector of length {len(v)} in ambient {self.ambient_dim}")
        out = [self.domain.convert(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            c = out[p]
            if c:
                out = [a - c * b for a, b in zip(out, row)]
        return out

    def contains(self, v):
        return is_zero_vector(self.reduce(v))

    def coordinates(self, v):
        if not self.contains(v):
            raise InclusionViolated("vector is not in the subspace")
        return [self.domain.convert(v[p]) for p in self.pivots]

    def is_subspace_of(self, other):
        _check_ambient(self, other)
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.rows == other.rows

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __add__(self, other):
        return subspace_sum(self, other)

    def __and__(self, other):
        return subspace_intersect(self, other)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_ambient(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim}")


# Null space of m acting on column vectors
def kernel(m):
    nrows, ncols = m.shape
    domain = m.domain
    if nrows == 0:
        return Subspace.whole(ncols, domain)
    echelon, rank, pivots = rref(m)
    reduced = echelon.to_list()
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [domain.zero] * ncols
        v[f] = domain.one
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        basis.append(v)
    return Subspace.from_rows(basis, ncols, domain)


# Column space of m
def image(m):
    nrows, ncols = m.shape
    if ncols == 0:
        return Subspace.zero(nrows, m.domain)
    return Subspace.from_rows(m.transpose().to_list(), nrows, m.domain)


def subspace_sum(a, b):
    _check_ambient(a, b)
    return Subspace.from_rows(list(a.rows) + list(b.rows), a.ambient_dim, a.domain)


# Zassenhaus intersection: reduce [[A, A], [B, 0]] and keep rows with a zero left half
def subspace_intersect(a, b):
    _check_ambient(a, b)
    n = a.ambient_dim
    domain = a.domain
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n, domain)
    zeros = [domain.zero] * n
    stacked = [list(r) + list(r) for r in a.rows] + [list(r) + zeros for r in b.rows]
    echelon, rank, pivots = rref(matrix(stacked, 2 * n, domain))
    reduced = echelon.to_list()
    rows = [reduced[i][n:] for i, p in enumerate(pivots) if p >= n]
    result = Subspace.from_rows(rows, n, domain)
    logger.debug(f"intersection of dims {a.dim} and {b.dim} in ambient {n}: {result.dim}")
    return result


# dim of the image of (z ∩ w) in z/b
def quotient_image_dim(z, b, w):
    _check_ambient(z, b)
    _check_ambient(z, w)
    if not b.is_subspace_of(z):
        raise InclusionViolated("b is not contained in z")
    return (z & w).dim - (b & w).dim


# Image of (z ∩ w) in z/b, in normal-form coordinates modulo b
def quotient_image(z, b, w):
    _check_ambient(z, w)
    rows = [b.reduce(v) for v in (z & w).rows]
    return Subspace.from_rows(rows, z.ambient_dim, z.domain)


# Echelon rows of z ∩ w whose classes modulo b are linearly independent
def independent_preimages(z, b, w) -> Sequence[list]:
    kept = []
    span = Subspace.zero(z.ambient_dim, z.domain)
    for v in (z & w).rows:
        r = b.reduce(v)
        if not span.contains(r):
            kept.append(list(v))
            span = span + Subspace.from_rows([r], z.ambient_dim, z.domain)
    return kept
