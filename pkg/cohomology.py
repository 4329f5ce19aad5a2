"""Invariant cohomology and homology of (g, K).

dim H^{l±} = dim(Z^l ∩ Λ^{l±}) - dim(B^l ∩ Λ^{l±}); every subgroup dimension is
also recomputed as the rank of the image in normal forms modulo B^l, and the
two must agree. Intersections of H^{l+} and H^{l-} are taken among those normal
forms, which span a complement of B^l inside Z^l.
"""
import logging
from functools import lru_cache
from typing import Dict, List

from pydantic import BaseModel, ConfigDict, InstanceOf, PrivateAttr
from sympy import QQ

from errors import DimensionMismatch, InternalInvariantError, NotClosed, NotIntegrable
from exterior import Form, Multivector, basis, boundary, boundary_matrix, cdiff, d_matrix, pairing
from linalg import (
    Subspace,
    image,
    independent_preimages,
    kernel,
    matrix,
    quotient_image,
    quotient_image_dim,
)
from paracomplex import integrability

logger = logging.getLogger(__name__)

COHOMOLOGY = "cohomology"
HOMOLOGY = "homology"


class CochainComplexSlice(BaseModel):
    model_config = ConfigDict(frozen=True)

    degree: int
    z: InstanceOf[Subspace]
    b: InstanceOf[Subspace]

    @property
    def betti(self):
        return self.z.dim - self.b.dim


class SubgroupReport(BaseModel):
    stage: int
    betti: int
    dim_plus: int
    dim_minus: int
    intersection_dim: int
    plus_reps: List[str] = []
    minus_reps: List[str] = []
    pure: bool
    full: bool
    pure_and_full: bool
    side: str = COHOMOLOGY

    _plus_elements: list = PrivateAttr(default_factory=list)
    _minus_elements: list = PrivateAttr(default_factory=list)

    @property
    def plus_elements(self):
        """Representatives as Form (or Multivector) objects."""
        return list(self._plus_elements)

    @property
    def minus_elements(self):
        return list(self._minus_elements)


class PqReport(BaseModel):
    p: int
    q: int
    dim: int
    reps: List[str] = []


class PqDecomposition(BaseModel):
    stage: int
    dims: Dict[str, int]
    plus_span: int
    minus_span: int
    plus_sum: int
    minus_sum: int

    @property
    def direct(self):
        return self.plus_span == self.plus_sum and self.minus_span == self.minus_sum


def _check_degree(g, degree):
    if degree < 0 or degree > g.dim:
        raise DimensionMismatch(f"stage {degree} outside 0..{g.dim}")


@lru_cache(maxsize=None)
def cochain_slice(g, degree, domain=QQ):
    _check_degree(g, degree)
    z = kernel(d_matrix(g, degree, domain))
    if degree == 0:
        b = Subspace.zero(1, domain)
    else:
        b = image(d_matrix(g, degree - 1, domain))
    logger.debug(f"degree {degree}: dim Z = {z.dim}, dim B = {b.dim}")
    return CochainComplexSlice(degree=degree, z=z, b=b)


@lru_cache(maxsize=None)
def chain_slice(g, degree, domain=QQ):
    """Cycles and boundaries of the multivector complex in degree ``degree``."""
    _check_degree(g, degree)
    z = kernel(boundary_matrix(g, degree, domain))
    if degree == g.dim:
        b = Subspace.zero(1, domain)
    else:
        b = image(boundary_matrix(g, degree + 1, domain))
    return CochainComplexSlice(degree=degree, z=z, b=b)


def betti(g, degree):
    return cochain_slice(g, degree).betti


def betti_numbers(g):
    return [betti(g, k) for k in range(g.dim + 1)]


def _subgroup_report(side, degree, cs, w_plus, w_minus, element):
    z, b = cs.z, cs.b
    dims = []
    images = []
    reps = []
    for w in (w_plus, w_minus):
        by_formula = quotient_image_dim(z, b, w)
        q = quotient_image(z, b, w)
        if by_formula != q.dim:
            raise InternalInvariantError(
                f"{side} degree {degree}: subgroup dimension {by_formula} by formula, {q.dim} in the quotient"
            )
        dims.append(by_formula)
        images.append(q)
        reps.append([element(v) for v in independent_preimages(z, b, w)])
    inter = (images[0] & images[1]).dim
    if inter != images[0].dim + images[1].dim - (images[0] + images[1]).dim:
        raise InternalInvariantError(f"{side} degree {degree}: Grassmann identity fails")
    total = dims[0] + dims[1] - inter
    if total > cs.betti:
        raise InternalInvariantError(f"{side} degree {degree}: subgroups span {total} > betti {cs.betti}")
    pure = inter == 0
    full = total == cs.betti
    report = SubgroupReport(
        stage=degree,
        betti=cs.betti,
        dim_plus=dims[0],
        dim_minus=dims[1],
        intersection_dim=inter,
        plus_reps=[str(r) for r in reps[0]],
        minus_reps=[str(r) for r in reps[1]],
        pure=pure,
        full=full,
        pure_and_full=pure and full,
        side=side,
    )
    report._plus_elements = reps[0]
    report._minus_elements = reps[1]
    return report


def subgroup_dims(g, ps, degree):
    """H^{l+} and H^{l-} of an almost D-complex structure, with verdicts."""
    _check_degree(g, degree)
    d = ps.domain
    cs = cochain_slice(g, degree, d)
    return _subgroup_report(
        COHOMOLOGY,
        degree,
        cs,
        ps.eigenforms(degree, 1),
        ps.eigenforms(degree, -1),
        lambda v: Form.from_vector(v, degree, g.dim, d),
    )


def homology_subgroups(g, ps, degree):
    _check_degree(g, degree)
    d = ps.domain
    cs = chain_slice(g, degree, d)
    return _subgroup_report(
        HOMOLOGY,
        degree,
        cs,
        ps.eigen_multivectors(degree, 1),
        ps.eigen_multivectors(degree, -1),
        lambda v: Multivector.from_vector(v, degree, g.dim, d),
    )


def _require_integrable(g, ps):
    if not integrability(ps, g).integrable:
        raise NotIntegrable("H^(p,q) is defined for integrable structures")


def pq_subgroup(g, ps, p, q):
    _require_integrable(g, ps)
    degree = p + q
    _check_degree(g, degree)
    d = ps.domain
    cs = cochain_slice(g, degree, d)
    w = ps.bigrade(degree).get((p, q), Subspace.zero(len(basis(g.dim, degree)), d))
    reps = [Form.from_vector(v, degree, g.dim, d) for v in independent_preimages(cs.z, cs.b, w)]
    return PqReport(p=p, q=q, dim=quotient_image_dim(cs.z, cs.b, w), reps=[str(r) for r in reps])


def pq_decomposition(g, ps, degree):
    """Dimensions of every H^(p,q) with p + q = degree and of their q-even/q-odd spans."""
    _require_integrable(g, ps)
    _check_degree(g, degree)
    d = ps.domain
    cs = cochain_slice(g, degree, d)
    ambient = len(basis(g.dim, degree))
    dims = {}
    spans = {0: Subspace.zero(ambient, d), 1: Subspace.zero(ambient, d)}
    sums = {0: 0, 1: 0}
    for (p, q), w in ps.bigrade(degree).items():
        q_image = quotient_image(cs.z, cs.b, w)
        dims[f"{p},{q}"] = q_image.dim
        spans[q % 2] = spans[q % 2] + q_image
        sums[q % 2] += q_image.dim
    return PqDecomposition(
        stage=degree,
        dims=dims,
        plus_span=spans[0].dim,
        minus_span=spans[1].dim,
        plus_sum=sums[0],
        minus_sum=sums[1],
    )


def is_closed(g, a):
    return cdiff(g, a).is_zero


def is_exact(g, a):
    if a.is_zero:
        return True
    degree = a.degree
    return cochain_slice(g, degree, a.domain).b.contains(a.to_vector(degree))


def _require_closed(g, *forms):
    for a in forms:
        if not is_closed(g, a):
            raise NotClosed(f"{a} is not closed")


def cohomologous(g, a, b):
    _require_closed(g, a, b)
    return is_exact(g, a - b)


def class_in_subgroup(g, ps, a, sign):
    """True iff ``a`` is closed and [a] admits a representative in Λ^{l±}."""
    _require_closed(g, a)
    if a.is_zero:
        return True
    degree = a.degree
    cs = cochain_slice(g, degree, a.domain)
    target = quotient_image(cs.z, cs.b, ps.eigenforms(degree, sign))
    return target.contains(cs.b.reduce(a.to_vector(degree)))


def cup(g, a, b):
    """Representative of [a] ∪ [b]."""
    _require_closed(g, a, b)
    return a.wedge(b)


def top_pairing(g, a, v):
    if not is_closed(g, a):
        raise NotClosed(f"{a} is not closed")
    if not boundary(g, v).is_zero:
        raise NotClosed(f"{v} is not a cycle")
    return pairing(a, v)


def pairing_matrix(g, degree, domain=QQ):
    """Pairings between representative bases of H^degree and H_degree."""
    _check_degree(g, degree)
    co = cochain_slice(g, degree, domain)
    ho = chain_slice(g, degree, domain)
    ambient = len(basis(g.dim, degree))
    whole = Subspace.whole(ambient, domain)
    forms = [Form.from_vector(v, degree, g.dim, domain) for v in independent_preimages(co.z, co.b, whole)]
    cycles = [Multivector.from_vector(v, degree, g.dim, domain) for v in independent_preimages(ho.z, ho.b, whole)]
    rows = [[top_pairing(g, a, v) for v in cycles] for a in forms]
    return matrix(rows, len(cycles), domain)
