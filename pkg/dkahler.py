"""Invariant D-Kähler forms: closed, K-anti-invariant, nondegenerate 2-forms."""
import logging
from enum import Enum
from itertools import product
from typing import Optional

from pydantic import BaseModel, PrivateAttr
from sympy import QQ, symbols

from cohomology import cochain_slice, subgroup_dims
from errors import AmbientMismatch, InternalInvariantError, NotIntegrable
from exterior import Form, cdiff
from lie import completely_solvable_flag, is_unimodular
from paracomplex import integrability

logger = logging.getLogger(__name__)

MANIFOLD_LEVEL = "manifold"
LIE_ALGEBRA_LEVEL = "Lie-algebra level only"


class DKahlerStatus(str, Enum):
    WITNESS = "witness"
    NO_INVARIANT_CANDIDATE = "no_invariant_candidate"
    GENERIC_DEGENERATE = "generic_degenerate"
    OBSTRUCTED = "cohomologically_obstructed_top_square"


class DKahlerVerdict(BaseModel):
    status: DKahlerStatus
    witness: Optional[str] = None
    candidate_space_dim: int
    generic_degenerate: bool = False
    cohomological_obstruction: bool = False
    obstruction_note: str = ""
    applicability: str = LIE_ALGEBRA_LEVEL

    _witness_form: Optional[Form] = PrivateAttr(default=None)

    @property
    def witness_form(self):
        return self._witness_form


class TopPower(BaseModel):
    identically_zero: bool
    witness: Optional[str] = None

    _witness_form: Optional[Form] = PrivateAttr(default=None)

    @property
    def witness_form(self):
        return self._witness_form


def anti_invariant_closed_2forms(g, ps):
    """Z^2 ∩ Λ^{2-}."""
    return cochain_slice(g, 2, ps.domain).z & ps.eigenforms(2, -1)


def _top_coefficient(vectors, half, dim):
    """(sum x_i w_i)^half as a polynomial in x, read on e^{1..dim}."""
    names = symbols(f"x1:{len(vectors) + 1}")
    ring = QQ.poly_ring(*names)
    generic = Form.zero(dim, ring)
    for x, v in zip(ring.gens, vectors):
        generic = generic + Form.from_vector(v, 2, dim, QQ).convert(ring).scale(x)
    power = Form.monomial((), dim, 1, ring)
    for _ in range(half):
        power = power.wedge(generic)
    return power.coefficient(tuple(range(1, dim + 1)))


def _grid_values(radius):
    values = [0]
    for r in range(1, radius + 1):
        values.extend((r, -r))
    return values


def grid_points(k, bound):
    """Integer points of {-bound..bound}^k by growing radius, lexicographic in 0, 1, -1, 2, -2, .."""
    for r in range(bound + 1):
        for point in product(_grid_values(r), repeat=k):
            if max((abs(x) for x in point), default=0) == r:
                yield point


def _combine(vectors, point, dim):
    out = Form.zero(dim)
    for c, v in zip(point, vectors):
        if c:
            out = out + Form.from_vector(v, 2, dim).scale(c)
    return out


def _top_power_value(form, half):
    power = Form.monomial((), form.n)
    for _ in range(half):
        power = power.wedge(form)
    return power.coefficient(tuple(range(1, form.n + 1)))


def grid_search(space, half, dim, bound=None):
    """First grid point whose form has nonzero top power, or None."""
    vectors = space.vectors()
    bound = half if bound is None else bound
    for point in grid_points(len(vectors), bound):
        omega = _combine(vectors, point, dim)
        if _top_power_value(omega, half):
            return omega
    return None


def generic_top_power(space, half, dim=None):
    """Decide whether some element of ``space`` (a subspace of Λ^2) has omega^half != 0."""
    dim = 2 * half if dim is None else dim
    vectors = space.vectors()
    if not vectors or 2 * half != dim:
        return TopPower(identically_zero=True)
    poly = _top_coefficient(vectors, half, dim)
    if not poly:
        logger.debug(f"top power vanishes identically on a {len(vectors)}-dim space")
        return TopPower(identically_zero=True)
    # per-variable degree is at most half, so the grid of width 2*half+1 has a hit
    for point in grid_points(len(vectors), half):
        if poly(*point):
            omega = _combine(vectors, point, dim)
            result = TopPower(identically_zero=False, witness=str(omega))
            result._witness_form = omega
            return result
    raise InternalInvariantError("nonzero top power without a grid witness")


def _obstruction(g, ps, half):
    """True when every class in H^{2-} has vanishing half-th power in H^{2 half}."""
    report = subgroup_dims(g, ps, 2)
    reps = [r.to_vector(2) for r in report.minus_elements]
    top = cochain_slice(g, 2 * half)
    if top.b.dim:
        raise InternalInvariantError("top-degree coboundaries on a unimodular algebra")
    if not reps:
        return True
    return not _top_coefficient(reps, half, g.dim)


def _verify_witness(g, ps, omega, half):
    if not cdiff(g, omega).is_zero:
        raise InternalInvariantError(f"witness {omega} is not closed")
    if ps.act(omega) != -omega:
        raise InternalInvariantError(f"witness {omega} is not K-anti-invariant")
    if not _top_power_value(omega, half):
        raise InternalInvariantError(f"witness {omega} is degenerate")


def dkahler_decide(g, ps):
    if ps.domain != QQ:
        raise AmbientMismatch("D-Kähler decisions run over the rationals; evaluate the family first")
    if not integrability(ps, g).integrable:
        raise NotIntegrable("D-Kähler structures need an integrable K")
    half = g.dim // 2
    flag = completely_solvable_flag(g)
    transfer = flag.permits_transfer and is_unimodular(g)
    applicability = MANIFOLD_LEVEL if flag.permits_transfer else LIE_ALGEBRA_LEVEL
    space = anti_invariant_closed_2forms(g, ps)
    if space.dim == 0:
        return DKahlerVerdict(
            status=DKahlerStatus.NO_INVARIANT_CANDIDATE,
            candidate_space_dim=0,
            obstruction_note="no closed K-anti-invariant 2-forms",
            applicability=applicability,
        )
    top = generic_top_power(space, half, g.dim)
    if not top.identically_zero:
        omega = top.witness_form
        _verify_witness(g, ps, omega, half)
        verdict = DKahlerVerdict(
            status=DKahlerStatus.WITNESS,
            witness=str(omega),
            candidate_space_dim=space.dim,
            applicability=applicability,
        )
        verdict._witness_form = omega
        return verdict
    obstructed = transfer and _obstruction(g, ps, half)
    if obstructed:
        status = DKahlerStatus.OBSTRUCTED
        note = f"every class in H^2- has vanishing {half}-th power"
    else:
        status = DKahlerStatus.GENERIC_DEGENERATE
        note = f"omega^{half} vanishes identically on the candidate space"
    logger.info(f"no D-Kähler witness: {status.value}")
    return DKahlerVerdict(
        status=status,
        candidate_space_dim=space.dim,
        generic_degenerate=True,
        cohomological_obstruction=obstructed,
        obstruction_note=note,
        applicability=applicability,
    )
