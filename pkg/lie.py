"""Lie algebras given by structure constants.

Convention: d e^k = sum_{l<m} c^k_{lm} e^l ^ e^m together with
d alpha(x, y) = -alpha([x, y]), so [e_l, e_m] = -sum_k c^k_{lm} e_k.
``LieAlgebra.bracket_basis`` is the only place that turns constants into brackets.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, InstanceOf
from sympy import Poly, QQ, Symbol

from errors import AmbientMismatch, DimensionMismatch, IndexPairError, InternalInvariantError, JacobiError
from exterior import cdiff, d_generator, d_matrix
from linalg import Subspace, matrix, mat_vec
from scalar import all_roots_real, lift, rational

logger = logging.getLogger(__name__)

MAX_DIM = 9


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    structure_constants: Tuple[Tuple[Tuple[int, int, int], object], ...]

    @classmethod
    def from_constants(cls, dim, constants: Mapping, check=True):
        """Build from {(l, m, k): c^k_lm}; keys with l > m are folded with a sign flip."""
        if dim < 1 or dim > MAX_DIM:
            raise IndexPairError(0, f"dimension {dim} outside 1..{MAX_DIM}")
        folded = {}
        for (l, m, k), c in constants.items():
            if not all(1 <= i <= dim for i in (l, m, k)):
                raise IndexPairError(0, f"index out of range in ({l}, {m}, {k})")
            if l == m:
                raise IndexPairError(0, f"repeated index in ({l}, {m}, {k})")
            c = rational(c)
            if l > m:
                l, m, c = m, l, -c
            folded[(l, m, k)] = folded.get((l, m, k), QQ(0)) + c
        items = tuple(sorted(((key, c) for key, c in folded.items() if c), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1])))
        g = cls(dim, items)
        if check:
            verdict = validate_jacobi(g)
            if not verdict.ok:
                raise JacobiError(verdict.witness)
        return g

    @classmethod
    def abelian(cls, dim):
        return cls(dim, ())

    @cached_property
    def constants(self):
        return dict(self.structure_constants)

    def bracket_basis(self, i, j):
        """[e_i, e_j] as {k: coefficient}."""
        if i == j:
            return {}
        sign = -1
        if i > j:
            i, j, sign = j, i, 1
        return {k: sign * c for (l, m, k), c in self.structure_constants if l == i and m == j}

    def bracket(self, x, y, domain=QQ):
        out = [domain.zero] * self.dim
        for (l, m, k), c in self.structure_constants:
            xl, xm, yl, ym = x[l - 1], x[m - 1], y[l - 1], y[m - 1]
            w = xl * ym - xm * yl
            if w:
                out[k - 1] -= lift(c, domain) * w
        return out

    def ad_matrix(self, i, domain=QQ):
        cols = []
        for j in range(1, self.dim + 1):
            col = [domain.zero] * self.dim
            for k, c in self.bracket_basis(i, j).items():
                col[k - 1] = lift(c, domain)
            cols.append(col)
        return matrix([list(r) for r in zip(*cols)], self.dim, domain)

    def change_basis(self, p):
        """Isomorphic algebra in the basis given by the columns of ``p``."""
        p = p if hasattr(p, "to_list") else matrix(p, self.dim, QQ)
        if p.shape != (self.dim, self.dim) or p.det() == 0:
            raise DimensionMismatch("change of basis needs an invertible square matrix")
        inverse = p.inv()
        columns = [list(col) for col in zip(*p.to_list())]
        constants = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                w = self.bracket(columns[a], columns[b])
                coords = mat_vec(inverse, w)
                for k, c in enumerate(coords):
                    if c:
                        constants[(a + 1, b + 1, k + 1)] = -c
        return LieAlgebra.from_constants(self.dim, constants, check=False)

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, constants={len(self.structure_constants)})"


class JacobiVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    ok: bool
    witness: Optional[int] = None


class LcsReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    series: List[InstanceOf[Subspace]]
    step: Optional[int]

    @property
    def dims(self):
        return [s.dim for s in self.series]

    @property
    def nilpotent(self):
        return self.step is not None


class SolvabilityFlag(str, Enum):
    NILPOTENT = "nilpotent"
    SOLVABLE_REAL_SPECTRUM = "solvable_real_spectrum"
    SOLVABLE_UNKNOWN = "solvable_unknown"
    NOT_SOLVABLE = "not_solvable"

    @property
    def permits_transfer(self):
        return self in (SolvabilityFlag.NILPOTENT, SolvabilityFlag.SOLVABLE_REAL_SPECTRUM)


def validate_jacobi(g):
    for k in range(1, g.dim + 1):
        if not cdiff(g, d_generator(g, k)).is_zero:
            logger.debug(f"Jacobi fails at k = {k}")
            return JacobiVerdict(ok=False, witness=k)
    return JacobiVerdict(ok=True)


def _bracket_span(g, left, right):
    rows = [g.bracket(x, y) for x in left for y in right]
    return Subspace.from_rows(rows, g.dim)


def lower_central_series(g, h: Optional[Subspace] = None):
    """g^0 = h, g^{k+1} = [g^k, h]; h defaults to the whole algebra."""
    top = h if h is not None else Subspace.whole(g.dim)
    if top.ambient_dim != g.dim:
        raise AmbientMismatch("subalgebra lives in a different ambient space")
    series = [top]
    while series[-1].dim > 0:
        nxt = _bracket_span(g, series[-1].rows, top.rows)
        if nxt == series[-1]:
            return LcsReport(series=series, step=None)
        series.append(nxt)
    return LcsReport(series=series, step=len(series) - 1)


def derived_series(g):
    series = [Subspace.whole(g.dim)]
    while series[-1].dim > 0:
        nxt = _bracket_span(g, series[-1].rows, series[-1].rows)
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def is_nilpotent(g):
    return lower_central_series(g).nilpotent


def is_solvable(g):
    return derived_series(g)[-1].dim == 0


def ad_trace(g, i):
    return sum((g.bracket_basis(i, j).get(j, QQ(0)) for j in range(1, g.dim + 1)), QQ(0))


@lru_cache(maxsize=None)
def is_unimodular(g):
    by_trace = all(ad_trace(g, i) == 0 for i in range(1, g.dim + 1))
    by_top = g.dim == 1 or d_matrix(g, g.dim - 1).to_Matrix().is_zero_matrix
    if by_trace != by_top:
        raise InternalInvariantError(f"unimodularity criteria disagree for {g!r}")
    return by_trace


@lru_cache(maxsize=None)
def completely_solvable_flag(g):
    if is_nilpotent(g):
        return SolvabilityFlag.NILPOTENT
    if not is_solvable(g):
        return SolvabilityFlag.NOT_SOLVABLE
    x = Symbol("x")
    for i in range(1, g.dim + 1):
        coeffs = [QQ.to_sympy(c) for c in g.ad_matrix(i).charpoly()]
        if not all_roots_real(Poly(coeffs, x, domain=QQ)):
            logger.info(f"ad(e{i}) has non-real eigenvalues")
            return SolvabilityFlag.SOLVABLE_UNKNOWN
    return SolvabilityFlag.SOLVABLE_REAL_SPECTRUM


def direct_sum(g1, g2):
    shift = g1.dim
    constants = dict(g1.constants)
    for (l, m, k), c in g2.structure_constants:
        constants[(l + shift, m + shift, k + shift)] = c
    return LieAlgebra.from_constants(g1.dim + g2.dim, constants, check=False)
