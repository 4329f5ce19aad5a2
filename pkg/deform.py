"""One-parameter families K_t over QQ(t) and their jump loci."""
import logging
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, InstanceOf
from sympy.polys.matrices import DomainMatrix

from cohomology import subgroup_dims
from common_utils import ordered_map
from dkahler import dkahler_decide
from errors import DimensionMismatch, InvolutionFailsInField, PoleError
from lie import LieAlgebra
from linalg import identity, matrix
from paracomplex import integrability, render_vector, validate
from scalar import QQ_t, render_rational, rational, rf_eval

logger = logging.getLogger(__name__)

GENERIC = "generic"
CSV_HEADER = "t,betti,dim_plus,dim_minus,pure,full,integrable"


class DeformationFamily(BaseModel):
    model_config = ConfigDict(frozen=True)

    g: InstanceOf[LieAlgebra]
    k_of_t: InstanceOf[DomainMatrix]
    domain_note: str = ""

    @classmethod
    def from_rows(cls, g, rows, domain_note=""):
        rows = [list(r) for r in rows]
        if len(rows) != g.dim or any(len(r) != g.dim for r in rows):
            raise DimensionMismatch(f"K_t must be {g.dim}x{g.dim}")
        return cls(g=g, k_of_t=matrix(rows, g.dim, QQ_t), domain_note=domain_note)

    def entries(self):
        return self.k_of_t.to_list()

    def at(self, t0):
        """K_t0 as a rational structure; PoleError if an entry has a pole at t0."""
        rows = [[rf_eval(c, t0) for c in row] for row in self.entries()]
        return validate(rows, self.g)


class FamilyVerdict(BaseModel):
    valid: bool
    integrable: bool
    plus_basis: List[str]
    minus_basis: List[str]


class ScanRow(BaseModel):
    t: str
    betti: Optional[int] = None
    dim_plus: Optional[int] = None
    dim_minus: Optional[int] = None
    intersection_dim: Optional[int] = None
    pure: Optional[bool] = None
    full: Optional[bool] = None
    integrable: Optional[bool] = None
    error: Optional[str] = None

    @property
    def dims(self):
        return self.dim_plus, self.dim_minus

    def csv_line(self):
        cells = [self.t]
        for value in (self.betti, self.dim_plus, self.dim_minus, self.pure, self.full, self.integrable):
            if value is None:
                cells.append("")
            elif isinstance(value, bool):
                cells.append("true" if value else "false")
            else:
                cells.append(str(value))
        return ",".join(cells)


class JumpPoint(BaseModel):
    t: str
    generic: Tuple[int, int]
    sampled: Tuple[int, int]


def generic_structure(f):
    return validate(f.k_of_t, f.g, QQ_t)


# K_t^2 = I identically in t with balanced eigenspaces; integrability is reported, not required
def validate_family(f):
    n = f.g.dim
    square = (f.k_of_t * f.k_of_t - identity(n, QQ_t)).to_list()
    for i, row in enumerate(square):
        for j, c in enumerate(row):
            if c:
                raise InvolutionFailsInField((i + 1, j + 1))
    ps = generic_structure(f)
    report = integrability(ps, f.g)
    return FamilyVerdict(
        valid=True,
        integrable=report.integrable,
        plus_basis=[render_vector(v, QQ_t) for v in ps.plus_frame],
        minus_basis=[render_vector(v, QQ_t) for v in ps.minus_frame],
    )


def _row(label, g, ps, degree):
    report = subgroup_dims(g, ps, degree)
    return ScanRow(
        t=label,
        betti=report.betti,
        dim_plus=report.dim_plus,
        dim_minus=report.dim_minus,
        intersection_dim=report.intersection_dim,
        pure=report.pure,
        full=report.full,
        integrable=integrability(ps, g).integrable,
    )


# Subgroup dimensions over QQ(t), valid at all but finitely many t
def generic_dims(f, degree):
    return _row(GENERIC, f.g, generic_structure(f), degree)


# Rows at each rational t, in input order; poles raise unless skip_poles
def sample_scan(f, ts, degree, skip_poles=False):

    def sample(t0):
        label = render_rational(t0)
        try:
            ps = f.at(t0)
        except PoleError as e:
            if not skip_poles:
                raise
            logger.warning(f"Skipping t = {label}: {e}")
            return ScanRow(t=label, error=str(e))
        return _row(label, f.g, ps, degree)

    return ordered_map(sample, [rational(t0) for t0 in ts])


# Sampled rows whose (dim+, dim-) differ from the generic row; pole rows are skipped
def find_jumps(generic, rows):
    jumps = [
        JumpPoint(t=r.t, generic=generic.dims, sampled=r.dims)
        for r in rows
        if r.error is None and r.dims != generic.dims
    ]
    logger.info(f"{len(jumps)} exceptional points among {len(rows)} samples")
    return jumps


def jump_report(f, ts, degree):
    return find_jumps(generic_dims(f, degree), sample_scan(f, ts, degree, skip_poles=True))


def dkahler_at(f, t0):
    return dkahler_decide(f.g, f.at(t0))


def scan_csv(generic, rows):
    return "\n".join([CSV_HEADER, generic.csv_line()] + [r.csv_line() for r in rows]) + "\n"
