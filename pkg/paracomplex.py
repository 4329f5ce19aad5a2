"""Almost D-complex structures K on a Lie algebra and their bigrading.

The frame lists a basis of g+ followed by a basis of g-, both read off the
reduced echelon forms of ker(K - I) and ker(K + I). The coframe is the dual
basis, so a frame index below ``half`` counts towards p and the rest towards q.
"""
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict
from sympy import QQ

from common_utils import get_settings
from errors import (
    DimensionMismatch,
    EigenspaceImbalance,
    InternalInvariantError,
    NotFound,
    NotHomogeneous,
    NotIntegrable,
    NotInvolution,
)
from exterior import Form, Multivector, basis, cdiff, pairing
from linalg import Subspace, identity, is_zero_vector, kernel, mat_vec, matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ParaStructure:
    k_matrix: object
    domain: object
    g_plus: Subspace
    g_minus: Subspace
    frame: Tuple[Tuple, ...]
    coframe: Tuple[Form, ...]
    _cache: Dict = field(default_factory=dict, repr=False)

    @property
    def n(self):
        return len(self.frame)

    @property
    def half(self):
        return len(self.frame) // 2

    @property
    def plus_frame(self):
        return [list(v) for v in self.frame[: self.half]]

    @property
    def minus_frame(self):
        return [list(v) for v in self.frame[self.half:]]

    @property
    def coframe_plus(self):
        return list(self.coframe[: self.half])

    @property
    def coframe_minus(self):
        return list(self.coframe[self.half:])

    def apply(self, v):
        return mat_vec(self.k_matrix, v)

    def coframe_monomial(self, idx):
        """f^{i1} ^ ... ^ f^{il} for 0-based frame indices."""
        out = Form.monomial((), self.n, 1, self.domain)
        for i in idx:
            out = out.wedge(self.coframe[i])
        return out

    def frame_multivector(self, idx):
        out = Multivector.monomial((), self.n, 1, self.domain)
        for i in idx:
            terms = {(j + 1,): c for j, c in enumerate(self.frame[i]) if c}
            out = out.wedge(Multivector(self.n, terms, self.domain))
        return out

    def bidegree_of(self, idx):
        p = sum(1 for i in idx if i < self.half)
        return p, len(idx) - p

    def bigrade(self, degree):
        """{(p, q): Subspace of Λ^degree} spanned by coframe monomials."""
        key = ("forms", degree)
        if key not in self._cache:
            rows = {}
            for idx in combinations(range(self.n), degree):
                rows.setdefault(self.bidegree_of(idx), []).append(self.coframe_monomial(idx).to_vector(degree))
            ambient = len(basis(self.n, degree))
            self._cache[key] = {
                pq: Subspace.from_rows(vs, ambient, self.domain) for pq, vs in sorted(rows.items())
            }
        return self._cache[key]

    def eigenforms(self, degree, sign):
        """Λ^{degree+} (sign = +1, q even) or Λ^{degree-} (sign = -1, q odd)."""
        key = ("eigen", degree, sign)
        if key not in self._cache:
            ambient = len(basis(self.n, degree))
            rows = []
            for (p, q), space in self.bigrade(degree).items():
                if (q % 2 == 0) == (sign > 0):
                    rows.extend(space.rows)
            self._cache[key] = Subspace.from_rows(rows, ambient, self.domain)
        return self._cache[key]

    def eigen_multivectors(self, degree, sign):
        key = ("multi", degree, sign)
        if key not in self._cache:
            ambient = len(basis(self.n, degree))
            rows = [
                self.frame_multivector(idx).to_vector(degree)
                for idx in combinations(range(self.n), degree)
                if (self.bidegree_of(idx)[1] % 2 == 0) == (sign > 0)
            ]
            self._cache[key] = Subspace.from_rows(rows, ambient, self.domain)
        return self._cache[key]

    def bidegree_components(self, a):
        """Split a homogeneous form into {(p, q): component}."""
        degree = a.degree
        if degree is None:
            return {}
        parts = {}
        for idx in combinations(range(self.n), degree):
            c = pairing(a, self.frame_multivector(idx))
            if c:
                pq = self.bidegree_of(idx)
                term = self.coframe_monomial(idx).scale(c)
                parts[pq] = parts[pq] + term if pq in parts else term
        return parts

    def act(self, a):
        """Natural extension of K to forms: (+1)^p (-1)^q on Λ^{p,q}."""
        out = Form.zero(self.n, self.domain)
        for (p, q), part in self.bidegree_components(a).items():
            out = out + (part if q % 2 == 0 else -part)
        return out


class IntegrabilityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    plus_closed: bool
    minus_closed: bool
    nijenhuis_zero: bool
    # (x, y, [x, y]) for the first bracket leaving its eigenspace
    witness: Optional[Tuple[Any, Any, Any]] = None

    @property
    def integrable(self):
        return self.plus_closed and self.minus_closed


def _coerce_k(k, n, domain):
    if isinstance(k, str):
        from catalog_io import parse_k

        k = parse_k(k, n)
    if hasattr(k, "to_list"):
        domain = domain or k.domain
        k = k.to_list() if k.domain == domain else k.convert_to(domain).to_list()
    domain = domain or QQ
    rows = [list(r) for r in k]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionMismatch(f"K must be {n}x{n}")
    return matrix(rows, n, domain), domain


def validate(k, g, domain=None):
    """Build a ParaStructure from a sign string, nested rows or a DomainMatrix."""
    n = g.dim
    km, domain = _coerce_k(k, n, domain)
    if km * km != identity(n, domain):
        raise NotInvolution("K^2 is not the identity")
    one = identity(n, domain)
    g_plus = kernel(km - one)
    g_minus = kernel(km + one)
    if n % 2 or g_plus.dim != g_minus.dim:
        raise EigenspaceImbalance(f"eigenspaces of dimension {g_plus.dim} and {g_minus.dim}")
    frame = tuple(g_plus.rows) + tuple(g_minus.rows)
    e = matrix([list(col) for col in zip(*frame)], n, domain)
    inverse = e.inv().to_list()
    coframe = tuple(
        Form(n, {(j + 1,): c for j, c in enumerate(row) if c}, domain) for row in inverse
    )
    logger.debug(f"validated K on dim {n}: g+ {g_plus.dim}, g- {g_minus.dim}")
    return ParaStructure(km, domain, g_plus, g_minus, frame, coframe)


def from_eigenspaces(plus_vectors, minus_vectors, g, domain=QQ):
    """K = E diag(1, .., 1, -1, .., -1) E^-1 with E = [plus | minus]."""
    n = g.dim
    if len(plus_vectors) != len(minus_vectors) or len(plus_vectors) * 2 != n:
        raise EigenspaceImbalance(f"{len(plus_vectors)} plus and {len(minus_vectors)} minus vectors on dim {n}")
    columns = [list(v) for v in plus_vectors] + [list(v) for v in minus_vectors]
    e = matrix([list(r) for r in zip(*columns)], n, domain)
    if e.det() == 0:
        raise DimensionMismatch("eigenvectors are not linearly independent")
    half = n // 2
    diag = matrix(
        [[(domain.one if i < half else -domain.one) if i == j else domain.zero for j in range(n)] for i in range(n)],
        n,
        domain,
    )
    return validate(e * diag * e.inv(), g, domain)


def bigrade_projectors(ps, g, degree):
    if g.dim != ps.n:
        raise DimensionMismatch(f"structure on dim {ps.n}, algebra of dim {g.dim}")
    return ps.bigrade(degree)


def nijenhuis(ps, g, x, y):
    """N_K(x, y) = [x, y] + [Kx, Ky] - K[Kx, y] - K[x, Ky]."""
    d = ps.domain
    kx, ky = ps.apply(x), ps.apply(y)
    first = g.bracket(x, y, d)
    second = g.bracket(kx, ky, d)
    third = ps.apply(g.bracket(kx, y, d))
    fourth = ps.apply(g.bracket(x, ky, d))
    return [a + b - c - e for a, b, c, e in zip(first, second, third, fourth)]


def _closure_witness(g, vectors, space, domain):
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            w = g.bracket(vectors[a], vectors[b], domain)
            if not space.contains(w):
                return vectors[a], vectors[b], w
    return None


def integrability(ps, g):
    """Subalgebra closure of g+ and g-, cross-checked against the Nijenhuis tensor."""
    key = ("integrability", g)
    if key in ps._cache:
        return ps._cache[key]
    d = ps.domain
    plus_witness = _closure_witness(g, ps.plus_frame, ps.g_plus, d)
    minus_witness = _closure_witness(g, ps.minus_frame, ps.g_minus, d)
    units = [[d.one if i == j else d.zero for i in range(g.dim)] for j in range(g.dim)]
    nijenhuis_zero = all(
        is_zero_vector(nijenhuis(ps, g, units[i], units[j]))
        for i in range(g.dim)
        for j in range(i + 1, g.dim)
    )
    report = IntegrabilityReport(
        plus_closed=plus_witness is None,
        minus_closed=minus_witness is None,
        nijenhuis_zero=nijenhuis_zero,
        witness=plus_witness or minus_witness,
    )
    if report.integrable != nijenhuis_zero:
        raise InternalInvariantError("subalgebra closure and Nijenhuis criteria disagree")
    ps._cache[key] = report
    return report


def is_abelian(ps, g):
    d = ps.domain
    for vectors in (ps.plus_frame, ps.minus_frame):
        for a in range(len(vectors)):
            for b in range(a + 1, len(vectors)):
                if not is_zero_vector(g.bracket(vectors[a], vectors[b], d)):
                    return False
    return True


def dee_split(ps, g, a):
    """(∂+ a, ∂- a) for a form of pure bidegree (p, q) under an integrable K."""
    if not integrability(ps, g).integrable:
        raise NotIntegrable("the d = ∂+ + ∂- splitting needs an integrable K")
    parts = ps.bidegree_components(a)
    if len(parts) > 1:
        raise NotHomogeneous(f"form has several bidegrees {sorted(parts)}")
    zero = Form.zero(ps.n, ps.domain)
    if not parts:
        return zero, zero
    (p, q), = parts
    image = ps.bidegree_components(cdiff(g, a))
    stray = [pq for pq in image if pq not in ((p + 1, q), (p, q + 1))]
    if stray:
        raise NotIntegrable(f"d leaks into bidegrees {stray}")
    return image.get((p + 1, q), zero), image.get((p, q + 1), zero)


def _closed_under_bracket(g, vectors):
    space = Subspace.from_rows(vectors, g.dim)
    return space.dim == len(vectors) and _closure_witness(g, vectors, space, QQ) is None


def random_paracomplex(g, seed, require_integrable=True, max_attempts=None):
    """Conjugate the standard split by a random invertible box matrix; reject until integrable."""
    n = g.dim
    if n % 2:
        raise DimensionMismatch(f"odd dimension {n}")
    if max_attempts is None:
        max_attempts = get_settings().max_attempts
    rng = random.Random(seed)
    half = n // 2
    attempts = 0
    draws = 0
    while attempts < max_attempts:
        draws += 1
        if draws > 50 * max_attempts:
            break
        p = [[rng.choice((-1, 0, 1)) for _ in range(n)] for _ in range(n)]
        if matrix(p, n).det() == 0:
            continue
        attempts += 1
        columns = [[row[j] for row in p] for j in range(n)]
        plus, minus = columns[:half], columns[half:]
        if require_integrable and not (_closed_under_bracket(g, plus) and _closed_under_bracket(g, minus)):
            continue
        ps = from_eigenspaces(plus, minus, g)
        if require_integrable and not integrability(ps, g).integrable:
            continue
        logger.debug(f"seed {seed}: structure found after {attempts} attempts")
        return ps
    raise NotFound(f"no structure after {attempts} attempts (seed {seed})")


def render_vector(v, domain=QQ):
    """A vector of g rendered as a multivector, e.g. 'e_2 - e_4'."""
    return str(Multivector(len(v), {(i + 1,): c for i, c in enumerate(v) if c}, domain))
