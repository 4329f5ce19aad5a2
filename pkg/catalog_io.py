"""Structure-equation notation, K notation and the built-in catalog.

Algebras are written one comma entry per generator: ``(0^4, 12, 13)`` means
d e^5 = e^12 and d e^6 = e^13. A term is ``[sign][coefficient*]jk`` with j < k.
"""
import logging
import re
from functools import lru_cache
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, InstanceOf
from sympy import QQ

from errors import DimensionMismatch, IndexPairError, ParseError, UnknownEntry
from lie import MAX_DIM, LieAlgebra
from scalar import parse_rational, parse_rational_function, render_rational

logger = logging.getLogger(__name__)

_ALG_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?(\d+)\s*")
_ZEROS = re.compile(r"\s*0\s*(?:\^\s*(\d+)\s*)?$")
_SIGNS = re.compile(r"^\(?\s*[+-](?:\s*,?\s*[+-])*\s*\)?$")


def _normalize(text):
    return text.replace("−", "-")


def _split_top(text, sep, offset=0):
    """Split on ``sep`` and keep the offset of every piece."""
    pieces = []
    start = 0
    for i, ch in enumerate(text):
        if ch == sep:
            pieces.append((text[start:i], offset + start))
            start = i + 1
    pieces.append((text[start:], offset + start))
    return pieces


def _strip_parens(text):
    body = text.strip()
    offset = len(text) - len(text.lstrip())
    if body.startswith("(") != body.endswith(")"):
        raise ParseError(offset, "unbalanced parentheses")
    if body.startswith("("):
        return body[1:-1], offset + 1
    return body, offset


def _parse_entry(text, offset):
    """Terms of one comma entry as [(j, k, coefficient, position)]."""
    terms = []
    pos = 0
    body = text.rstrip()
    while pos < len(body):
        m = _ALG_TERM.match(body, pos)
        if not m or m.end() == pos:
            raise ParseError(offset + pos, f"unexpected {body[pos:]!r}")
        sign, coeff, digits = m.groups()
        if terms and not sign:
            raise ParseError(offset + pos, "expected '+' or '-' between terms")
        if len(digits) != 2:
            raise IndexPairError(offset + m.start(3), f"expected a digit pair, got {digits!r}")
        j, k = int(digits[0]), int(digits[1])
        if j >= k:
            raise IndexPairError(offset + m.start(3), f"pair {digits} needs j < k")
        value = parse_rational(coeff, offset + pos) if coeff else QQ(1)
        if sign == "-":
            value = -value
        terms.append((j, k, value, offset + m.start(3)))
        pos = m.end()
    if not terms:
        raise ParseError(offset, "empty entry")
    return terms


def parse_algebra(text):
    """Parse '(0^4, 12, 13)' into a validated LieAlgebra."""
    body, offset = _strip_parens(_normalize(text))
    entries = []
    for piece, start in _split_top(body, ",", offset):
        zeros = _ZEROS.match(piece)
        if zeros:
            entries.extend([[]] * int(zeros.group(1) or 1))
        else:
            entries.append(_parse_entry(piece, start))
    n = len(entries)
    if n > MAX_DIM:
        raise ParseError(0, f"dimension {n} exceeds {MAX_DIM}")
    constants = {}
    for k, terms in enumerate(entries, start=1):
        for j, l, value, position in terms:
            if l > n:
                raise IndexPairError(position, f"index {l} out of range 1..{n}")
            constants[(j, l, k)] = constants.get((j, l, k), QQ(0)) + value
    return LieAlgebra.from_constants(n, constants)


def render_algebra(g):
    """Canonical spelling, e.g. '(0,0,12,13)'."""
    entries = []
    for k in range(1, g.dim + 1):
        parts = []
        for (l, m, kk), c in g.structure_constants:
            if kk != k:
                continue
            magnitude = -c if c < 0 else c
            body = f"{l}{m}" if magnitude == 1 else f"{render_rational(magnitude)}*{l}{m}"
            if c < 0:
                parts.append(f"-{body}")
            else:
                parts.append(f"+{body}" if parts else body)
        entries.append("".join(parts) or "0")
    return "(" + ",".join(entries) + ")"


def _check_size(rows, n):
    if any(len(r) != len(rows) for r in rows):
        raise DimensionMismatch("matrix is not square")
    if n is not None and len(rows) != n:
        raise DimensionMismatch(f"matrix of size {len(rows)} for an algebra of dimension {n}")


def parse_k(text, n=None):
    """Sign string '(-,+,+,-)' or rows '1,0;0,-1' to nested rational rows."""
    text = _normalize(text).strip()
    if _SIGNS.match(text):
        signs = [ch for ch in text if ch in "+-"]
        rows = [[QQ(0)] * len(signs) for _ in signs]
        for i, s in enumerate(signs):
            rows[i][i] = QQ(1) if s == "+" else QQ(-1)
    else:
        body, offset = _strip_parens(text)
        rows = [
            [parse_rational(cell, start) for cell, start in _split_top(row, ",", row_start)]
            for row, row_start in _split_top(body, ";", offset)
        ]
    _check_size(rows, n)
    return rows


def parse_family(text, n=None):
    """Rows of rational functions in t, e.g. '-1,0;0,2*t/(1+t^2)'."""
    rows = [
        [parse_rational_function(cell, start) for cell, start in _split_top(row, ",", row_start)]
        for row, row_start in _split_top(_normalize(text), ";")
    ]
    _check_size(rows, n)
    return rows


def parse_eigenspaces(text, n=None):
    """'v;v | v;v' with comma-separated coordinates: (plus vectors, minus vectors)."""
    halves = _split_top(_normalize(text), "|")
    if len(halves) != 2:
        raise ParseError(0, "expected 'plus vectors | minus vectors'")
    spaces = []
    for half, offset in halves:
        vectors = [
            [parse_rational(cell, start) for cell, start in _split_top(vec, ",", vec_start)]
            for vec, vec_start in _split_top(half, ";", offset)
        ]
        if n is not None and any(len(v) != n for v in vectors):
            raise DimensionMismatch(f"eigenvectors must have {n} coordinates")
        spaces.append(vectors)
    return spaces[0], spaces[1]


class StructureSpec(BaseModel):
    kind: Literal["sign", "matrix", "eigenspaces", "family"]
    value: str
    domain_note: Optional[str] = None


class CatalogDocument(BaseModel):
    name: str
    aliases: List[str] = []
    algebra: str
    structures: Dict[str, StructureSpec] = {}
    expected: Dict[str, Dict[str, Any]] = {}
    notes: str = ""


class CatalogEntry(BaseModel):
    name: str
    algebra: InstanceOf[LieAlgebra]
    structures: Dict[str, Any] = {}
    families: Dict[str, Any] = {}
    expected: Dict[str, Dict[str, Any]] = {}
    notes: str = ""
    document: Optional[CatalogDocument] = None


def build_entry(doc):
    from deform import DeformationFamily
    from paracomplex import from_eigenspaces, validate

    g = parse_algebra(doc.algebra)
    entry = CatalogEntry(name=doc.name, algebra=g, expected=doc.expected, notes=doc.notes, document=doc)
    for key, spec in doc.structures.items():
        if spec.kind == "family":
            rows = parse_family(spec.value, g.dim)
            entry.families[key] = DeformationFamily.from_rows(g, rows, spec.domain_note or "")
        elif spec.kind == "eigenspaces":
            plus, minus = parse_eigenspaces(spec.value, g.dim)
            entry.structures[key] = from_eigenspaces(plus, minus, g)
        else:
            entry.structures[key] = validate(parse_k(spec.value, g.dim), g)
    return entry


def load_document(text):
    return build_entry(CatalogDocument.model_validate_json(text))


_A = "((1-t)^2-t^2)/((1-t)^2+t^2)"
_B = "2*t*(1-t)/((1-t)^2+t^2)"

CATALOG: List[CatalogDocument] = [
    CatalogDocument(
        name="ex2.5",
        aliases=["nil6-pure"],
        algebra="(0^4,12,13)",
        structures={"K": StructureSpec(kind="sign", value="(-,+,+,-,-,+)")},
        expected={
            "algebra": {"unimodular": True, "flag": "nilpotent", "step": 2},
            "K:structure": {"integrable": True, "abelian": True},
            "K:2": {"betti": 9, "dim_plus": 4, "dim_minus": 4, "intersection_dim": 0, "pure": True, "full": False},
            "K:dkahler": {"status": "witness", "witness": "e16 + e25 + e34"},
        },
        notes="Abelian D-complex structure, pure but not full at stage 2, with a D-Kähler form.",
    ),
    CatalogDocument(
        name="ex2.6",
        aliases=["nil6-mixed"],
        algebra="(0^3,12,13+14,24)",
        structures={"K": StructureSpec(kind="sign", value="(+,-,+,-,+,-)")},
        expected={
            "algebra": {"unimodular": True, "flag": "nilpotent", "step": 3},
            "K:structure": {"integrable": True, "abelian": False},
            "K:2": {"pure": False},
            "K:4": {"full": False},
            "K:dkahler": {"status": "witness"},
        },
        notes="[e13] = -[e14] lies in both subgroups at stage 2.",
    ),
    CatalogDocument(
        name="ex2.8",
        aliases=["filiform4-almost"],
        algebra="(0,0,12,13)",
        structures={"K": StructureSpec(kind="eigenspaces", value="1,0,0,0;0,-1,0,1 | 0,1,0,0;0,0,1,0")},
        expected={
            "algebra": {"unimodular": True, "flag": "nilpotent", "step": 3},
            "K:structure": {"integrable": False, "abelian": False},
            "K:2": {"betti": 2, "dim_plus": 1, "dim_minus": 1, "intersection_dim": 1, "pure": False, "full": False},
        },
        notes=(
            "Non-integrable: [e1, e4 - e2] = e3 leaves g+. Often described as a product of the "
            "Heisenberg algebra with R, but these equations define the filiform algebra."
        ),
    ),
    CatalogDocument(
        name="ex2.17",
        aliases=["solv4-unstable"],
        algebra="(0,0,23,-24)",
        structures={
            "K0": StructureSpec(kind="sign", value="(-,+,+,-)"),
            "Kt": StructureSpec(
                kind="family", value="-1,0,0,0;0,1,0,-2*t;0,0,1,0;0,0,0,-1", domain_note="t in R"
            ),
        },
        expected={
            "algebra": {"unimodular": True, "flag": "solvable_real_spectrum", "step": None},
            "K0:structure": {"integrable": True, "abelian": False},
            "K0:2": {"betti": 2, "dim_plus": 0, "dim_minus": 2, "intersection_dim": 0, "pure": True, "full": True},
            "K0:dkahler": {"status": "witness", "witness": "e12 + e34"},
            "Kt:family": {"valid": True, "integrable": True},
            "Kt:2:generic": {"betti": 2, "dim_plus": 1, "dim_minus": 1, "pure": False, "full": False},
            "Kt:2:0": {"dim_plus": 0, "dim_minus": 2, "pure": True, "full": True},
            "Kt:2:1/2": {"dim_plus": 1, "dim_minus": 1},
            "Kt:2:1": {"dim_plus": 1, "dim_minus": 1, "pure": False, "full": False},
            "Kt:dkahler:0": {"status": "witness", "witness": "e12 + e34"},
            "Kt:dkahler:1": {"status": "cohomologically_obstructed_top_square"},
        },
        notes="D-Kähler at t = 0 only; [e34]^2 = 0 obstructs every other t.",
    ),
    CatalogDocument(
        name="jump-sci",
        aliases=["jump-lower"],
        algebra="(0,0,0,12,13,24)",
        structures={
            "Kt": StructureSpec(
                kind="family",
                value=f"1,0,0,0,0,0;0,-1,0,0,0,0;0,0,{_A},{_B},0,0;0,0,{_B},-{_A},0,0;0,0,0,0,1,0;0,0,0,0,0,-1",
                domain_note="t in [0,1]",
            )
        },
        expected={
            "algebra": {"unimodular": True, "flag": "nilpotent", "step": 3},
            "Kt:family": {"valid": True, "integrable": True},
            "Kt:2:generic": {"betti": 6, "dim_plus": 4, "dim_minus": 3, "intersection_dim": 2, "pure": False, "full": False},
            "Kt:2:0": {"dim_plus": 3, "dim_minus": 3, "pure": True, "full": True},
            "Kt:2:1": {"dim_plus": 4, "dim_minus": 2, "pure": True, "full": True},
        },
        notes="Both subgroup dimensions jump lower-semicontinuously at t = 0 and t = 1.",
    ),
    CatalogDocument(
        name="jump-scs",
        aliases=["jump-upper"],
        algebra="(0,0,0,12,13,24)",
        structures={
            "Kt": StructureSpec(
                kind="family",
                value=f"1,0,0,0,0,0;0,-1,0,0,0,0;0,0,-1,0,0,0;0,0,0,1,0,0;0,0,0,0,{_A},{_B};0,0,0,0,{_B},-{_A}",
                domain_note="t in [0,1]",
            )
        },
        expected={
            "algebra": {"unimodular": True, "flag": "nilpotent", "step": 3},
            "Kt:family": {"valid": True, "integrable": True},
            "Kt:2:generic": {"betti": 6, "dim_plus": 2, "dim_minus": 1, "pure": True, "full": False},
            "Kt:2:0": {"dim_plus": 4, "dim_minus": 2, "pure": True, "full": True},
            "Kt:2:1": {"dim_plus": 3, "dim_minus": 2, "pure": True, "full": False},
        },
        notes="Both subgroup dimensions jump upper-semicontinuously at t = 0 and t = 1; K_t is Abelian.",
    ),
    CatalogDocument(
        name="solv4-nonunimodular",
        algebra="(0,0,0,13+34)",
        structures={"K": StructureSpec(kind="sign", value="(+,+,-,-)")},
        expected={
            "algebra": {"unimodular": False, "flag": "solvable_real_spectrum", "step": None},
            "K:structure": {"integrable": True, "abelian": False},
            "K:2": {"betti": 3, "dim_plus": 2, "dim_minus": 2, "intersection_dim": 1, "pure": False, "full": True},
        },
        notes="Full but not pure at stage 2: [e34] = -[e13].",
    ),
    CatalogDocument(
        name="torus4",
        algebra="(0,0,0,0)",
        structures={"K": StructureSpec(kind="sign", value="(+,+,-,-)")},
        expected={
            "algebra": {"unimodular": True, "flag": "nilpotent", "step": 1},
            "K:structure": {"integrable": True, "abelian": True},
            "K:1": {"betti": 4, "dim_plus": 2, "dim_minus": 2, "pure": True, "full": True},
            "K:2": {"betti": 6, "dim_plus": 2, "dim_minus": 4, "intersection_dim": 0, "pure": True, "full": True},
            "K:dkahler": {"status": "witness"},
        },
    ),
    CatalogDocument(
        name="heis3R",
        algebra="(0,0,12,0)",
        structures={"K": StructureSpec(kind="sign", value="(+,-,+,-)")},
        expected={
            "algebra": {"unimodular": True, "flag": "nilpotent", "step": 2},
            "K:structure": {"integrable": True, "abelian": True},
            "K:2": {"betti": 4, "dim_plus": 2, "dim_minus": 2, "intersection_dim": 0, "pure": True, "full": True},
        },
    ),
    CatalogDocument(
        name="filiform4",
        algebra="(0,0,12,13)",
        structures={"K": StructureSpec(kind="sign", value="(+,-,-,+)")},
        expected={
            "algebra": {"unimodular": True, "flag": "nilpotent", "step": 3},
            "K:structure": {"integrable": True, "abelian": True},
            "K:2": {"betti": 2, "dim_plus": 2, "dim_minus": 0, "intersection_dim": 0, "pure": True, "full": True},
        },
    ),
    CatalogDocument(
        name="heis3",
        algebra="(0,0,12)",
        expected={"algebra": {"unimodular": True, "flag": "nilpotent", "step": 2}},
    ),
    CatalogDocument(
        name="so3",
        algebra="(23,-13,12)",
        expected={"algebra": {"unimodular": True, "flag": "not_solvable", "step": None}},
    ),
]

_BY_NAME = {doc.name: doc for doc in CATALOG}
_BY_NAME.update({alias: doc for doc in CATALOG for alias in doc.aliases})


def catalog_names():
    return [doc.name for doc in CATALOG]


def catalog_document(name):
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownEntry(f"unknown catalog entry {name!r}; known: {', '.join(catalog_names())}")


def catalog_get(name):
    """Entry by name or alias; built once per entry."""
    return _build_cached(catalog_document(name).name)


@lru_cache(maxsize=None)
def _build_cached(name):
    return build_entry(_BY_NAME[name])


def dump(name):
    return catalog_document(name).model_dump_json(indent=2)


def _observed(entry, key):
    """Recompute the fields an expectation key refers to."""
    from cohomology import subgroup_dims
    from deform import dkahler_at, generic_dims, sample_scan, validate_family
    from dkahler import dkahler_decide
    from lie import completely_solvable_flag, is_unimodular, lower_central_series
    from paracomplex import integrability, is_abelian

    g = entry.algebra
    parts = key.split(":")
    if parts == ["algebra"]:
        return {
            "unimodular": is_unimodular(g),
            "flag": completely_solvable_flag(g).value,
            "step": lower_central_series(g).step,
        }
    name, what = parts[0], parts[1]
    if len(parts) == 2:
        if what == "family":
            return validate_family(entry.families[name]).model_dump()
        ps = entry.structures[name]
        if what == "structure":
            return {"integrable": integrability(ps, g).integrable, "abelian": is_abelian(ps, g)}
        if what == "dkahler":
            return dkahler_decide(g, ps).model_dump(mode="json")
        return subgroup_dims(g, ps, int(what)).model_dump()
    family = entry.families[name]
    t0 = parts[2]
    if what == "dkahler":
        return dkahler_at(family, t0).model_dump(mode="json")
    if t0 == "generic":
        return generic_dims(family, int(what)).model_dump()
    return sample_scan(family, [t0], int(what))[0].model_dump()


def verify_entry(entry):
    """Mismatches between stored expectations and recomputation, as messages."""
    mismatches = []
    for key, fields in entry.expected.items():
        observed = _observed(entry, key)
        for name, expected in fields.items():
            got = observed.get(name)
            if got != expected:
                mismatches.append(f"{entry.name} {key}.{name}: expected {expected!r}, got {got!r}")
    if mismatches:
        logger.warning(f"{entry.name}: {len(mismatches)} mismatches")
    return mismatches
