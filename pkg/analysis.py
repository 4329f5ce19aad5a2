"""Per-(algebra, K, stage) reports and the randomized structure checks.

Shared by the command line and the HTTP API.
"""
import logging
from typing import List, Optional

from pydantic import BaseModel

from catalog_io import catalog_get, parse_algebra, parse_family, render_algebra
from cohomology import SubgroupReport, homology_subgroups, subgroup_dims
from common_utils import log_error, ordered_map
from deform import (
    DeformationFamily,
    FamilyVerdict,
    JumpPoint,
    ScanRow,
    find_jumps,
    generic_dims,
    sample_scan,
    validate_family,
)
from dkahler import LIE_ALGEBRA_LEVEL, MANIFOLD_LEVEL, DKahlerVerdict, dkahler_decide
from errors import InputError, NotFound, UnknownEntry
from lie import SolvabilityFlag, completely_solvable_flag, is_nilpotent
from paracomplex import integrability, is_abelian, random_paracomplex, validate
from scalar import render_scalar

logger = logging.getLogger(__name__)

SEED_STRIDE = 1000003


class Applicability(BaseModel):
    nilpotent: bool
    completely_solvable_flag: str
    level: str


class AnalysisReport(SubgroupReport):
    algebra: str
    k: str
    applicability: Applicability
    dkahler: Optional[DKahlerVerdict] = None


class Counterexample(BaseModel):
    seed: int
    k: str
    reason: str


class RandomCheckSummary(BaseModel):
    algebra: str
    trials: int
    seed: int
    stage: int
    sampled: int
    not_found: int
    abelian: int
    pure_and_full: int
    counterexamples: List[Counterexample] = []


def render_k(ps):
    return ";".join(",".join(render_scalar(c) for c in row) for row in ps.k_matrix.to_list())


def applicability(g):
    flag = completely_solvable_flag(g)
    return Applicability(
        nilpotent=flag == SolvabilityFlag.NILPOTENT,
        completely_solvable_flag=flag.value,
        level=MANIFOLD_LEVEL if flag.permits_transfer else LIE_ALGEBRA_LEVEL,
    )


def resolve_input(algebra=None, catalog=None, k=None, structure=None):
    """(algebra, structure or None) from an inline algebra or a catalog entry."""
    if (algebra is None) == (catalog is None):
        raise InputError("give exactly one of an inline algebra or a catalog name")
    if catalog is not None:
        entry = catalog_get(catalog)
        g = entry.algebra
        if k is not None:
            return g, validate(k, g)
        if structure is not None:
            if structure not in entry.structures:
                raise UnknownEntry(f"{catalog} has no structure {structure!r}")
            return g, entry.structures[structure]
        return g, next(iter(entry.structures.values()), None)
    g = parse_algebra(algebra)
    return g, validate(k, g) if k is not None else None


def resolve_family(algebra=None, catalog=None, family=None, name=None):
    """A DeformationFamily from an inline matrix or a catalog entry's named family."""
    if (algebra is None) == (catalog is None):
        raise InputError("give exactly one of an inline algebra or a catalog name")
    if catalog is not None:
        entry = catalog_get(catalog)
        if family is not None:
            return DeformationFamily.from_rows(entry.algebra, parse_family(family, entry.algebra.dim))
        if not entry.families:
            raise UnknownEntry(f"{catalog} has no deformation family")
        name = name or next(iter(entry.families))
        if name not in entry.families:
            raise UnknownEntry(f"{catalog} has no family {name!r}")
        return entry.families[name]
    if family is None:
        raise InputError("an inline algebra needs a family matrix")
    g = parse_algebra(algebra)
    return DeformationFamily.from_rows(g, parse_family(family, g.dim))


class DeformReport(BaseModel):
    family: FamilyVerdict
    generic: ScanRow
    rows: List[ScanRow]
    jumps: List[JumpPoint]


def deform_report(f, ts, stage):
    """Validated family, generic row, per-t rows (poles inline) and jump points."""
    verdict = validate_family(f)
    generic = generic_dims(f, stage)
    rows = sample_scan(f, ts, stage, skip_poles=True)
    if ts and all(r.error for r in rows):
        raise InputError("every sample point is a pole")
    return DeformReport(family=verdict, generic=generic, rows=rows, jumps=find_jumps(generic, rows))


def analyze(g, ps, stage, homology=False, dkahler=False):
    """Cohomology report, followed by the homology report when asked."""
    if ps is None:
        raise InputError("a D-complex structure is required")
    common = {
        "algebra": render_algebra(g),
        "k": render_k(ps),
        "applicability": applicability(g),
    }
    reports = [AnalysisReport(**subgroup_dims(g, ps, stage).model_dump(), **common)]
    if dkahler:
        reports[0].dkahler = dkahler_decide(g, ps)
    if homology:
        reports.append(AnalysisReport(**homology_subgroups(g, ps, stage).model_dump(), **common))
    logger.info(f"analyzed {common['algebra']} at stage {stage}")
    return reports


def _four_dim_nilpotent(g):
    return g.dim == 4 and is_nilpotent(g)


def _trial(g, seed, stage, max_attempts):
    try:
        ps = random_paracomplex(g, seed, require_integrable=True, max_attempts=max_attempts)
    except NotFound:
        return None
    report = subgroup_dims(g, ps, stage)
    abelian = is_abelian(ps, g)
    reasons = []
    if not integrability(ps, g).integrable:
        reasons.append("sampled structure is not integrable")
    if abelian and stage == 2 and not report.pure:
        reasons.append("Abelian structure that is not pure at stage 2")
    if _four_dim_nilpotent(g):
        if stage == 2 and not report.pure_and_full:
            reasons.append("not pure-and-full at stage 2 on a 4-dimensional nilpotent algebra")
        if not abelian:
            reasons.append("non-Abelian structure on a 4-dimensional nilpotent algebra")
    return ps, report, abelian, reasons


def random_check(g, trials, seed, stage=2, max_attempts=None):
    """Sample integrable structures with seeds seed * stride + i and check the stage verdicts."""
    if trials < 1:
        raise InputError("trials must be at least 1")
    seeds = [seed * SEED_STRIDE + i for i in range(trials)]
    results = ordered_map(lambda s: _trial(g, s, stage, max_attempts), seeds)
    summary = RandomCheckSummary(
        algebra=render_algebra(g),
        trials=trials,
        seed=seed,
        stage=stage,
        sampled=0,
        not_found=0,
        abelian=0,
        pure_and_full=0,
    )
    for s, result in zip(seeds, results):
        if result is None:
            summary.not_found += 1
            continue
        ps, report, abelian, reasons = result
        summary.sampled += 1
        summary.abelian += int(abelian)
        summary.pure_and_full += int(report.pure_and_full)
        for reason in reasons:
            log_error(f"Counterexample at seed {s}: {reason}", render_k(ps))
            summary.counterexamples.append(Counterexample(seed=s, k=render_k(ps), reason=reason))
    logger.info(
        f"random check: {summary.sampled} sampled, {summary.not_found} not found, "
        f"{len(summary.counterexamples)} counterexamples"
    )
    return summary
