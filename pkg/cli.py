"""Command line: analyze, deform, dkahler, random-check, catalog, serve.

Exit codes: 0 ok, 2 input error, 3 internal invariant breach, 4 counterexample.
"""
import json
import logging
import sys
from functools import wraps
from typing import List, Literal, Optional

import click
from pydantic import BaseModel, ValidationError, field_validator, model_validator

from analysis import analyze, deform_report, random_check, resolve_family, resolve_input
from catalog_io import CATALOG, catalog_get, catalog_names, dump, verify_entry
from common_utils import get_settings, log_error, setup_logging
from deform import dkahler_at, scan_csv
from dkahler import dkahler_decide
from errors import CounterexampleFound, InputError, InternalInvariantError, ParaCohError
from scalar import rational

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3
EXIT_COUNTEREXAMPLE = 4


class CliConfig(BaseModel):
    command: str
    algebra: Optional[str] = None
    catalog: Optional[str] = None
    k: Optional[str] = None
    structure: Optional[str] = None
    family: Optional[str] = None
    stages: List[int] = [2]
    t_values: List[str] = []
    seed: int = 0
    trials: int = 1
    format: Literal["text", "json", "csv"] = "text"
    output: Optional[str] = None

    @field_validator("stages")
    @classmethod
    def _stages_nonnegative(cls, value):
        if any(s < 0 for s in value):
            raise ValueError("stages must be nonnegative")
        return value

    @field_validator("t_values")
    @classmethod
    def _t_rational(cls, value):
        for t0 in value:
            rational(t0)
        return value

    @model_validator(mode="after")
    def _one_source(self):
        if (self.algebra is None) == (self.catalog is None):
            raise ValueError("give exactly one of --algebra or --catalog")
        return self


def _split_list(text):
    return [part.strip() for part in text.split(",") if part.strip()] if text else []


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text if text.endswith("\n") else text + "\n")
        logger.info(f"Wrote {output}")
    else:
        click.echo(text.rstrip("\n"))


def _exits(fn):
    """Translate engine exceptions into the exit-code contract."""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CounterexampleFound as e:
            click.echo(f"counterexample: {e.certificate}", err=True)
            sys.exit(EXIT_COUNTEREXAMPLE)
        except (InputError, ValidationError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except InternalInvariantError as e:
            log_error(f"Internal invariant breach: {e}")
            click.echo(f"internal error: {e}", err=True)
            sys.exit(EXIT_INTERNAL)
        except ParaCohError as e:
            log_error(f"Unexpected engine error: {e}")
            click.echo(f"internal error: {e}", err=True)
            sys.exit(EXIT_INTERNAL)

    return wrapper


def _yes(flag):
    return "yes" if flag else "no"


def _report_text(r):
    lines = [
        f"stage {r.stage} [{r.side}]: betti {r.betti}, dim+ {r.dim_plus}, dim- {r.dim_minus}, "
        f"intersection {r.intersection_dim}, pure {_yes(r.pure)}, full {_yes(r.full)}"
    ]
    lines.append("  + reps: " + (", ".join(r.plus_reps) or "none"))
    lines.append("  - reps: " + (", ".join(r.minus_reps) or "none"))
    if getattr(r, "dkahler", None) is not None:
        v = r.dkahler
        lines.append(f"  D-Kähler: {v.status.value}" + (f" ({v.witness})" if v.witness else ""))
    return "\n".join(lines)


@click.group()
@click.option("--log-level", default=None, help="Logging level (default from PARACOH_LOG_LEVEL)")
def cli(log_level):
    """Para-complex cohomology of Lie algebras."""
    setup_logging(log_level.upper() if log_level else None)


def _source_options(fn):
    fn = click.option("--algebra", default=None, help='Structure equations, e.g. "(0^4,12,13)"')(fn)
    fn = click.option("--catalog", "catalog_name", default=None, help="Catalog entry name")(fn)
    return fn


@cli.command("analyze")
@_source_options
@click.option("--k", "k_spec", default=None, help='K as "(-,+,+,-)" or "1,0;0,-1"')
@click.option("--structure", default=None, help="Named structure of the catalog entry")
@click.option("--stage", "stages", multiple=True, type=int, default=(2,), show_default=True)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    help="json prints one report object, or a list when several stages or --homology are given",
)
@click.option("--homology", is_flag=True, help="Also report the multivector side")
@click.option("--dkahler", "with_dkahler", is_flag=True, help="Also decide D-Kähler existence")
@click.option("--output", default=None, type=click.Path(dir_okay=False))
@_exits
def analyze_cmd(algebra, catalog_name, k_spec, structure, stages, fmt, homology, with_dkahler, output):
    """Subgroup dimensions and pure/full verdicts."""
    cfg = CliConfig(
        command="analyze", algebra=algebra, catalog=catalog_name, k=k_spec,
        structure=structure, stages=list(stages), format=fmt, output=output,
    )
    g, ps = resolve_input(cfg.algebra, cfg.catalog, cfg.k, cfg.structure)
    reports = []
    for stage in cfg.stages:
        reports.extend(analyze(g, ps, stage, homology=homology, dkahler=with_dkahler))
    if cfg.format == "json":
        payload = [r.model_dump(mode="json") for r in reports]
        text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2)
    else:
        head = f"algebra {reports[0].algebra}\nK {reports[0].k}\napplicability {reports[0].applicability.level}"
        text = "\n".join([head] + [_report_text(r) for r in reports])
    _emit(text, cfg.output)


def _family(cfg):
    return resolve_family(cfg.algebra, cfg.catalog, cfg.family, cfg.structure)


@cli.command("deform")
@_source_options
@click.option("--family", default=None, help='Rows of rational functions in t, e.g. "-1,0;0,1"')
@click.option("--structure", default=None, help="Named family of the catalog entry")
@click.option("--t", "t_list", default="0,1", show_default=True, help="Comma-separated rational sample points")
@click.option("--stage", type=int, default=2, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="csv")
@click.option("--output", default=None, type=click.Path(dir_okay=False))
@_exits
def deform_cmd(algebra, catalog_name, family, structure, t_list, stage, fmt, output):
    """Generic row, sampled rows and jump points of a family K_t."""
    cfg = CliConfig(
        command="deform", algebra=algebra, catalog=catalog_name, family=family, structure=structure,
        stages=[stage], t_values=_split_list(t_list), format=fmt, output=output,
    )
    report = deform_report(_family(cfg), cfg.t_values, stage)
    if cfg.format == "csv":
        text = scan_csv(report.generic, report.rows)
    elif cfg.format == "json":
        text = report.model_dump_json(indent=2)
    else:
        lines = [f"integrable over Q(t): {_yes(report.family.integrable)}"]
        for r in [report.generic] + report.rows:
            lines.append(f"t = {r.t}: " + (r.error or f"dims ({r.dim_plus}, {r.dim_minus}), betti {r.betti}"))
        lines.append("jumps: " + (", ".join(j.t for j in report.jumps) or "none"))
        text = "\n".join(lines)
    _emit(text, cfg.output)


@cli.command("dkahler")
@_source_options
@click.option("--k", "k_spec", default=None)
@click.option("--structure", default=None, help="Named structure or family of the catalog entry")
@click.option("--t", "t0", default=None, help="Evaluate the catalog family at this t")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--output", default=None, type=click.Path(dir_okay=False))
@_exits
def dkahler_cmd(algebra, catalog_name, k_spec, structure, t0, fmt, output):
    """Decide whether an invariant D-Kähler form exists."""
    cfg = CliConfig(
        command="dkahler", algebra=algebra, catalog=catalog_name, k=k_spec, structure=structure,
        t_values=[t0] if t0 else [], format=fmt, output=output,
    )
    if cfg.t_values:
        verdict = dkahler_at(_family(cfg), cfg.t_values[0])
    else:
        g, ps = resolve_input(cfg.algebra, cfg.catalog, cfg.k, cfg.structure)
        if ps is None:
            raise InputError("a D-complex structure is required")
        verdict = dkahler_decide(g, ps)
    if cfg.format == "json":
        text = verdict.model_dump_json(indent=2)
    else:
        text = f"{verdict.status.value}" + (f": {verdict.witness}" if verdict.witness else "")
        if verdict.obstruction_note:
            text += f"\n{verdict.obstruction_note}"
        text += f"\ncandidate space dimension {verdict.candidate_space_dim} ({verdict.applicability})"
    _emit(text, cfg.output)


@cli.command("random-check")
@_source_options
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--stage", type=int, default=2, show_default=True)
@click.option("--max-attempts", type=int, default=None, help="Rejection budget per trial")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--output", default=None, type=click.Path(dir_okay=False))
@_exits
def random_check_cmd(algebra, catalog_name, trials, seed, stage, max_attempts, fmt, output):
    """Sample integrable structures and check pure-and-full verdicts."""
    cfg = CliConfig(
        command="random-check", algebra=algebra, catalog=catalog_name, stages=[stage],
        seed=seed, trials=trials, format=fmt, output=output,
    )
    g, _ = resolve_input(cfg.algebra, cfg.catalog)
    summary = random_check(g, cfg.trials, cfg.seed, stage, max_attempts)
    if cfg.format == "json":
        text = summary.model_dump_json(indent=2)
    else:
        text = (
            f"{summary.algebra}: {summary.sampled}/{summary.trials} sampled, "
            f"{summary.abelian} Abelian, {summary.pure_and_full} pure-and-full at stage {stage}, "
            f"{len(summary.counterexamples)} counterexamples"
        )
    _emit(text, cfg.output)
    if summary.counterexamples:
        first = summary.counterexamples[0]
        raise CounterexampleFound(f"seed {first.seed}, K = {first.k}: {first.reason}")


@cli.group("catalog")
def catalog_group():
    """Built-in algebras and structures."""


@catalog_group.command("list")
def catalog_list():
    for doc in CATALOG:
        aliases = f" (also {', '.join(doc.aliases)})" if doc.aliases else ""
        click.echo(f"{doc.name:22} {doc.algebra:22} {', '.join(doc.structures) or '-'}{aliases}")


@catalog_group.command("dump")
@click.argument("name")
@click.option("--output", default=None, type=click.Path(dir_okay=False))
@_exits
def catalog_dump(name, output):
    _emit(dump(name), output)


@catalog_group.command("verify")
@click.argument("names", nargs=-1)
@_exits
def catalog_verify(names):
    """Recompute stored expectations; exit 3 on any mismatch."""
    mismatches = []
    for name in names or catalog_names():
        mismatches.extend(verify_entry(catalog_get(name)))
    for m in mismatches:
        click.echo(m)
    if mismatches:
        raise InternalInvariantError(f"{len(mismatches)} catalog mismatches")
    click.echo("catalog ok")


@cli.command("serve")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(host, port):
    """Run the HTTP API."""
    import uvicorn

    settings = get_settings()
    uvicorn.run("api:app", host=host or settings.host, port=port or settings.port)
