# app/main.py
from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import List, Sequence, Union

import click

from app.__about__ import __app_name__, __version__
from app.algebra import Algebra, AlgebraPair, check_associative, check_compatible
from app.catalog import catalog_names, get_algebra, parse_pair_name
from app.config import settings
from app.documents import load_document, to_document
from app.errors import InvalidArgument, WorkbenchError
from app.matrices import ParametricMatrix, matrix_text
from app.metrics import metrics
from app.nonlinear import OperatorIdentity, grid_matrix, grid_solve, refute_sample, verify_family
from app.regression import paper_regression
from app.report import run_report
from app.schemas import SCHEMA_PATH, all_schemas, check_committed, validate_report
from app.witness import ExhaustionReport, search_witness, verify_witness


def _out(payload) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=False))


def _target(text: str) -> Union[Algebra, AlgebraPair]:
    """A document path, a catalog pair 'A2_2,A2_3', or a catalog algebra name."""
    if Path(text).is_file():
        return load_document(text)
    if "," in text:
        return parse_pair_name(text)
    return get_algebra(text).algebra


def _pair(text: str) -> AlgebraPair:
    target = _target(text)
    if not isinstance(target, AlgebraPair):
        raise InvalidArgument(f"{text!r} is a single algebra; a pair is needed")
    return target


def _entries(text: str) -> List[List[str]]:
    rows = [[x.strip() for x in row.split(",")] for row in text.split(";")]
    if any(len(r) != len(rows) for r in rows):
        raise InvalidArgument("entries must form a square matrix: rows separated by ';', entries by ','")
    return rows


@click.group()
@click.version_option(__version__, prog_name=__app_name__)
@click.option("--stats", is_flag=True, help="Print a metrics snapshot as JSON to stderr when done.")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker threads for enumeration.")
@click.pass_context
def cli(ctx: click.Context, stats: bool, workers: int | None) -> None:
    """Exact-arithmetic workbench for compatible associative algebras."""
    if workers:
        settings.workers = workers
    if stats:
        ctx.call_on_close(lambda: click.echo(json.dumps(metrics.snapshot(), sort_keys=True), err=True))


@cli.command()
@click.argument("target")
def check(target: str) -> int:
    """Associativity / compatibility defects of a document or catalog entry."""
    x = _target(target)
    if isinstance(x, AlgebraPair):
        report = check_compatible(x)
        _out({"pair": x.name, "compatibility": report.to_dict()})
    else:
        report = check_associative(x)
        _out({"algebra": x.name, "associativity": report.to_dict()})
    return 0


@cli.command()
@click.argument("target")
@click.option("--kind", "kinds", default="all", show_default=True, help="Comma-separated invariant names.")
@click.option("--mode", type=click.Choice(["paper", "standard"]), default="paper", show_default=True)
@click.option("--cohomology-mode", type=click.Choice(["mixed", "strict"]), default=None)
def invariants(target: str, kinds: str, mode: str, cohomology_mode: str | None) -> int:
    """JSON report of the requested invariants of a pair."""
    report = run_report(_pair(target), kinds, variant=mode, cohomology_mode=cohomology_mode)
    validate_report(report)
    click.echo(report.model_dump_json(indent=2))
    return 0


@cli.command()
@click.argument("target")
@click.option("--mode", type=click.Choice(["mixed", "strict"]), default=None)
def cohomology(target: str, mode: str | None) -> int:
    """Second cohomology dimensions and generators."""
    report = run_report(_pair(target), ["cohomology"], cohomology_mode=mode)
    click.echo(report.model_dump_json(indent=2, include={"app", "version", "pair", "dim", "cohomology"}))
    return 0


@cli.group()
def catalog() -> None:
    """Embedded algebras."""


@catalog.command("dump")
@click.option("--dim", type=int, default=None)
def catalog_dump(dim: int | None) -> int:
    docs = [to_document(get_algebra(name).algebra).model_dump(exclude_none=True) for name in catalog_names(dim)]
    _out(docs)
    return 0


@cli.command("paper-regression")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None,
              help="Write the full report here; stdout then gets the summary only.")
@click.option("--skip-pair-lists", is_flag=True, help="Leave out the witness search over the pair lists.")
def regression(json_path: str | None, skip_pair_lists: bool) -> int:
    """Recompute every embedded expected result."""
    report = paper_regression(pair_lists=not skip_pair_lists)
    validate_report(report)
    text = report.model_dump_json(indent=2)
    if json_path:
        Path(json_path).write_text(text + "\n", encoding="utf-8")
        _out({"summary": report.summary, "exit_code": report.exit_code, "report": json_path})
    else:
        click.echo(text)
    return report.exit_code


@cli.command("search-witness")
@click.argument("first")
@click.argument("second")
@click.option("--bound", type=int, default=1, show_default=True)
def witness(first: str, second: str, bound: int) -> int:
    """Bounded search for P with (A, P·B) compatible on the nose."""
    found = search_witness(get_algebra(first).algebra, get_algebra(second).algebra, bound)
    if isinstance(found, ExhaustionReport):
        _out({"pair": f"{first},{second}", "witness": None, "bound": bound,
              "candidates": found.candidates, "searched": found.invertible})
    else:
        _out({"pair": f"{first},{second}", "bound": bound, "witness": matrix_text(found.p),
              "verified": verify_witness(found)})
    return 0


@cli.command("verify-family")
@click.argument("target")
@click.option("--identity", "tag", required=True)
@click.option("--variant", type=click.Choice(["paper", "standard"]), default="paper", show_default=True)
@click.option("--entries", required=True, help="Rows separated by ';', entries by ','.")
@click.option("--denominator", default="1", show_default=True)
@click.option("--side-condition", "conditions", multiple=True, help="Polynomial required to be nonzero.")
@click.option("--trials", type=int, default=None, help="Refutation samples (default from settings).")
@click.option("--seed", type=int, default=None)
def verify(target: str, tag: str, variant: str, entries: str, denominator: str, conditions: Sequence[str],
           trials: int | None, seed: int | None) -> int:
    """Symbolic verification of a parametric family, plus sampled refutation."""
    pair = _pair(target)
    identity = OperatorIdentity.parse(tag, variant)
    family = ParametricMatrix.from_text(_entries(entries), denominator, conditions)
    verdict = verify_family(pair, identity, family)
    ref = refute_sample(pair, identity, family, trials=trials, seed=seed)
    _out({
        "pair": pair.name,
        "identity": identity.label,
        "verified": verdict.verified,
        "side_conditions": [str(c) for c in verdict.side_conditions],
        "failing": [
            {"product": e.product + 1, "pair": [e.i + 1, e.j + 1], "component": e.r + 1, "value": str(e.value)}
            for e in verdict.failing
        ],
        "refutation": {"trials": ref.trials, "failed": ref.failed, "skipped": ref.skipped,
                       "unexpected": [list(map(list, m)) for m in ref.unexpected]},
    })
    return 0


@cli.command()
@click.argument("target")
@click.option("--identity", "tag", required=True)
@click.option("--variant", type=click.Choice(["paper", "standard"]), default="paper", show_default=True)
@click.option("--bound", type=int, default=1, show_default=True)
def grid(target: str, tag: str, variant: str, bound: int) -> int:
    """Every integer matrix in the box solving an identity."""
    pair = _pair(target)
    identity = OperatorIdentity.parse(tag, variant)
    sols = grid_solve(pair, identity, bound)
    _out({"pair": pair.name, "identity": identity.label, "bound": bound, "count": len(sols),
          "solutions": [matrix_text(grid_matrix(m)) for m in sols]})
    return 0


@cli.command()
@click.option("--check", is_flag=True, help=f"Fail (exit 3) if {SCHEMA_PATH.name} differs from the models.")
def schema(check: bool) -> int:
    """JSON Schema of the report formats."""
    if check:
        check_committed()
    _out(all_schemas())
    return 0


def run(argv: Sequence[str] | None = None) -> int:
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="caw", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except WorkbenchError as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(run())
