import functools
import json
import logging
import shlex
import sys
from typing import Dict, Optional, Tuple

import click

from src.formulas.classify import classify
from src.formulas.parser import load_formula
from src.formulas.printer import print_formula
from src.harness.chain_lab import chain_run, sampled_stream
from src.harness.fuzzing import fuzz_equivalence, load_corpus
from src.harness.report_store import ReportStore, dumps
from src.oracles.oracle_handler import OracleHandler
from src.oracles.pair_oracle import PairOracle
from src.oracles.points import Point, load_point
from src.passes.pairs_passes import annihilator
from src.passes.rewrite_pipeline import PASSES, PassOptions, RewritePipeline
from src.utils import config
from src.utils.errors import EquationalityError, OracleMismatchError

SHELL_COMMANDS = ("classify", "eval", "rewrite", "ann")


def _names(raw: Optional[str]) -> Optional[Tuple[str, ...]]:
    if raw is None:
        return None
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def _weights(raw: Optional[str]) -> Optional[Dict[str, int]]:
    if raw is None:
        return None
    weights = {}
    for part in filter(None, (p.strip() for p in raw.split(","))):
        name, _, value = part.partition("=")
        if not value.strip().isdigit():
            raise click.BadParameter(f"expected name=<n>, got '{part}'", param_hint="--weights")
        weights[name.strip()] = int(value)
    return weights


def _finish(code: int):
    click.get_current_context().exit(code)


class EquationLab:
    """Runs the lab's commands and prints their reports."""

    def __init__(self, store: Optional[ReportStore] = None):
        self.store = store or ReportStore(config.REPORT_DIR)

    def emit(self, report: Dict, save: Optional[str] = None):
        if save:
            path = self.store.save(save, report)
            click.echo(f"Report saved to {path}", err=True)
        click.echo(dumps(report), nl=False)

    def classify(self, path: str) -> Dict:
        formula = load_formula(path)
        report = {"schema": config.REPORT_SCHEMA, "kind": "classify", "language": formula.language.value}
        report.update(classify(formula).to_dict())
        return report

    def eval(self, formula_path: str, oracle_spec: str, point_path: Optional[str]) -> Dict:
        oracle = OracleHandler(oracle_spec)
        formula = load_formula(formula_path)
        point = load_point(point_path, oracle.descriptor) if point_path else Point(oracle.descriptor)
        value = oracle.eval(formula, point)
        report = {"schema": config.REPORT_SCHEMA, "kind": "eval", "oracle": oracle.spec(), "value": value}
        if isinstance(oracle, PairOracle) and oracle.last_run is not None:
            report["linearization"] = oracle.last_run.to_dict()
        return report

    def rewrite(self, pass_name: str, input_path: str, output_path: Optional[str], options: PassOptions,
                point_out: Optional[str]) -> str:
        pipeline = RewritePipeline(pass_name, options)
        result = pipeline.run(input_path, output_path, point_out)
        return print_formula(result.formula)

    def fuzz(self, pass_name: str, oracle_spec: str, corpus_dir: str, trials: int, seed: int,
             options: PassOptions) -> Dict:
        oracle = OracleHandler(oracle_spec)
        corpus = load_corpus(corpus_dir)
        if not corpus:
            raise OracleMismatchError(f"no {config.FORMULA_SUFFIX} files found in '{corpus_dir}'")
        click.echo(f"Found {len(corpus)} formulas to check.", err=True)
        return fuzz_equivalence(pass_name, corpus, oracle, trials, seed, options, progress=True)

    def chain(self, formula_path: str, oracle_spec: str, parameters: Tuple[str, ...], stream_path: Optional[str],
              degree_bound: Optional[int], max_steps: int, seed: int) -> Dict:
        oracle = OracleHandler(oracle_spec)
        formula = load_formula(formula_path)
        if stream_path:
            stream = _load_stream(stream_path, oracle)
        else:
            stream = sampled_stream(oracle, parameters, seed)
        report = chain_run(formula, parameters, stream, oracle, degree_bound, max_steps,
                           formula_id=formula_path, seed=seed)
        return report.to_dict()

    def ann(self, point_path: str, n: int, oracle_spec: str, variables: Optional[Tuple[str, ...]]) -> Dict:
        oracle = OracleHandler(oracle_spec)
        point = load_point(point_path, oracle.descriptor)
        names = variables or tuple(point.names())
        result = annihilator([point[name] for name in names], n, oracle)
        report = {"schema": config.REPORT_SCHEMA, "kind": "annihilator", "oracle": oracle.spec(),
                  "variables": list(names)}
        report.update(result.to_dict())
        return report


def _load_stream(path: str, oracle):
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, list):
        raise OracleMismatchError("a stream file holds a JSON list of points")
    return [Point.from_json_dict(entry, oracle.descriptor) for entry in data]


def _run_shell(lab: EquationLab):
    click.echo(f"Equation lab shell. Commands: {', '.join(SHELL_COMMANDS)}; 'exit' or 'quit' to leave.")
    while True:
        user_input = click.prompt("(eqlab)", default="", show_default=False)
        if user_input.strip().lower() in ("exit", "quit"):
            click.echo("Leaving the lab.")
            break
        try:
            parts = shlex.split(user_input)
        except ValueError as e:
            click.echo(f"Error: {e}", err=True)
            continue
        if not parts:
            continue
        if parts[0] not in SHELL_COMMANDS:
            click.echo(f"Unknown command: '{parts[0]}'. Available: {', '.join(SHELL_COMMANDS)}, exit")
            continue
        try:
            cli.main(args=parts, prog_name="eqlab", standalone_mode=False, obj=lab)
        except click.ClickException as e:
            e.show()


# --- Click Command Definitions ---

@click.group(invoke_without_command=True, context_settings=dict(help_option_names=["-h", "--help"]))
@click.pass_context
def cli(ctx):
    """
    Equationality lab: rewrite, evaluate and fuzz formulas of separably
    closed, differentially closed and paired fields.

    Without a command, opens the (eqlab) shell.
    """
    if ctx.obj is None:
        logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")
        ctx.obj = EquationLab()
    if ctx.invoked_subcommand is None:
        _run_shell(ctx.obj)


def _guarded(fn):
    """Turns toolkit errors into "Error: ..." on stderr with exit code 2."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (EquationalityError, OSError) as e:
            click.echo(f"Error: {e}", err=True)
            _finish(2)

    return wrapper


@cli.command(name="classify")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_guarded
def classify_command(lab, path):
    """Print the shape of a formula."""
    lab.emit(lab.classify(path))


@cli.command(name="eval")
@click.option("--oracle", "oracle_spec", required=True, help="Oracle spec, e.g. 'scf:p=2,e=1'.")
@click.option("--formula", "formula_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--point", "point_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON object mapping variables to elements.")
@click.pass_obj
@_guarded
def eval_command(lab, oracle_spec, formula_path, point_path):
    """Evaluate a formula at a point."""
    lab.emit(lab.eval(formula_path, oracle_spec, point_path))


@cli.command(name="rewrite")
@click.option("--pass", "pass_name", required=True, type=click.Choice(sorted(PASSES)))
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", "output_path", type=click.Path(dir_okay=False), help="Where to write the .eqf result.")
@click.option("--block", help="Comma-separated block variables (lambda-hom).")
@click.option("--pivot", help="Name of the homogenizing variable.")
@click.option("--weights", help="Comma-separated name=<k> exponents (delta-hom).")
@click.option("--degree", type=click.IntRange(min=1), help="Linearization degree (linearize).")
@click.option("--params", help="Comma-separated parameter variables (scf-reduce, dcf-reduce).")
@click.option("--point", "point_path", type=click.Path(exists=True, dir_okay=False), help="Parameter point.")
@click.option("--oracle", "oracle_spec", help="Oracle for instance reductions.")
@click.option("--point-out", type=click.Path(dir_okay=False), help="Where to write the extended point.")
@click.pass_obj
@_guarded
def rewrite_command(lab, pass_name, path, output_path, block, pivot, weights, degree, params, point_path,
                    oracle_spec, point_out):
    """Apply one rewriting pass to an .eqf file."""
    oracle = OracleHandler(oracle_spec) if oracle_spec else None
    point = None
    if point_path:
        if oracle is None:
            raise OracleMismatchError("--point needs --oracle to know the field")
        point = load_point(point_path, oracle.descriptor)
    options = PassOptions(block=_names(block), pivot=pivot, weights=_weights(weights), degree=degree,
                          parameters=_names(params), point=point, oracle=oracle)
    text = lab.rewrite(pass_name, path, output_path, options, point_out)
    if not output_path:
        click.echo(text, nl=False)


@cli.command(name="fuzz")
@click.option("--pass", "pass_name", required=True, type=click.Choice(sorted(PASSES)))
@click.option("--oracle", "oracle_spec", required=True)
@click.option("--corpus", "corpus_dir", default=config.CORPUS_DIR, show_default=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--trials", default=config.DEFAULT_TRIALS, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=config.DEFAULT_SEED, show_default=True, type=int)
@click.option("--degree", type=click.IntRange(min=1), help="Linearization degree (linearize).")
@click.option("--save", help="Also store the report under this name in the report directory.")
@click.pass_obj
@_guarded
def fuzz_command(lab, pass_name, oracle_spec, corpus_dir, trials, seed, degree, save):
    """Check a pass against the oracle on a corpus; exit 1 on disagreements."""
    report = lab.fuzz(pass_name, oracle_spec, corpus_dir, trials, seed, PassOptions(degree=degree))
    lab.emit(report, save)
    if report["disagreements"] or report["errors"]:
        _finish(1)


@cli.command(name="chain")
@click.option("--formula", "formula_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--oracle", "oracle_spec", required=True)
@click.option("--params", required=True, help="Comma-separated parameter variables y.")
@click.option("--stream", "stream_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON list of parameter points; seeded samples otherwise.")
@click.option("--degree-bound", type=click.IntRange(min=0),
              help="Truncation degree; small fp chains work modulo x^p - x and ignore it.")
@click.option("--max-steps", default=config.CHAIN_MAX_STEPS, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=config.DEFAULT_SEED, show_default=True, type=int)
@click.option("--save", help="Also store the report under this name in the report directory.")
@click.pass_obj
@_guarded
def chain_command(lab, formula_path, oracle_spec, params, stream_path, degree_bound, max_steps, seed, save):
    """Follow the descending chain of instances of a candidate equation; exit 1 on violations."""
    report = lab.chain(formula_path, oracle_spec, _names(params), stream_path, degree_bound, max_steps, seed)
    lab.emit(report, save)
    if report["violations"]:
        _finish(1)


@cli.command(name="ann")
@click.option("--point", "point_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--n", "n", required=True, type=click.IntRange(min=1), help="Number of monomials.")
@click.option("--oracle", "oracle_spec", default="pair:k=1", show_default=True)
@click.option("--vars", "variables", help="Comma-separated variables forming the tuple (default: all, sorted).")
@click.pass_obj
@_guarded
def ann_command(lab, point_path, n, oracle_spec, variables):
    """Annihilator space of a tuple and its Plücker point."""
    lab.emit(lab.ann(point_path, n, oracle_spec, _names(variables)))


if __name__ == "__main__":
    cli()
