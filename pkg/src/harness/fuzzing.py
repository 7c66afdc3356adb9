"""
Seeded equivalence fuzzing: every pass output is evaluated against its
input in the model oracles, point by point.
"""
import logging
import os
import sys
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from src.formulas.ast import Formula
from src.formulas.parser import load_formula
from src.oracles.dcf_oracle import DcfOracle
from src.oracles.model_oracle import ModelOracle
from src.oracles.pair_oracle import PairOracle
from src.oracles.points import Point
from src.oracles.sampling import PointSampler
from src.oracles.scf_oracle import ScfOracle
from src.passes.rewrite_pipeline import PassOptions, PassResult, RewritePass, check_language, get_pass
from src.utils import config
from src.utils.errors import EquationalityError, OracleMismatchError

logger = logging.getLogger(__name__)

# Reproducers kept per formula; the counts cover every trial.
MAX_REPRODUCERS = 5
FORCED_ZERO_EVERY = 5


def load_corpus(directory: str) -> List[Tuple[str, Formula]]:
    """Every ``.eqf`` file below ``directory``, keyed by its relative path without suffix, sorted."""
    entries = []
    for root, _, files in os.walk(directory):
        for file in files:
            if file.endswith(config.FORMULA_SUFFIX):
                path = os.path.join(root, file)
                key = os.path.relpath(path, directory)[:-len(config.FORMULA_SUFFIX)].replace(os.sep, "/")
                entries.append((key, path))
    return [(key, load_formula(path)) for key, path in sorted(entries)]


def target_oracle(rewrite_pass: RewritePass, oracle: ModelOracle) -> ModelOracle:
    """The oracle evaluating a pass's output; differs from the input's only for lambda-to-delta."""
    if rewrite_pass.target == rewrite_pass.source:
        return oracle
    if isinstance(oracle, ScfOracle) and oracle.e == 1:
        return DcfOracle(oracle.p)
    raise OracleMismatchError(f"the {rewrite_pass.name} pass is checked against 'scf:p=<prime>,e=1' oracles")


def source_point(result: PassResult, kind: str, point: Point) -> Optional[Point]:
    """
    The input point matching a sample point of a homogenized output, or None
    when the pivot is 0. Other passes share their points.
    """
    if kind != "homogenization":
        return point
    pivot = point[result.options.pivot]
    if not pivot:
        return None
    if result.options.weights is not None:
        values = {name: point[name] / pivot ** k for name, k in result.options.weights.items() if name in point}
    else:
        values = {name: point[name] / pivot for name in result.options.block if name in point}
    return point.extended(values)


class _FormulaRun:
    """Trial bookkeeping for one corpus formula."""

    def __init__(self, key: str):
        self.key = key
        self.agreements = 0
        self.forced_zero = 0
        self.disagreements = 0
        self.errors = 0
        self.reproducers: List[dict] = []
        self.error_messages: List[str] = []
        self.degrees = set()

    def disagree(self, trial: int, point: Point, expected: bool, got: bool):
        self.disagreements += 1
        if len(self.reproducers) < MAX_REPRODUCERS:
            self.reproducers.append({"trial": trial, "point": point.to_json_dict(),
                                     "expected": expected, "got": got})

    def fail(self, trial: int, error: EquationalityError):
        self.errors += 1
        if len(self.error_messages) < MAX_REPRODUCERS:
            self.error_messages.append(f"trial {trial}: {type(error).__name__}: {error}")

    def to_dict(self) -> dict:
        entry = {
            "id": self.key,
            "status": "checked",
            "agreements": self.agreements,
            "forced_zero": self.forced_zero,
            "disagreements": self.disagreements,
            "errors": self.errors,
            "reproducers": self.reproducers,
            "error_messages": self.error_messages,
        }
        if self.degrees:
            entry["linearization_degrees"] = sorted(self.degrees)
        return entry


def _evaluate(oracle: ModelOracle, formula: Formula, point: Point) -> bool:
    if isinstance(oracle, PairOracle):
        oracle.last_run = None
    return oracle.eval(formula, point)


def _check_formula(key: str, formula: Formula, rewrite_pass: RewritePass, oracle: ModelOracle,
                   target: ModelOracle, sampler: PointSampler, trials: int, options: PassOptions) -> dict:
    try:
        if rewrite_pass.name != "identity":
            check_language(rewrite_pass, formula)
        oracle.check_formula(formula)
        if rewrite_pass.kind == "instance":
            parameters = tuple(v for v in formula.sorted_free_variables() if v.startswith("b")) \
                if options.parameters is None else options.parameters
            fixed = sampler.point(parameters, f"{key}:parameters", 0)
            options = replace(options, parameters=parameters, point=fixed, oracle=oracle)
        result = rewrite_pass.apply(formula, options)
    except EquationalityError as e:
        return {"id": key, "status": "skipped", "reason": f"{type(e).__name__}: {e}"}

    run = _FormulaRun(key)
    names = formula.free_variables | result.formula.free_variables
    if rewrite_pass.kind == "instance":
        names -= set(result.point.names())
    for trial in range(trials):
        point = sampler.point(names, key, trial)
        if rewrite_pass.kind == "instance":
            given, rewritten = options.point.extended(point.as_dict()), result.point.extended(point.as_dict())
        else:
            if rewrite_pass.kind == "homogenization" and trial % FORCED_ZERO_EVERY == FORCED_ZERO_EVERY - 1:
                point = point.extended({result.options.pivot: oracle.descriptor.zero})
            given = source_point(result, rewrite_pass.kind, point)
            rewritten = point
        try:
            got = _evaluate(target, result.formula, rewritten)
            if isinstance(target, PairOracle) and target.last_run is not None and target.last_run.agreed_at:
                run.degrees.add(target.last_run.agreed_at)
            if given is None:
                run.forced_zero += 1
                if got:
                    run.agreements += 1
                else:
                    run.disagree(trial, point, True, got)
                continue
            expected = _evaluate(oracle, formula, given)
        except EquationalityError as e:
            run.fail(trial, e)
            continue
        if expected == got:
            run.agreements += 1
        else:
            run.disagree(trial, point, expected, got)
    if run.disagreements:
        logger.warning("%s: %d disagreement(s) for %s", rewrite_pass.name, run.disagreements, key)
    return run.to_dict()


def fuzz_equivalence(pass_name: str, corpus: Sequence[Tuple[str, Formula]], oracle: ModelOracle,
                     trials: int = config.DEFAULT_TRIALS, seed: int = config.DEFAULT_SEED,
                     options: Optional[PassOptions] = None, progress: bool = False) -> Dict:
    """
    Runs a pass on every corpus formula and compares truth values of input
    and output at ``trials`` seeded points each.

    Args:
        pass_name: A registered pass name.
        corpus: (id, formula) pairs; formulas the pass does not apply to are reported as skipped.
        oracle: The oracle evaluating the inputs.
        trials: Points per formula.
        seed: Seed of the point sampler; equal seeds give identical reports.
        options: Pass options shared by all formulas.
        progress: Show a progress bar on stderr.

    Returns:
        The report as a JSON-ready dict. Disagreements are report entries, not errors.
    """
    rewrite_pass = get_pass(pass_name)
    target = target_oracle(rewrite_pass, oracle)
    sampler = PointSampler(oracle.descriptor, seed)
    options = options or PassOptions()
    entries = []
    iterator = tqdm(corpus, desc="Fuzzing", colour="green", file=sys.stderr, disable=not progress)
    for key, formula in iterator:
        iterator.set_description(f"Fuzzing {key}")
        entries.append(_check_formula(key, formula, rewrite_pass, oracle, target, sampler, trials, options))
    checked = [e for e in entries if e["status"] == "checked"]
    return {
        "schema": config.REPORT_SCHEMA,
        "kind": "fuzz",
        "pass": rewrite_pass.name,
        "oracle": oracle.spec(),
        "target_oracle": target.spec(),
        "seed": seed,
        "trials": trials,
        "sampler": sampler.version,
        "checked": len(checked),
        "skipped": len(entries) - len(checked),
        "disagreements": sum(e["disagreements"] for e in checked),
        "errors": sum(e["errors"] for e in checked),
        "formulas": entries,
    }
