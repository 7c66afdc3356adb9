"""
The registry of rewriting passes and the pipeline that runs one of them on
an ``.eqf`` file.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Tuple

from src.formulas.ast import Formula, Language, NameSupply, all_variables
from src.formulas.parser import load_formula
from src.formulas.printer import save_formula
from src.formulas.shapes import recognize_delta_tame
from src.oracles.dcf_oracle import DcfOracle
from src.oracles.model_oracle import ModelOracle
from src.oracles.points import Point, save_point
from src.oracles.scf_oracle import ScfOracle
from src.passes.dcf_passes import (
    eliminate_s_terms, from_s_formula, homogenize_delta, lambda_to_delta, reduce_instance_dcf, to_s_formula,
)
from src.passes.pairs_passes import combine_tame_formula, lambdaP_to_tame, linearize
from src.passes.scf_passes import eliminate_lambda_terms, homogenize_lambda, reduce_instance_scf
from src.utils.errors import LanguageTagError, OracleMismatchError, UnknownPassError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PassOptions:
    """Options of the passes that take any; unset values are resolved per formula."""
    block: Optional[Tuple[str, ...]] = None
    pivot: Optional[str] = None
    weights: Optional[Dict[str, int]] = None
    degree: Optional[int] = None
    parameters: Optional[Tuple[str, ...]] = None
    point: Optional[Point] = None
    oracle: Optional[ModelOracle] = None


@dataclass(frozen=True)
class PassResult:
    formula: Formula
    options: PassOptions = field(default_factory=PassOptions)
    point: Optional[Point] = None


@dataclass(frozen=True)
class RewritePass:
    """
    A named rewriting step. ``kind`` tells the fuzzer how input and output
    relate: ``equivalence`` (same point, same truth value), ``homogenization``
    (a new pivot variable) or ``instance`` (fixed parameters b, new b′).
    """
    name: str
    source: Language
    target: Language
    kind: str
    apply: Callable[[Formula, PassOptions], PassResult]
    description: str


def _parameters(formula: Formula, options: PassOptions) -> Tuple[str, ...]:
    if options.parameters is not None:
        return tuple(options.parameters)
    return tuple(v for v in formula.sorted_free_variables() if v.startswith("b"))


def _pivot(formula: Formula, options: PassOptions, base: str) -> str:
    if options.pivot is not None:
        return options.pivot
    return NameSupply(all_variables(formula.root)).fresh(base)


def _identity(formula: Formula, options: PassOptions) -> PassResult:
    return PassResult(formula, options)


def _equivalence(fn) -> Callable[[Formula, PassOptions], PassResult]:
    def apply(formula: Formula, options: PassOptions) -> PassResult:
        return PassResult(fn(formula), options)

    return apply


def _lambda_hom(formula: Formula, options: PassOptions) -> PassResult:
    block = options.block
    if block is None:
        block = tuple(v for v in formula.sorted_free_variables() if v.startswith("y")) or formula.sorted_free_variables()
    resolved = replace(options, block=tuple(block), pivot=_pivot(formula, options, "y0"))
    return PassResult(homogenize_lambda(formula, resolved.block, resolved.pivot), resolved)


def _delta_hom(formula: Formula, options: PassOptions) -> PassResult:
    weights = options.weights
    if weights is None:
        weights = {v: 1 for v in formula.sorted_free_variables()}
    resolved = replace(options, weights=dict(weights), pivot=_pivot(formula, options, "x0"))
    return PassResult(homogenize_delta(formula, resolved.weights, resolved.pivot), resolved)


def _s_form(formula: Formula, options: PassOptions) -> PassResult:
    if recognize_delta_tame(formula.root) is not None:
        return PassResult(to_s_formula(formula), options)
    return PassResult(from_s_formula(formula), options)


def _linearize(formula: Formula, options: PassOptions) -> PassResult:
    return PassResult(linearize(formula, options.degree), options)


def _instance(reduce, oracle_type):
    def apply(formula: Formula, options: PassOptions) -> PassResult:
        if options.point is None:
            raise OracleMismatchError("instance reduction needs a parameter point (--point)")
        oracle = options.oracle
        if oracle is None:
            oracle = ScfOracle(formula.characteristic) if oracle_type is ScfOracle else DcfOracle(formula.characteristic)
        if not isinstance(oracle, oracle_type):
            raise OracleMismatchError(f"{oracle.spec()} cannot reduce {formula.language.value} instances")
        parameters = _parameters(formula, options)
        reduced, extended = reduce(formula, parameters, options.point, oracle)
        return PassResult(reduced, replace(options, parameters=parameters, oracle=oracle), extended)

    return apply


PASSES: Dict[str, RewritePass] = {
    p.name: p for p in (
        RewritePass("identity", Language.SCF, Language.SCF, "equivalence", _identity,
                    "returns the formula unchanged"),
        RewritePass("lambda-bk", Language.SCF, Language.SCF, "equivalence", _equivalence(eliminate_lambda_terms),
                    "λ-term equations to Boolean combinations of λ-tame formulas"),
        RewritePass("lambda-hom", Language.SCF, Language.SCF, "homogenization", _lambda_hom,
                    "homogenizes a λ-tame formula in a block of variables"),
        RewritePass("scf-reduce", Language.SCF, Language.SCF, "instance", _instance(reduce_instance_scf, ScfOracle),
                    "lowers the λ-tame degree of an instance by one"),
        RewritePass("delta-bk", Language.DCF, Language.DCF, "equivalence", _equivalence(eliminate_s_terms),
                    "s-term equations to Boolean combinations of δ-tame formulas"),
        RewritePass("delta-hom", Language.DCF, Language.DCF, "homogenization", _delta_hom,
                    "weighted homogenization of a δ-tame formula"),
        RewritePass("lambda-to-delta", Language.SCF, Language.DCF, "equivalence", _equivalence(lambda_to_delta),
                    "λ-tame formulas of SCF_p as δ-tame formulas of DCF_p"),
        RewritePass("s-form", Language.DCF, Language.DCF, "equivalence", _s_form,
                    "δ-tame formulas to S-formulas and back"),
        RewritePass("dcf-reduce", Language.DCF, Language.DCF, "instance", _instance(reduce_instance_dcf, DcfOracle),
                    "removes the outermost pth-root block of an instance"),
        RewritePass("segre", Language.PAIR, Language.PAIR, "equivalence", _equivalence(combine_tame_formula),
                    "∧/∨-combinations of tame formulas as one tame formula"),
        RewritePass("lambdap-to-tame", Language.PAIR, Language.PAIR, "equivalence", _equivalence(lambdaP_to_tame),
                    "λ_P-formulas as tame formulas"),
        RewritePass("linearize", Language.PAIR, Language.PAIR, "equivalence", _linearize,
                    "tame formulas as linear tame formulas"),
    )
}


def get_pass(name: str) -> RewritePass:
    try:
        return PASSES[name]
    except KeyError:
        raise UnknownPassError(
            f"Invalid pass: '{name}'. Please choose one of {', '.join(repr(n) for n in PASSES)}."
        ) from None


def check_language(rewrite_pass: RewritePass, formula: Formula):
    if rewrite_pass.name == "identity":
        return
    if formula.language != rewrite_pass.source:
        raise LanguageTagError(
            f"the {rewrite_pass.name} pass rewrites {rewrite_pass.source.value} formulas, got {formula.language.value}"
        )


class RewritePipeline:
    """Loads a formula, applies one registered pass and writes the canonical result."""

    def __init__(self, pass_name: str, options: Optional[PassOptions] = None):
        self.rewrite_pass = get_pass(pass_name)
        self.options = options or PassOptions()

    def apply(self, formula: Formula) -> PassResult:
        check_language(self.rewrite_pass, formula)
        logger.info("running %s on a %s formula", self.rewrite_pass.name, formula.language.value)
        return self.rewrite_pass.apply(formula, self.options)

    def run(self, input_path: str, output_path: Optional[str] = None,
            point_path: Optional[str] = None) -> PassResult:
        """
        Executes the pass on one file.

        Args:
            input_path: The ``.eqf`` file to rewrite.
            output_path: Where to write the rewritten formula; nothing is written when None.
            point_path: Where to write the extended parameter point of an instance reduction.
        """
        result = self.apply(load_formula(input_path))
        if output_path:
            save_formula(result.formula, output_path)
        if point_path and result.point is not None:
            save_point(result.point, point_path)
        return result
