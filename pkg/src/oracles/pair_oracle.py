"""
The pair (K, E) with K = Q(t_1..t_k), δ = d/dt_1 and E = ker δ = Q(t_2..t_k).

dep_n and λ_n^i are decided by constant relations (derivative stacking);
existsP blocks are decided through the linearization route: the E-hull of
the ideal slices of I(a, Z).
"""
import logging
from typing import List

from src.algebra.fields import FieldDescriptor, FieldElement
from src.algebra.hulls import LinearizationRun, linearization_schedule
from src.algebra.matrices import constant_relations, constants_linear_dependent
from src.algebra.polynomials import jet_parts, polynomial
from src.algebra.slices import CoefficientPolynomial, coefficient_polynomial
from src.formulas.ast import Dep, ExistsP, InP, LamP, Language
from src.formulas.shapes import TameFormula, require_tame
from src.oracles.model_oracle import Env, ModelOracle
from src.oracles.scf_oracle import transcendental_names
from src.utils import config
from src.utils.errors import OracleMismatchError, UndecidableShapeError, WrongDescriptorError

logger = logging.getLogger(__name__)


class PairOracle(ModelOracle):
    kind = "pair"
    language = Language.PAIR

    def __init__(self, k: int = 1, max_degree: int = config.LINEARIZATION_MAX_DEGREE, strict: bool = False):
        if k < 1:
            raise WrongDescriptorError("the pair oracle needs at least one transcendental (k ≥ 1)")
        super().__init__(FieldDescriptor.rational_functions(0, transcendental_names(k)))
        self.k = k
        self.max_degree = max_degree
        self.strict = strict
        self.last_run = None

    def spec(self) -> str:
        return f"pair:k={self.k}"

    def is_small(self, value: FieldElement) -> bool:
        return not value.derive()

    def dependent(self, values: List[FieldElement]) -> bool:
        return constants_linear_dependent(values)

    def lambda_values(self, values: List[FieldElement]) -> List[FieldElement]:
        """(c_1..c_n) in E with a_0 = Σ c_i a_i when a_1..a_n are E-independent; zeros otherwise."""
        target, rest = values[0], values[1:]
        zeros = [self.descriptor.zero] * len(rest)
        if self.dependent(rest):
            return zeros
        relations = constant_relations([(v,) for v in values], self.descriptor)
        if not relations:
            return zeros
        relation = relations[0]
        return [-(c / relation[0]) for c in relation[1:]]

    def tame_polynomials(self, tame: TameFormula, env: Env) -> List[CoefficientPolynomial]:
        def lookup(symbol):
            name, order = jet_parts(symbol)
            if order or name not in env:
                raise OracleMismatchError(f"no value for '{symbol.name}'")
            return env[name]

        return [coefficient_polynomial(polynomial(t), tame.variables, lookup, self.descriptor)
                for t in tame.equations]

    def run_tame(self, tame: TameFormula, env: Env) -> LinearizationRun:
        run = linearization_schedule(self.tame_polynomials(tame, env), self.max_degree)
        if not run.settled:
            if self.strict:
                raise UndecidableShapeError(
                    f"existsP over {len(tame.variables)} variables still open at degree {run.degree} (bound {run.bound})"
                )
            logger.warning("linearization stopped at degree %d below the bound %d", run.degree, run.bound)
        self.last_run = run
        return run

    def special_term(self, term, env: Env) -> FieldElement:
        if isinstance(term, LamP):
            return self.lambda_values(self.eval_terms(term.args, env))[term.i - 1]
        return super().special_term(term, env)

    def special_node(self, node, env: Env) -> bool:
        if isinstance(node, Dep):
            return self.dependent(self.eval_terms(node.args, env))
        if isinstance(node, InP):
            return self.is_small(self.eval_term(node.term, env))
        if isinstance(node, ExistsP):
            return self.run_tame(require_tame(node), env).verdict
        return super().special_node(node, env)
