import logging
from typing import Dict, Mapping

from src.algebra.fields import FieldDescriptor, FieldElement
from src.formulas.ast import (
    Add, And, Const, Eq0, Formula, Language, Mul, Neg, Node, Nonzero, Not, Or, Pow, Sub, Term, Truth, Var,
)
from src.oracles.points import Point
from src.utils.errors import OracleMismatchError

logger = logging.getLogger(__name__)

Env = Mapping[str, FieldElement]


class ModelOracle:
    """
    A concrete field (with extra structure) in which formulas are evaluated.

    Subclasses set ``kind``, ``language`` and ``descriptor`` and extend
    ``special_term`` / ``special_node`` with the symbols of their language;
    ring operations and the Boolean connectives are shared.
    """

    kind = "model"
    language: Language = None

    def __init__(self, descriptor: FieldDescriptor):
        self.descriptor = descriptor

    def spec(self) -> str:
        raise NotImplementedError

    @property
    def characteristic(self) -> int:
        return self.descriptor.characteristic

    def check_formula(self, formula: Formula):
        if formula.language != self.language:
            raise OracleMismatchError(
                f"{self.spec()} evaluates {self.language.value} formulas, got {formula.language.value}"
            )
        if formula.characteristic != self.characteristic:
            raise OracleMismatchError(
                f"{self.spec()} has characteristic {self.characteristic}, the formula declares {formula.characteristic}"
            )

    def eval(self, formula: Formula, point: Point) -> bool:
        """
        Truth value of a formula at a point.

        Args:
            formula: A formula of this oracle's language and characteristic.
            point: Values for (at least) the free variables of the formula.

        Returns:
            The truth value, computed by structural recursion.
        """
        self.check_formula(formula)
        if point.descriptor != self.descriptor:
            raise OracleMismatchError(
                f"point lives in {point.descriptor.describe()}, the oracle in {self.descriptor.describe()}"
            )
        env = {name: point[name] for name in formula.free_variables}
        return self.eval_node(formula.root, env)

    # --- terms ---

    def eval_term(self, term: Term, env: Env) -> FieldElement:
        if isinstance(term, Var):
            if term.name not in env:
                raise OracleMismatchError(f"no value for variable '{term.name}'")
            return env[term.name]
        if isinstance(term, Const):
            return self.descriptor.element(term.value)
        if isinstance(term, Add):
            return self.eval_term(term.left, env) + self.eval_term(term.right, env)
        if isinstance(term, Sub):
            return self.eval_term(term.left, env) - self.eval_term(term.right, env)
        if isinstance(term, Mul):
            return self.eval_term(term.left, env) * self.eval_term(term.right, env)
        if isinstance(term, Neg):
            return -self.eval_term(term.arg, env)
        if isinstance(term, Pow):
            return self.eval_term(term.base, env) ** term.exponent
        return self.special_term(term, env)

    def eval_terms(self, terms, env: Env):
        return [self.eval_term(t, env) for t in terms]

    def special_term(self, term: Term, env: Env) -> FieldElement:
        raise OracleMismatchError(f"{self.spec()} cannot evaluate {type(term).__name__} terms")

    # --- formulas ---

    def eval_node(self, node: Node, env: Env) -> bool:
        if isinstance(node, Truth):
            return node.value
        if isinstance(node, Eq0):
            return not self.eval_term(node.term, env)
        if isinstance(node, Nonzero):
            return any(self.eval_terms(node.terms, env))
        if isinstance(node, And):
            return all(self.eval_node(item, env) for item in node.items)
        if isinstance(node, Or):
            return any(self.eval_node(item, env) for item in node.items)
        if isinstance(node, Not):
            return not self.eval_node(node.item, env)
        return self.special_node(node, env)

    def special_node(self, node: Node, env: Env) -> bool:
        raise OracleMismatchError(f"{self.spec()} cannot evaluate {type(node).__name__} formulas")

    def bind(self, env: Env, values: Dict[str, FieldElement]) -> Dict[str, FieldElement]:
        extended = dict(env)
        extended.update(values)
        return extended
