import itertools
from typing import Iterator, Sequence

from src.algebra.fields import FieldDescriptor, FieldElement
from src.algebra.matrices import constants_linear_dependent
from src.formulas.ast import Dep, Der, Formula, InP, Language
from src.oracles.model_oracle import Env, ModelOracle
from src.oracles.points import Point
from src.utils.errors import OracleMismatchError, WrongDescriptorError


class FpOracle(ModelOracle):
    """
    The prime field F_p with the zero derivation. Small enough to enumerate,
    it evaluates polynomial and differential-polynomial atoms and dep_n of
    any language; used for exact solution sets in the chain lab.
    """

    kind = "fp"

    def __init__(self, p: int):
        if p < 2:
            raise WrongDescriptorError("the fp oracle needs a prime")
        super().__init__(FieldDescriptor.prime_field(p, zero_derivation=True))
        self.p = p

    def spec(self) -> str:
        return f"fp:p={self.p}"

    def check_formula(self, formula: Formula):
        if formula.language != Language.PAIR and formula.characteristic != self.p:
            raise OracleMismatchError(
                f"{self.spec()} has characteristic {self.p}, the formula declares {formula.characteristic}"
            )

    def field_elements(self) -> Sequence[FieldElement]:
        return [self.descriptor.element(v) for v in range(self.p)]

    def enumerate_points(self, names: Sequence[str]) -> Iterator[Point]:
        """All points of F_p^len(names), lexicographically."""
        values = self.field_elements()
        for combo in itertools.product(values, repeat=len(names)):
            yield Point(self.descriptor, dict(zip(names, combo)))

    def special_term(self, term, env: Env) -> FieldElement:
        if isinstance(term, Der):
            return self.descriptor.zero
        return super().special_term(term, env)

    def special_node(self, node, env: Env) -> bool:
        if isinstance(node, Dep):
            return constants_linear_dependent(self.eval_terms(node.args, env))
        if isinstance(node, InP):
            return True
        return super().special_node(node, env)
