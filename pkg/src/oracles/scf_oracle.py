"""
The separably closed stand-in F_p(t_1..t_e).

Linear algebra over K^p is done in p-basis coordinates: a ↦ (ζ_ν) with
a = Σ ζ_ν^p t^ν is additive and turns c^p·a into c·(ζ_ν), so K^p-linear
(in)dependence of elements is K-linear (in)dependence of their coordinate
vectors.
"""
from typing import List, Optional, Sequence, Tuple

from src.algebra.fields import FieldDescriptor, FieldElement
from src.algebra.matrices import Matrix
from src.algebra.pbasis import p_basis_coordinates, standard_p_basis
from src.formulas.ast import Lam, LamN, Language, PDep, PDepN, chunk
from src.oracles.model_oracle import Env, ModelOracle
from src.utils.errors import WrongDescriptorError


def transcendental_names(count: int) -> Tuple[str, ...]:
    return ("t",) if count == 1 else tuple(f"t{i}" for i in range(1, count + 1))


class ScfOracle(ModelOracle):
    kind = "scf"
    language = Language.SCF

    def __init__(self, p: int, e: int = 1):
        if p < 2:
            raise WrongDescriptorError("the scf oracle needs a prime characteristic")
        if e < 1:
            raise WrongDescriptorError("the scf oracle needs at least one transcendental (e ≥ 1)")
        super().__init__(FieldDescriptor.rational_functions(p, transcendental_names(e)))
        self.p = p
        self.e = e
        self.basis = standard_p_basis(self.descriptor)

    def spec(self) -> str:
        return f"scf:p={self.p},e={self.e}"

    # --- p-basis linear algebra ---

    def coordinates(self, values: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
        """Stacked p-basis coordinates of a vector of elements."""
        return tuple(c for value in values for c in p_basis_coordinates(value))

    def dependent(self, vectors: Sequence[Sequence[FieldElement]]) -> bool:
        """K^p-linear dependence of the given vectors of K^N."""
        rows = [self.coordinates(v) for v in vectors]
        return Matrix.from_rows(rows, self.descriptor, len(rows[0])).rank() < len(rows)

    def eval_generalized_lambda(self, vectors: Sequence[Sequence[FieldElement]]) -> Optional[Tuple[FieldElement, ...]]:
        """
        The unique (ζ_1..ζ_n) with ā_0 = Σ ζ_i^p ā_i, or None when ā_1..ā_n
        are K^p-dependent or ā_0 is outside their K^p-span.
        """
        target, *rest = [self.coordinates(v) for v in vectors]
        columns = Matrix.from_rows(rest, self.descriptor, len(target)).transpose()
        return columns.solve(target)

    def lambda_values(self, vectors: Sequence[Sequence[FieldElement]]) -> List[FieldElement]:
        solution = self.eval_generalized_lambda(vectors)
        if solution is None:
            return [self.descriptor.zero] * (len(vectors) - 1)
        return list(solution)

    # --- evaluation ---

    def special_term(self, term, env: Env) -> FieldElement:
        if isinstance(term, Lam):
            vectors = [(v,) for v in self.eval_terms(term.args, env)]
            return self.lambda_values(vectors)[term.i - 1]
        if isinstance(term, LamN):
            vectors = chunk(self.eval_terms(term.args, env), term.width)
            return self.lambda_values(vectors)[term.i - 1]
        return super().special_term(term, env)

    def special_node(self, node, env: Env) -> bool:
        if isinstance(node, PDep):
            return self.dependent([(v,) for v in self.eval_terms(node.args, env)])
        if isinstance(node, PDepN):
            return self.dependent(chunk(self.eval_terms(node.args, env), node.width))
        return super().special_node(node, env)
