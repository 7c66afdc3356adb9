"""
Rewrites of separably closed formulas: λ-term elimination, homogenization
of λ-tame formulas and the instance reduction at a parameter point.
"""
import itertools
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy import Integer, expand

from src.algebra.pbasis import p_basis_coordinates
from src.algebra.polynomials import (
    adjugate_exprs, degree_in, determinant_expr, homogenize_expr, is_polynomial_term, jet, normalize_term,
    polynomial, to_term,
)
from src.formulas.ast import (
    And, Const, Eq0, Formula, Lam, LamN, Language, Mul, NameSupply, Node, Not, Or, PDep, PDepN, Term, Var,
    all_variables, chunk, free_variables, iter_subterms, rebuild_node, replace_subterms,
    substitute_term, term_children,
)
from src.formulas.shapes import (
    LambdaBlock, LambdaShape, PolyEquation, TameConjunction, ldef, recognize_lambda_tame, require_lambda_tame,
)
from src.oracles.points import Point
from src.oracles.scf_oracle import ScfOracle
from src.passes.instances import ParameterNames, monomial_expr, pth_power_expansion
from src.utils.errors import LanguageTagError, OracleMismatchError, ShapeError

logger = logging.getLogger(__name__)

_LAMBDA = (Lam, LamN)


def _require_scf(formula: Formula):
    if formula.language != Language.SCF:
        raise LanguageTagError(f"expected an scf formula, got {formula.language.value}")


# --- λ-term elimination ---

def _post_order(term: Term) -> Iterator[Term]:
    for child in term_children(term):
        yield from _post_order(child)
    yield term


def _innermost_lambda(term: Term) -> Optional[Term]:
    """The leftmost λ-application whose arguments are λ-free."""
    return next((sub for sub in _post_order(term) if isinstance(sub, _LAMBDA)), None)


def _application_vectors(application) -> Tuple[int, Tuple[Tuple[Term, ...], ...]]:
    if isinstance(application, Lam):
        return 1, chunk(application.args, 1)
    return application.width, application.vectors()


def _siblings(application) -> List[Term]:
    """λ_n^1..λ_n^n at the arguments of ``application``."""
    if isinstance(application, Lam):
        return [Lam(application.n, i, application.args) for i in range(1, application.n + 1)]
    return [LamN(application.width, application.n, i, application.args) for i in range(1, application.n + 1)]


def _wrap(node: Node, names: Sequence[str], width: int, q0, qs, supply: NameSupply) -> Node:
    """Puts every maximal λ-tame piece of ``node`` that mentions ``names`` under the block guarded by (q0, qs)."""
    if not free_variables(node) & set(names):
        return node
    shape = recognize_lambda_tame(node, Language.SCF, supply)
    if shape is not None:
        return LambdaBlock(Language.SCF, width, q0, qs, tuple(names), shape).render()
    if isinstance(node, (And, Or)):
        return type(node)(tuple(_wrap(item, names, width, q0, qs, supply) for item in node.items))
    if isinstance(node, Not):
        return Not(_wrap(node.item, names, width, q0, qs, supply))
    raise ShapeError(f"cannot place {type(node).__name__} under a λ-block")


def _eliminate(term: Term, supply: NameSupply) -> Node:
    application = _innermost_lambda(term)
    if application is None:
        return Eq0(term)
    width, vectors = _application_vectors(application)
    q0, qs = vectors[0], vectors[1:]
    names = supply.fresh_many(len(qs))
    reduced = replace_subterms(term, {t: Var(z) for t, z in zip(_siblings(application), names)})
    undefined = substitute_term(reduced, {z: Const(0) for z in names})
    if is_polynomial_term(undefined):
        undefined = normalize_term(undefined)
    logger.debug("eliminating λ_%d over %d arguments", len(qs), len(q0) * len(vectors))
    guard = ldef(q0, qs)
    defined = _wrap(_eliminate(reduced, supply), names, width, q0, qs, supply)
    return Or((And((Not(guard), _eliminate(undefined, supply))), And((guard, defined))))


def _eliminate_node(node: Node, supply: NameSupply) -> Node:
    if isinstance(node, Eq0):
        return _eliminate(node.term, supply)
    if isinstance(node, (PDep, PDepN)):
        if any(isinstance(sub, _LAMBDA) for t in node.args for sub in iter_subterms(t)):
            raise ShapeError("λ-terms inside pdep atoms are not eliminated; rewrite them as equations first")
        return node
    if isinstance(node, (And, Or, Not)):
        children = (node.item,) if isinstance(node, Not) else node.items
        return rebuild_node(node, (), (_eliminate_node(c, supply) for c in children))
    return node


def eliminate_lambda_terms(formula: Formula) -> Formula:
    """
    Rewrites every term equation t ≐ 0 into a Boolean combination of
    λ-tame formulas, innermost λ-application first:

        (¬ldef(q̄) ∧ t[λ(q̄) := 0] ≐ 0) ∨ (ldef(q̄) ∧ blocks of t[λ(q̄) := z] ≐ 0)
    """
    _require_scf(formula)
    supply = NameSupply(all_variables(formula.root))
    return formula.with_root(_eliminate_node(formula.root, supply))


# --- Homogenization ---

def _homogenized_entry(expr, block: Sequence[str], pivot: str, top: int) -> Term:
    degree = degree_in(expr, block)
    if degree < 0:
        return Const(0)
    value, _ = homogenize_expr(expr, block, pivot, extra=top - degree + 1)
    return to_term(value)


def homogenize_shape(shape: LambdaShape, block: Sequence[str], pivot: str) -> LambdaShape:
    """
    The shape φ′(x, y0, y) with φ′ ⇔ φ(x, y/y0) when y0 ≠ 0 and φ′ true when
    y0 = 0. Block vectors are scaled by one common power of y0, which leaves
    the λ-values unchanged.
    """
    if isinstance(shape, PolyEquation):
        value, _ = homogenize_expr(polynomial(shape.term), block, pivot)
        return PolyEquation(Mul(Var(pivot), to_term(value)))
    if isinstance(shape, TameConjunction):
        return TameConjunction(tuple(homogenize_shape(item, block, pivot) for item in shape.items))
    vectors = (shape.q0,) + shape.qs
    exprs = [[polynomial(t) for t in v] for v in vectors]
    top = max([degree_in(e, block) for v in exprs for e in v] + [0])
    q0, *qs = [tuple(_homogenized_entry(e, block, pivot, top) for e in v) for v in exprs]
    body = shape.body if shape.bare else homogenize_shape(shape.body, block, pivot)
    return LambdaBlock(shape.family, shape.width, q0, tuple(qs), shape.names, body, shape.bare)


def homogenize_lambda(formula: Formula, block: Sequence[str], pivot: str = "y0") -> Formula:
    """
    Homogenizes a λ-tame formula in the ``block`` variables with a new
    variable ``pivot``; the degree is preserved.
    """
    _require_scf(formula)
    if pivot in all_variables(formula.root):
        raise ShapeError(f"the pivot '{pivot}' already occurs in the formula")
    if pivot in block:
        raise ShapeError("the pivot cannot be part of the block")
    supply = NameSupply(all_variables(formula.root) | {pivot})
    shape = require_lambda_tame(formula.root, Language.SCF, supply)
    return formula.with_root(homogenize_shape(shape, tuple(block), pivot).render())


# --- Instance reduction ---

def _normalized(term: Term, assignment) -> Term:
    return normalize_term(substitute_term(term, assignment))


def substitute_shape(shape: LambdaShape, assignment) -> LambdaShape:
    """Substitutes polynomial terms for free variables and normalizes every polynomial."""
    if isinstance(shape, PolyEquation):
        return PolyEquation(_normalized(shape.term, assignment))
    if isinstance(shape, TameConjunction):
        return TameConjunction(tuple(substitute_shape(item, assignment) for item in shape.items))
    inner = {k: v for k, v in assignment.items() if k not in shape.names}
    q0 = tuple(_normalized(t, assignment) for t in shape.q0)
    qs = tuple(tuple(_normalized(t, assignment) for t in v) for v in shape.qs)
    body = shape.body if shape.bare else substitute_shape(shape.body, inner)
    return LambdaBlock(shape.family, shape.width, q0, qs, shape.names, body, shape.bare)


class _InstanceReducer:
    def __init__(self, oracle: ScfOracle, variables: Sequence[str], point: Point, supply: NameSupply):
        self.oracle = oracle
        self.variables = tuple(variables)
        self.point = point
        self.supply = supply
        self.parameters = ParameterNames(supply)

    def coordinate_column(self, vector: Sequence[Term]) -> list:
        """p-basis coordinates of q(x, b) as polynomials in x over the new parameters."""
        column = []
        for entry in vector:
            coordinates = [Integer(0)] * len(self.oracle.basis)
            for exponents, value in pth_power_expansion(polynomial(entry), self.variables, self.point, self.oracle.p):
                monomial = monomial_expr(exponents)
                for nu, zeta in enumerate(p_basis_coordinates(value, self.oracle.basis)):
                    if zeta:
                        coordinates[nu] += self.parameters.expr(zeta) * monomial
            column.extend(expand(c) for c in coordinates)
        return column

    def reduce(self, shape: LambdaShape) -> LambdaShape:
        if isinstance(shape, PolyEquation):
            return shape
        if isinstance(shape, TameConjunction):
            return TameConjunction(tuple(self.reduce(item) for item in shape.items))
        return self.reduce_block(shape)

    def reduce_block(self, block: LambdaBlock) -> LambdaShape:
        columns = [self.coordinate_column(v) for v in (block.q0,) + block.qs]
        rows = [r for r in range(len(columns[0])) if any(col[r] != 0 for col in columns)]
        n = block.n
        pieces: List[LambdaShape] = []
        for chosen in itertools.combinations(rows, n):
            square = [[columns[j + 1][r] for j in range(n)] for r in chosen]
            determinant = determinant_expr(square)
            if determinant == 0:
                continue
            if block.bare:
                pieces.append(PolyEquation(to_term(determinant)))
                continue
            adjugate = adjugate_exprs(square)
            rhs = [columns[0][r] for r in chosen]
            values = [expand(sum(adjugate[i][m] * rhs[m] for m in range(n))) for i in range(n)]
            pieces.append(self.solved_piece(block, columns, rows, determinant, values))
        logger.debug("λ-block over %d coordinate rows gave %d pieces", len(rows), len(pieces))
        return TameConjunction(tuple(pieces))

    def solved_piece(self, block: LambdaBlock, columns, rows, determinant, values) -> LambdaShape:
        """(rows of q0 − Σ Q z ≐ 0) ∧ ψ, homogenized in z and evaluated at y0 = det, z = adj·q0."""
        z = [jet(name) for name in block.names]
        equations = tuple(
            PolyEquation(to_term(columns[0][r] - sum(columns[j + 1][r] * z[j] for j in range(block.n))))
            for r in rows
        )
        pivot = self.supply.fresh("w")
        lifted = homogenize_shape(TameConjunction(equations + (block.body,)), block.names, pivot)
        assignment = {pivot: to_term(determinant)}
        assignment.update({name: to_term(v) for name, v in zip(block.names, values)})
        return substitute_shape(lifted, assignment)


def reduce_instance_scf(formula: Formula, parameters: Sequence[str], point: Point,
                        oracle: ScfOracle) -> Tuple[Formula, Point]:
    """
    Reduces a λ-tame formula of degree D ≥ 1 at the parameter point b to a
    formula of degree D − 1 in the same x, with new parameters b′.

    Args:
        formula: λ-tame, its block polynomials depend on x only through x^p.
        parameters: Names of the parameter variables y; every other free variable is an x.
        point: Values of the parameters in the oracle's field.
        oracle: The field K = F_p(t_1..t_e) whose p-basis is used.

    Returns:
        The reduced formula and the parameter point extended by b′.
    """
    _require_scf(formula)
    oracle.check_formula(formula)
    if point.descriptor != oracle.descriptor:
        raise OracleMismatchError(
            f"point lives in {point.descriptor.describe()}, the oracle in {oracle.descriptor.describe()}"
        )
    supply = NameSupply(all_variables(formula.root) | set(point.names()))
    shape = require_lambda_tame(formula.root, Language.SCF, supply)
    if shape.degree < 1:
        raise ShapeError("instance reduction needs a λ-tame formula of degree at least 1")
    variables = sorted(formula.free_variables - set(parameters))
    reducer = _InstanceReducer(oracle, variables, point, supply)
    reduced = reducer.reduce(shape)
    logger.info("reduced degree %d to %d with %d new parameters", shape.degree, reduced.degree,
                len(reducer.parameters.values))
    return formula.with_root(reduced.render()), point.extended(reducer.parameters.values)
