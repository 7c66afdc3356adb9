"""
Rewrites of differentially closed formulas: s-term elimination,
δ-homogenization, the λ-tame → δ-tame translation, S-formulas and the
instance reduction that removes one quantifier.
"""
import logging
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import Integer, expand

from src.algebra.pbasis import p_basis_coordinates
from src.algebra.polynomials import (
    adjugate_exprs, derivative_rows, is_polynomial_term, jet, normalize_term, polynomial, to_term, weighted_quotient,
    wronskian_expr,
)
from src.formulas.ast import (
    And, Const, Der, Eq0, Formula, Language, Mul, NameSupply, Node, Not, Or, Sroot, Term, Var,
    all_variables, conjunction, conjuncts, free_variables, rebuild_node, replace_subterms, substitute_term,
    term_children,
)
from src.formulas.shapes import (
    DeltaTame, LambdaBlock, LambdaShape, PolyEquation, TameConjunction, recognize_delta_tame, require_delta_tame,
    require_lambda_tame, s_formula_violations,
)
from src.oracles.dcf_oracle import DcfOracle
from src.oracles.points import Point
from src.passes.instances import ParameterNames, monomial_expr, pth_power_expansion
from src.utils.errors import LanguageTagError, OracleMismatchError, ShapeError, UnsupportedShapeError

logger = logging.getLogger(__name__)


def _require(formula: Formula, language: Language):
    if formula.language != language:
        raise LanguageTagError(f"expected a {language.value} formula, got {formula.language.value}")


# --- Conjunction of δ-tame formulas ---

def delta_conjoin(first: DeltaTame, second: DeltaTame, supply: Optional[NameSupply] = None) -> DeltaTame:
    """
    ∃z̄ (... ∧ Σ) ∧ ∃w̄ (... ∧ Σ′) as one δ-tame formula; the bound names of
    ``second`` are renamed apart from those of ``first`` when they clash.
    """
    supply = supply or NameSupply(set(first.bound_names()) | set(second.bound_names())
                                  | _shape_names(first) | _shape_names(second))
    taken = set(first.bound_names()) | _shape_names(first)
    renaming: Dict[str, Term] = {}
    blocks = []
    for name, term in second.blocks:
        term = substitute_term(term, renaming)
        if name in taken:
            new = supply.fresh(name)
            renaming[name] = Var(new)
            name = new
        blocks.append((name, term))
    system = tuple(substitute_term(t, renaming) for t in second.system)
    return DeltaTame(first.blocks + tuple(blocks), first.system + system)


def _shape_names(shape: DeltaTame) -> set:
    return all_variables(shape.render())


# --- s-term elimination ---

def _post_order(term: Term) -> Iterator[Term]:
    for child in term_children(term):
        yield from _post_order(child)
    yield term


def _innermost_s(term: Term) -> Optional[Sroot]:
    return next((sub for sub in _post_order(term) if isinstance(sub, Sroot)), None)


def _wrap(node: Node, name: str, argument: Term, supply: NameSupply) -> Node:
    """Binds ``name`` as the pth root of ``argument`` in every maximal δ-tame piece mentioning it."""
    if name not in free_variables(node):
        return node
    shape = recognize_delta_tame(node)
    if shape is not None:
        fresh = supply.fresh(name)
        rename = {name: Var(fresh)}
        blocks = tuple((z, substitute_term(q, rename)) for z, q in shape.blocks)
        system = tuple(substitute_term(t, rename) for t in shape.system)
        return DeltaTame(((fresh, argument),) + blocks, system).render()
    if isinstance(node, (And, Or)):
        return type(node)(tuple(_wrap(item, name, argument, supply) for item in node.items))
    if isinstance(node, Not):
        return Not(_wrap(node.item, name, argument, supply))
    raise ShapeError(f"cannot place {type(node).__name__} under a pth-root block")


def _eliminate(term: Term, supply: NameSupply) -> Node:
    application = _innermost_s(term)
    if application is None:
        return Eq0(term)
    name = supply.fresh("z")
    reduced = replace_subterms(term, {application: Var(name)})
    undefined = substitute_term(reduced, {name: Const(0)})
    if is_polynomial_term(undefined, differential=True):
        undefined = normalize_term(undefined)
    constant = Eq0(Der(application.arg))
    defined = _wrap(_eliminate(reduced, supply), name, application.arg, supply)
    return Or((And((Not(constant), _eliminate(undefined, supply))), And((constant, defined))))


def _eliminate_node(node: Node, supply: NameSupply) -> Node:
    if isinstance(node, Eq0):
        return _eliminate(node.term, supply)
    if isinstance(node, (And, Or, Not)):
        children = (node.item,) if isinstance(node, Not) else node.items
        return rebuild_node(node, (), (_eliminate_node(c, supply) for c in children))
    return node


def eliminate_s_terms(formula: Formula) -> Formula:
    """
    Rewrites every term equation into a Boolean combination of δ-tame
    formulas, innermost s-application first:

        (¬δ(q) ≐ 0 ∧ t[s(q) := 0] ≐ 0) ∨ (δ(q) ≐ 0 ∧ ∃z (z^p ≐ q ∧ t[s(q) := z] ≐ 0))
    """
    _require(formula, Language.DCF)
    supply = NameSupply(all_variables(formula.root))
    return formula.with_root(_eliminate_node(formula.root, supply))


# --- δ-homogenization ---

def _pivot_times(expr, weights: Mapping[str, int], pivot: str) -> Tuple[object, int]:
    if expr == 0:
        return Integer(0), 0
    return weighted_quotient(expr, weights, pivot)


def homogenize_delta_shape(shape: DeltaTame, weights: Mapping[str, int], pivot: str, p: int) -> DeltaTame:
    """
    φ′(x0, x) with φ′ ⇔ φ(x/x0^k) when x0 ≠ 0 and φ′ true when x0 = 0.

    A block ∃z (z^p ≐ q) becomes ∃z′ (z′^p ≐ x0·P·x0^(pN−1−M)) for
    q(x/x0^k) = P/x0^M and the least N with pN − 1 ≥ M; z′ = z·x0^N, so z
    carries weight N in what follows.
    """
    weights = dict(weights)
    pivot_expr = Var(pivot)
    blocks = []
    for name, term in shape.blocks:
        numerator, power = _pivot_times(polynomial(term), weights, pivot)
        shift = -(-(power + 1) // p)
        lifted = expand(numerator * jet(pivot) ** (p * shift - 1 - power))
        blocks.append((name, Mul(pivot_expr, to_term(lifted))))
        weights[name] = shift
    system = []
    for term in shape.system:
        numerator, _ = _pivot_times(polynomial(term), weights, pivot)
        system.append(Mul(pivot_expr, to_term(numerator)))
    return DeltaTame(tuple(blocks), tuple(system))


def homogenize_delta(formula: Formula, weights: Mapping[str, int], pivot: str = "x0") -> Formula:
    """δ-homogenization of a δ-tame formula with exponents ``weights`` and a new variable ``pivot``."""
    _require(formula, Language.DCF)
    if pivot in all_variables(formula.root):
        raise ShapeError(f"the pivot '{pivot}' already occurs in the formula")
    if any(k < 0 for k in weights.values()):
        raise ShapeError("weights are natural numbers")
    shape = require_delta_tame(formula.root)
    if set(weights) & set(shape.bound_names()):
        raise ShapeError("weights apply to free variables only")
    return formula.with_root(homogenize_delta_shape(shape, weights, pivot, formula.characteristic).render())


# --- λ-tame → δ-tame ---

class _LambdaTranslator:
    """Translates λ-tame shapes over F_p(t)-like fields into δ-tame shapes."""

    def __init__(self, p: int, supply: NameSupply):
        self.p = p
        self.supply = supply

    def translate(self, shape: LambdaShape) -> DeltaTame:
        if isinstance(shape, PolyEquation):
            return DeltaTame((), (shape.term,))
        if isinstance(shape, TameConjunction):
            result = DeltaTame((), ())
            for item in shape.items:
                result = delta_conjoin(result, self.translate(item), self.supply)
            return result
        if shape.width != 1:
            raise UnsupportedShapeError("only pdep_n blocks over single elements translate to δ-tame formulas")
        return self.translate_block(shape)

    def translate_block(self, block: LambdaBlock) -> DeltaTame:
        qs = [polynomial(v[0]) for v in block.qs]
        wronskian = wronskian_expr(qs)
        if block.bare:
            return DeltaTame((), (to_term(wronskian),))
        q0 = polynomial(block.q0[0])
        full = wronskian_expr([q0] + qs)
        rows = derivative_rows(qs)
        adjugate = adjugate_exprs(rows)
        derivatives = derivative_rows([q0], len(qs))
        column = [row[0] for row in derivatives]
        scale = wronskian ** (self.p - 1)
        blocks = []
        for i, name in enumerate(block.names):
            value = expand(scale * sum(adjugate[i][m] * column[m] for m in range(len(qs))))
            blocks.append((name, to_term(value)))
        body = self.translate(block.body)
        pivot = self.supply.fresh("w")
        lifted = homogenize_delta_shape(body, {name: 1 for name in block.names}, pivot, self.p)
        wronskian_term = to_term(wronskian)
        placed = DeltaTame(
            tuple((z, _substituted(q, pivot, wronskian_term)) for z, q in lifted.blocks),
            tuple(_substituted(t, pivot, wronskian_term) for t in lifted.system),
        )
        return DeltaTame(tuple(blocks) + placed.blocks, (to_term(full),) + placed.system)


def _substituted(term: Term, pivot: str, value: Term) -> Term:
    return normalize_term(substitute_term(term, {pivot: value}))


def lambda_to_delta(formula: Formula) -> Formula:
    """
    The δ-tame formula of DCF_p equivalent to a λ-tame formula of SCF_p,
    with pdep_n as the vanishing of a Wronskian and the λ-values as pth
    roots of constants.
    """
    _require(formula, Language.SCF)
    supply = NameSupply(all_variables(formula.root))
    shape = require_lambda_tame(formula.root, Language.SCF, supply)
    translated = _LambdaTranslator(formula.characteristic, supply).translate(shape)
    logger.debug("λ-tame degree %d became %d pth-root blocks", shape.degree, translated.quantifiers)
    return Formula(Language.DCF, formula.characteristic, translated.render())


# --- S-formulas ---

def to_s_formula(formula: Formula) -> Formula:
    """∃z (z^p ≐ q ∧ ψ) ↦ δ(q) ≐ 0 ∧ ψ[z := s(q)], outermost block first."""
    _require(formula, Language.DCF)
    shape = require_delta_tame(formula.root)
    assignment: Dict[str, Term] = {}
    constants: List[Node] = []
    for name, term in shape.blocks:
        term = substitute_term(term, assignment)
        constants.append(Eq0(Der(term)))
        assignment[name] = Sroot(term)
    system = [Eq0(substitute_term(t, assignment)) for t in shape.system]
    return formula.with_root(conjunction(constants + system))


def from_s_formula(formula: Formula) -> Formula:
    """The δ-tame formula of an S-formula, innermost s-application first."""
    _require(formula, Language.DCF)
    missing = s_formula_violations(formula.root)
    if missing:
        raise ShapeError(f"s-terms without a δ(r) ≐ 0 conjunct: {len(missing)}")
    terms = [item.term for item in conjuncts(formula.root)]
    supply = NameSupply(all_variables(formula.root))
    blocks = []
    while True:
        application = next((a for t in terms for a in [_innermost_s(t)] if a is not None), None)
        if application is None:
            break
        name = supply.fresh("z")
        argument = application.arg
        terms = [replace_subterms(t, {application: Var(name)}) for t in terms]
        terms = [t for t in terms if t != Der(argument)]
        blocks.append((name, argument))
    return formula.with_root(DeltaTame(tuple(blocks), tuple(terms)).render())


# --- Instance reduction ---

def reduce_instance_dcf(formula: Formula, parameters: Sequence[str], point: Point,
                        oracle: DcfOracle) -> Tuple[Formula, Point]:
    """
    Removes the outermost pth-root block of a δ-tame formula at the
    parameter point b.

    The block term q(x, b) = Σ_ν q_ν(x)^p t^ν over the basis (1, t, …, t^(p−1))
    has a pth root exactly when every q_ν with ν ≠ 0 vanishes, and the root
    is q_0; so the result is ⋀_{ν≠0} q_ν ≐ 0 ∧ ψ[z := q_0].

    Args:
        formula: δ-tame with at least one block; in the outermost block term
            every x-jet monomial is a pth power.
        parameters: Names of the parameter variables; every other free variable is an x.
        point: Parameter values in the oracle's field.
        oracle: The field (F_p(t), d/dt).

    Returns:
        The reduced formula, with one block fewer, and the point extended by b′.
    """
    _require(formula, Language.DCF)
    oracle.check_formula(formula)
    if point.descriptor != oracle.descriptor:
        raise OracleMismatchError(
            f"point lives in {point.descriptor.describe()}, the oracle in {oracle.descriptor.describe()}"
        )
    shape = require_delta_tame(formula.root)
    if not shape.blocks:
        raise ShapeError("instance reduction needs at least one pth-root block")
    supply = NameSupply(all_variables(formula.root) | set(point.names()))
    names = ParameterNames(supply)
    variables = sorted(formula.free_variables - set(parameters))
    (name, term), rest = shape.blocks[0], shape.blocks[1:]
    p = oracle.p
    parts = [Integer(0)] * p
    for exponents, value in pth_power_expansion(polynomial(term), variables, point, p):
        monomial = monomial_expr(exponents)
        for nu, zeta in enumerate(p_basis_coordinates(value)):
            if zeta:
                parts[nu] += names.expr(zeta) * monomial
    root = to_term(parts[0])
    side = tuple(to_term(part) for part in parts[1:] if expand(part) != 0)
    assignment = {name: root}
    blocks = tuple((z, normalize_term(substitute_term(q, assignment))) for z, q in rest)
    system = tuple(normalize_term(substitute_term(t, assignment)) for t in shape.system)
    reduced = DeltaTame(blocks, side + system)
    logger.info("removed the block of '%s', %d side conditions, %d new parameters",
                name, len(side), len(names.values))
    return formula.with_root(reduced.render()), point.extended(names.values)

