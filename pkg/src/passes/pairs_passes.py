"""
The pairs pipeline (K, E): closure of tame formulas under ∧/∨ through the
Segre embedding, λ_P-formulas as tame formulas, linearization, annihilator
spaces and the checkable half of the simple-linear reduction.
"""
import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Integer, expand

from src.algebra.fields import FieldElement
from src.algebra.hulls import EHullBasis, LinearizationRun, linearization_schedule
from src.algebra.matrices import Matrix, constant_relations, constants_linear_dependent
from src.algebra.polynomials import (
    block_terms, degree_in, homogenize_expr, is_homogeneous_in, jet, polynomial, to_term,
)
from src.algebra.slices import monomials_of_degree
from src.exterior.plucker import (
    PluckerVector, coordinate_name, grassmannian_equations, index_sets, symbolic_contractions, wedge,
)
from src.formulas.ast import (
    And, Const, Dep, Eq0, Formula, Language, NameSupply, Node, Or, Term, Truth, all_variables,
)
from src.formulas.shapes import (
    LambdaBlock, LambdaShape, LinearTame, PolyEquation, TameConjunction, TameFormula, recognize_tame,
    require_lambda_tame, require_tame,
)
from src.oracles.pair_oracle import PairOracle
from src.oracles.points import Point
from src.utils import config
from src.utils.errors import ImplicationViolation, LanguageTagError, OracleMismatchError, ShapeError

logger = logging.getLogger(__name__)

AND = "and"
OR = "or"


def _require_pair(formula: Formula):
    if formula.language != Language.PAIR:
        raise LanguageTagError(f"expected a pair formula, got {formula.language.value}")


def _supply_for(*tames: TameFormula) -> NameSupply:
    names = set()
    for tame in tames:
        names |= all_variables(tame.render())
    return NameSupply(names)


# --- Elementary tame formulas ---

def true_tame(supply: NameSupply) -> TameFormula:
    return TameFormula((supply.fresh("zeta"),), ())


def tame_from_equation(term: Term, supply: NameSupply) -> TameFormula:
    """q ≐ 0 as dep_1(q): ∃ζ ∈ P (ζ ≠ 0 ∧ ζ·q ≐ 0)."""
    return tame_from_dep((term,), supply)


def tame_from_dep(terms: Sequence[Term], supply: NameSupply) -> TameFormula:
    """dep_n(q1..qn) as ∃ζ ∈ P^n (ζ ≠ 0 ∧ Σ ζ_i·q_i ≐ 0)."""
    names = supply.fresh_many(len(terms), "zeta")
    total = sum((jet(name) * polynomial(t) for name, t in zip(names, terms)), Integer(0))
    equations = (to_term(total),) if expand(total) != 0 else ()
    return TameFormula(names, equations)


# --- Segre combination ---

def segre(first: Sequence[str], second: Sequence[str], equations: Sequence, supply: NameSupply) -> TameFormula:
    """
    ∃υ ∈ P^r ∃ζ ∈ P^s (υ ≠ 0 ∧ ζ ≠ 0 ∧ ⋀ q_k(υ, ζ) ≐ 0), the q_k homogeneous in
    υ and in ζ separately, as one tame formula over ξ ∈ P^(r·s):
    ⋀_{i,j,k} q_k(ξ_{*,j}, ξ_{i,*}) ≐ 0.
    """
    if set(first) & set(second):
        raise ShapeError("the two quantifier blocks must use different names")
    for expr in equations:
        if not is_homogeneous_in(expr, first) or not is_homogeneous_in(expr, second):
            raise ShapeError("Segre combination needs polynomials homogeneous in each block")
    r, s = len(first), len(second)
    grid = [[supply.fresh(f"xi{i + 1}_{j + 1}") for j in range(s)] for i in range(r)]
    combined: List = []
    for i in range(r):
        for j in range(s):
            mapping = {jet(first[a]): jet(grid[a][j]) for a in range(r)}
            mapping.update({jet(second[b]): jet(grid[i][b]) for b in range(s)})
            for expr in equations:
                value = expand(expr.xreplace(mapping))
                if value != 0 and value not in combined:
                    combined.append(value)
    variables = tuple(name for row in grid for name in row)
    return TameFormula(variables, tuple(to_term(e) for e in combined))


def _rename_apart(tame: TameFormula, avoid: Sequence[str], supply: NameSupply) -> TameFormula:
    clashes = [v for v in tame.variables if v in set(avoid)]
    if not clashes:
        return tame
    renaming = {v: supply.fresh(v) for v in clashes}
    mapping = {jet(old): jet(new) for old, new in renaming.items()}
    return TameFormula(
        tuple(renaming.get(v, v) for v in tame.variables),
        tuple(to_term(polynomial(t).xreplace(mapping)) for t in tame.equations),
    )


def combine_tame(first: TameFormula, second: TameFormula, connective: str = AND,
                 supply: Optional[NameSupply] = None) -> TameFormula:
    """
    The tame formula equivalent to ``first ∧ second`` (systems side by side)
    or ``first ∨ second`` (pairwise products of the two systems), through
    the Segre combination of the two blocks.
    """
    if connective not in (AND, OR):
        raise ShapeError(f"Invalid connective: '{connective}'. Please choose 'and' or 'or'.")
    supply = supply or _supply_for(first, second)
    second = _rename_apart(second, first.variables, supply)
    ours, theirs = first.polynomials(), second.polynomials()
    if connective == AND:
        equations = ours + theirs
    else:
        equations = [expand(a * b) for a in ours for b in theirs]
    logger.debug("combining %d×%d variables with '%s'", len(first.variables), len(second.variables), connective)
    return segre(first.variables, second.variables, equations, supply)


def _tame_of_node(node: Node, supply: NameSupply) -> TameFormula:
    tame = recognize_tame(node)
    if tame is not None:
        return tame
    if isinstance(node, Eq0):
        return tame_from_equation(node.term, supply)
    if isinstance(node, Dep):
        return tame_from_dep(node.args, supply)
    if isinstance(node, Truth):
        if node.value:
            return true_tame(supply)
        return tame_from_equation(Const(1), supply)
    if isinstance(node, (And, Or)):
        connective = AND if isinstance(node, And) else OR
        result = _tame_of_node(node.items[0], supply)
        for item in node.items[1:]:
            result = combine_tame(result, _tame_of_node(item, supply), connective, supply)
        return result
    raise ShapeError(f"{type(node).__name__} has no tame form; tame formulas are closed under ∧ and ∨ only")


def combine_tame_formula(formula: Formula) -> Formula:
    """A positive ∧/∨-combination of tame formulas, equations and dep atoms as a single tame formula."""
    _require_pair(formula)
    supply = NameSupply(all_variables(formula.root))
    return formula.with_root(_tame_of_node(formula.root, supply).render())


# --- λ_P-formulas ---

def _tame_of_shape(shape: LambdaShape, supply: NameSupply) -> TameFormula:
    if isinstance(shape, PolyEquation):
        return tame_from_equation(shape.term, supply)
    if isinstance(shape, TameConjunction):
        result = true_tame(supply)
        for item in shape.items:
            result = combine_tame(result, _tame_of_shape(item, supply), AND, supply)
        return result
    terms = tuple(v[0] for v in shape.qs)
    if shape.bare:
        return tame_from_dep(terms, supply)
    return _tame_of_block(shape, supply)


def _tame_of_block(block: LambdaBlock, supply: NameSupply) -> TameFormula:
    """
    dep_n(q) ∨ (ldef(q0..qn) ∧ ψ(λ)) with ψ = ∃υ (υ ≠ 0 ∧ ⋀ p_k(z, υ) ≐ 0) is
    ∃(ζ0, ζ) ∃υ (ζ0·q0 − Σ ζ_i q_i ≐ 0 ∧ ⋀ r_k(ζ0, ζ, υ) ≐ 0) with
    r_k = ζ0^(N+1)·p_k(ζ/ζ0, υ), then one Segre combination.
    """
    body = _tame_of_shape(block.body, supply)
    pivot = supply.fresh("zeta")
    names = block.names
    relation = jet(pivot) * polynomial(block.q0[0])
    for name, vector in zip(names, block.qs):
        relation -= jet(name) * polynomial(vector[0])
    lifted = [homogenize_expr(p, names, pivot, extra=1)[0] for p in body.polynomials()]
    return segre((pivot,) + tuple(names), body.variables, [expand(relation)] + lifted, supply)


def lambdaP_to_tame(formula: Formula) -> Formula:
    """The tame formula equivalent to a λ_P-formula."""
    _require_pair(formula)
    supply = NameSupply(all_variables(formula.root))
    shape = require_lambda_tame(formula.root, Language.PAIR, supply)
    tame = _tame_of_shape(shape, supply)
    logger.debug("λ_P degree %d gave %d bound variables", shape.degree, len(tame.variables))
    return formula.with_root(tame.render())


# --- Linearization ---

def linearize_tame(tame: TameFormula, degree: int, supply: Optional[NameSupply] = None) -> LinearTame:
    """
    ∃ξ ∈ P^s (ξ ≠ 0 ∧ ⋀_j Σ_i ξ_i·r_{i,j}(x) ≐ 0), where M_1..M_s are the
    monomials of ``degree`` in the bound variables and f_j = Σ_i M_i·r_{i,j}
    runs over the products M·q_k of that degree.
    """
    if degree < tame.degree:
        raise ShapeError(f"degree {degree} is below the ζ-degree {tame.degree} of the formula")
    count = len(tame.variables)
    monomials = monomials_of_degree(count, degree)
    position = {m: i for i, m in enumerate(monomials)}
    if degree == 1:
        names = tame.variables
    else:
        supply = supply or _supply_for(tame)
        names = supply.fresh_many(len(monomials), "xi")
    columns: List[List[Term]] = []
    for expr in tame.polynomials():
        own = degree_in(expr, tame.variables)
        if own < 0:
            continue
        for factor in monomials_of_degree(count, degree - own):
            product = expr
            for name, exponent in zip(tame.variables, factor):
                product *= jet(name) ** exponent
            column: List[Term] = [Const(0)] * len(monomials)
            for monom, coeff in block_terms(product, tame.variables):
                column[position[tuple(monom)]] = to_term(coeff)
            columns.append(column)
    matrix = tuple(tuple(column[i] for column in columns) for i in range(len(monomials)))
    logger.debug("linearized at degree %d: %d unknowns, %d equations", degree, len(monomials), len(columns))
    return LinearTame(tuple(names), matrix)


def linearize(formula: Formula, degree: Optional[int] = None) -> Formula:
    _require_pair(formula)
    tame = require_tame(formula.root)
    linear = linearize_tame(tame, tame.degree if degree is None else degree,
                            NameSupply(all_variables(formula.root)))
    return formula.with_root(linear.render())


def _environment(formula_names, point: Point, oracle: PairOracle) -> Dict[str, FieldElement]:
    if not isinstance(oracle, PairOracle):
        raise OracleMismatchError(f"{oracle.spec()} is not a pair oracle")
    if point.descriptor != oracle.descriptor:
        raise OracleMismatchError(
            f"point lives in {point.descriptor.describe()}, the oracle in {oracle.descriptor.describe()}"
        )
    return {name: point[name] for name in formula_names}


def linear_tame_truth(linear: LinearTame, point: Point, oracle: PairOracle) -> bool:
    """Direct decision of a linear tame formula: the rows r_{i,*}(a) are E-linearly dependent."""
    names = set()
    for row in linear.matrix:
        for term in row:
            names |= {s.name for s in polynomial(term).free_symbols}
    env = _environment(sorted(names), point, oracle)
    rows = [tuple(oracle.eval_term(term, env) for term in row) for row in linear.matrix]
    return bool(constant_relations(rows, oracle.descriptor))


def kolchin_run(tame: TameFormula, point: Point, oracle: PairOracle,
                max_degree: Optional[int] = None) -> LinearizationRun:
    """Decides tame truth at a point through the E-hulls of the slices of I(a, Z)."""
    env = _environment(sorted(_tame_free_variables(tame)), point, oracle)
    polys = oracle.tame_polynomials(tame, env)
    return linearization_schedule(polys, oracle.max_degree if max_degree is None else max_degree, use_hull=True)


def _tame_free_variables(tame: TameFormula) -> set:
    names = set()
    for expr in tame.polynomials():
        names |= {s.name for s in expr.free_symbols}
    return names - set(tame.variables)


def eval_tame_kolchin(tame: TameFormula, point: Point, oracle: PairOracle) -> bool:
    return kolchin_run(tame, point, oracle).verdict


# --- Annihilators ---

@dataclass(frozen=True)
class Annihilator:
    monomials: Tuple[Tuple[int, ...], ...]
    hull: EHullBasis
    plucker: Optional[PluckerVector]

    @property
    def dimension(self) -> int:
        return self.hull.dimension

    def to_dict(self) -> dict:
        return {
            "n": len(self.monomials),
            "monomials": [list(m) for m in self.monomials],
            "dimension": self.dimension,
            "basis": [[str(c) for c in v] for v in self.hull.basis],
            "plucker": self.plucker.as_strings() if self.plucker is not None else None,
        }


def monomial_enumeration(count: int, n: int) -> List[Tuple[int, ...]]:
    """The first n monomials in ``count`` variables: by degree, then lexicographically descending."""
    result: List[Tuple[int, ...]] = []
    degree = 0
    while len(result) < n:
        result.extend(monomials_of_degree(count, degree))
        degree += 1
    return result[:n]


def _monomial_value(values: Sequence[FieldElement], monomial: Tuple[int, ...], one: FieldElement) -> FieldElement:
    result = one
    for value, exponent in zip(values, monomial):
        if exponent:
            result = result * value ** exponent
    return result


def annihilator(values: Sequence[FieldElement], n: int, oracle: PairOracle) -> Annihilator:
    """
    Ann_n(a) = {λ ∈ E^n : Σ λ_i·M_i(a) = 0} and its Plücker point.

    Args:
        values: The tuple a, in the oracle's field.
        n: Number of monomials M_1..M_n of the fixed enumeration.
        oracle: The pair oracle fixing K and E.

    Returns:
        An ``Annihilator``; the Plücker point is None for the zero space.
    """
    if not isinstance(oracle, PairOracle):
        raise OracleMismatchError(f"{oracle.spec()} is not a pair oracle")
    if any(v.descriptor != oracle.descriptor for v in values):
        raise OracleMismatchError("annihilator values must live in the oracle's field")
    if n < 1:
        raise ShapeError("the annihilator needs at least one monomial")
    monomials = monomial_enumeration(len(values), n)
    evaluated = [(_monomial_value(values, m, oracle.descriptor.one),) for m in monomials]
    kernel = constant_relations(evaluated, oracle.descriptor)
    plucker = wedge(kernel, oracle.descriptor) if kernel else None
    logger.debug("Ann_%d has dimension %d", n, len(kernel))
    return Annihilator(tuple(monomials), EHullBasis(tuple(kernel), 1, n), plucker)


def annihilator_rank_formula(variables: Sequence[str], n: int, k: int,
                             supply: Optional[NameSupply] = None) -> TameFormula:
    """
    "Ann_n(x) contains a k-dimensional E-subspace": ∃ζ ∈ P^C(n,k) (ζ ≠ 0 ∧
    ζ is decomposable ∧ ⋀_I Σ_j (e^I ⌟ ζ)_j·M_j(x) ≐ 0).
    """
    if not 1 <= k <= n:
        raise ShapeError(f"subspace dimension {k} outside 1..{n}")
    supply = supply or NameSupply(variables)
    supply.reserve(variables)
    names = {subset: supply.fresh(coordinate_name(subset, "p")) for subset in index_sets(n, k)}
    monomials = monomial_enumeration(len(variables), n)
    monomial_exprs = []
    for monomial in monomials:
        expr = Integer(1)
        for name, exponent in zip(variables, monomial):
            expr *= jet(name) ** exponent
        monomial_exprs.append(expr)
    equations = list(grassmannian_equations(n, k, names))
    for vector in symbolic_contractions(n, k, names):
        value = expand(sum((c * m for c, m in zip(vector, monomial_exprs)), Integer(0)))
        if value != 0 and value not in equations:
            equations.append(value)
    ordered = tuple(names[subset] for subset in index_sets(n, k))
    return TameFormula(ordered, tuple(to_term(e) for e in equations))


# --- Simple linear formulas ---

@dataclass(frozen=True)
class SimpleLinearReport:
    relation: bool
    minors_vanish: bool
    dep_samples: Tuple[bool, ...]

    def to_dict(self) -> dict:
        return {"relation": self.relation, "minors_vanish": self.minors_vanish,
                "dep_samples": list(self.dep_samples)}


def _sample_multiplier(entries: Sequence[FieldElement], rng: random.Random, one: FieldElement) -> FieldElement:
    """r(ā) for a random integer polynomial r of degree ≤ 2 in the entries."""
    value = one * rng.choice(config.SAMPLE_POOL)
    for _ in range(rng.randint(1, 3)):
        factor = one * rng.choice([c for c in config.SAMPLE_POOL if c] or [1])
        for _ in range(rng.randint(1, 2)):
            factor = factor * rng.choice(entries)
        value = value + factor
    return value


def simple_linear_checks(rows: Sequence[Sequence[FieldElement]], oracle: PairOracle,
                         samples: int = config.SIMPLE_LINEAR_SAMPLES,
                         seed: int = config.DEFAULT_SEED) -> SimpleLinearReport:
    """
    For an m×n matrix A over K: whether the rows have an E-linear relation,
    whether the rows are K-linearly dependent (all maximal minors vanish
    when m ≤ n), and dep_m(Σ_j a_{1,j} r_j, …, Σ_j a_{m,j} r_j)
    for ``samples`` seeded tuples r. A relation forces the other two; a
    matrix where it does not raises ImplicationViolation.
    """
    if not isinstance(oracle, PairOracle):
        raise OracleMismatchError(f"{oracle.spec()} is not a pair oracle")
    m, n = len(rows), len(rows[0])
    descriptor = oracle.descriptor
    matrix = Matrix.from_rows(rows, descriptor, n)
    relation = bool(constant_relations([tuple(r) for r in rows], descriptor))
    # m > n has no m×m minors; rank < m still holds.
    minors_vanish = matrix.rank() < m
    entries = [value for row in rows for value in row]
    deps = []
    for trial in range(samples):
        rng = random.Random(f"{seed}:simple-linear:{trial}")
        multipliers = [_sample_multiplier(entries, rng, descriptor.one) for _ in range(n)]
        combined = [sum((a * r for a, r in zip(row, multipliers)), descriptor.zero) for row in rows]
        deps.append(constants_linear_dependent(combined))
    report = SimpleLinearReport(relation, minors_vanish, tuple(deps))
    if relation and not (minors_vanish and all(deps)):
        raise ImplicationViolation(f"an E-linear row relation without its consequences: {report.to_dict()}")
    return report
