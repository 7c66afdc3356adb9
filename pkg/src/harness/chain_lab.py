"""
The descending-chain lab.

A candidate equation φ(x; y) is instantiated at parameter tuples b_1, b_2, …
and the intersection ⋂ φ(x, b_i) is tracked as the span of the products
M·f_i of the instance polynomials with monomials M, truncated at a degree
bound, or reduced modulo the field equations over F_p. Differential
polynomials are handled with their jets as independent unknowns, and
dep_s(q_1..q_s) through its Wronskian W(q) ≐ 0. Over an enumerable oracle
the exact solution sets are tracked alongside.
"""
import hashlib
import itertools
import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.algebra.fields import FieldDescriptor, FieldElement
from src.algebra.matrices import span_basis
from src.algebra.polynomials import (
    degree_in, is_polynomial_term, jet, jet_parts, polynomial, sorted_symbols, wronskian_expr,
)
from src.algebra.slices import CoefficientPolynomial, Monomial, coefficient_polynomial, monomials_of_degree
from src.formulas.ast import Dep, Eq0, Formula
from src.oracles.fp_oracle import FpOracle
from src.oracles.model_oracle import ModelOracle
from src.oracles.points import Point
from src.oracles.sampling import PointSampler
from src.passes.instances import point_lookup
from src.utils import config
from src.utils.errors import UnsupportedShapeError

logger = logging.getLogger(__name__)

GRID_SIZE = 16


@dataclass(frozen=True)
class Candidate:
    """The instance polynomial of a candidate equation, split into unknowns and parameters."""
    kind: str
    expr: object
    unknowns: Tuple[str, ...]
    variables: Tuple[str, ...]
    parameters: Tuple[str, ...]

    @property
    def degree(self) -> int:
        return max(degree_in(self.expr, self.unknowns), 0)


def chain_candidate(formula: Formula, parameters: Sequence[str]) -> Candidate:
    """
    Reads φ(x; y) as one instance polynomial: q for q ≐ 0 (polynomial or
    differential), the Wronskian for dep_s(q_1..q_s).
    """
    root = formula.root
    if isinstance(root, Eq0) and is_polynomial_term(root.term, differential=True):
        expr = polynomial(root.term)
        kind = "polynomial" if is_polynomial_term(root.term) else "differential"
    elif isinstance(root, Dep) and all(is_polynomial_term(a) for a in root.args):
        expr = wronskian_expr([polynomial(a) for a in root.args])
        kind = "dependence"
    else:
        raise UnsupportedShapeError(
            "chain candidates are polynomial or differential equations q(x; y) ≐ 0 or dep_s(q_1..q_s)"
        )
    parameters = tuple(parameters)
    unknowns = tuple(s.name for s in sorted_symbols(expr) if jet_parts(s)[0] not in parameters)
    variables = tuple(sorted(formula.free_variables - set(parameters)))
    return Candidate(kind, expr, unknowns, variables, parameters)


@dataclass(frozen=True)
class ChainStep:
    step: int
    parameters: Dict[str, str]
    dimension: int
    descriptor: str
    solutions: Optional[int] = None
    solution_hash: Optional[str] = None

    def to_dict(self) -> dict:
        entry = {"step": self.step, "parameters": self.parameters, "dimension": self.dimension,
                 "descriptor": self.descriptor}
        if self.solution_hash is not None:
            entry.update({"solutions": self.solutions, "solution_hash": self.solution_hash})
        return entry


@dataclass(frozen=True)
class ChainReport:
    formula_id: str
    candidate: str
    oracle: str
    degree_bound: int
    steps: Tuple[ChainStep, ...]
    stabilization_index: int
    exact_index: Optional[int]
    stabilized: bool
    violations: Tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "schema": config.REPORT_SCHEMA,
            "kind": "chain",
            "formula": self.formula_id,
            "candidate": self.candidate,
            "oracle": self.oracle,
            "degree_bound": self.degree_bound,
            "stabilization_index": self.stabilization_index,
            "exact_index": self.exact_index,
            "stabilized": self.stabilized,
            "violations": list(self.violations),
            "steps": [s.to_dict() for s in self.steps],
        }


def _digest(parts: Iterable[str]) -> str:
    return hashlib.sha256("\n".join(parts).encode("utf-8")).hexdigest()


def truncated_monomials(count: int, bound: int) -> List[Monomial]:
    """Monomials of total degree ≤ bound, highest degree first."""
    return [m for d in range(bound, -1, -1) for m in monomials_of_degree(count, d)]


def reduced_monomials(count: int, p: int) -> List[Monomial]:
    """Monomials with every exponent below p, highest degree first: a basis of F_p[x]/(x_i^p − x_i)."""
    return [m for m in truncated_monomials(count, count * (p - 1)) if all(e < p for e in m)]


def instance_vectors(instance: CoefficientPolynomial, monomials: Sequence[Monomial],
                     bound: int) -> List[Tuple[FieldElement, ...]]:
    """Coefficient vectors of M·f for every M with deg M + deg f ≤ bound."""
    if instance.is_zero:
        return []
    vectors = []
    for gap in range(bound - instance.degree + 1):
        for multiplier in monomials_of_degree(instance.count, gap):
            vectors.append(instance.times_monomial(multiplier).vector(monomials))
    return vectors


def _fold(exponent: int, p: int) -> int:
    return exponent if exponent < p else (exponent - 1) % (p - 1) + 1


def reduced_vectors(instance: CoefficientPolynomial, monomials: Sequence[Monomial],
                    p: int) -> List[Tuple[FieldElement, ...]]:
    """Coefficient vectors of M·f modulo x_i^p = x_i, for every reduced monomial M."""
    if instance.is_zero:
        return []
    positions = {m: i for i, m in enumerate(monomials)}
    zero = instance.descriptor.zero
    vectors = []
    for multiplier in monomials:
        row = [zero] * len(monomials)
        for monomial, coeff in instance.times_monomial(multiplier).terms:
            at = positions[tuple(_fold(e, p) for e in monomial)]
            row[at] = row[at] + coeff
        if any(row):
            vectors.append(tuple(row))
    return vectors


def field_equations(count: int, p: int, descriptor: FieldDescriptor) -> List[CoefficientPolynomial]:
    """x_i^p − x_i for every unknown."""
    equations = []
    for i in range(count):
        power = tuple(p if j == i else 0 for j in range(count))
        linear = tuple(1 if j == i else 0 for j in range(count))
        equations.append(CoefficientPolynomial.from_dict(descriptor, count, {power: descriptor.one,
                                                                             linear: -descriptor.one}))
    return equations


def _jet_units(unknowns: Sequence[str], descriptor: FieldDescriptor) -> List[CoefficientPolynomial]:
    """The derivative unknowns themselves; they vanish under the zero derivation of F_p."""
    count = len(unknowns)
    return [
        CoefficientPolynomial.from_dict(descriptor, count, {tuple(int(j == i) for j in range(count)): descriptor.one})
        for i, name in enumerate(unknowns) if jet_parts(jet(name))[1] > 0
    ]


def _value_at(basis_vector, monomials: Sequence[Monomial], values: Sequence[FieldElement],
              zero: FieldElement) -> FieldElement:
    total = zero
    for coeff, monomial in zip(basis_vector, monomials):
        if not coeff:
            continue
        piece = coeff
        for value, exponent in zip(values, monomial):
            if exponent:
                piece = piece * value ** exponent
        total = total + piece
    return total


class _ExactSolutions:
    """Solution sets of the instances over an enumerable oracle."""

    def __init__(self, formula: Formula, oracle: FpOracle, variables: Sequence[str]):
        self.formula = formula
        self.oracle = oracle
        self.points = list(oracle.enumerate_points(variables))
        self.current = list(range(len(self.points)))

    def intersect(self, parameters: Point):
        self.current = [
            i for i in self.current
            if self.oracle.eval(self.formula, parameters.extended(self.points[i].as_dict()))
        ]

    def digest(self) -> str:
        return _digest(",".join(self.points[i].to_json_dict().values()) for i in self.current)


def sampled_stream(oracle: ModelOracle, parameters: Sequence[str], seed: int = config.DEFAULT_SEED,
                   label: str = "chain") -> Iterator[Point]:
    sampler = PointSampler(oracle.descriptor, seed)
    for step in itertools.count():
        yield sampler.point(parameters, label, step)


def chain_run(formula: Formula, parameters: Sequence[str], stream: Iterable[Point], oracle: ModelOracle,
              degree_bound: Optional[int] = None, max_steps: int = config.CHAIN_MAX_STEPS,
              formula_id: str = "formula", seed: int = config.DEFAULT_SEED) -> ChainReport:
    """
    Follows the chain ⋂_{i≤k} φ(x, b_i) for k = 1..max_steps.

    Over an ``fp`` oracle with p^n ≤ QUOTIENT_LIMIT the span lives in
    F_p[x]/(x_i^p − x_i), where ideals are exactly the vanishing ideals of
    point sets, so the span index equals the exact index. Larger ``fp``
    chains are truncated at max(bound, p) and seeded with the field
    equations; any other oracle is truncated at the bound.

    Args:
        formula: The candidate equation φ(x; y).
        parameters: The names y; every other free variable is an unknown x.
        stream: Parameter points b_1, b_2, … in the oracle's field.
        oracle: The field the parameters live in; ``fp`` oracles also get exact solution sets.
        degree_bound: Truncation degree, by default twice the degree of φ in x.
            Unused in the quotient ring.
        max_steps: Number of parameter tuples consumed at most.

    Returns:
        A ``ChainReport``. A chain that does not settle within ``max_steps``,
        or whose span index differs from the exact index, is reported with a
        violation entry, never raised.
    """
    candidate = chain_candidate(formula, parameters)
    descriptor = oracle.descriptor
    count = len(candidate.unknowns)
    p = oracle.p if isinstance(oracle, FpOracle) else None
    seeds: List[CoefficientPolynomial] = []
    if p is not None and p ** count <= config.QUOTIENT_LIMIT:
        bound = count * (p - 1)
        monomials = reduced_monomials(count, p)
        vectors_of = partial(reduced_vectors, monomials=monomials, p=p)
        seeds = _jet_units(candidate.unknowns, descriptor)
    else:
        bound = 2 * candidate.degree if degree_bound is None else degree_bound
        if p is not None:
            bound = max(bound, p)
            seeds = field_equations(count, p, descriptor)
        monomials = truncated_monomials(count, bound)
        vectors_of = partial(instance_vectors, monomials=monomials, bound=bound)
    constant = monomials.index(tuple([0] * count))
    grid_sampler = PointSampler(descriptor, seed)
    grid = [[grid_sampler.element(f"grid:{name}", g) for name in candidate.unknowns] for g in range(GRID_SIZE)]
    exact = None
    if p is not None and p ** len(candidate.variables) <= config.ENUMERATION_LIMIT:
        exact = _ExactSolutions(formula, oracle, candidate.variables)

    seeded = [v for s in seeds for v in vectors_of(s)]
    basis: List[Tuple[FieldElement, ...]] = span_basis(seeded, descriptor, len(monomials)) if seeded else []
    on_grid = set(range(GRID_SIZE))
    steps: List[ChainStep] = []
    violations: List[str] = []
    index, exact_index = 0, (0 if exact is not None else None)
    previous_hash = exact.digest() if exact is not None else None
    full = False
    for step, point in enumerate(itertools.islice(stream, max_steps), start=1):
        instance = coefficient_polynomial(candidate.expr, candidate.unknowns, point_lookup(point), descriptor)
        grown = span_basis(basis + vectors_of(instance), descriptor, len(monomials))
        if len(grown) != len(basis):
            index = step
        basis = grown
        still = {g for g in range(GRID_SIZE)
                 if all(not _value_at(v, monomials, grid[g], descriptor.zero) for v in basis)}
        if not still <= on_grid:
            violations.append(f"step {step}: the span gained solutions on the sample grid")
        on_grid = still
        solutions, solution_hash = None, None
        if exact is not None:
            exact.intersect(point)
            solutions, solution_hash = len(exact.current), exact.digest()
            if solution_hash != previous_hash:
                exact_index = step
            previous_hash = solution_hash
        steps.append(ChainStep(step, point.restricted(candidate.parameters).to_json_dict(), len(basis),
                               _digest(",".join(str(c) for c in v) for v in basis), solutions, solution_hash))
        full = _has_unit(basis, constant)
        logger.debug("step %d: span dimension %d", step, len(basis))

    if exact_index is not None and exact_index != index:
        violations.append(f"span index {index} differs from exact index {exact_index}")
    stabilized = full or (len(steps) - index >= config.CHAIN_WINDOW)
    if not stabilized:
        trace = ", ".join(str(s.dimension) for s in steps)
        violations.append(f"no stabilization within {len(steps)} steps (dimensions {trace})")
    return ChainReport(formula_id, candidate.kind, oracle.spec(), bound, tuple(steps), index,
                       exact_index, stabilized, tuple(violations))


def _has_unit(basis: Sequence[Tuple[FieldElement, ...]], constant: int) -> bool:
    """True iff the constant polynomial 1 lies in the span (RREF rows)."""
    return any(v[constant] and not any(c for i, c in enumerate(v) if i != constant) for v in basis)
