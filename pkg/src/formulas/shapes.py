"""
Structured views of the formula classes the passes work on.

* ``LambdaShape``: λ-tame formulas (and, with the pair family, λ_P-formulas):
  polynomial equations, conjunctions, and guarded blocks

      pdep_n(q1..qn) ∨ (¬pdep_n(q1..qn) ∧ pdep_{n+1}(q0..qn) ∧ ψ[z_i := λ_n^i(q0..qn)])

* ``DeltaTame``: ∃z1 (z1^p ≐ q1 ∧ ∃z2 (... ∧ Σ)) over a differential system Σ.
* ``TameFormula`` / ``LinearTame``: ∃ζ ∈ P^r (ζ ≠ 0 ∧ system homogeneous in ζ).

Each view can be rendered back to AST nodes and recognized from them.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from src.algebra.polynomials import block_terms, degree_in, is_homogeneous_in, polynomial, to_term
from src.formulas.ast import (
    BASIC_TERMS, And, Const, Dep, Der, Eq0, ExistsP, ExistsPth, Lam, LamN, LamP, Language, Mul, NameSupply, Sroot,
    Node, Nonzero, Not, Or, PDep, PDepN, Term, Truth, Var, Add, all_variables, conjunction, conjuncts,
    iter_subterms, map_node_terms, replace_subterms, substitute_node,
)
from src.utils.errors import ShapeError

Vector = Tuple[Term, ...]


# --- Guards ---

def _dependence_atom(family: Language, width: int, vectors: Sequence[Vector]) -> Node:
    flat = tuple(t for v in vectors for t in v)
    if family == Language.PAIR:
        return Dep(len(vectors), flat)
    if width == 1:
        return PDep(len(vectors), flat)
    return PDepN(width, len(vectors), flat)


def _lambda_term(family: Language, width: int, vectors: Sequence[Vector], i: int) -> Term:
    flat = tuple(t for v in vectors for t in v)
    n = len(vectors) - 1
    if family == Language.PAIR:
        return LamP(n, i, flat)
    if width == 1:
        return Lam(n, i, flat)
    return LamN(width, n, i, flat)


def ldef(q0: Vector, qs: Sequence[Vector], family: Language = Language.SCF) -> Node:
    """¬pdep_n(q1..qn) ∧ pdep_{n+1}(q0..qn): the λ-values at (q0..qn) are defined."""
    width = len(q0)
    return And((Not(_dependence_atom(family, width, qs)), _dependence_atom(family, width, (q0,) + tuple(qs))))


def encode_pdep(n: int, terms: Sequence[Term], family: Language = Language.SCF) -> Node:
    """pdep_n(q) ∨ (ldef(0, q) ∧ 1 ≐ 0), the λ-tame spelling of a bare pdep_n (dep_n for pairs)."""
    if len(terms) != n:
        raise ShapeError(f"encode_pdep {n} needs {n} terms, got {len(terms)}")
    block = LambdaBlock(family, 1, (Const(0),), tuple((t,) for t in terms),
                        (), PolyEquation(Const(1)))
    return block.render()


# --- λ-tame formulas ---

@dataclass(frozen=True)
class PolyEquation:
    term: Term

    @property
    def degree(self) -> int:
        return 0

    def render(self) -> Node:
        return Eq0(self.term)


@dataclass(frozen=True)
class TameConjunction:
    items: Tuple["LambdaShape", ...]

    @property
    def degree(self) -> int:
        return max((item.degree for item in self.items), default=0)

    def render(self) -> Node:
        parts: List[Node] = []
        for item in self.items:
            parts.extend(conjuncts(item.render()) if isinstance(item, TameConjunction) else (item.render(),))
        return conjunction(parts)


@dataclass(frozen=True)
class LambdaBlock:
    """
    A guarded block. ``q0`` and every entry of ``qs`` are vectors of length
    ``width``; ``names`` are the variables of ``body`` standing for the
    λ-values. A ``bare`` block is a plain pdep_n(q1..qn) atom.
    """
    family: Language
    width: int
    q0: Vector
    qs: Tuple[Vector, ...]
    names: Tuple[str, ...]
    body: "LambdaShape"
    bare: bool = False

    @property
    def n(self) -> int:
        return len(self.qs)

    @property
    def degree(self) -> int:
        return 1 if self.bare else 1 + self.body.degree

    def lambda_terms(self) -> Tuple[Term, ...]:
        vectors = (self.q0,) + self.qs
        return tuple(_lambda_term(self.family, self.width, vectors, i) for i in range(1, self.n + 1))

    def render(self) -> Node:
        dependent = _dependence_atom(self.family, self.width, self.qs)
        if self.bare:
            return dependent
        values = dict(zip(self.names, self.lambda_terms()))
        body = substitute_node(self.body.render(), values)
        defined = _dependence_atom(self.family, self.width, (self.q0,) + self.qs)
        return Or((dependent, And((Not(dependent), defined) + conjuncts(body))))


LambdaShape = Union[PolyEquation, TameConjunction, LambdaBlock]


def _is_basic(term: Term) -> bool:
    return all(isinstance(sub, BASIC_TERMS) for sub in iter_subterms(term))


def _block_atom(node: Node, family: Language):
    if family == Language.PAIR:
        if isinstance(node, Dep):
            return 1, tuple((t,) for t in node.args)
        return None
    if isinstance(node, PDep):
        return 1, tuple((t,) for t in node.args)
    if isinstance(node, PDepN):
        return node.width, node.vectors()
    return None


def _recognize(node: Node, family: Language, supply: NameSupply) -> Optional["LambdaShape"]:
    if isinstance(node, Eq0):
        return PolyEquation(node.term) if _is_basic(node.term) else None
    if isinstance(node, Truth):
        return TameConjunction(()) if node.value else PolyEquation(Const(1))
    if isinstance(node, And):
        items = [_recognize(item, family, supply) for item in node.items]
        return None if any(i is None for i in items) else TameConjunction(tuple(items))
    atom = _block_atom(node, family)
    if atom is not None:
        width, qs = atom
        if not all(_is_basic(t) for v in qs for t in v):
            return None
        return LambdaBlock(family, width, (Const(0),) * width, qs, (), TameConjunction(()), bare=True)
    if isinstance(node, Or) and len(node.items) == 2:
        return _recognize_block(node, family, supply)
    return None


def _recognize_block(node: Or, family: Language, supply: NameSupply) -> Optional[LambdaBlock]:
    first, second = node.items
    atom = _block_atom(first, family)
    if atom is None or not isinstance(second, And) or len(second.items) < 2:
        return None
    width, qs = atom
    if second.items[0] != Not(first):
        return None
    defined = _block_atom(second.items[1], family)
    if defined is None or defined[0] != width or len(defined[1]) != len(qs) + 1 or defined[1][1:] != qs:
        return None
    q0 = defined[1][0]
    if not all(_is_basic(t) for v in (q0,) + qs for t in v):
        return None
    names = supply.fresh_many(len(qs))
    template = LambdaBlock(family, width, q0, qs, names, TameConjunction(()))
    mapping = {term: Var(name) for term, name in zip(template.lambda_terms(), names)}
    rest = tuple(_replace_in_node(item, mapping) for item in second.items[2:])
    body = _recognize(conjunction(rest), family, supply)
    if body is None:
        return None
    return LambdaBlock(family, width, q0, qs, names, body)


def _replace_in_node(node: Node, mapping) -> Node:
    return map_node_terms(node, lambda term: replace_subterms(term, mapping))


def recognize_lambda_tame(node: Node, family: Language = Language.SCF,
                          supply: Optional[NameSupply] = None) -> Optional[LambdaShape]:
    """The λ-tame (λ_P for the pair family) structure of ``node``, or None."""
    supply = supply or NameSupply(all_variables(node))
    return _recognize(node, family, supply)


def require_lambda_tame(node: Node, family: Language = Language.SCF,
                        supply: Optional[NameSupply] = None) -> LambdaShape:
    shape = recognize_lambda_tame(node, family, supply)
    if shape is None:
        kind = "λ_P-formula" if family == Language.PAIR else "λ-tame formula"
        raise ShapeError(f"not a {kind}")
    return shape


# --- δ-tame formulas ---

def _is_differential(term: Term) -> bool:
    return all(isinstance(sub, BASIC_TERMS + (Der,)) for sub in iter_subterms(term))


@dataclass(frozen=True)
class DeltaTame:
    blocks: Tuple[Tuple[str, Term], ...]
    system: Tuple[Term, ...]

    @property
    def quantifiers(self) -> int:
        return len(self.blocks)

    def render(self) -> Node:
        node = conjunction(Eq0(t) for t in self.system)
        for name, term in reversed(self.blocks):
            node = ExistsPth(name, term, node)
        return node

    def bound_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.blocks)


def recognize_delta_tame(node: Node) -> Optional[DeltaTame]:
    blocks = []
    while isinstance(node, ExistsPth):
        if not _is_differential(node.term):
            return None
        blocks.append((node.variable, node.term))
        node = node.body
    system = []
    for item in conjuncts(node):
        if isinstance(item, Truth):
            if not item.value:
                system.append(Const(1))
            continue
        if not isinstance(item, Eq0) or not _is_differential(item.term):
            return None
        system.append(item.term)
    return DeltaTame(tuple(blocks), tuple(system))


def require_delta_tame(node: Node) -> DeltaTame:
    shape = recognize_delta_tame(node)
    if shape is None:
        raise ShapeError("not a δ-tame formula")
    return shape


# --- Tame formulas of pairs ---

@dataclass(frozen=True)
class TameFormula:
    variables: Tuple[str, ...]
    equations: Tuple[Term, ...]

    def __post_init__(self):
        if not self.variables:
            raise ShapeError("a tame formula binds at least one variable")
        for term in self.equations:
            if not _is_basic(term):
                raise ShapeError("tame systems are polynomial")
            if not is_homogeneous_in(polynomial(term), self.variables):
                raise ShapeError("tame equations must be homogeneous in the bound variables")

    @property
    def degree(self) -> int:
        """The largest ζ-degree among the equations (1 for an empty system)."""
        return max([degree_in(polynomial(t), self.variables) for t in self.equations] + [1])

    @property
    def is_linear(self) -> bool:
        return all(degree_in(polynomial(t), self.variables) in (-1, 1) for t in self.equations)

    def render(self) -> Node:
        nonzero = Nonzero(tuple(Var(v) for v in self.variables))
        return ExistsP(self.variables, conjunction((nonzero,) + tuple(Eq0(t) for t in self.equations)))

    def polynomials(self) -> list:
        return [polynomial(t) for t in self.equations]


def recognize_tame(node: Node) -> Optional[TameFormula]:
    if not isinstance(node, ExistsP):
        return None
    items = conjuncts(node.body)
    if not items or items[0] != Nonzero(tuple(Var(v) for v in node.variables)):
        return None
    equations = []
    for item in items[1:]:
        if not isinstance(item, Eq0) or not _is_basic(item.term):
            return None
        equations.append(item.term)
    try:
        return TameFormula(node.variables, tuple(equations))
    except ShapeError:
        return None


def require_tame(node: Node) -> TameFormula:
    shape = recognize_tame(node)
    if shape is None:
        raise ShapeError("not a tame formula")
    return shape


@dataclass(frozen=True)
class LinearTame:
    """∃ξ ∈ P^s (ξ ≠ 0 ∧ ⋀_j Σ_i ξ_i·m[i][j] ≐ 0); ``matrix`` rows follow ``variables``."""
    variables: Tuple[str, ...]
    matrix: Tuple[Tuple[Term, ...], ...]

    @property
    def columns(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def is_simple(self) -> bool:
        return self.columns == 1

    def column_terms(self) -> List[Term]:
        terms = []
        for j in range(self.columns):
            total = None
            for name, row in zip(self.variables, self.matrix):
                piece = Mul(Var(name), row[j])
                total = piece if total is None else Add(total, piece)
            terms.append(to_term(polynomial(total)))
        return terms

    def to_tame(self) -> TameFormula:
        return TameFormula(self.variables, tuple(self.column_terms()))

    def render(self) -> Node:
        return self.to_tame().render()

    @classmethod
    def from_tame(cls, tame: TameFormula) -> "LinearTame":
        if not tame.is_linear:
            raise ShapeError("the tame formula is not linear in its bound variables")
        rows = [[Const(0)] * len(tame.equations) for _ in tame.variables]
        for j, expr in enumerate(tame.polynomials()):
            for monom, coeff in block_terms(expr, tame.variables):
                i = monom.index(1)
                rows[i][j] = to_term(coeff)
        return cls(tame.variables, tuple(tuple(r) for r in rows))


# --- S-formulas ---

def s_formula_violations(node: Node) -> List[Term]:
    """The arguments r of s-terms that lack a δ(r) ≐ 0 conjunct."""
    items = conjuncts(node)
    equations = set()
    for item in items:
        if not isinstance(item, Eq0):
            raise ShapeError("an S-formula is a conjunction of equations")
        equations.add(item.term)
    missing = []
    for item in items:
        for sub in iter_subterms(item.term):
            if isinstance(sub, Sroot) and Der(sub.arg) not in equations and sub.arg not in missing:
                missing.append(sub.arg)
    return missing


def is_s_formula(node: Node) -> bool:
    try:
        return not s_formula_violations(node)
    except ShapeError:
        return False
