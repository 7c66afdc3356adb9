"""
One AST for the three formula languages.

Terms and formula nodes are frozen dataclasses; a ``Formula`` wraps a root
node together with its language tag and characteristic and rejects nodes
that are illegal for the tag when it is built.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Tuple, Union

from src.utils.errors import ArityError, LanguageTagError, ShapeError


class Language(str, Enum):
    SCF = "scf"
    DCF = "dcf"
    PAIR = "pair"


# --- Terms ---

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Neg:
    arg: "Term"


@dataclass(frozen=True)
class Pow:
    base: "Term"
    exponent: int


@dataclass(frozen=True)
class Lam:
    """λ_n^i(a_0..a_n) of the separably closed language."""
    n: int
    i: int
    args: Tuple["Term", ...]


@dataclass(frozen=True)
class LamN:
    """Generalized λ_{N,n}^i over vectors a_0..a_n of length N, flattened."""
    width: int
    n: int
    i: int
    args: Tuple["Term", ...]

    def vectors(self) -> Tuple[Tuple["Term", ...], ...]:
        return chunk(self.args, self.width)


@dataclass(frozen=True)
class Der:
    arg: "Term"


@dataclass(frozen=True)
class Sroot:
    arg: "Term"


@dataclass(frozen=True)
class LamP:
    """λ_n^i of the pair language; values lie in the small field."""
    n: int
    i: int
    args: Tuple["Term", ...]


Term = Union[Var, Const, Add, Sub, Mul, Neg, Pow, Lam, LamN, Der, Sroot, LamP]
BASIC_TERMS = (Var, Const, Add, Sub, Mul, Neg, Pow)


# --- Formulas ---

@dataclass(frozen=True)
class Eq0:
    term: Term


@dataclass(frozen=True)
class PDep:
    n: int
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class PDepN:
    width: int
    n: int
    args: Tuple[Term, ...]

    def vectors(self) -> Tuple[Tuple[Term, ...], ...]:
        return chunk(self.args, self.width)


@dataclass(frozen=True)
class Dep:
    n: int
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class InP:
    term: Term


@dataclass(frozen=True)
class Nonzero:
    """Not all of the terms vanish."""
    terms: Tuple[Term, ...]


@dataclass(frozen=True)
class Truth:
    value: bool


@dataclass(frozen=True)
class And:
    items: Tuple["Node", ...]


@dataclass(frozen=True)
class Or:
    items: Tuple["Node", ...]


@dataclass(frozen=True)
class Not:
    item: "Node"


@dataclass(frozen=True)
class ExistsP:
    """∃ζ ∈ P^r. body, with the body a tame system."""
    variables: Tuple[str, ...]
    body: "Node"


@dataclass(frozen=True)
class ExistsPth:
    """∃z. z^p ≐ term ∧ body."""
    variable: str
    term: Term
    body: "Node"


Node = Union[Eq0, PDep, PDepN, Dep, InP, Nonzero, Truth, And, Or, Not, ExistsP, ExistsPth]
TRUE = Truth(True)
FALSE = Truth(False)
ATOMS = (Eq0, PDep, PDepN, Dep, InP, Nonzero, Truth)


def chunk(items, width: int):
    return tuple(tuple(items[k:k + width]) for k in range(0, len(items), width))


# --- Traversal ---

def term_children(term: Term) -> Tuple[Term, ...]:
    if isinstance(term, (Add, Sub, Mul)):
        return (term.left, term.right)
    if isinstance(term, (Neg, Der, Sroot)):
        return (term.arg,)
    if isinstance(term, Pow):
        return (term.base,)
    if isinstance(term, (Lam, LamN, LamP)):
        return term.args
    return ()


def iter_subterms(term: Term) -> Iterator[Term]:
    """Pre-order, left to right."""
    yield term
    for child in term_children(term):
        yield from iter_subterms(child)


def node_terms(node: Node) -> Tuple[Term, ...]:
    if isinstance(node, (Eq0, InP)):
        return (node.term,)
    if isinstance(node, (PDep, PDepN, Dep)):
        return node.args
    if isinstance(node, Nonzero):
        return node.terms
    if isinstance(node, ExistsPth):
        return (node.term,)
    return ()


def node_children(node: Node) -> Tuple[Node, ...]:
    if isinstance(node, (And, Or)):
        return node.items
    if isinstance(node, Not):
        return (node.item,)
    if isinstance(node, (ExistsP, ExistsPth)):
        return (node.body,)
    return ()


def iter_nodes(node: Node) -> Iterator[Node]:
    yield node
    for child in node_children(node):
        yield from iter_nodes(child)


def iter_node_subterms(node: Node) -> Iterator[Term]:
    for sub in iter_nodes(node):
        for term in node_terms(sub):
            yield from iter_subterms(term)


def term_variables(term: Term) -> set:
    return {t.name for t in iter_subterms(term) if isinstance(t, Var)}


def bound_variables(node: Node) -> list:
    names = []
    for sub in iter_nodes(node):
        if isinstance(sub, ExistsP):
            names.extend(sub.variables)
        elif isinstance(sub, ExistsPth):
            names.append(sub.variable)
    return names


def free_variables(node: Node) -> set:
    if isinstance(node, ExistsP):
        return free_variables(node.body) - set(node.variables)
    if isinstance(node, ExistsPth):
        return term_variables(node.term) | (free_variables(node.body) - {node.variable})
    names = set()
    for term in node_terms(node):
        names |= term_variables(term)
    for child in node_children(node):
        names |= free_variables(child)
    return names


def all_variables(node: Node) -> set:
    names = set(bound_variables(node))
    for term in iter_node_subterms(node):
        if isinstance(term, Var):
            names.add(term.name)
    return names


def conjunction(items) -> Node:
    items = tuple(items)
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(items)


def disjunction(items) -> Node:
    items = tuple(items)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(items)


def conjuncts(node: Node) -> Tuple[Node, ...]:
    if isinstance(node, And):
        return node.items
    if node == TRUE:
        return ()
    return (node,)


# --- Language legality ---

_LANGUAGE_TERMS = {
    Language.SCF: BASIC_TERMS + (Lam, LamN),
    Language.DCF: BASIC_TERMS + (Der, Sroot),
    Language.PAIR: BASIC_TERMS + (LamP,),
}

_CONNECTIVES = (Truth, Nonzero, Eq0, And, Or, Not)
_LANGUAGE_NODES = {
    Language.SCF: _CONNECTIVES + (PDep, PDepN),
    Language.DCF: _CONNECTIVES + (ExistsPth,),
    Language.PAIR: _CONNECTIVES + (Dep, InP, ExistsP),
}


def _check_term(term: Term, language: Language):
    for sub in iter_subterms(term):
        if not isinstance(sub, _LANGUAGE_TERMS[language]):
            raise LanguageTagError(f"{type(sub).__name__} terms are not part of the {language.value} language")
        if isinstance(sub, Pow) and sub.exponent < 0:
            raise ArityError("exponents must be natural numbers")
        if isinstance(sub, (Lam, LamP)):
            if sub.n < 1 or not 1 <= sub.i <= sub.n or len(sub.args) != sub.n + 1:
                raise ArityError(f"λ_{sub.n}^{sub.i} takes {sub.n + 1} arguments, got {len(sub.args)}")
        if isinstance(sub, LamN):
            if sub.width < 1 or sub.n < 1 or not 1 <= sub.i <= sub.n \
                    or len(sub.args) != sub.width * (sub.n + 1):
                raise ArityError(
                    f"λ_({sub.width},{sub.n})^{sub.i} takes {sub.width * (sub.n + 1)} arguments, got {len(sub.args)}"
                )


def _check_node(node: Node, language: Language):
    if not isinstance(node, _LANGUAGE_NODES[language]):
        raise LanguageTagError(f"{type(node).__name__} is not part of the {language.value} language")
    if isinstance(node, (PDep, Dep)) and (node.n < 1 or len(node.args) != node.n):
        raise ArityError(f"{type(node).__name__.lower()} {node.n} takes {node.n} terms, got {len(node.args)}")
    if isinstance(node, PDepN) and (node.width < 1 or node.n < 1 or len(node.args) != node.width * node.n):
        raise ArityError(f"pdepN {node.width} {node.n} takes {node.width * node.n} terms, got {len(node.args)}")
    if isinstance(node, Nonzero) and not node.terms:
        raise ArityError("nonzero needs at least one term")
    if isinstance(node, (And, Or)) and not node.items:
        raise ArityError(f"{type(node).__name__.lower()} needs at least one operand")
    if isinstance(node, ExistsP):
        _check_tame_body(node)
    if isinstance(node, ExistsPth):
        _check_pth_block(node)
    for term in node_terms(node):
        _check_term(term, language)
    for child in node_children(node):
        _check_node(child, language)


def _check_tame_body(node: ExistsP):
    if not node.variables:
        raise ArityError("existsP binds at least one variable")
    items = conjuncts(node.body)
    head = items[0] if items else None
    expected = Nonzero(tuple(Var(v) for v in node.variables))
    if head != expected:
        raise ShapeError("an existsP body starts with (nonzero ζ...) over exactly its bound variables")
    for item in items[1:]:
        if not isinstance(item, Eq0) or any(not isinstance(t, BASIC_TERMS) for t in iter_subterms(item.term)):
            raise ShapeError("an existsP body is a conjunction of polynomial equations")


def _check_pth_block(node: ExistsPth):
    body = node.body
    while isinstance(body, ExistsPth):
        body = body.body
    for item in conjuncts(body):
        if not isinstance(item, (Eq0, Truth)):
            raise ShapeError("existsPth blocks end in a system of equations")
    for term in iter_node_subterms(node):
        if isinstance(term, Sroot):
            raise ShapeError("δ-tame blocks do not use s")


def _check_hygiene(root: Node):
    bound = bound_variables(root)
    if len(set(bound)) != len(bound):
        raise ShapeError("bound variable names must be unique")
    clash = set(bound) & free_variables(root)
    if clash:
        raise ShapeError(f"bound variables also occur free: {', '.join(sorted(clash))}")


@dataclass(frozen=True)
class Formula:
    language: Language
    characteristic: int
    root: Node

    def __post_init__(self):
        object.__setattr__(self, "language", Language(self.language))
        if self.language == Language.PAIR and self.characteristic != 0:
            raise LanguageTagError("pair formulas live in characteristic 0")
        if self.language != Language.PAIR and self.characteristic < 2:
            raise LanguageTagError(f"{self.language.value} formulas need a prime characteristic")
        _check_node(self.root, self.language)
        _check_hygiene(self.root)

    def with_root(self, root: Node) -> "Formula":
        return Formula(self.language, self.characteristic, root)

    @property
    def free_variables(self) -> set:
        return free_variables(self.root)

    def sorted_free_variables(self) -> Tuple[str, ...]:
        return tuple(sorted(self.free_variables))


# --- Rebuilding and substitution ---

def rebuild_term(term: Term, children) -> Term:
    children = tuple(children)
    if isinstance(term, (Add, Sub, Mul)):
        return type(term)(children[0], children[1])
    if isinstance(term, (Neg, Der, Sroot)):
        return type(term)(children[0])
    if isinstance(term, Pow):
        return Pow(children[0], term.exponent)
    if isinstance(term, (Lam, LamP)):
        return type(term)(term.n, term.i, children)
    if isinstance(term, LamN):
        return LamN(term.width, term.n, term.i, children)
    return term


def replace_subterms(term: Term, mapping) -> Term:
    """Replaces whole subterms found in ``mapping``, outermost first."""
    if term in mapping:
        return mapping[term]
    children = term_children(term)
    if not children:
        return term
    return rebuild_term(term, (replace_subterms(c, mapping) for c in children))


def substitute_term(term: Term, assignment) -> Term:
    if isinstance(term, Var):
        return assignment.get(term.name, term)
    children = term_children(term)
    if not children:
        return term
    return rebuild_term(term, (substitute_term(c, assignment) for c in children))


def rebuild_node(node: Node, terms, children) -> Node:
    terms, children = tuple(terms), tuple(children)
    if isinstance(node, Eq0):
        return Eq0(terms[0])
    if isinstance(node, InP):
        return InP(terms[0])
    if isinstance(node, (PDep, Dep)):
        return type(node)(node.n, terms)
    if isinstance(node, PDepN):
        return PDepN(node.width, node.n, terms)
    if isinstance(node, Nonzero):
        return Nonzero(terms)
    if isinstance(node, (And, Or)):
        return type(node)(children)
    if isinstance(node, Not):
        return Not(children[0])
    if isinstance(node, ExistsP):
        return ExistsP(node.variables, children[0])
    if isinstance(node, ExistsPth):
        return ExistsPth(node.variable, terms[0], children[0])
    return node


def map_node_terms(node: Node, fn) -> Node:
    """Applies ``fn`` to every term directly held by a node, ignoring binders."""
    return rebuild_node(
        node,
        (fn(t) for t in node_terms(node)),
        (map_node_terms(c, fn) for c in node_children(node)),
    )


def substitute_node(node: Node, assignment) -> Node:
    """Replaces free occurrences of variables by terms; raises ShapeError on capture."""
    if not assignment:
        return node
    if isinstance(node, (ExistsP, ExistsPth)):
        bound = node.variables if isinstance(node, ExistsP) else (node.variable,)
        inner = {k: v for k, v in assignment.items() if k not in bound}
        for value in inner.values():
            captured = term_variables(value) & set(bound)
            if captured:
                raise ShapeError(f"substitution would capture {', '.join(sorted(captured))}")
        if isinstance(node, ExistsP):
            return ExistsP(node.variables, substitute_node(node.body, inner))
        return ExistsPth(node.variable, substitute_term(node.term, assignment), substitute_node(node.body, inner))
    return rebuild_node(
        node,
        (substitute_term(t, assignment) for t in node_terms(node)),
        (substitute_node(c, assignment) for c in node_children(node)),
    )


class NameSupply:
    """Hands out variable names not used so far: z, z1, z2, ..."""

    def __init__(self, taken=()):
        self.taken = set(taken)

    def reserve(self, names):
        self.taken |= set(names)

    def fresh(self, base: str = "z") -> str:
        if base not in self.taken:
            self.taken.add(base)
            return base
        k = 1
        while f"{base}{k}" in self.taken:
            k += 1
        name = f"{base}{k}"
        self.taken.add(name)
        return name

    def fresh_many(self, count: int, base: str = "z") -> Tuple[str, ...]:
        return tuple(self.fresh(base) for _ in range(count))
