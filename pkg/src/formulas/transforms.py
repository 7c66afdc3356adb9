"""Substitution and Boolean restructuring of formulas."""
import logging
from typing import Dict, List, Mapping

from src.formulas.ast import (
    And, Formula, Language, Node, Not, Or, Term, Truth, conjunction, disjunction, iter_subterms, substitute_node,
    BASIC_TERMS,
)
from src.formulas.shapes import recognize_delta_tame, recognize_lambda_tame, recognize_tame
from src.utils.errors import ShapeError

logger = logging.getLogger(__name__)


def _substitution_allowed(formula: Formula) -> bool:
    root = formula.root
    if formula.language == Language.SCF:
        return recognize_lambda_tame(root) is not None
    if formula.language == Language.DCF:
        return recognize_delta_tame(root) is not None
    return recognize_tame(root) is not None or recognize_lambda_tame(root, Language.PAIR) is not None


def substitute(formula: Formula, assignment: Mapping[str, Term]) -> Formula:
    """
    Replaces free variables by polynomial terms.

    Args:
        formula: A λ-tame (SCF), δ-tame (DCF), or tame / λ_P (pair) formula.
        assignment: Variable name to polynomial term.

    Returns:
        The substituted formula, of the same shape and degree.
    """
    if not _substitution_allowed(formula):
        raise ShapeError(f"substitution needs a tame {formula.language.value} formula")
    for name, term in assignment.items():
        if any(not isinstance(sub, BASIC_TERMS) for sub in iter_subterms(term)):
            raise ShapeError(f"the value for '{name}' is not a polynomial term")
    relevant: Dict[str, Term] = {k: v for k, v in assignment.items() if k in formula.free_variables}
    logger.debug("substituting %s", sorted(relevant))
    return formula.with_root(substitute_node(formula.root, relevant))


def _negate(node: Node) -> Node:
    if isinstance(node, Truth):
        return Truth(not node.value)
    if isinstance(node, Not):
        return _normal(node.item)
    if isinstance(node, And):
        return _flatten(Or, [_negate(item) for item in node.items])
    if isinstance(node, Or):
        return _flatten(And, [_negate(item) for item in node.items])
    return Not(node)


def _flatten(cls, items: List[Node]) -> Node:
    flat: List[Node] = []
    for item in items:
        flat.extend(item.items if isinstance(item, cls) else (item,))
    return conjunction(flat) if cls is And else disjunction(flat)


def _normal(node: Node) -> Node:
    if isinstance(node, Not):
        return _negate(node.item)
    if isinstance(node, (And, Or)):
        return _flatten(type(node), [_normal(item) for item in node.items])
    return node


def boolean_normal_node(node: Node) -> Node:
    """Negation normal form with flattened ∧/∨; atoms and quantifier blocks are kept as they are."""
    return _normal(node)


def boolean_normal(formula: Formula) -> Formula:
    return formula.with_root(boolean_normal_node(formula.root))
