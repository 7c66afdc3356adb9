from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.formulas.ast import (
    And, Dep, Eq0, Formula, Language, Node, Not, Or, Truth, conjuncts, iter_node_subterms, BASIC_TERMS,
)
from src.formulas.shapes import (
    LinearTame, is_s_formula, recognize_delta_tame, recognize_lambda_tame, recognize_tame,
)
from src.utils.errors import ShapeError

POLYNOMIAL_SYSTEM = "polynomial-system"
LAMBDA_TAME = "lambda-tame"
DELTA_TAME = "delta-tame"
S_FORMULA = "s-formula"
TAME = "tame"
LINEAR_TAME = "linear-tame"
SIMPLE_LINEAR = "simple-linear"
LAMBDA_P = "lambdaP"
TERM_EQUATION = "term-equation"
BOOLEAN_COMBINATION = "boolean-combination"
UNCLASSIFIED = "atom"


@dataclass(frozen=True)
class ClassifiedShape:
    kind: str
    degree: Optional[int] = None
    quantifiers: Optional[int] = None
    leaves: Tuple["ClassifiedShape", ...] = field(default=())

    def to_dict(self) -> dict:
        data = {"shape": self.kind}
        if self.degree is not None:
            data["degree"] = self.degree
        if self.quantifiers is not None:
            data["quantifiers"] = self.quantifiers
        if self.kind == BOOLEAN_COMBINATION:
            data["leaves"] = [leaf.to_dict() for leaf in self.leaves]
        return data


def _is_polynomial_system(node: Node) -> bool:
    for item in conjuncts(node):
        if isinstance(item, Truth):
            continue
        if not isinstance(item, Eq0):
            return False
        if any(not isinstance(sub, BASIC_TERMS) for sub in iter_node_subterms(item)):
            return False
    return True


def _is_term_equation(node: Node) -> bool:
    return isinstance(node, Eq0)


def _classify_scf(node: Node) -> Optional[ClassifiedShape]:
    shape = recognize_lambda_tame(node)
    if shape is not None:
        return ClassifiedShape(LAMBDA_TAME, degree=shape.degree)
    if _is_term_equation(node):
        return ClassifiedShape(TERM_EQUATION)
    return None


def _classify_dcf(node: Node) -> Optional[ClassifiedShape]:
    shape = recognize_delta_tame(node)
    if shape is not None:
        return ClassifiedShape(DELTA_TAME, quantifiers=shape.quantifiers)
    if is_s_formula(node):
        return ClassifiedShape(S_FORMULA)
    if _is_term_equation(node):
        return ClassifiedShape(TERM_EQUATION)
    return None


def _classify_pair(node: Node) -> Optional[ClassifiedShape]:
    tame = recognize_tame(node)
    if tame is not None:
        if tame.is_linear:
            kind = SIMPLE_LINEAR if LinearTame.from_tame(tame).is_simple else LINEAR_TAME
            return ClassifiedShape(kind, degree=1)
        return ClassifiedShape(TAME, degree=tame.degree)
    if isinstance(node, Dep):
        return ClassifiedShape(SIMPLE_LINEAR, degree=1)
    if _is_polynomial_system(node):
        return ClassifiedShape(POLYNOMIAL_SYSTEM, degree=0)
    shape = recognize_lambda_tame(node, Language.PAIR)
    if shape is not None:
        return ClassifiedShape(LAMBDA_P, degree=shape.degree)
    if _is_term_equation(node):
        return ClassifiedShape(TERM_EQUATION)
    return None


_CLASSIFIERS = {
    Language.SCF: _classify_scf,
    Language.DCF: _classify_dcf,
    Language.PAIR: _classify_pair,
}


def _classify_node(node: Node, language: Language) -> ClassifiedShape:
    shape = _CLASSIFIERS[language](node)
    if shape is not None:
        return shape
    if isinstance(node, (And, Or, Not)):
        children = node.items if isinstance(node, (And, Or)) else (node.item,)
        return ClassifiedShape(BOOLEAN_COMBINATION, leaves=_leaves(children, language))
    return ClassifiedShape(UNCLASSIFIED)


def _leaves(children, language: Language) -> Tuple[ClassifiedShape, ...]:
    leaves = []
    for child in children:
        shape = _classify_node(child, language)
        if shape.kind == BOOLEAN_COMBINATION:
            leaves.extend(shape.leaves)
        else:
            leaves.append(shape)
    return tuple(leaves)


def classify(formula: Formula) -> ClassifiedShape:
    """
    Deterministic shape of a formula.

    SCF: lambda-tame(degree), term-equation, boolean-combination.
    DCF: delta-tame(quantifiers), s-formula, term-equation, boolean-combination.
    Pair: tame(degree), linear-tame, simple-linear, polynomial-system,
    lambdaP(degree), term-equation, boolean-combination.
    A boolean combination lists the shapes of its maximal classified pieces.
    """
    return _classify_node(formula.root, formula.language)


def lambda_degree(formula: Formula) -> int:
    shape = classify(formula)
    if shape.kind not in (LAMBDA_TAME, LAMBDA_P, POLYNOMIAL_SYSTEM):
        raise ShapeError(f"{shape.kind} formulas have no λ-tame degree")
    return shape.degree
