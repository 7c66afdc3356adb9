"""Canonical text of formulas: the header line and one s-expression line."""
from src.formulas.ast import (
    Add, And, Const, Dep, Der, Eq0, ExistsP, ExistsPth, Formula, InP, Lam, LamN, LamP, Mul, Neg,
    Nonzero, Not, Or, PDep, PDepN, Pow, Sroot, Sub, Truth, Var,
)


def _join(head: str, *parts) -> str:
    return "(" + " ".join((head,) + tuple(str(p) for p in parts)) + ")"


def print_term(term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Const):
        return str(term.value)
    if isinstance(term, Add):
        return _join("+", print_term(term.left), print_term(term.right))
    if isinstance(term, Sub):
        return _join("-", print_term(term.left), print_term(term.right))
    if isinstance(term, Mul):
        return _join("*", print_term(term.left), print_term(term.right))
    if isinstance(term, Neg):
        return _join("-", print_term(term.arg))
    if isinstance(term, Pow):
        return _join("^", print_term(term.base), term.exponent)
    if isinstance(term, Lam):
        return _join("lam", term.n, term.i, *map(print_term, term.args))
    if isinstance(term, LamN):
        return _join("lamN", term.width, term.n, term.i, *map(print_term, term.args))
    if isinstance(term, LamP):
        return _join("lamP", term.n, term.i, *map(print_term, term.args))
    if isinstance(term, Der):
        return _join("d", print_term(term.arg))
    if isinstance(term, Sroot):
        return _join("s", print_term(term.arg))
    raise TypeError(f"not a term: {term!r}")


def print_node(node) -> str:
    if isinstance(node, Truth):
        return "true" if node.value else "false"
    if isinstance(node, Eq0):
        return _join("eq0", print_term(node.term))
    if isinstance(node, PDep):
        return _join("pdep", node.n, *map(print_term, node.args))
    if isinstance(node, PDepN):
        return _join("pdepN", node.width, node.n, *map(print_term, node.args))
    if isinstance(node, Dep):
        return _join("dep", node.n, *map(print_term, node.args))
    if isinstance(node, InP):
        return _join("P", print_term(node.term))
    if isinstance(node, Nonzero):
        return _join("nonzero", *map(print_term, node.terms))
    if isinstance(node, And):
        return _join("and", *map(print_node, node.items))
    if isinstance(node, Or):
        return _join("or", *map(print_node, node.items))
    if isinstance(node, Not):
        return _join("not", print_node(node.item))
    if isinstance(node, ExistsP):
        return _join("existsP", "(" + " ".join(node.variables) + ")", print_node(node.body))
    if isinstance(node, ExistsPth):
        return _join("existsPth", node.variable, print_term(node.term), print_node(node.body))
    raise TypeError(f"not a formula node: {node!r}")


def print_header(formula: Formula) -> str:
    return f";; lang: {formula.language.value}  p: {formula.characteristic}"


def print_formula(formula: Formula) -> str:
    return f"{print_header(formula)}\n{print_node(formula.root)}\n"


def save_formula(formula: Formula, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(print_formula(formula))
