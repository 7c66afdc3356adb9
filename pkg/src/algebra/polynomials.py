"""
Integer (differential) polynomials behind formula terms.

A polynomial term is turned into a sympy expression in which the variable
``x`` is the symbol ``x`` and its k-th derivative is the jet symbol
``x#k``. Expansion, substitution and the derivation on jets happen on the
sympy side; ``to_term`` turns an expression back into a canonical term
(monomials in graded-lex order, jets sorted by name then order).
"""
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy import Integer, Poly, Symbol, expand

from src.formulas.ast import Add, Const, Der, Mul, Neg, Pow, Sub, Term, Var, iter_subterms
from src.utils.errors import OracleMismatchError, ShapeError

JET_SEPARATOR = "#"


# --- Jets ---

def jet(name: str, order: int = 0) -> Symbol:
    return Symbol(name if order == 0 else f"{name}{JET_SEPARATOR}{order}")


def jet_parts(symbol: Symbol) -> Tuple[str, int]:
    name, separator, order = symbol.name.rpartition(JET_SEPARATOR)
    if not separator:
        return symbol.name, 0
    return name, int(order)


def symbol_key(symbol: Symbol) -> Tuple[str, int]:
    return jet_parts(symbol)


def sorted_symbols(expr) -> List[Symbol]:
    return sorted(expr.free_symbols, key=symbol_key)


def derive_expr(expr):
    """The derivation of Z{X}: every jet x#k goes to x#(k+1), integers to 0."""
    result = Integer(0)
    for symbol in sorted_symbols(expr):
        name, order = jet_parts(symbol)
        result += sympy.diff(expr, symbol) * jet(name, order + 1)
    return result


# --- Terms <-> expressions ---

def term_to_expr(term: Term, opaque: Optional[Mapping[Term, Symbol]] = None):
    """
    Expression of a polynomial term; ``opaque`` maps non-polynomial subterms
    (λ- or s-applications) to the symbols standing in for them.
    """
    if opaque and term in opaque:
        return opaque[term]
    if isinstance(term, Var):
        return jet(term.name)
    if isinstance(term, Const):
        return Integer(term.value)
    if isinstance(term, Add):
        return term_to_expr(term.left, opaque) + term_to_expr(term.right, opaque)
    if isinstance(term, Sub):
        return term_to_expr(term.left, opaque) - term_to_expr(term.right, opaque)
    if isinstance(term, Mul):
        return term_to_expr(term.left, opaque) * term_to_expr(term.right, opaque)
    if isinstance(term, Neg):
        return -term_to_expr(term.arg, opaque)
    if isinstance(term, Pow):
        return term_to_expr(term.base, opaque) ** term.exponent
    if isinstance(term, Der):
        return derive_expr(expand(term_to_expr(term.arg, opaque)))
    raise ShapeError(f"{type(term).__name__} is not a polynomial operation")


def polynomial(term: Term, opaque: Optional[Mapping[Term, Symbol]] = None):
    return expand(term_to_expr(term, opaque))


def is_polynomial_term(term: Term, differential: bool = False) -> bool:
    allowed = (Var, Const, Add, Sub, Mul, Neg, Pow) + ((Der,) if differential else ())
    return all(isinstance(sub, allowed) for sub in iter_subterms(term))


def _factor(symbol: Symbol) -> Term:
    name, order = jet_parts(symbol)
    term: Term = Var(name)
    for _ in range(order):
        term = Der(term)
    return term


def _monomial_term(coeff: int, symbols: Sequence[Symbol], monom: Sequence[int]) -> Term:
    product: Optional[Term] = None
    for symbol, exponent in zip(symbols, monom):
        if not exponent:
            continue
        factor = _factor(symbol)
        if exponent > 1:
            factor = Pow(factor, exponent)
        product = factor if product is None else Mul(product, factor)
    if product is None:
        return Const(coeff)
    if coeff == 1:
        return product
    return Mul(Const(coeff), product)


def to_term(expr, modulus: Optional[int] = None) -> Term:
    """Canonical term of an integer polynomial; coefficients reduced mod ``modulus`` if given."""
    expr = expand(expr)
    symbols = sorted_symbols(expr)
    if not symbols:
        value = int(expr)
        return Const(value % modulus if modulus else value)
    poly = Poly(expr, *symbols, domain="ZZ")
    pieces = []
    for monom, coeff in poly.terms(order="grlex"):
        coeff = int(coeff)
        if modulus:
            coeff %= modulus
        if coeff:
            pieces.append((monom, coeff))
    if not pieces:
        return Const(0)
    term: Optional[Term] = None
    for monom, coeff in pieces:
        piece = _monomial_term(abs(coeff), symbols, monom)
        if term is None:
            term = Neg(piece) if coeff < 0 else piece
        elif coeff < 0:
            term = Sub(term, piece)
        else:
            term = Add(term, piece)
    return term


def normalize_term(term: Term, modulus: Optional[int] = None) -> Term:
    return to_term(polynomial(term), modulus)


# --- Degrees and homogeneity ---

def degree_in(expr, block: Sequence[str]) -> int:
    """Total degree in the block variables; -1 for the zero polynomial."""
    expr = expand(expr)
    if expr == 0:
        return -1
    if not block:
        return 0
    return Poly(expr, *[jet(name) for name in block]).total_degree()


def is_homogeneous_in(expr, block: Sequence[str]) -> bool:
    expr = expand(expr)
    if expr == 0 or not block:
        return True
    return Poly(expr, *[jet(name) for name in block]).is_homogeneous


def block_terms(expr, block: Sequence[str]) -> List[Tuple[Tuple[int, ...], object]]:
    """(exponent vector, coefficient expression) pairs of ``expr`` over the block."""
    expr = expand(expr)
    if expr == 0:
        return []
    if not block:
        return [((), expr)]
    poly = Poly(expr, *[jet(name) for name in block])
    return [(monom, coeff.as_expr() if hasattr(coeff, "as_expr") else coeff)
            for monom, coeff in poly.terms(order="grlex")]


def homogenize_expr(expr, block: Sequence[str], pivot: str, extra: int = 0):
    """
    pivot^(N+extra) · expr(y/pivot) for y in ``block``, with N the largest
    total block degree of ``expr``. Returns the expression and N.
    """
    terms = block_terms(expr, block)
    if not terms:
        return Integer(0), 0
    top = max(sum(monom) for monom, _ in terms)
    pivot_symbol = jet(pivot)
    result = Integer(0)
    for monom, coeff in terms:
        piece = coeff * pivot_symbol ** (top - sum(monom) + extra)
        for name, exponent in zip(block, monom):
            piece *= jet(name) ** exponent
        result += piece
    return expand(result), top


def weighted_quotient(expr, weights: Mapping[str, int], pivot: str):
    """
    expr(x_i / pivot^k_i), derivatives of the quotients included, written
    as numerator / pivot^M. Returns (numerator, M).
    """
    pivot_symbol = jet(pivot)
    mapping = {}
    for symbol in sorted_symbols(expr):
        name, order = jet_parts(symbol)
        if name not in weights:
            continue
        value = jet(name) / pivot_symbol ** weights[name]
        for _ in range(order):
            value = derive_expr(value)
        mapping[symbol] = value
    value = sympy.cancel(sympy.together(expr.xreplace(mapping)))
    numer, denom = sympy.fraction(value)
    power = sympy.degree(denom, pivot_symbol) if denom.has(pivot_symbol) else 0
    unit = sympy.cancel(denom / pivot_symbol ** power)
    if not unit.is_Integer or unit not in (1, -1):
        raise ShapeError(f"unexpected denominator {denom} after weighted substitution")
    return expand(numer * unit), int(power)


# --- Symbolic linear algebra ---

def derivative_rows(exprs: Sequence, order: Optional[int] = None) -> List[list]:
    """Rows (δ^i(q_j))_j for i < order (default: len(exprs))."""
    order = len(exprs) if order is None else order
    rows = [[expand(e) for e in exprs]]
    for _ in range(order - 1):
        rows.append([expand(derive_expr(e)) for e in rows[-1]])
    return rows


def wronskian_expr(exprs: Sequence):
    if len(exprs) == 1:
        return expand(exprs[0])
    return expand(sympy.Matrix(derivative_rows(exprs)).det(method="berkowitz"))


def adjugate_exprs(rows: Sequence[Sequence]) -> List[list]:
    matrix = sympy.Matrix(rows)
    if matrix.rows == 1:
        return [[Integer(1)]]
    adj = matrix.adjugate(method="berkowitz")
    return [[expand(adj[i, j]) for j in range(adj.cols)] for i in range(adj.rows)]


def determinant_expr(rows: Sequence[Sequence]):
    matrix = sympy.Matrix(rows)
    if matrix.rows == 0:
        return Integer(1)
    return expand(matrix.det(method="berkowitz"))


# --- Evaluation ---

def evaluate_expr(expr, lookup: Callable[[Symbol], object], descriptor):
    """Value of an integer polynomial at field elements; ``lookup`` gives each symbol's value."""
    expr = expand(expr)
    symbols = sorted_symbols(expr)
    if not symbols:
        return descriptor.element(int(expr))
    values: Dict[Symbol, object] = {}
    for symbol in symbols:
        value = lookup(symbol)
        if value is None:
            raise OracleMismatchError(f"no value for '{symbol.name}'")
        values[symbol] = value
    total = descriptor.zero
    for monom, coeff in Poly(expr, *symbols, domain="ZZ").terms():
        piece = descriptor.element(int(coeff))
        for symbol, exponent in zip(symbols, monom):
            if exponent:
                piece = piece * values[symbol] ** exponent
        total = total + piece
    return total
