"""Shared plumbing of the instance reductions: parameter lookup, pth-power expansions, new parameters."""
from typing import Callable, Dict, List, Sequence, Tuple

from sympy import Integer, Symbol

from src.algebra.fields import FieldElement
from src.algebra.polynomials import block_terms, evaluate_expr, jet, jet_parts, sorted_symbols
from src.formulas.ast import Const, NameSupply, Term, Var
from src.oracles.points import Point
from src.utils.errors import OracleMismatchError, ShapeError


def point_lookup(point: Point) -> Callable[[Symbol], FieldElement]:
    """Values of parameter jets y#k = δ^k(b_y)."""
    def lookup(symbol: Symbol) -> FieldElement:
        name, order = jet_parts(symbol)
        if name not in point:
            raise OracleMismatchError(f"the parameter point has no value for '{name}'")
        value = point[name]
        for _ in range(order):
            value = value.derive()
        return value

    return lookup


def x_symbols(expr, variables: Sequence[str]) -> List[Symbol]:
    """The jets of ``variables`` occurring in ``expr``, sorted."""
    wanted = set(variables)
    return [s for s in sorted_symbols(expr) if jet_parts(s)[0] in wanted]


def pth_power_expansion(expr, variables: Sequence[str], point: Point, p: int) -> List[Tuple[Dict[Symbol, int], FieldElement]]:
    """
    Writes expr(x, b) = Σ_α c_α · (x^α)^p, x ranging over the jets of
    ``variables``; raises ShapeError when some x-exponent is not a multiple of p.

    Returns:
        (α as symbol → exponent, c_α) pairs with c_α ≠ 0.
    """
    symbols = x_symbols(expr, variables)
    names = [s.name for s in symbols]
    lookup = point_lookup(point)
    expansion = []
    for monom, coeff in block_terms(expr, names):
        if any(e % p for e in monom):
            raise ShapeError(f"the x-monomials must be pth powers, found exponents {monom} in characteristic {p}")
        value = evaluate_expr(coeff, lookup, point.descriptor)
        if value:
            expansion.append(({s: e // p for s, e in zip(symbols, monom) if e}, value))
    return expansion


class ParameterNames:
    """Names new parameters b′ for field elements; prime-field values become constants instead."""

    def __init__(self, supply: NameSupply, base: str = "b"):
        self.supply = supply
        self.base = base
        self.values: Dict[str, FieldElement] = {}
        self._names: Dict[FieldElement, str] = {}

    def term(self, value: FieldElement) -> Term:
        if value.is_ground() and isinstance(value.ground_value(), int):
            return Const(value.ground_value())
        if value not in self._names:
            name = self.supply.fresh(self.base)
            self._names[value] = name
            self.values[name] = value
        return Var(self._names[value])

    def expr(self, value: FieldElement):
        term = self.term(value)
        return Integer(term.value) if isinstance(term, Const) else jet(term.name)


def monomial_expr(exponents: Dict[Symbol, int]):
    result = Integer(1)
    for symbol, exponent in exponents.items():
        result *= symbol ** exponent
    return result
