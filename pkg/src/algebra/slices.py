"""
Homogeneous polynomials in a block of unknowns Z with coefficients in a
field, and their degree-d slices.

The pairs pipeline works with I(a, Z): the polynomials of a tame formula
evaluated at a point, as polynomials in Z over K. The degree-d slice of the
ideal they generate is the K-span of all M·g with deg M + deg g = d; it is
handled as a list of coefficient vectors over the degree-d monomials.
"""
import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from sympy import Symbol

from src.algebra.fields import FieldDescriptor, FieldElement
from src.algebra.polynomials import block_terms, evaluate_expr
from src.utils.errors import ShapeError

Monomial = Tuple[int, ...]


def monomials_of_degree(count: int, degree: int) -> List[Monomial]:
    """Exponent vectors of total degree ``degree`` in ``count`` unknowns, lex descending."""
    if degree < 0:
        return []
    result = []
    for combo in itertools.combinations_with_replacement(range(count), degree):
        exponents = [0] * count
        for index in combo:
            exponents[index] += 1
        result.append(tuple(exponents))
    return sorted(result, reverse=True)


@dataclass(frozen=True)
class CoefficientPolynomial:
    """A polynomial in ``count`` unknowns with ``FieldElement`` coefficients (zero terms dropped)."""
    descriptor: FieldDescriptor
    count: int
    terms: Tuple[Tuple[Monomial, FieldElement], ...]

    @classmethod
    def from_dict(cls, descriptor: FieldDescriptor, count: int,
                  coefficients: Dict[Monomial, FieldElement]) -> "CoefficientPolynomial":
        terms = tuple(sorted((m, c) for m, c in coefficients.items() if c))
        return cls(descriptor, count, terms)

    def as_dict(self) -> Dict[Monomial, FieldElement]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(m) for m, _ in self.terms}) <= 1

    def derive(self) -> "CoefficientPolynomial":
        """The coefficientwise derivation D (the unknowns are constants)."""
        return CoefficientPolynomial.from_dict(
            self.descriptor, self.count, {m: c.derive() for m, c in self.terms}
        )

    def times_monomial(self, monomial: Monomial) -> "CoefficientPolynomial":
        return CoefficientPolynomial.from_dict(
            self.descriptor, self.count,
            {tuple(a + b for a, b in zip(m, monomial)): c for m, c in self.terms},
        )

    def vector(self, monomials: Sequence[Monomial]) -> Tuple[FieldElement, ...]:
        coefficients = self.as_dict()
        zero = self.descriptor.zero
        return tuple(coefficients.get(m, zero) for m in monomials)


def coefficient_polynomial(expr, block: Sequence[str], lookup: Callable[[Symbol], FieldElement],
                           descriptor: FieldDescriptor) -> CoefficientPolynomial:
    """Evaluates the non-block part of ``expr`` with ``lookup``, keeping the block unknowns."""
    coefficients = {}
    for monom, coeff in block_terms(expr, block):
        value = evaluate_expr(coeff, lookup, descriptor)
        if value:
            coefficients[tuple(monom)] = value
    return CoefficientPolynomial.from_dict(descriptor, len(block), coefficients)


def slice_generators(polys: Sequence[CoefficientPolynomial], degree: int) -> List[CoefficientPolynomial]:
    """All M·g with g among ``polys`` and deg M = degree − deg g (zero polynomials skipped)."""
    products = []
    for poly in polys:
        if poly.is_zero:
            continue
        if not poly.is_homogeneous:
            raise ShapeError("slice generators must be homogeneous")
        gap = degree - poly.degree
        if gap < 0:
            raise ShapeError(f"degree {degree} is below a generator of degree {poly.degree}")
        for monomial in monomials_of_degree(poly.count, gap):
            products.append(poly.times_monomial(monomial))
    return products
