"""
p-basis coordinates in F_p(t_1..t_e).

The monomials t^ν with 0 ≤ ν_i < p form a basis of K over K^p. Writing
a = N/D = N·D^(p-1) / D^p and splitting the monomials of N·D^(p-1) by the
residues of their exponents mod p gives the unique ζ_ν with
a = Σ ζ_ν^p · t^ν.
"""
import itertools
from typing import Dict, Optional, Sequence, Tuple

from src.algebra.fields import FieldDescriptor, FieldElement
from src.utils.errors import WrongDescriptorError

Exponent = Tuple[int, ...]


def standard_p_basis(descriptor: FieldDescriptor) -> Tuple[Exponent, ...]:
    """Exponent vectors of the standard p-basis, lexicographic (1 first)."""
    p = _require_positive_characteristic(descriptor)
    return tuple(itertools.product(range(p), repeat=len(descriptor.transcendentals)))


def basis_element(descriptor: FieldDescriptor, exponent: Exponent) -> FieldElement:
    value = descriptor.one
    for name, power in zip(descriptor.transcendentals, exponent):
        if power:
            value = value * descriptor.gen(name) ** power
    return value


def _require_positive_characteristic(descriptor: FieldDescriptor) -> int:
    if descriptor.characteristic == 0:
        raise WrongDescriptorError(f"{descriptor.describe()} has no p-basis (characteristic 0)")
    return descriptor.characteristic


def p_basis_coordinates(a: FieldElement,
                        basis: Optional[Sequence[Exponent]] = None) -> Optional[Tuple[FieldElement, ...]]:
    """
    Coordinates (ζ_ν) of ``a`` in the order of ``basis``.

    ``basis`` defaults to the standard p-basis, for which the result is
    always defined. A sub-list of standard monomials is accepted too; the
    result is then None when ``a`` needs a monomial outside it.
    """
    descriptor = a.descriptor
    p = _require_positive_characteristic(descriptor)
    full = standard_p_basis(descriptor)
    if basis is None:
        basis = full
    basis = [tuple(nu) for nu in basis]
    full_set = set(full)
    if any(nu not in full_set for nu in basis) or len(set(basis)) != len(basis):
        raise WrongDescriptorError("basis must list distinct standard p-basis monomials")

    field = descriptor.field
    ring = field.ring
    numer, denom = a.value.numer, a.value.denom
    lifted = numer * denom ** (p - 1)
    buckets: Dict[Exponent, Dict[Exponent, object]] = {nu: {} for nu in full}
    for monom, coeff in lifted.terms():
        residue = tuple(e % p for e in monom)
        quotient = tuple(e // p for e in monom)
        buckets[residue][quotient] = coeff

    coordinates = {}
    for nu, bucket in buckets.items():
        coordinates[nu] = FieldElement(descriptor, field.new(ring.from_dict(bucket), denom))
    chosen = set(basis)
    if any(coordinates[nu] for nu in full if nu not in chosen):
        return None
    return tuple(coordinates[nu] for nu in basis)


def recompose(coordinates: Sequence[FieldElement], basis: Sequence[Exponent],
              descriptor: FieldDescriptor) -> FieldElement:
    """Σ ζ_ν^p · t^ν."""
    p = _require_positive_characteristic(descriptor)
    total = descriptor.zero
    for zeta, nu in zip(coordinates, basis):
        if zeta:
            total = total + zeta ** p * basis_element(descriptor, nu)
    return total


def pth_root(a: FieldElement) -> Optional[FieldElement]:
    """The unique b with b^p = a, or None when a is not a pth power."""
    descriptor = a.descriptor
    trivial = standard_p_basis(descriptor)[0]
    coordinates = p_basis_coordinates(a, [trivial])
    return None if coordinates is None else coordinates[0]


def is_pth_power(a: FieldElement) -> bool:
    return pth_root(a) is not None
