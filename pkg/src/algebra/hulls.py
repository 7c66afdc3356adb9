"""
E-hulls over the constants E of a differential field of characteristic 0.

A subspace of K^n is defined over E iff it is closed under the
coordinatewise derivation, so the E-hull of a set of vectors is the span of
the vectors and all their derivatives. The RREF basis of a δ-closed space
has constant entries.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from src.algebra.fields import FieldDescriptor, FieldElement
from src.algebra.matrices import constant_relations, span_basis
from src.algebra.slices import CoefficientPolynomial, Monomial, monomials_of_degree, slice_generators
from src.utils.errors import ShapeError

logger = logging.getLogger(__name__)

Vector = Tuple[FieldElement, ...]


@dataclass(frozen=True)
class EHullBasis:
    """RREF basis with constant entries; ``steps`` counts the generations needed to close the span."""
    basis: Tuple[Vector, ...]
    steps: int
    length: int
    monomials: Tuple[Monomial, ...] = field(default=())

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def is_full(self) -> bool:
        return self.dimension == self.length


def e_hull(vectors: Sequence[Sequence[FieldElement]], descriptor: FieldDescriptor,
           length: Optional[int] = None) -> EHullBasis:
    """
    Closes the span of ``vectors`` under δ.

    Args:
        vectors: Vectors of K^length.
        descriptor: The differential field K.
        length: Ambient dimension, needed when ``vectors`` is empty.

    Returns:
        The hull as an ``EHullBasis``. ``steps`` is 1 when every input
        vector is already over E. The first derivative round is taken on the
        vectors as given and counts whenever it is nonzero; every later round
        counts when it enlarges the span.
    """
    length = len(vectors[0]) if length is None else length
    raw = [tuple(v) for v in vectors if any(v)]
    derived = [tuple(value.derive() for value in v) for v in raw]
    derived = [v for v in derived if any(v)]
    basis = span_basis(raw + derived, descriptor, length)
    steps = 2 if derived else 1
    while derived:
        derived = [tuple(value.derive() for value in v) for v in basis]
        grown = span_basis(list(basis) + derived, descriptor, length)
        if len(grown) == len(basis):
            break
        basis = grown
        steps += 1
    logger.debug("E-hull of dimension %d after %d step(s)", len(basis), steps)
    return EHullBasis(tuple(basis), steps, length)


def _slice_vectors(polys: Sequence[CoefficientPolynomial], degree: int):
    if not polys:
        raise ShapeError("need at least one generator")
    count = polys[0].count
    monomials = monomials_of_degree(count, degree)
    generators = slice_generators(polys, degree)
    return monomials, [g.vector(monomials) for g in generators]


def differential_ideal_closure(polys: Sequence[CoefficientPolynomial], degree: int) -> EHullBasis:
    """E-generators of the degree-``degree`` slice of the differential ideal the polynomials generate."""
    if any(not p.is_homogeneous for p in polys):
        raise ShapeError("generators must be homogeneous")
    monomials, vectors = _slice_vectors(polys, degree)
    descriptor = polys[0].descriptor
    hull = e_hull(vectors, descriptor, len(monomials))
    return EHullBasis(hull.basis, hull.steps, hull.length, tuple(monomials))


def slice_has_constant_functional(polys: Sequence[CoefficientPolynomial], degree: int) -> bool:
    """
    True iff a nonzero E-linear functional on the degree-``degree`` slice
    kills every M·g, i.e. the E-hull of the ideal slice is proper.
    """
    monomials, vectors = _slice_vectors(polys, degree)
    if not vectors:
        return True
    descriptor = polys[0].descriptor
    columns = [tuple(v[i] for v in vectors) for i in range(len(monomials))]
    return bool(constant_relations(columns, descriptor))


def macaulay_bound(count: int, degree: int) -> int:
    """Forms of degree ≤ degree in count unknowns without common zero generate every form from here on."""
    return count * (degree - 1) + 1


@dataclass(frozen=True)
class LinearizationRun:
    verdict: bool
    degree: int
    bound: int
    settled: bool
    verdicts: Tuple[Tuple[int, bool], ...]

    @property
    def agreed_at(self) -> Optional[int]:
        """The first degree whose verdict repeats the previous one."""
        for (_, before), (degree, now) in zip(self.verdicts, self.verdicts[1:]):
            if before == now:
                return degree
        return None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "degree": self.degree, "bound": self.bound,
                "settled": self.settled, "agreed_at": self.agreed_at}


def linearization_schedule(polys: Sequence[CoefficientPolynomial], max_degree: int,
                           use_hull: bool = False) -> LinearizationRun:
    """
    Decides whether the forms have a nontrivial common zero over the
    algebraic closure of E by testing the E-hull of the ideal slices from
    the largest form degree upwards.

    A proper slice may become full at a higher degree, a full slice stays
    full; the verdict is final once it is False or the Macaulay bound is
    reached. ``max_degree`` caps the search, in which case ``settled`` is
    False.
    """
    polys = [p for p in polys if not p.is_zero]
    if not polys:
        return LinearizationRun(True, 0, 0, True, ())
    count = polys[0].count
    start = max(p.degree for p in polys)
    bound = macaulay_bound(count, start)
    stop = max(start, min(bound, max_degree))
    verdicts: List[Tuple[int, bool]] = []
    for degree in range(start, stop + 1):
        if use_hull:
            verdict = not differential_ideal_closure(polys, degree).is_full
        else:
            verdict = slice_has_constant_functional(polys, degree)
        verdicts.append((degree, verdict))
        logger.debug("linearization at degree %d: %s", degree, verdict)
        if not verdict:
            return LinearizationRun(False, degree, bound, True, tuple(verdicts))
    return LinearizationRun(True, stop, bound, stop >= bound, tuple(verdicts))
