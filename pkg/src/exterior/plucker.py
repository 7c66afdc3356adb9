"""
Plücker coordinates of k-vectors in K^n.

Indices are 0-based everywhere in this module: the basis of K^n is
e_0..e_{n-1}, and coordinates are indexed by the sorted k-subsets of
{0..n-1} in lexicographic order. Only ``coordinate_name`` shifts to 1-based
names such as p_1_2. The interior product of the basis covector e^I
(|I| = k-1) with a k-vector ζ is

    (e^I ⌟ ζ)_j = (-1)^#{i in I : i > j} · ζ_{I ∪ {j}}   for j not in I,

and 0 for j in I. So e^{0} ⌟ (e_0 ∧ e_1) = e_1 and e^{1} ⌟ (e_0 ∧ e_1) = -e_0.
A nonzero ζ is decomposable iff ζ ∧ (e^I ⌟ ζ) = 0 for every I.
"""
import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from src.algebra.fields import FieldDescriptor, FieldElement
from src.algebra.matrices import Matrix, span_basis
from src.utils.errors import DimensionMismatchError, GradeMismatchError, ZeroInputError

Subset = Tuple[int, ...]


@lru_cache(maxsize=None)
def index_sets(n: int, k: int) -> Tuple[Subset, ...]:
    return tuple(itertools.combinations(range(n), k))


@lru_cache(maxsize=None)
def _positions(n: int, k: int) -> Dict[Subset, int]:
    return {subset: position for position, subset in enumerate(index_sets(n, k))}


# Generic over anything with + * and unary minus, so the same code yields
# field values and symbolic Grassmannian equations.

def _contraction(lookup: Callable[[Subset], object], n: int, subset: Subset, zero) -> list:
    result = []
    for j in range(n):
        if j in subset:
            result.append(zero)
            continue
        value = lookup(tuple(sorted(subset + (j,))))
        sign = sum(1 for i in subset if i > j) % 2
        result.append(-value if sign else value)
    return result


def _wedge_with_vector(lookup: Callable[[Subset], object], vector: Sequence, n: int, k: int, zero) -> list:
    """Coordinates of ζ ∧ w in grade k+1."""
    result = []
    for target in index_sets(n, k + 1):
        total = zero
        for position, l in enumerate(target):
            rest = target[:position] + target[position + 1:]
            term = lookup(rest) * vector[l]
            sign = (len(target) - 1 - position) % 2
            total = total - term if sign else total + term
        result.append(total)
    return result


@dataclass(frozen=True)
class PluckerVector:
    n: int
    k: int
    coords: Tuple[FieldElement, ...]

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise GradeMismatchError(f"grade {self.k} outside 0..{self.n}")
        if len(self.coords) != comb(self.n, self.k):
            raise DimensionMismatchError(
                f"grade-{self.k} vectors in dimension {self.n} have {comb(self.n, self.k)} coordinates, got {len(self.coords)}"
            )
        object.__setattr__(self, "coords", tuple(self.coords))

    @classmethod
    def from_dict(cls, n: int, k: int, values: Mapping[Subset, FieldElement],
                  descriptor: FieldDescriptor) -> "PluckerVector":
        return cls(n, k, tuple(descriptor.element(values.get(s, 0)) for s in index_sets(n, k)))

    @property
    def descriptor(self) -> FieldDescriptor:
        return self.coords[0].descriptor

    def __getitem__(self, subset: Subset) -> FieldElement:
        return self.coords[_positions(self.n, self.k)[tuple(subset)]]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "PluckerVector") -> "PluckerVector":
        if (self.n, self.k) != (other.n, other.k):
            raise GradeMismatchError("cannot add Plücker vectors of different shapes")
        return PluckerVector(self.n, self.k, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, factor) -> "PluckerVector":
        return PluckerVector(self.n, self.k, tuple(c * factor for c in self.coords))

    def is_multiple_of(self, other: "PluckerVector") -> bool:
        """True iff self = c·other for some nonzero scalar c."""
        if (self.n, self.k) != (other.n, other.k) or self.is_zero() or other.is_zero():
            return False
        pivot = next(i for i, c in enumerate(other.coords) if c)
        factor = self.coords[pivot] / other.coords[pivot]
        return bool(factor) and all(a == factor * b for a, b in zip(self.coords, other.coords))

    def as_strings(self) -> List[str]:
        return [str(c) for c in self.coords]


def wedge(vectors: Sequence[Sequence[FieldElement]], descriptor: Optional[FieldDescriptor] = None) -> PluckerVector:
    """v_1 ∧ ... ∧ v_k: the coordinate on J is the k×k minor on the columns J."""
    if not vectors:
        raise DimensionMismatchError("wedge needs at least one vector")
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise DimensionMismatchError("all vectors must have the same length")
    k = len(vectors)
    if k > n:
        raise DimensionMismatchError(f"cannot wedge {k} vectors in dimension {n}")
    matrix = Matrix.from_rows(vectors, descriptor, n)
    rows = list(range(k))
    return PluckerVector(n, k, tuple(matrix.submatrix(rows, subset).det() for subset in index_sets(n, k)))


def contract(subset: Sequence[int], zeta: PluckerVector) -> Tuple[FieldElement, ...]:
    """e^I ⌟ ζ for the basis covector e^I of grade k-1 (0-based indices)."""
    subset = tuple(sorted(subset))
    if len(subset) != zeta.k - 1:
        raise GradeMismatchError(f"contracting a grade-{zeta.k} vector needs {zeta.k - 1} indices, got {len(subset)}")
    if any(not 0 <= i < zeta.n for i in subset) or len(set(subset)) != len(subset):
        raise GradeMismatchError(f"indices {subset} do not name a basis covector")
    return tuple(_contraction(zeta.__getitem__, zeta.n, subset, zeta.descriptor.zero))


def wedge_vector(zeta: PluckerVector, vector: Sequence[FieldElement]) -> PluckerVector:
    if len(vector) != zeta.n:
        raise DimensionMismatchError("vector length must match the ambient dimension")
    if zeta.k == zeta.n:
        raise GradeMismatchError("top-grade vectors have no higher wedge")
    coords = _wedge_with_vector(zeta.__getitem__, vector, zeta.n, zeta.k, zeta.descriptor.zero)
    return PluckerVector(zeta.n, zeta.k + 1, tuple(coords))


def is_decomposable(zeta: PluckerVector) -> bool:
    if zeta.is_zero():
        raise ZeroInputError("the zero vector has no subspace")
    if zeta.k in (0, zeta.n):
        return True
    for subset in index_sets(zeta.n, zeta.k - 1):
        if not wedge_vector(zeta, contract(subset, zeta)).is_zero():
            return False
    return True


def recover_subspace(zeta: PluckerVector) -> List[Tuple[FieldElement, ...]]:
    """RREF basis of the span of all contractions e^I ⌟ ζ."""
    if zeta.is_zero():
        raise ZeroInputError("the zero vector has no subspace")
    if zeta.k == 0:
        return []
    contractions = [contract(subset, zeta) for subset in index_sets(zeta.n, zeta.k - 1)]
    return span_basis(contractions, zeta.descriptor, zeta.n)


def coordinate_name(subset: Subset, prefix: str = "p") -> str:
    return prefix + "_" + "_".join(str(i + 1) for i in subset)


def symbolic_contractions(n: int, k: int, names: Optional[Mapping[Subset, str]] = None) -> List[List[sympy.Expr]]:
    """e^I ⌟ ζ for every (k-1)-subset I, in the Plücker variables of grade k."""
    if not 1 <= k <= n:
        raise GradeMismatchError(f"grade {k} outside 1..{n}")
    names = names or {s: coordinate_name(s) for s in index_sets(n, k)}
    symbols = {s: sympy.Symbol(names[s]) for s in index_sets(n, k)}
    return [_contraction(symbols.__getitem__, n, subset, sympy.Integer(0)) for subset in index_sets(n, k - 1)]


def grassmannian_equations(n: int, k: int, names: Optional[Mapping[Subset, str]] = None) -> List[sympy.Expr]:
    """
    Integer quadrics in the Plücker variables cutting out the decomposable
    k-vectors: the coordinates of ζ ∧ (e^I ⌟ ζ) for every I. Zero and
    repeated (up to sign) equations are dropped.
    """
    if not 1 <= k <= n:
        raise GradeMismatchError(f"grade {k} outside 1..{n}")
    names = names or {s: coordinate_name(s) for s in index_sets(n, k)}
    symbols = {s: sympy.Symbol(names[s]) for s in index_sets(n, k)}
    zero = sympy.Integer(0)
    if k == n:
        return []
    seen = set()
    equations = []
    for subset in index_sets(n, k - 1):
        vector = _contraction(symbols.__getitem__, n, subset, zero)
        for value in _wedge_with_vector(symbols.__getitem__, vector, n, k, zero):
            value = sympy.expand(value)
            if value == 0 or value in seen or -value in seen:
                continue
            seen.add(value)
            equations.append(value)
    return equations
