"""
Exact matrices over a ``FieldDescriptor`` and the linear-algebra kernel.

The determinant and echelon routines are written against a tiny ring
protocol (``+ - *``, truthiness, exact division) so the same code runs on
field elements and on sympy integer polynomials when Wronskians and
adjugates have to stay symbolic.
"""
import operator
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from src.algebra.fields import FieldDescriptor, FieldElement
from src.utils.errors import DimensionMismatchError, NonSquareError, WrongDescriptorError


# --- Ring-generic helpers ---

def bareiss_determinant(grid: Sequence[Sequence], exact_div: Callable, one, zero):
    """Fraction-free (Bareiss) determinant; every division is exact."""
    m = [list(row) for row in grid]
    n = len(m)
    if n == 0:
        return one
    if any(len(row) != n for row in m):
        raise NonSquareError(f"determinant of a non-square {n}x{len(m[0])} grid")
    sign = 1
    previous = one
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j], previous)
        previous = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def minor_grid(grid: Sequence[Sequence], row: int, col: int) -> List[list]:
    return [
        [value for j, value in enumerate(r) if j != col]
        for i, r in enumerate(grid) if i != row
    ]


def adjugate_grid(grid: Sequence[Sequence], determinant: Callable, one) -> List[list]:
    """Classical adjugate: adj[j][i] = (-1)^(i+j) det(minor(i, j))."""
    n = len(grid)
    if any(len(row) != n for row in grid):
        raise NonSquareError("adjugate of a non-square matrix")
    if n == 1:
        return [[one]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cofactor = determinant(minor_grid(grid, i, j))
            adj[j][i] = cofactor if (i + j) % 2 == 0 else -cofactor
    return adj


def fraction_free_echelon(grid: Sequence[Sequence], exact_div: Callable, one):
    """
    Row echelon form by fraction-free elimination.

    Returns the reduced grid and the pivot columns in increasing order. The
    pivot search always takes the first usable row, so the result depends
    only on the input.
    """
    m = [list(row) for row in grid]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    previous = one
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows):
            factor = m[i][c]
            for j in range(c, cols):
                m[i][j] = exact_div(m[r][c] * m[i][j] - factor * m[r][j], previous)
        previous = m[r][c]
        pivots.append(c)
        r += 1
    return m, tuple(pivots)


# --- Matrices over a field ---

@dataclass(frozen=True)
class Matrix:
    descriptor: FieldDescriptor
    rows: int
    cols: int
    entries: Tuple[Tuple[FieldElement, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatchError(f"entries do not form a {self.rows}x{self.cols} grid")
        for row in self.entries:
            for value in row:
                if value.descriptor != self.descriptor:
                    raise WrongDescriptorError("all matrix entries must share one descriptor")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], descriptor: Optional[FieldDescriptor] = None,
                  cols: Optional[int] = None) -> "Matrix":
        rows = [list(row) for row in rows]
        if descriptor is None:
            descriptor = next(
                (v.descriptor for row in rows for v in row if isinstance(v, FieldElement)), None
            )
            if descriptor is None:
                raise WrongDescriptorError("cannot infer the field of a matrix without elements")
        width = len(rows[0]) if rows else (cols or 0)
        entries = tuple(tuple(descriptor.element(v) for v in row) for row in rows)
        return cls(descriptor, len(rows), width, entries)

    @classmethod
    def identity(cls, n: int, descriptor: FieldDescriptor) -> "Matrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], descriptor, n)

    @classmethod
    def zeros(cls, rows: int, cols: int, descriptor: FieldDescriptor) -> "Matrix":
        return cls.from_rows([[0] * cols for _ in range(rows)], descriptor, cols)

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Tuple[FieldElement, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[FieldElement, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix.from_rows([self.column(j) for j in range(self.cols)], self.descriptor, self.rows)

    def submatrix(self, row_indices: Sequence[int], col_indices: Sequence[int]) -> "Matrix":
        return Matrix.from_rows(
            [[self.entries[i][j] for j in col_indices] for i in row_indices],
            self.descriptor,
            len(col_indices),
        )

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatchError(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
                )
            zero = self.descriptor.zero
            grid = [
                [sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)), zero)
                 for j in range(other.cols)]
                for i in range(self.rows)
            ]
            return Matrix.from_rows(grid, self.descriptor, other.cols)
        return Matrix.from_rows([[v * other for v in row] for row in self.entries],
                                self.descriptor, self.cols)

    __rmul__ = __mul__

    def apply(self, vector: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
        if len(vector) != self.cols:
            raise DimensionMismatchError("vector length does not match the column count")
        zero = self.descriptor.zero
        return tuple(sum((a * b for a, b in zip(row, vector)), zero) for row in self.entries)

    def _require_square(self):
        if self.rows != self.cols:
            raise NonSquareError(f"operation needs a square matrix, got {self.rows}x{self.cols}")

    def det(self) -> FieldElement:
        self._require_square()
        return bareiss_determinant(self.entries, operator.truediv, self.descriptor.one, self.descriptor.zero)

    def adjugate(self) -> "Matrix":
        """m · adjugate(m) = det(m) · I."""
        self._require_square()
        if self.rows == 0:
            return self
        one, zero = self.descriptor.one, self.descriptor.zero
        grid = adjugate_grid(
            self.entries,
            lambda g: bareiss_determinant(g, operator.truediv, one, zero),
            one,
        )
        return Matrix.from_rows(grid, self.descriptor, self.cols)

    def rref(self) -> Tuple["Matrix", Tuple[int, ...]]:
        """Reduced row echelon form and its pivot columns."""
        one = self.descriptor.one
        grid, pivots = fraction_free_echelon(self.entries, operator.truediv, one)
        for r, c in enumerate(pivots):
            inverse = grid[r][c].inverse()
            grid[r] = [value * inverse for value in grid[r]]
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            for i in range(r):
                factor = grid[i][c]
                if factor:
                    grid[i] = [a - factor * b for a, b in zip(grid[i], grid[r])]
        return Matrix.from_rows(grid, self.descriptor, self.cols), pivots

    def rank(self) -> int:
        _, pivots = fraction_free_echelon(self.entries, operator.truediv, self.descriptor.one)
        return len(pivots)

    def kernel_basis(self) -> List[Tuple[FieldElement, ...]]:
        """
        Basis of the right null space, one vector per free column in
        increasing column order: the free coordinate is 1, the other free
        coordinates are 0.
        """
        reduced, pivots = self.rref()
        zero, one = self.descriptor.zero, self.descriptor.one
        basis = []
        for free in (c for c in range(self.cols) if c not in pivots):
            vector = [zero] * self.cols
            vector[free] = one
            for r, c in enumerate(pivots):
                vector[c] = -reduced[r, free]
            basis.append(tuple(vector))
        return basis

    def row_space(self) -> List[Tuple[FieldElement, ...]]:
        reduced, pivots = self.rref()
        return [reduced.row(r) for r in range(len(pivots))]

    def solve(self, rhs: Sequence[FieldElement]) -> Optional[Tuple[FieldElement, ...]]:
        """The unique x with m·x = rhs, or None if there is none or several."""
        if len(rhs) != self.rows:
            raise DimensionMismatchError("right-hand side length does not match the row count")
        augmented = Matrix.from_rows(
            [list(row) + [value] for row, value in zip(self.entries, rhs)],
            self.descriptor,
            self.cols + 1,
        )
        reduced, pivots = augmented.rref()
        if self.cols in pivots or len(pivots) < self.cols:
            return None
        return tuple(reduced[r, self.cols] for r in range(self.cols))

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.entries) + "]"


def span_basis(vectors: Sequence[Sequence[FieldElement]], descriptor: FieldDescriptor,
               length: int) -> List[Tuple[FieldElement, ...]]:
    """RREF basis of the span of ``vectors`` inside descriptor^length."""
    if not vectors:
        return []
    return Matrix.from_rows(vectors, descriptor, length).row_space()


def in_span(basis: Sequence[Sequence[FieldElement]], vector: Sequence[FieldElement],
            descriptor: FieldDescriptor) -> bool:
    if not any(vector):
        return True
    if not basis:
        return False
    length = len(vector)
    return len(span_basis(list(basis) + [vector], descriptor, length)) == len(span_basis(basis, descriptor, length))


# --- Derivations ---

def derivative_matrix(values: Sequence[FieldElement], order: Optional[int] = None) -> Matrix:
    """Rows (δ^i(a_j))_j for i < order (default: len(values))."""
    if not values:
        raise DimensionMismatchError("need at least one element")
    order = len(values) if order is None else order
    rows = [list(values)]
    for _ in range(order - 1):
        rows.append([v.derive() for v in rows[-1]])
    return Matrix.from_rows(rows, values[0].descriptor, len(values))


def wronskian(values: Sequence[FieldElement]) -> FieldElement:
    return derivative_matrix(values).det()


def constants_linear_dependent(values: Sequence[FieldElement]) -> bool:
    """Linear dependence over the constants, by the Wronskian criterion."""
    return not wronskian(values)


def constant_relations(vectors: Sequence[Sequence[FieldElement]],
                       descriptor: Optional[FieldDescriptor] = None) -> List[Tuple[FieldElement, ...]]:
    """
    Basis of {c over the constants : Σ c_i v_i = 0} for vectors v_i in K^m.

    Rows δ^j(v_i)[r] are stacked until the kernel stops shrinking; the
    stable kernel is closed under δ, so its RREF basis has constant entries.
    """
    if not vectors:
        return []
    descriptor = descriptor or vectors[0][0].descriptor
    count = len(vectors)
    current = [list(v) for v in vectors]
    length = len(current[0])
    rows: List[List[FieldElement]] = []
    previous = None
    while True:
        for r in range(length):
            rows.append([current[i][r] for i in range(count)])
        rows = [list(row) for row in span_basis(rows, descriptor, count)]
        if rows:
            kernel = Matrix.from_rows(rows, descriptor, count).kernel_basis()
        else:
            kernel = Matrix.zeros(1, count, descriptor).kernel_basis()
        if not kernel or (previous is not None and len(kernel) == previous):
            return kernel
        previous = len(kernel)
        current = [[value.derive() for value in v] for v in current]
