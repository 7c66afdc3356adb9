import unittest

import sympy

from src.algebra.fields import FieldDescriptor
from src.algebra.matrices import span_basis
from src.exterior.plucker import (
    PluckerVector, contract, coordinate_name, grassmannian_equations, index_sets, is_decomposable,
    recover_subspace, wedge,
)
from src.utils.errors import DimensionMismatchError, GradeMismatchError, ZeroInputError

QT = FieldDescriptor.rational_functions(0)


def _vector(*values):
    return tuple(QT.element(v) for v in values)


def _substitution(zeta: PluckerVector):
    return {
        sympy.Symbol(coordinate_name(subset)): sympy.Integer(zeta[subset].ground_value())
        for subset in index_sets(zeta.n, zeta.k)
    }


class TestPlucker(unittest.TestCase):
    """Wedges, contractions and the Grassmannian quadrics."""

    def test_wedge_of_basis_vectors(self):
        zeta = wedge([_vector(1, 0, 0), _vector(0, 1, 0)])
        self.assertEqual(zeta.as_strings(), ["1", "0", "0"])
        self.assertEqual(index_sets(3, 2), ((0, 1), (0, 2), (1, 2)))

    def test_contraction_sign_convention(self):
        zeta = wedge([_vector(1, 0, 0), _vector(0, 1, 0)])
        self.assertEqual(contract((0,), zeta), _vector(0, 1, 0))
        self.assertEqual(contract((1,), zeta), _vector(-1, 0, 0))
        with self.assertRaises(GradeMismatchError):
            contract((0, 1), zeta)

    def test_contraction_uses_zero_based_indices(self):
        plane = wedge([_vector(1, 0), _vector(0, 1)])
        self.assertEqual(contract((0,), plane), _vector(0, 1))
        zeta = wedge([_vector(1, 0, 0), _vector(0, 1, 0)])
        self.assertEqual(contract((2,), zeta), _vector(0, 0, 0))
        # Index 3 is outside E^3 once indices start at 0.
        with self.assertRaises(GradeMismatchError):
            contract((3,), zeta)
        other = wedge([_vector(0, 0, 1), _vector(1, 2, 0)])
        expected = tuple(a + b for a, b in zip(contract((1,), zeta), contract((1,), other)))
        self.assertEqual(contract((1,), zeta + other), expected)

    def test_wedges_are_decomposable(self):
        zeta = wedge([_vector(1, 2, 0, 3), _vector(0, 1, 1, 1)])
        self.assertTrue(is_decomposable(zeta))
        mixed = PluckerVector.from_dict(4, 2, {(0, 1): QT.one, (2, 3): QT.one}, QT)
        self.assertFalse(is_decomposable(mixed))

    def test_recover_subspace(self):
        vectors = [_vector(1, 2, 0, 3), _vector(0, 1, 1, 1)]
        self.assertEqual(recover_subspace(wedge(vectors)), span_basis(vectors, QT, 4))

    def test_zero_vector_has_no_subspace(self):
        zero = PluckerVector.from_dict(3, 2, {}, QT)
        with self.assertRaises(ZeroInputError):
            is_decomposable(zero)
        with self.assertRaises(ZeroInputError):
            recover_subspace(zero)

    def test_shape_checks(self):
        with self.assertRaises(DimensionMismatchError):
            wedge([_vector(1, 0), _vector(0, 1), _vector(1, 1)])
        with self.assertRaises(DimensionMismatchError):
            PluckerVector(3, 2, _vector(1, 0))

    def test_multiples(self):
        zeta = wedge([_vector(1, 0, 0), _vector(0, 1, 0)])
        self.assertTrue(zeta.scale(QT.element(3)).is_multiple_of(zeta))
        self.assertFalse(zeta.is_multiple_of(wedge([_vector(1, 0, 0), _vector(0, 0, 1)])))

    def test_grassmannian_equations(self):
        equations = grassmannian_equations(4, 2)
        self.assertGreaterEqual(len(equations), 1)
        zeta = wedge([_vector(1, 2, 0, 3), _vector(0, 1, 1, 1)])
        values = _substitution(zeta)
        for equation in equations:
            self.assertEqual(equation.subs(values), 0)
        mixed = PluckerVector.from_dict(4, 2, {(0, 1): QT.one, (2, 3): QT.one}, QT)
        self.assertTrue(any(equation.subs(_substitution(mixed)) != 0 for equation in equations))
        self.assertEqual(grassmannian_equations(3, 3), [])


if __name__ == "__main__":
    unittest.main()
