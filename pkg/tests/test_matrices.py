import unittest

from src.algebra.fields import FieldDescriptor
from src.algebra.hulls import differential_ideal_closure, e_hull, linearization_schedule, macaulay_bound
from src.algebra.matrices import (
    Matrix, constant_relations, constants_linear_dependent, in_span, span_basis, wronskian,
)
from src.algebra.slices import CoefficientPolynomial, monomials_of_degree
from src.utils.errors import DimensionMismatchError, NonSquareError, ShapeError

QT = FieldDescriptor.rational_functions(0)


class TestMatrix(unittest.TestCase):
    """Exact linear algebra over Q(t)."""

    def setUp(self):
        self.t = QT.gen("t")

    def test_determinant(self):
        m = Matrix.from_rows([[1, 2], [3, 4]], QT)
        self.assertEqual(m.det(), QT.element(-2))
        symbolic = Matrix.from_rows([[self.t, 1], [1, self.t]], QT)
        self.assertEqual(symbolic.det(), self.t ** 2 - 1)

    def test_adjugate_identity(self):
        m = Matrix.from_rows([[self.t, 1, 0], [2, self.t, 1], [0, 3, 1]], QT)
        product = m * m.adjugate()
        self.assertEqual(product, Matrix.identity(3, QT) * m.det())

    def test_non_square(self):
        with self.assertRaises(NonSquareError):
            Matrix.from_rows([[1, 2, 3], [4, 5, 6]], QT).det()

    def test_kernel_basis(self):
        m = Matrix.from_rows([[1, 2, 3], [2, 4, 6]], QT)
        kernel = m.kernel_basis()
        self.assertEqual(len(kernel), 2)
        for vector in kernel:
            self.assertFalse(any(m.apply(vector)))
        self.assertEqual(m.rank(), 1)

    def test_rref(self):
        reduced, pivots = Matrix.from_rows([[0, 2, 4], [1, 1, 1]], QT).rref()
        self.assertEqual(pivots, (0, 1))
        self.assertEqual(reduced.row(0), tuple(QT.element(v) for v in (1, 0, -1)))
        self.assertEqual(reduced.row(1), tuple(QT.element(v) for v in (0, 1, 2)))

    def test_solve(self):
        m = Matrix.from_rows([[1, 1], [1, -1]], QT)
        self.assertEqual(m.solve([QT.element(3), QT.element(1)]), (QT.element(2), QT.element(1)))
        singular = Matrix.from_rows([[1, 1], [2, 2]], QT)
        self.assertIsNone(singular.solve([QT.element(1), QT.element(3)]))
        with self.assertRaises(DimensionMismatchError):
            m.solve([QT.one])

    def test_span(self):
        basis = span_basis([(self.t, QT.one), (2 * self.t, QT.element(2))], QT, 2)
        self.assertEqual(len(basis), 1)
        self.assertTrue(in_span(basis, (3 * self.t, QT.element(3)), QT))
        self.assertFalse(in_span(basis, (QT.one, QT.zero), QT))


class TestConstants(unittest.TestCase):
    """Linear dependence over the constants of (Q(t), d/dt)."""

    def setUp(self):
        self.t = QT.gen("t")

    def test_wronskian(self):
        self.assertEqual(wronskian([QT.one, self.t]), QT.one)
        self.assertTrue(constants_linear_dependent([self.t, 2 * self.t]))
        self.assertFalse(constants_linear_dependent([QT.one, self.t]))

    def test_constant_relations(self):
        self.assertEqual(constant_relations([(QT.one,), (self.t,)]), [])
        relations = constant_relations([(self.t,), (2 * self.t,)])
        self.assertEqual(relations, [(QT.element(-2), QT.one)])

    def test_relations_have_constant_entries(self):
        vectors = [(self.t, QT.one), (self.t ** 2, self.t), (3 * self.t, QT.element(3))]
        for relation in constant_relations(vectors):
            self.assertFalse(any(c.derive() for c in relation))


class TestHulls(unittest.TestCase):

    def setUp(self):
        self.t = QT.gen("t")

    def test_e_hull_closes_under_derivation(self):
        hull = e_hull([(QT.one, self.t)], QT)
        self.assertEqual(hull.dimension, 2)
        self.assertTrue(hull.is_full)
        self.assertEqual(hull.steps, 2)
        constant = e_hull([(QT.one, QT.element(2))], QT)
        self.assertEqual((constant.dimension, constant.steps), (1, 1))

    def test_first_round_counts_before_reduction(self):
        # (t) and (t^3) span the same line as (1) but are not over E.
        for entry in (self.t, self.t ** 3):
            with self.subTest(entry=entry):
                hull = e_hull([(entry,)], QT)
                self.assertEqual((hull.dimension, hull.steps), (1, 2))
                self.assertLessEqual(hull.steps, hull.dimension + 1)
        self.assertEqual(e_hull([(QT.element(5),)], QT).steps, 1)

    def test_differential_ideal_closure(self):
        single = CoefficientPolynomial.from_dict(QT, 1, {(1,): self.t})
        closure = differential_ideal_closure([single], 1)
        self.assertTrue(closure.is_full)
        self.assertEqual(closure.steps, 2)
        self.assertEqual(closure.monomials, ((1,),))
        over_e = CoefficientPolynomial.from_dict(QT, 2, {(1, 0): QT.one, (0, 1): QT.element(-1)})
        unchanged = differential_ideal_closure([over_e], 1)
        self.assertEqual((unchanged.dimension, unchanged.steps), (1, 1))

    def test_closure_generators_are_over_e(self):
        generic = CoefficientPolynomial.from_dict(QT, 2, {(1, 0): self.t, (0, 1): QT.element(-1)})
        closure = differential_ideal_closure([generic], 2)
        for vector in closure.basis:
            self.assertFalse(any(c.derive() for c in vector))
        for vector in closure.basis:
            derived = tuple(c.derive() for c in vector)
            self.assertEqual(len(span_basis(list(closure.basis) + [derived], QT, closure.length)),
                             closure.dimension)
        self.assertLessEqual(closure.steps, closure.length + 1)
        with self.assertRaises(ShapeError):
            differential_ideal_closure([CoefficientPolynomial.from_dict(QT, 1, {(1,): QT.one, (0,): QT.one})], 1)

    def test_monomials_of_degree(self):
        self.assertEqual(monomials_of_degree(2, 2), [(2, 0), (1, 1), (0, 2)])
        self.assertEqual(monomials_of_degree(2, -1), [])

    def test_linearization_schedule(self):
        # t*u - v has no nonzero zero with constant coordinates, u - v has (1, 1).
        generic = CoefficientPolynomial.from_dict(QT, 2, {(1, 0): self.t, (0, 1): QT.element(-1)})
        run = linearization_schedule([generic], 4, use_hull=True)
        self.assertFalse(run.verdict)
        constant = CoefficientPolynomial.from_dict(QT, 2, {(1, 0): QT.one, (0, 1): QT.element(-1)})
        self.assertTrue(linearization_schedule([constant], 4, use_hull=True).verdict)
        self.assertEqual(macaulay_bound(2, 1), 1)


if __name__ == "__main__":
    unittest.main()
