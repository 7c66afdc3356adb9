import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.fields import FieldDescriptor, parse_element
from src.algebra.pbasis import (
    is_pth_power, p_basis_coordinates, pth_root, recompose, standard_p_basis,
)
from src.utils.errors import FieldDivisionError, NoDerivationError, WrongDescriptorError

QT = FieldDescriptor.rational_functions(0)
F3T = FieldDescriptor.rational_functions(3)

coefficients = st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=4)


def _poly(descriptor, coeffs):
    t = descriptor.gen("t")
    total = descriptor.zero
    for power, c in enumerate(coeffs):
        total = total + c * t ** power
    return total


class TestFieldElements(unittest.TestCase):
    """Arithmetic, canonical printing and the derivation of F(t)."""

    def setUp(self):
        self.t = QT.gen("t")

    def test_arithmetic_is_exact(self):
        a = (self.t + 1) / (self.t - 1)
        self.assertEqual(a * (self.t - 1), self.t + 1)
        self.assertEqual(a - a, QT.zero)
        self.assertEqual((self.t ** 2 - 1) / (self.t - 1), self.t + 1)

    def test_printing_is_canonical(self):
        self.assertEqual(str(parse_element("t^2+2*t+1", QT)), "t^2+2*t+1")
        self.assertEqual(str(parse_element("-t", QT)), "-t")
        self.assertEqual(str(parse_element("1/t", QT)), "(1)/(t)")
        self.assertEqual(str(F3T.element(-1)), "2")

    def test_parse_rejects_unknown_names(self):
        with self.assertRaises(WrongDescriptorError):
            parse_element("s+1", QT)
        with self.assertRaises(WrongDescriptorError):
            parse_element("1/0", QT)

    def test_division_by_zero(self):
        with self.assertRaises(FieldDivisionError):
            _ = self.t / QT.zero
        self.assertIsNone(self.t.try_div(0))
        self.assertEqual(self.t.try_div(self.t), QT.one)

    def test_mixing_fields_fails(self):
        with self.assertRaises(WrongDescriptorError):
            _ = self.t + F3T.gen("t")

    def test_derivation(self):
        self.assertEqual((self.t ** 2).derive(), 2 * self.t)
        self.assertEqual((1 / self.t).derive(), -1 / self.t ** 2)
        self.assertFalse((F3T.gen("t") ** 3).derive())

    def test_missing_derivation(self):
        plain = FieldDescriptor.rational_functions(0, derivation=None)
        with self.assertRaises(NoDerivationError):
            plain.gen("t").derive()

    def test_substitute(self):
        a = (self.t ** 2 + 1) / self.t
        self.assertEqual(a.substitute({"t": 2}), QT.element(5) / 2)

    def test_bad_characteristic(self):
        with self.assertRaises(WrongDescriptorError):
            FieldDescriptor.rational_functions(4)

    @settings(max_examples=30, deadline=None)
    @given(coefficients, coefficients)
    def test_leibniz_rule(self, first, second):
        a, b = _poly(QT, first), _poly(QT, second)
        self.assertEqual((a * b).derive(), a.derive() * b + a * b.derive())


class TestPBasis(unittest.TestCase):
    """Coordinates over K^p and pth roots in F_p(t)."""

    def test_standard_basis(self):
        self.assertEqual(standard_p_basis(F3T), ((0,), (1,), (2,)))
        two = FieldDescriptor.rational_functions(3, ("t1", "t2"))
        self.assertEqual(len(standard_p_basis(two)), 9)
        self.assertEqual(standard_p_basis(two)[0], (0, 0))

    def test_coordinates_of_monomials(self):
        f2t = FieldDescriptor.rational_functions(2)
        t = f2t.gen("t")
        self.assertEqual(p_basis_coordinates(t), (f2t.zero, f2t.one))
        self.assertEqual(p_basis_coordinates(t ** 3), (f2t.zero, t))

    def test_pth_roots(self):
        f2t = FieldDescriptor.rational_functions(2)
        t = f2t.gen("t")
        self.assertEqual(pth_root(t ** 2 + 1), t + 1)
        self.assertIsNone(pth_root(t))
        self.assertFalse(is_pth_power(t + t ** 2))

    def test_no_basis_in_characteristic_zero(self):
        with self.assertRaises(WrongDescriptorError):
            p_basis_coordinates(QT.gen("t"))

    @settings(max_examples=30, deadline=None)
    @given(coefficients, coefficients)
    def test_coordinates_recompose(self, numerator, denominator):
        a = _poly(F3T, numerator)
        d = _poly(F3T, denominator)
        if d:
            a = a / d
        basis = standard_p_basis(F3T)
        self.assertEqual(recompose(p_basis_coordinates(a), basis, F3T), a)
        self.assertEqual(pth_root(a ** 3), a)


if __name__ == "__main__":
    unittest.main()
