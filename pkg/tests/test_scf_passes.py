import os
import unittest

from src.formulas.ast import Lam, iter_node_subterms
from src.formulas.classify import BOOLEAN_COMBINATION, LAMBDA_TAME, classify
from src.formulas.parser import load_formula, parse_formula
from src.oracles.points import Point
from src.oracles.scf_oracle import ScfOracle
from src.passes.scf_passes import eliminate_lambda_terms, homogenize_lambda, reduce_instance_scf
from src.utils.errors import LanguageTagError, OracleMismatchError, ShapeError

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def _corpus(name: str):
    return load_formula(os.path.join(CORPUS, name))


class TestLambdaElimination(unittest.TestCase):
    """λ-term equations become Boolean combinations of λ-tame formulas."""

    def setUp(self):
        self.oracle = ScfOracle(2)
        self.formula = _corpus("scf/lambda_term.eqf")

    def _point(self, **values):
        return Point.from_json_dict(values, self.oracle.descriptor)

    def test_pieces_are_lambda_tame(self):
        result = eliminate_lambda_terms(self.formula)
        shape = classify(result)
        self.assertEqual(shape.kind, BOOLEAN_COMBINATION)
        self.assertTrue(shape.leaves)
        self.assertEqual({leaf.kind for leaf in shape.leaves}, {LAMBDA_TAME})
        # λ-values survive only inside the blocks that define them.
        self.assertTrue(any(isinstance(t, Lam) for t in iter_node_subterms(result.root)))
        self.assertEqual(result.free_variables, self.formula.free_variables)

    def test_truth_values_are_kept(self):
        result = eliminate_lambda_terms(self.formula)
        for values in ({"y1": "t^3", "y2": "t", "y3": "t"},
                       {"y1": "t^3", "y2": "t", "y3": "1"},
                       {"y1": "1", "y2": "t", "y3": "0"},
                       {"y1": "1", "y2": "t", "y3": "t"},
                       {"y1": "t", "y2": "0", "y3": "0"}):
            with self.subTest(**values):
                point = self._point(**values)
                self.assertEqual(self.oracle.eval(result, point), self.oracle.eval(self.formula, point))

    def test_tame_formulas_pass_through(self):
        formula = _corpus("scf/pdep_two.eqf")
        self.assertEqual(eliminate_lambda_terms(formula), formula)

    def test_other_languages_are_rejected(self):
        with self.assertRaises(LanguageTagError):
            eliminate_lambda_terms(_corpus("dcf/riccati.eqf"))


class TestLambdaHomogenization(unittest.TestCase):

    def setUp(self):
        self.oracle = ScfOracle(3)

    def _point(self, **values):
        return Point.from_json_dict(values, self.oracle.descriptor)

    def test_polynomial_equation(self):
        formula = parse_formula(";; lang: scf  p: 3\n(eq0 (- (* y1 y1) y2))\n")
        result = homogenize_lambda(formula, ("y1", "y2"), "y0")
        self.assertIn("y0", result.free_variables)
        # y0 = 2 scales (2, 2) down to (1, 1), a solution; (1, 2) is not one.
        self.assertTrue(self.oracle.eval(result, self._point(y0="2", y1="2", y2="2")))
        self.assertFalse(self.oracle.eval(result, self._point(y0="1", y1="1", y2="2")))
        self.assertTrue(self.oracle.eval(result, self._point(y0="0", y1="1", y2="2")))

    def test_degree_is_kept(self):
        formula = _corpus("scf/guarded_nested.eqf")
        result = homogenize_lambda(formula, ("y1", "y2"), "y0")
        self.assertEqual(classify(result).to_dict(), {"shape": "lambda-tame", "degree": 2})

    def test_pivot_checks(self):
        formula = _corpus("scf/pdep_two.eqf")
        with self.assertRaises(ShapeError):
            homogenize_lambda(formula, ("y1",), "y2")
        with self.assertRaises(ShapeError):
            homogenize_lambda(formula, ("y1", "y0"), "y0")
        with self.assertRaises(ShapeError):
            homogenize_lambda(_corpus("scf/lambda_term.eqf"), ("y1",), "y0")


class TestScfInstanceReduction(unittest.TestCase):

    def setUp(self):
        self.oracle = ScfOracle(2)
        self.point = Point.from_json_dict({"b1": "t", "b2": "1"}, self.oracle.descriptor)

    def test_bare_block_drops_to_degree_zero(self):
        formula = _corpus("scf/instance_bare.eqf")
        reduced, extended = reduce_instance_scf(formula, ("b1", "b2"), self.point, self.oracle)
        self.assertEqual(classify(reduced).to_dict(), {"shape": "lambda-tame", "degree": 0})
        self.assertEqual(extended, self.point)
        for x in ("0", "1", "t", "t+1", "1/t"):
            with self.subTest(x=x):
                given = self.point.extended({"x": self.oracle.descriptor.element(x)})
                self.assertEqual(self.oracle.eval(reduced, given), self.oracle.eval(formula, given))

    def test_rejects_degree_zero_and_non_pth_powers(self):
        with self.assertRaises(ShapeError):
            reduce_instance_scf(_corpus("scf/polynomial_system.eqf"), (), self.point, self.oracle)
        odd = parse_formula(";; lang: scf  p: 2\n(pdep 1 (* b1 x))\n")
        with self.assertRaises(ShapeError):
            reduce_instance_scf(odd, ("b1",), self.point, self.oracle)

    def test_point_must_match_the_oracle(self):
        formula = _corpus("scf/instance_bare.eqf")
        other = Point.from_json_dict({"b1": "t1", "b2": "1"}, ScfOracle(2, 2).descriptor)
        with self.assertRaises(OracleMismatchError):
            reduce_instance_scf(formula, ("b1", "b2"), other, self.oracle)


if __name__ == "__main__":
    unittest.main()
