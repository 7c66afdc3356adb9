import os
import unittest

from src.algebra.fields import FieldDescriptor
from src.formulas.ast import NameSupply, Var
from src.formulas.classify import classify
from src.formulas.parser import load_formula
from src.formulas.shapes import LinearTame, recognize_tame, require_tame
from src.oracles.fp_oracle import FpOracle
from src.oracles.pair_oracle import PairOracle
from src.oracles.points import Point
from src.passes.pairs_passes import (
    annihilator, annihilator_rank_formula, combine_tame, combine_tame_formula, eval_tame_kolchin,
    lambdaP_to_tame, linear_tame_truth, linearize, monomial_enumeration, simple_linear_checks, tame_from_dep,
)
from src.utils.errors import LanguageTagError, OracleMismatchError, ShapeError

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def _corpus(name: str):
    return load_formula(os.path.join(CORPUS, name))


class TestSegre(unittest.TestCase):
    """∧/∨-combinations of tame formulas."""

    def setUp(self):
        self.oracle = PairOracle(1)

    def _point(self, **values):
        return Point.from_json_dict(values, self.oracle.descriptor)

    def test_conjunction_of_two_blocks(self):
        formula = _corpus("pair/segre_tames.eqf")
        combined = combine_tame_formula(formula)
        tame = require_tame(combined.root)
        self.assertEqual(len(tame.variables), 4)
        self.assertEqual(classify(combined).to_dict(), {"shape": "linear-tame", "degree": 1})
        for values in ({"x": "1", "y": "2"}, {"x": "t", "y": "1"}):
            with self.subTest(**values):
                point = self._point(**values)
                self.assertEqual(self.oracle.eval(combined, point), self.oracle.eval(formula, point))

    def test_disjunction_multiplies_systems(self):
        combined = combine_tame_formula(_corpus("pair/segre_or.eqf"))
        self.assertEqual(len(require_tame(combined.root).variables), 2)
        self.assertEqual(classify(combined).to_dict(), {"shape": "tame", "degree": 2})

    def test_dep_atoms(self):
        tame = tame_from_dep((Var("x"), Var("y")), NameSupply({"x", "y"}))
        self.assertEqual(tame.variables, ("zeta", "zeta1"))
        self.assertTrue(tame.is_linear)

    def test_invalid_connective(self):
        supply = NameSupply({"x", "y"})
        first = tame_from_dep((Var("x"),), supply)
        second = tame_from_dep((Var("y"),), supply)
        with self.assertRaises(ShapeError) as ctx:
            combine_tame(first, second, "xor")
        self.assertIn("Invalid connective", str(ctx.exception))

    def test_negations_have_no_tame_form(self):
        with self.assertRaises(ShapeError):
            combine_tame_formula(_corpus("pair/boolean.eqf"))
        with self.assertRaises(LanguageTagError):
            combine_tame_formula(_corpus("scf/pdep_two.eqf"))


class TestLambdaP(unittest.TestCase):

    def test_bare_dep(self):
        result = lambdaP_to_tame(_corpus("pair/dep_two.eqf"))
        self.assertEqual(classify(result).kind, "simple-linear")

    def test_block_becomes_one_tame_formula(self):
        formula = _corpus("pair/lambdaP_block.eqf")
        result = lambdaP_to_tame(formula)
        self.assertIsNotNone(recognize_tame(result.root))
        self.assertEqual(result.free_variables, {"x", "y", "z"})

    def test_term_equations_are_rejected(self):
        with self.assertRaises(ShapeError):
            lambdaP_to_tame(_corpus("pair/lambdaP_term.eqf"))


class TestLinearize(unittest.TestCase):

    def setUp(self):
        self.oracle = PairOracle(1)

    def _point(self, **values):
        return Point.from_json_dict(values, self.oracle.descriptor)

    def test_quadratic_in_one_column(self):
        result = linearize(_corpus("pair/tame_quadratic.eqf"))
        tame = require_tame(result.root)
        self.assertEqual(len(tame.variables), 3)
        self.assertEqual(classify(result).to_dict(), {"shape": "simple-linear", "degree": 1})

    def test_higher_degree_adds_columns(self):
        formula = _corpus("pair/tame_simple.eqf")
        self.assertEqual(classify(linearize(formula)).kind, "simple-linear")
        self.assertEqual(classify(linearize(formula, 2)).kind, "linear-tame")
        with self.assertRaises(ShapeError):
            linearize(_corpus("pair/tame_quadratic.eqf"), 1)

    def test_linear_truth_and_hull_route(self):
        tame = require_tame(_corpus("pair/tame_simple.eqf").root)
        linear = LinearTame.from_tame(tame)
        self.assertEqual(linear.columns, 1)
        for values, expected in (({"x": "1", "y": "2"}, True), ({"x": "t", "y": "1"}, False)):
            with self.subTest(**values):
                point = self._point(**values)
                self.assertEqual(linear_tame_truth(linear, point, self.oracle), expected)
                self.assertEqual(eval_tame_kolchin(tame, point, self.oracle), expected)

    def test_other_oracles_are_rejected(self):
        tame = require_tame(_corpus("pair/tame_simple.eqf").root)
        fp = FpOracle(5)
        with self.assertRaises(OracleMismatchError):
            eval_tame_kolchin(tame, Point.from_json_dict({"x": "1", "y": "2"}, fp.descriptor), fp)


class TestAnnihilators(unittest.TestCase):

    def setUp(self):
        self.oracle = PairOracle(1)
        self.descriptor = self.oracle.descriptor

    def test_monomial_enumeration(self):
        self.assertEqual(monomial_enumeration(2, 4), [(0, 0), (1, 0), (0, 1), (2, 0)])
        self.assertEqual(monomial_enumeration(1, 2), [(0,), (1,)])

    def test_constant_tuple(self):
        result = annihilator([self.descriptor.element(2)], 2, self.oracle)
        self.assertEqual(result.dimension, 1)
        data = result.to_dict()
        self.assertEqual(data["monomials"], [[0], [1]])
        self.assertEqual(data["basis"], [["-2", "1"]])
        self.assertEqual(data["plucker"], ["-2", "1"])

    def test_transcendental_tuple(self):
        result = annihilator([self.descriptor.gen("t")], 2, self.oracle)
        self.assertEqual(result.dimension, 0)
        self.assertIsNone(result.to_dict()["plucker"])

    def test_argument_checks(self):
        with self.assertRaises(ShapeError):
            annihilator([self.descriptor.one], 0, self.oracle)
        other = FieldDescriptor.rational_functions(0, ("s",))
        with self.assertRaises(OracleMismatchError):
            annihilator([other.one], 2, self.oracle)

    def test_rank_formula(self):
        tame = annihilator_rank_formula(["x"], 2, 1)
        self.assertEqual(tame.variables, ("p_1", "p_2"))
        self.assertEqual(len(tame.equations), 1)
        self.assertTrue(tame.is_linear)
        with self.assertRaises(ShapeError):
            annihilator_rank_formula(["x"], 2, 3)


class TestSimpleLinear(unittest.TestCase):

    def setUp(self):
        self.oracle = PairOracle(1)
        self.descriptor = self.oracle.descriptor
        self.t = self.descriptor.gen("t")

    def test_independent_rows(self):
        one, zero = self.descriptor.one, self.descriptor.zero
        report = simple_linear_checks([[one, self.t], [zero, one]], self.oracle)
        self.assertFalse(report.relation)
        self.assertFalse(report.minors_vanish)

    def test_relation_implies_the_rest(self):
        rows = [[self.descriptor.element(1), self.descriptor.element(2)],
                [self.descriptor.element(2), self.descriptor.element(4)]]
        report = simple_linear_checks(rows, self.oracle, samples=3, seed=11)
        self.assertTrue(report.relation)
        self.assertTrue(report.minors_vanish)
        self.assertEqual(report.to_dict()["dep_samples"], [True, True, True])

    def test_tall_matrices_use_the_rank(self):
        one = self.descriptor.one
        independent = simple_linear_checks([[one], [self.t]], self.oracle)
        self.assertFalse(independent.relation)
        self.assertTrue(independent.minors_vanish)
        dependent = simple_linear_checks([[one], [self.descriptor.element(2)]], self.oracle, samples=2)
        self.assertTrue(dependent.relation)
        self.assertTrue(dependent.minors_vanish)
        self.assertEqual(dependent.dep_samples, (True, True))
        wide = simple_linear_checks([[one, self.t, self.t ** 2]], self.oracle)
        self.assertFalse(wide.minors_vanish)

    def test_pair_oracle_required(self):
        fp = FpOracle(5)
        with self.assertRaises(OracleMismatchError):
            simple_linear_checks([[fp.descriptor.one]], fp)


if __name__ == "__main__":
    unittest.main()
