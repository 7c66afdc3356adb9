import os
import unittest

from src.formulas.ast import Sroot, Var, iter_node_subterms
from src.formulas.classify import classify
from src.formulas.parser import load_formula, parse_formula
from src.formulas.printer import print_node
from src.formulas.shapes import DeltaTame
from src.oracles.dcf_oracle import DcfOracle
from src.oracles.points import Point
from src.oracles.scf_oracle import ScfOracle
from src.passes.dcf_passes import (
    delta_conjoin, eliminate_s_terms, from_s_formula, homogenize_delta, lambda_to_delta, reduce_instance_dcf,
    to_s_formula,
)
from src.utils.errors import LanguageTagError, ShapeError

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def _corpus(name: str):
    return load_formula(os.path.join(CORPUS, name))


def _point(oracle, **values) -> Point:
    return Point.from_json_dict(values, oracle.descriptor)


class TestSTermElimination(unittest.TestCase):
    """s-terms give way to pth-root blocks guarded by δ(q) ≐ 0."""

    def setUp(self):
        self.oracle = DcfOracle(3)
        self.formula = _corpus("dcf/s_term.eqf")

    def test_no_s_terms_remain(self):
        result = eliminate_s_terms(self.formula)
        self.assertFalse(any(isinstance(t, Sroot) for t in iter_node_subterms(result.root)))
        self.assertEqual(classify(result).kind, "boolean-combination")

    def test_truth_values_are_kept(self):
        result = eliminate_s_terms(self.formula)
        for values in ({"x": "t^3", "y": "t"}, {"x": "t^3", "y": "1"}, {"x": "t", "y": "0"}, {"x": "t", "y": "1"}):
            with self.subTest(**values):
                point = _point(self.oracle, **values)
                self.assertEqual(self.oracle.eval(result, point), self.oracle.eval(self.formula, point))

    def test_scf_formulas_are_rejected(self):
        with self.assertRaises(LanguageTagError):
            eliminate_s_terms(_corpus("scf/pdep_two.eqf"))


class TestSFormulas(unittest.TestCase):

    def test_block_to_s_formula_and_back(self):
        block = _corpus("dcf/pth_root_block.eqf")
        s_formula = to_s_formula(block)
        self.assertEqual(print_node(s_formula.root), "(and (eq0 (d x)) (eq0 (- (s x) y)))")
        self.assertEqual(from_s_formula(s_formula).root, block.root)

    def test_nested_blocks(self):
        nested = _corpus("dcf/nested_blocks.eqf")
        s_formula = to_s_formula(nested)
        self.assertEqual(classify(s_formula).kind, "s-formula")
        self.assertEqual(classify(from_s_formula(s_formula)).to_dict(), {"shape": "delta-tame", "quantifiers": 2})

    def test_unguarded_s_terms(self):
        with self.assertRaises(ShapeError):
            from_s_formula(_corpus("dcf/s_term.eqf"))


class TestDeltaHomogenization(unittest.TestCase):

    def setUp(self):
        self.oracle = DcfOracle(3)

    def test_constant_equation(self):
        formula = parse_formula(";; lang: dcf  p: 3\n(eq0 (d x))\n")
        result = homogenize_delta(formula, {"x": 1}, "x0")
        self.assertIn("x0", result.free_variables)
        self.assertTrue(self.oracle.eval(result, _point(self.oracle, x0="1", x="t^3")))
        self.assertFalse(self.oracle.eval(result, _point(self.oracle, x0="1", x="t")))
        self.assertTrue(self.oracle.eval(result, _point(self.oracle, x0="0", x="t")))

    def test_blocks_are_kept(self):
        result = homogenize_delta(_corpus("dcf/pth_root_block.eqf"), {"x": 1, "y": 1}, "x0")
        self.assertEqual(classify(result).to_dict(), {"shape": "delta-tame", "quantifiers": 1})

    def test_argument_checks(self):
        formula = _corpus("dcf/pth_root_block.eqf")
        with self.assertRaises(ShapeError):
            homogenize_delta(formula, {"x": 1}, "y")
        with self.assertRaises(ShapeError):
            homogenize_delta(formula, {"x": -1}, "x0")
        with self.assertRaises(ShapeError):
            homogenize_delta(formula, {"z": 1}, "x0")
        with self.assertRaises(ShapeError):
            homogenize_delta(_corpus("dcf/s_term.eqf"), {"x": 1}, "x0")


class TestLambdaToDelta(unittest.TestCase):
    """A λ-tame formula of SCF_p and its δ-tame translation agree on F_p(t)."""

    def setUp(self):
        self.scf = ScfOracle(2)
        self.dcf = DcfOracle(2)

    def assertAgree(self, formula, values):
        translated = lambda_to_delta(formula)
        self.assertEqual(translated.language.value, "dcf")
        for entry in values:
            with self.subTest(**entry):
                expected = self.scf.eval(formula, _point(self.scf, **entry))
                self.assertEqual(self.dcf.eval(translated, _point(self.dcf, **entry)), expected)

    def test_bare_pdep(self):
        self.assertAgree(_corpus("scf/pdep_two.eqf"),
                         [{"y1": "1", "y2": "t"}, {"y1": "1", "y2": "t^2"}, {"y1": "t", "y2": "t^3"}])

    def test_guarded_block(self):
        self.assertAgree(_corpus("scf/guarded_block.eqf"),
                         [{"y1": "t", "y2": "t^3", "y3": "t"}, {"y1": "t", "y2": "t^3", "y3": "1"},
                          {"y1": "0", "y2": "t", "y3": "1"}, {"y1": "t", "y2": "1", "y3": "0"}])

    def test_needs_lambda_tame_input(self):
        with self.assertRaises(ShapeError):
            lambda_to_delta(_corpus("scf/lambda_term.eqf"))
        with self.assertRaises(LanguageTagError):
            lambda_to_delta(_corpus("dcf/riccati.eqf"))


class TestDcfInstanceReduction(unittest.TestCase):

    def setUp(self):
        self.oracle = DcfOracle(2)

    def test_block_is_removed(self):
        formula = parse_formula(";; lang: dcf  p: 2\n(existsPth z (* b1 (^ x 2)) (eq0 (- z x)))\n")
        point = _point(self.oracle, b1="t")
        reduced, extended = reduce_instance_dcf(formula, ("b1",), point, self.oracle)
        self.assertEqual(classify(reduced).to_dict(), {"shape": "delta-tame", "quantifiers": 0})
        self.assertEqual(extended, point)
        for x in ("0", "1", "t"):
            with self.subTest(x=x):
                given = point.extended({"x": self.oracle.descriptor.element(x)})
                self.assertEqual(self.oracle.eval(reduced, given), self.oracle.eval(formula, given))

    def test_new_parameters(self):
        formula = _corpus("dcf/instance_block.eqf")
        point = _point(self.oracle, b1="t^2", b2="t")
        reduced, extended = reduce_instance_dcf(formula, ("b1", "b2"), point, self.oracle)
        self.assertEqual(extended["b"], self.oracle.descriptor.gen("t"))
        self.assertIn("b", reduced.free_variables)
        given = extended.extended({"x": self.oracle.descriptor.one})
        self.assertFalse(self.oracle.eval(reduced, given))

    def test_needs_a_block(self):
        oracle = DcfOracle(3)
        with self.assertRaises(ShapeError):
            reduce_instance_dcf(_corpus("dcf/riccati.eqf"), (), _point(oracle), oracle)


class TestDeltaConjoin(unittest.TestCase):

    def test_clashing_names_are_renamed(self):
        first = DeltaTame((("z", Var("x")),), (Var("z"),))
        second = DeltaTame((("z", Var("y")),), (Var("z"),))
        combined = delta_conjoin(first, second)
        self.assertEqual(combined.bound_names(), ("z", "z1"))
        self.assertEqual(combined.system, (Var("z"), Var("z1")))


if __name__ == "__main__":
    unittest.main()
