import glob
import os
import unittest

from src.formulas.ast import (
    Dep, Eq0, Lam, Language, Mul, Nonzero, Not, Or, PDep, Var, And, free_variables,
)
from src.formulas.classify import classify, lambda_degree
from src.formulas.parser import load_formula, parse_formula
from src.formulas.printer import print_formula, print_node
from src.formulas.shapes import encode_pdep, ldef, recognize_lambda_tame
from src.formulas.transforms import boolean_normal, substitute
from src.utils.errors import ArityError, FormulaSyntaxError, LanguageTagError, ShapeError

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def _corpus(name: str):
    return load_formula(os.path.join(CORPUS, name))


class TestParser(unittest.TestCase):
    """Reading and printing the .eqf format."""

    def test_corpus_prints_back_unchanged(self):
        paths = sorted(glob.glob(os.path.join(CORPUS, "*", "*.eqf")))
        self.assertGreater(len(paths), 40)
        for path in paths:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
            with self.subTest(path=os.path.basename(path)):
                self.assertEqual(print_formula(parse_formula(text)), text)

    def test_header_and_comments(self):
        formula = parse_formula(";; lang:   scf p: 3\n; a comment\n(pdep 2 y1 ; inline\n   y2)\n")
        self.assertEqual(formula.language, Language.SCF)
        self.assertEqual(formula.characteristic, 3)
        self.assertEqual(formula.root, PDep(2, (Var("y1"), Var("y2"))))

    def test_syntax_errors_carry_positions(self):
        with self.assertRaises(FormulaSyntaxError) as ctx:
            parse_formula(";; lang: scf  p: 2\n(eq0 (+ y1 ))")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 6))
        with self.assertRaises(FormulaSyntaxError) as ctx:
            parse_formula(";; lang: scf  p: 2\n(eq0 y1")
        self.assertIn("never closed", str(ctx.exception))
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 1))

    def test_missing_header(self):
        with self.assertRaises(FormulaSyntaxError) as ctx:
            parse_formula("(eq0 x)\n")
        self.assertEqual(ctx.exception.line, 1)
        with self.assertRaises(FormulaSyntaxError):
            parse_formula(";; lang: scf  p: 2\n(eq0 x) (eq0 y)\n")

    def test_language_tags(self):
        with self.assertRaises(LanguageTagError):
            parse_formula(";; lang: pair  p: 2\n(eq0 x)\n")
        with self.assertRaises(LanguageTagError):
            parse_formula(";; lang: dcf  p: 2\n(pdep 1 x)\n")
        with self.assertRaises(LanguageTagError):
            parse_formula(";; lang: scf  p: 0\n(eq0 x)\n")
        with self.assertRaises(LanguageTagError):
            parse_formula(";; lang: acf  p: 2\n(eq0 x)\n")

    def test_arity(self):
        with self.assertRaises(ArityError):
            parse_formula(";; lang: scf  p: 2\n(pdep 2 y1)\n")
        with self.assertRaises(ArityError):
            parse_formula(";; lang: scf  p: 2\n(eq0 (lam 2 3 y1 y2 y3))\n")

    def test_bound_names_stay_apart_from_free_ones(self):
        text = (";; lang: pair  p: 0\n"
                "(and (eq0 u) (existsP (u v) (and (nonzero u v) (eq0 (+ (* u x) (* v y))))))\n")
        with self.assertRaises(ShapeError):
            parse_formula(text)
        with self.assertRaises(ShapeError):
            parse_formula(";; lang: pair  p: 0\n(existsP (u) (eq0 u))\n")

    def test_free_variables(self):
        formula = _corpus("pair/tame_simple.eqf")
        self.assertEqual(formula.sorted_free_variables(), ("x", "y"))
        self.assertEqual(free_variables(_corpus("dcf/nested_blocks.eqf").root), {"x", "y"})


class TestClassify(unittest.TestCase):
    """Shapes of the corpus formulas."""

    def assertShape(self, name, expected):
        self.assertEqual(classify(_corpus(name)).to_dict(), expected)

    def test_scf_shapes(self):
        self.assertShape("scf/polynomial_circle.eqf", {"shape": "lambda-tame", "degree": 0})
        self.assertShape("scf/pdep_two.eqf", {"shape": "lambda-tame", "degree": 1})
        self.assertShape("scf/guarded_block.eqf", {"shape": "lambda-tame", "degree": 1})
        self.assertShape("scf/guarded_nested.eqf", {"shape": "lambda-tame", "degree": 2})
        self.assertShape("scf/lambda_term.eqf", {"shape": "term-equation"})
        self.assertShape("scf/trivial_false.eqf", {"shape": "lambda-tame", "degree": 0})

    def test_boolean_leaves(self):
        self.assertShape("scf/boolean_mix.eqf", {
            "shape": "boolean-combination",
            "leaves": [{"shape": "lambda-tame", "degree": 0}, {"shape": "lambda-tame", "degree": 1}],
        })

    def test_dcf_shapes(self):
        self.assertShape("dcf/pth_root_block.eqf", {"shape": "delta-tame", "quantifiers": 1})
        self.assertShape("dcf/nested_blocks.eqf", {"shape": "delta-tame", "quantifiers": 2})
        self.assertShape("dcf/riccati.eqf", {"shape": "delta-tame", "quantifiers": 0})
        self.assertShape("dcf/s_formula.eqf", {"shape": "s-formula"})
        self.assertShape("dcf/s_term.eqf", {"shape": "term-equation"})
        self.assertEqual(classify(_corpus("dcf/boolean.eqf")).kind, "boolean-combination")

    def test_pair_shapes(self):
        self.assertShape("pair/tame_simple.eqf", {"shape": "simple-linear", "degree": 1})
        self.assertShape("pair/tame_linear.eqf", {"shape": "linear-tame", "degree": 1})
        self.assertShape("pair/tame_quadratic.eqf", {"shape": "tame", "degree": 2})
        self.assertShape("pair/dep_two.eqf", {"shape": "simple-linear", "degree": 1})
        self.assertShape("pair/polynomial.eqf", {"shape": "polynomial-system", "degree": 0})
        self.assertShape("pair/lambdaP_block.eqf", {"shape": "lambdaP", "degree": 1})
        self.assertShape("pair/lambdaP_nested.eqf", {"shape": "lambdaP", "degree": 2})
        self.assertShape("pair/segre_and.eqf", {"shape": "lambdaP", "degree": 1})
        self.assertShape("pair/lambdaP_term.eqf", {"shape": "term-equation"})
        self.assertShape("pair/small.eqf", {"shape": "atom"})

    def test_lambda_degree(self):
        self.assertEqual(lambda_degree(_corpus("scf/guarded_nested.eqf")), 2)
        with self.assertRaises(ShapeError):
            lambda_degree(_corpus("dcf/riccati.eqf"))


class TestTransforms(unittest.TestCase):

    def test_substitute_polynomial_terms(self):
        formula = _corpus("scf/pdep_two.eqf")
        result = substitute(formula, {"y1": Mul(Var("b"), Var("c")), "unused": Var("q")})
        self.assertEqual(result.root, PDep(2, (Mul(Var("b"), Var("c")), Var("y2"))))

    def test_substitute_rejects_other_shapes(self):
        with self.assertRaises(ShapeError):
            substitute(_corpus("scf/lambda_term.eqf"), {"y3": Var("b")})
        with self.assertRaises(ShapeError):
            substitute(_corpus("scf/pdep_two.eqf"), {"y1": Lam(1, 1, (Var("a"), Var("b")))})

    def test_substitute_refuses_capture(self):
        with self.assertRaises(ShapeError):
            substitute(_corpus("dcf/pth_root_block.eqf"), {"y": Var("z")})

    def test_boolean_normal(self):
        formula = parse_formula(";; lang: pair  p: 0\n(not (and (eq0 x) (eq0 y)))\n")
        self.assertEqual(boolean_normal(formula).root, Or((Not(Eq0(Var("x"))), Not(Eq0(Var("y"))))))
        double = parse_formula(";; lang: pair  p: 0\n(not (not (eq0 x)))\n")
        self.assertEqual(boolean_normal(double).root, Eq0(Var("x")))


class TestShapes(unittest.TestCase):

    def test_ldef(self):
        node = ldef((Var("x"),), [(Var("y"),)])
        self.assertEqual(node, And((Not(PDep(1, (Var("y"),))), PDep(2, (Var("x"), Var("y"))))))
        pair = ldef((Var("x"),), [(Var("y"),)], Language.PAIR)
        self.assertEqual(pair.items[1], Dep(2, (Var("x"), Var("y"))))

    def test_encode_pdep(self):
        node = encode_pdep(2, (Var("y1"), Var("y2")))
        self.assertEqual(print_node(node),
                         "(or (pdep 2 y1 y2) (and (not (pdep 2 y1 y2)) (pdep 3 0 y1 y2) (eq0 1)))")
        self.assertEqual(recognize_lambda_tame(node).degree, 1)
        with self.assertRaises(ShapeError):
            encode_pdep(3, (Var("y1"),))

    def test_nonzero_heads_tame_bodies(self):
        root = _corpus("pair/tame_conic.eqf").root
        self.assertEqual(root.body.items[0], Nonzero((Var("u"), Var("v"), Var("w"))))


if __name__ == "__main__":
    unittest.main()
