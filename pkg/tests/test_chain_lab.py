import os
import unittest
from unittest.mock import patch

from src.formulas.parser import load_formula, parse_formula
from src.harness.chain_lab import (
    chain_candidate, chain_run, field_equations, reduced_monomials, reduced_vectors, sampled_stream,
    truncated_monomials,
)
from src.oracles.fp_oracle import FpOracle
from src.oracles.points import Point
from src.utils.errors import UnsupportedShapeError

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")

# x^2 = 2 has no solution in F_5, so the chain is empty from the first step.
SQUARE = ";; lang: pair  p: 0\n(eq0 (- (* x x) y))\n"


def _corpus(name: str):
    return load_formula(os.path.join(CORPUS, name))


class TestChainLab(unittest.TestCase):
    """The chain x = b_1, x = b_2, ... over F_5."""

    def setUp(self):
        self.oracle = FpOracle(5)
        self.formula = _corpus("pair/chain_line.eqf")
        self.stream = self._stream("1", "2")

    def _stream(self, *values):
        return [Point.from_json_dict({"y": value}, self.oracle.descriptor) for value in values]

    def test_candidates(self):
        candidate = chain_candidate(self.formula, ("y",))
        self.assertEqual(candidate.kind, "polynomial")
        self.assertEqual(candidate.unknowns, ("x",))
        self.assertEqual(candidate.degree, 1)
        self.assertEqual(chain_candidate(_corpus("pair/chain_wronskian.eqf"), ("y",)).kind, "dependence")
        with self.assertRaises(UnsupportedShapeError):
            chain_candidate(_corpus("pair/small.eqf"), ())

    def test_line_chain_settles(self):
        report = chain_run(self.formula, ("y",), self.stream, self.oracle)
        # Functions on F_5 vanishing at 1, then at no point.
        self.assertEqual(report.degree_bound, 4)
        self.assertEqual([s.dimension for s in report.steps], [4, 5])
        self.assertEqual([s.solutions for s in report.steps], [1, 0])
        self.assertEqual(report.stabilization_index, 2)
        self.assertEqual(report.exact_index, 2)
        self.assertTrue(report.stabilized)
        self.assertEqual(report.violations, ())

    def test_span_index_follows_the_solution_set(self):
        report = chain_run(parse_formula(SQUARE), ("y",), self._stream("2", "3", "3", "3"), self.oracle)
        self.assertEqual([s.solutions for s in report.steps], [0, 0, 0, 0])
        self.assertEqual([s.dimension for s in report.steps], [5, 5, 5, 5])
        self.assertEqual(report.stabilization_index, 1)
        self.assertEqual(report.exact_index, 1)
        self.assertEqual(report.violations, ())

    def test_truncated_spans_report_a_lagging_index(self):
        with patch("src.utils.config.QUOTIENT_LIMIT", 0):
            line = chain_run(self.formula, ("y",), self.stream, self.oracle)
            square = chain_run(parse_formula(SQUARE), ("y",), self._stream("2", "3", "3", "3"), self.oracle)
        self.assertEqual(line.degree_bound, 5)
        self.assertEqual([s.dimension for s in line.steps], [5, 6])
        self.assertEqual(line.violations, ())
        # 1 = a(x^2 - 2) + b(x^5 - x) needs degree 6, beyond the bound.
        self.assertEqual([s.dimension for s in square.steps], [5, 6, 6, 6])
        self.assertEqual(square.stabilization_index, 2)
        self.assertEqual(square.exact_index, 1)
        self.assertEqual(square.violations, ("span index 2 differs from exact index 1",))

    def test_report_layout(self):
        data = chain_run(self.formula, ("y",), self.stream, self.oracle, formula_id="line").to_dict()
        self.assertEqual(data["kind"], "chain")
        self.assertEqual(data["formula"], "line")
        self.assertEqual(data["steps"][0]["parameters"], {"y": "1"})
        self.assertIn("solution_hash", data["steps"][0])

    def test_short_runs_report_a_violation(self):
        report = chain_run(self.formula, ("y",), self.stream, self.oracle, max_steps=1)
        self.assertFalse(report.stabilized)
        self.assertEqual(report.violations, ("no stabilization within 1 steps (dimensions 4)",))

    def test_repeated_parameters_need_the_window(self):
        repeated = [self.stream[0], self.stream[0]]
        report = chain_run(self.formula, ("y",), repeated, self.oracle)
        self.assertEqual([s.dimension for s in report.steps], [4, 4])
        self.assertEqual(report.stabilization_index, 1)
        self.assertFalse(report.stabilized)
        with patch("src.utils.config.CHAIN_WINDOW", 1):
            report = chain_run(self.formula, ("y",), repeated, self.oracle)
        self.assertTrue(report.stabilized)
        self.assertEqual(report.exact_index, 1)

    def test_sampled_streams_are_reproducible(self):
        first = sampled_stream(self.oracle, ("y",), seed=4)
        second = sampled_stream(self.oracle, ("y",), seed=4)
        self.assertEqual([next(first) for _ in range(3)], [next(second) for _ in range(3)])

    def test_truncated_monomials(self):
        self.assertEqual(truncated_monomials(1, 2), [(2,), (1,), (0,)])

    def test_reduction_modulo_field_equations(self):
        self.assertEqual(reduced_monomials(1, 3), [(2,), (1,), (0,)])
        self.assertEqual(len(reduced_monomials(2, 3)), 9)
        descriptor = self.oracle.descriptor
        monomials = reduced_monomials(1, 5)
        (equation,) = field_equations(1, 5, descriptor)
        self.assertEqual(equation.degree, 5)
        # x^p - x is zero as a function on F_p.
        self.assertEqual(reduced_vectors(equation, monomials, 5), [])


if __name__ == "__main__":
    unittest.main()
