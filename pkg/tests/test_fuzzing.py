import os
import shutil
import tempfile
import unittest

from src.harness.fuzzing import fuzz_equivalence, load_corpus, target_oracle
from src.oracles.dcf_oracle import DcfOracle
from src.oracles.scf_oracle import ScfOracle
from src.passes.rewrite_pipeline import get_pass
from src.utils import config
from src.utils.errors import OracleMismatchError

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


class TestFuzzing(unittest.TestCase):
    """Seeded equivalence checks over small corpora."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp(prefix="eqf_fuzz_")

    def tearDown(self):
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_corpus_keys(self):
        keys = [key for key, _ in load_corpus(CORPUS)]
        self.assertIn("scf/pdep_two", keys)
        self.assertIn("pair/tame_simple", keys)
        self.assertEqual(keys, sorted(keys))

    def test_identity_skips_other_characteristics(self):
        corpus = load_corpus(os.path.join(CORPUS, "scf"))
        report = fuzz_equivalence("identity", corpus, ScfOracle(2), trials=2, seed=3)
        self.assertEqual(report["schema"], config.REPORT_SCHEMA)
        self.assertEqual(report["kind"], "fuzz")
        self.assertEqual(report["skipped"], 5)
        self.assertEqual(report["checked"] + report["skipped"], len(corpus))
        self.assertEqual(report["disagreements"], 0)
        skipped = [e for e in report["formulas"] if e["status"] == "skipped"]
        self.assertIn("pdep_three", [e["id"] for e in skipped])
        self.assertTrue(all(e["reason"] for e in skipped))

    def test_equal_seeds_give_equal_reports(self):
        corpus = load_corpus(os.path.join(CORPUS, "scf"))[:4]
        first = fuzz_equivalence("identity", corpus, ScfOracle(2), trials=2, seed=9)
        second = fuzz_equivalence("identity", corpus, ScfOracle(2), trials=2, seed=9)
        self.assertEqual(first, second)

    def test_lambda_elimination_agrees(self):
        shutil.copy(os.path.join(CORPUS, "scf", "lambda_term.eqf"), self.test_dir)
        report = fuzz_equivalence("lambda-bk", load_corpus(self.test_dir), ScfOracle(2), trials=4, seed=1)
        self.assertEqual(report["checked"], 1)
        self.assertEqual(report["disagreements"], 0)
        entry = report["formulas"][0]
        self.assertEqual(entry["id"], "lambda_term")
        self.assertEqual(entry["agreements"], 4)

    def test_target_oracles(self):
        self.assertIsInstance(target_oracle(get_pass("lambda-to-delta"), ScfOracle(2)), DcfOracle)
        oracle = ScfOracle(2)
        self.assertIs(target_oracle(get_pass("lambda-bk"), oracle), oracle)
        with self.assertRaises(OracleMismatchError):
            target_oracle(get_pass("lambda-to-delta"), ScfOracle(2, 2))


if __name__ == "__main__":
    unittest.main()
