import os
import shutil
import tempfile
import unittest

from src.harness.report_store import ReportStore, dumps
from src.utils import config


class TestReportStore(unittest.TestCase):

    def setUp(self):
        self.test_dir = tempfile.mkdtemp(prefix="eqf_reports_")
        self.store = ReportStore(os.path.join(self.test_dir, "reports"))
        self.report = {"schema": config.REPORT_SCHEMA, "kind": "eval", "value": True, "oracle": "pair:k=1"}

    def tearDown(self):
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_save_and_load(self):
        self.assertEqual(self.store.names(), [])
        path = self.store.save("first", self.report)
        self.assertEqual(path, self.store.path("first"))
        self.assertEqual(self.store.load("first"), self.report)
        self.assertEqual(self.store.names(), ["first"])

    def test_bytes_are_canonical(self):
        reordered = dict(reversed(list(self.report.items())))
        self.assertEqual(dumps(reordered), dumps(self.report))
        self.assertTrue(dumps(self.report).endswith("}\n"))
        with open(self.store.save("canonical", reordered), "r", encoding="utf-8") as f:
            self.assertEqual(f.read(), dumps(self.report))

    def test_schema_is_required(self):
        with self.assertRaises(ValueError):
            self.store.save("bad", {"kind": "eval"})


if __name__ == "__main__":
    unittest.main()
