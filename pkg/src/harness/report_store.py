import json
import logging
import os
from typing import Dict, List

from src.utils import config

logger = logging.getLogger(__name__)


def dumps(report: Dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class ReportStore:
    """
    Keeps JSON reports as ``<name>.json`` files in one directory. The same
    report always serializes to the same bytes.
    """

    def __init__(self, directory: str = config.REPORT_DIR):
        self.directory = directory

    def path(self, name: str) -> str:
        return os.path.join(self.directory, f"{name}.json")

    def save(self, name: str, report: Dict) -> str:
        """Writes a report and returns its path."""
        if report.get("schema") != config.REPORT_SCHEMA:
            raise ValueError(f"reports carry the schema '{config.REPORT_SCHEMA}'")
        os.makedirs(self.directory, exist_ok=True)
        path = self.path(name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(dumps(report))
        logger.info("report saved to %s", path)
        return path

    def load(self, name: str) -> Dict:
        with open(self.path(name), "r", encoding="utf-8") as f:
            return json.load(f)

    def names(self) -> List[str]:
        if not os.path.isdir(self.directory):
            return []
        return sorted(f[:-len(".json")] for f in os.listdir(self.directory) if f.endswith(".json"))
