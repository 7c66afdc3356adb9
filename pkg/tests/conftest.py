import os
import sys

from hypothesis import settings

# Sampled algebra gets slow on unlucky draws; no per-example deadline.
settings.register_profile("eqfields", deadline=None, max_examples=50)
settings.load_profile(os.getenv("EQF_HYPOTHESIS_PROFILE", "eqfields"))


def pytest_sessionstart(session):
    """Puts the repository root on sys.path so that `src` and `cli` import."""
    root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
    if root not in sys.path:
        sys.path.insert(0, root)
