import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synth import build_corpus  # noqa: E402


@pytest.fixture(scope="session")
def synthetic_corpus():
    return build_corpus(n_threads=20, seed=7)
