import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture
def table_sentence():
    from bln.table import read_corpus

    def load(n):
        return read_corpus(FIXTURES / f"table{n}.bln").sentences[0]

    return load
