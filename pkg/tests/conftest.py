import json
from pathlib import Path

import pytest

TESTDATA = Path(__file__).parent / "testdata"


@pytest.fixture(scope="session")
def testdata():
    def load(name: str) -> dict:
        return json.loads((TESTDATA / name).read_text())
    return load
