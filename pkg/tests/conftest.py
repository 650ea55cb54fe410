from __future__ import annotations

from pathlib import Path

import pytest

from astrack.fingerprint import fingerprint_source
from astrack.labels import default_table

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def table():
    return default_table()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def webpack_fps(table):
    return [
        fingerprint_source(
            (FIXTURES / f"webpack_{i}.js").read_text(), table, f"webpack_{i}")
        for i in range(1, 5)
    ]
