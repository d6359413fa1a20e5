import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fibcoal.classical import classical_signature, classical_structure  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def sig():
    return classical_signature(("a", "b"))


@pytest.fixture(scope="session")
def st():
    return classical_structure(("a", "b"))


@pytest.fixture(scope="session")
def models_dir():
    return ROOT / "models"


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.line(n))
