import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

#: criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  [{key}] {title}: {detail}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240601)
