import numpy as np
import pytest

from minrank.polymatrix import random_instance

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def record():
    def _record(name: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[name] = (bool(ok), detail)

    return _record


@pytest.fixture
def classical_333():
    return random_instance("classical", 3, 3, 1, 4, p=101, rng=7)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split(".")[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
