import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("csquant", max_examples=100, deadline=None, derandomize=True)
settings.load_profile("csquant")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (a + a.conj().T)


ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record ``(criterion, ok, detail)``; the lines are printed in the terminal summary."""

    def record(name: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
        print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{name:<34} {'PASS' if ok else 'FAIL'}  {detail}")
