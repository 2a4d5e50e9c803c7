import numpy as np
import pytest

from kpzlab.rand import SeedSpec


@pytest.fixture
def rng():
    return SeedSpec(12345, 0).generator()


def stream(seed, sid=0):
    return SeedSpec(seed, sid).generator()


@pytest.fixture
def make_rng():
    return stream


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


np.set_printoptions(precision=12)


_CRITERIA = {}


@pytest.fixture(scope="session")
def criterion():
    """Record one printed PASS/FAIL line per acceptance criterion."""

    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'} | {detail}"
        _CRITERIA.setdefault(number, []).append(line)
        print("\n" + line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        for line in _CRITERIA[number]:
            terminalreporter.write_line(line)
