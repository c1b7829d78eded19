import numpy as np
import pytest

from matpersp import linalg

BACKENDS = sorted(linalg._KERNELS)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return linalg.make_rng(12345)


def rand_unitary(n, seed):
    return linalg.sample_unitary(n, linalg.make_rng(seed))


def assert_close(actual, expected, tol):
    diff = np.max(np.abs(np.asarray(actual) - np.asarray(expected)))
    assert diff <= tol, f"max abs difference {diff:.3e} exceeds {tol:.1e}"


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call":
                lines += [v for k, v in getattr(rep, "user_properties", []) if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
