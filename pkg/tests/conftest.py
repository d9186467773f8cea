import numpy as np
import pytest

from vcslab import kernels
from vcslab.disc import sample_uniform


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    previous = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def seeded_tuples(count, seed, n_values=(2, 3, 4, 5, 6)):
    out = []
    for i in range(count):
        n = n_values[i % len(n_values)]
        out.extend(sample_uniform(n, 1, seed + i))
    return out


# criterion number -> PASS/FAIL line, filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
