import pathlib

import numpy as np
import pytest
from hypothesis import settings

from sigma_bounds import Matrix

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def a22():
    return Matrix.from_dense([[1.0, 2.0], [3.0, 4.0]])


def random_matrix(rng, max_dim=8, kinds=("nonneg", "signed", "complex"), sparse=None):
    """Random dense or CSR matrix with a random density in [0.1, 1]."""
    m, n = (int(x) for x in rng.integers(1, max_dim + 1, 2))
    kind = kinds[int(rng.integers(len(kinds)))]
    density = rng.uniform(0.1, 1.0)
    mask = rng.random((m, n)) < density
    if kind == "nonneg":
        vals = rng.random((m, n))
    elif kind == "signed":
        vals = rng.uniform(-1, 1, (m, n))
    else:
        vals = rng.uniform(-1, 1, (m, n)) + 1j * rng.uniform(-1, 1, (m, n))
    dense = np.where(mask, vals, 0)
    a = Matrix.from_dense(dense)
    if sparse is None:
        sparse = bool(rng.integers(2))
    return a.to_sparse() if sparse else a
