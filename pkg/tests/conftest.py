import numpy as np
import pytest

from telesep.qstate import DensityMatrix, hermitian_eigenvalues


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def assert_density_invariants(rho: DensityMatrix):
    m = rho.mat
    assert np.max(np.abs(m - m.conj().T)) <= 1e-12
    assert abs(np.trace(m) - 1) <= 1e-12
    assert hermitian_eigenvalues(m)[0] >= -1e-9


def ket(*amps):
    v = np.array(amps, dtype=complex)
    return v / np.linalg.norm(v)


def proj(*amps):
    v = ket(*amps)
    return np.outer(v, v.conj())


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
