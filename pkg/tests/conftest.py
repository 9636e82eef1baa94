import numpy as np
import pytest

from sicpovm.basis import gell_mann_basis, pauli_basis
from sicpovm.sic import construct_sic, make_family

R3 = np.sqrt(3)

# rank-one SIC POVM obtained from the normalized Pauli basis at t = t1
RANK1_D2_SIC = np.array(
    [
        [[3 * R3 + 1, -5 + 1j], [-5 - 1j, 3 * R3 - 1]],
        [[3 * R3 + 1, 1 - 5j], [1 + 5j, 3 * R3 - 1]],
        [[3 * R3 - 5, 1 + 1j], [1 - 1j, 3 * R3 + 5]],
        [[3 * (R3 + 1), 3 * (1 + 1j)], [3 * (1 - 1j), 3 * (R3 - 1)]],
    ]
) / (12 * R3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def pauli_family():
    return make_family(pauli_basis())


@pytest.fixture(scope="session")
def pauli_sic(pauli_family):
    return construct_sic(pauli_family, pauli_family.t1)


@pytest.fixture(scope="session")
def gm3_family():
    return make_family(gell_mann_basis(3))


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(LINES):
            terminalreporter.write_line(LINES[k])
