import numpy as np
import pytest

from qladder import ModelParams, build_hamiltonian, diagonalize, solve_spectrum

# flagship parameter set used across the suite (the beta05 preset at a=20)
BETA05_A20 = ModelParams(v=0.16, delta=1.0, a=20.0)


@pytest.fixture(scope="session")
def spectrum_a20():
    return solve_spectrum(BETA05_A20)


@pytest.fixture(scope="session")
def oracle_300():
    """Dense 602x602 eigendecomposition shared by the expensive checks."""
    d = build_hamiltonian(BETA05_A20, 300)
    lam, q = diagonalize(d)
    return d, lam, q


@pytest.fixture()
def rng():
    return np.random.default_rng(747)
