import numpy as np
import pytest
from scipy.linalg import expm

from eomech import DriveConfig, SystemParams, symplectic_form


@pytest.fixture
def params():
    return SystemParams.reference_device()


@pytest.fixture
def optimum(params):
    """Squeezing optimum: G- = kappa_a, G+/G- = 0.78, G_c = 0.6 kappa_a, T = 15 mK."""
    return DriveConfig.in_units_of_kappa(params, 1.0, 0.78, 0.6)


def random_symplectic(n_modes, rng, scale=0.5):
    H = rng.normal(scale=scale, size=(2 * n_modes, 2 * n_modes))
    H = 0.5 * (H + H.T)
    return expm(symplectic_form(n_modes) @ H)


def random_physical_cm(n_modes, rng, scale=0.5):
    """Williamson form S diag(nu) S^T with nu >= 0.5; returns (V, nu)."""
    nu = 0.5 + rng.exponential(0.7, size=n_modes)
    S = random_symplectic(n_modes, rng, scale)
    V = S @ np.diag(np.repeat(nu, 2)) @ S.T
    return 0.5 * (V + V.T), np.sort(nu)[::-1]


# verdict lines from the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split("|")[0])):
            terminalreporter.write_line(line)
