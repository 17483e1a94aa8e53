import numpy as np
import pytest

from kramers_lab import build_modes, enumerate_basis

# weight that makes the mode coupling exactly 1 for |k| = 1
UNIT_WEIGHT = 2 * (2 * np.pi) ** 3

ACCEPTANCE_LINES = []


def unit_coupling_weight(k, scale=1.0):
    """Weight giving coupling sqrt(scale) for wave vector k."""
    return 2 * (2 * np.pi) ** 3 * np.linalg.norm(k) * scale


def random_modes(rng, M):
    """M modes from ceil(M/2) random k-points with O(1) couplings."""
    nk = (M + 1) // 2
    pts = []
    for _ in range(nk):
        d = rng.standard_normal(3)
        d /= np.linalg.norm(d)
        k = d * rng.uniform(0.5, 2.0)
        pts.append((k, unit_coupling_weight(k, rng.uniform(0.5, 1.5))))
    return build_modes(pts).take(M)


def random_config(rng, M_choices=(1, 2, 3), N_choices=(1, 2, 3), e_range=(0.0, 1.0)):
    M = int(rng.choice(M_choices))
    n_max = int(rng.choice(N_choices))
    e = float(rng.uniform(*e_range))
    d = rng.standard_normal(3)
    P = d / np.linalg.norm(d) * rng.uniform(0, 2.0)
    modes = random_modes(rng, M)
    return enumerate_basis(M, n_max), modes, P, e


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def single_mode():
    """One mode, k = z, coupling 1."""
    return build_modes([((0.0, 0.0, 1.0), UNIT_WEIGHT)]).take(1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
