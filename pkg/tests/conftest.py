from __future__ import annotations

import numpy as np
import pytest

from varmediation import compute_gir, identify_shock, impulse_response
from varmediation.reference import reference_model
from varmediation.var import VarModel, spectral_radius


def random_stable_var(rng: np.random.Generator, K: int, p: int, radius: float = 0.9) -> VarModel:
    """Random VAR rescaled so its companion spectral radius equals ``radius``.

    Multiplying Phi_j by c**j multiplies every companion eigenvalue by c.
    """
    phi = rng.normal(scale=0.5, size=(p, K, K))
    rho = spectral_radius(VarModel(phi, np.eye(K), ()))
    c = radius / rho
    phi = phi * (c ** np.arange(1, p + 1))[:, None, None]
    A = rng.normal(size=(K, K))
    sigma = A @ A.T + 0.5 * np.eye(K)
    return VarModel(phi, sigma, tuple(f"v{i}" for i in range(K)))


def random_models(seed: int, count: int, max_K: int = 4, max_p: int = 6):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        K = int(rng.integers(1, max_K + 1))
        p = int(rng.integers(1, max_p + 1))
        yield random_stable_var(rng, K, p, radius=float(rng.uniform(0.3, 0.97)))


@pytest.fixture(scope="session")
def ref_model():
    return reference_model()


@pytest.fixture(scope="session")
def ref_gir(ref_model):
    return compute_gir(ref_model, 40)


@pytest.fixture(scope="session")
def ref_irf(ref_model, ref_gir):
    return impulse_response(ref_gir, identify_shock(ref_model, "X", "unit"), 36)


@pytest.fixture(scope="session")
def ref_sim(ref_model):
    from varmediation import simulate_var

    return simulate_var(ref_model, 200_000, seed=2024)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
