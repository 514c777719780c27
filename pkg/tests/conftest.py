import numpy as np
import pytest

from effham import MultiToneHamiltonian, frequency_report


def random_hermitian(rng, dim, scale=1.0):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (m + m.conj().T) / 2
    return scale * h / np.linalg.norm(h)


def random_generic(rng, dim, scale=1.0):
    h = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * h / np.linalg.norm(h)


def random_model(rng, max_dim=6, max_tones=3, coupling=0.3, kind="generic",
                 require_report_pass=True):
    """Random multi-tone model, resampled until the frequency report passes."""
    make = random_hermitian if kind == "hermitian" else random_generic
    while True:
        dim = int(rng.integers(2, max_dim + 1))
        n_tones = int(rng.integers(1, max_tones + 1))
        tones = [
            (make(rng, dim, coupling * rng.uniform(0.3, 1.0)),
             float(rng.uniform(0.5, 8.0)))
            for _ in range(n_tones)
        ]
        H = MultiToneHamiltonian(tones)
        if not require_report_pass or frequency_report(H).passes:
            return H


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
