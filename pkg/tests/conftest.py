import numpy as np
import pytest

from ricean_mimo.channel import ArrayGeometry, UserProfile, one_ring_covariance, ula_los


def random_hermitian(rng, m):
    a = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return 0.5 * (a + a.conj().T)


def random_psd(rng, m, rank=None):
    rank = m if rank is None else rank
    a = rng.standard_normal((m, rank)) + 1j * rng.standard_normal((m, rank))
    r = a @ a.conj().T
    return r * (m / np.trace(r).real)


def random_los(rng, m):
    """Unit-modulus vector with random phases (squared norm M)."""
    return np.exp(2j * np.pi * rng.random(m))


def one_ring_user(m, k, delta_deg, phi0, large_scale=1.0):
    geom = ArrayGeometry(m)
    return UserProfile(k, ula_los(geom, phi0), one_ring_covariance(geom, np.deg2rad(delta_deg), phi0), large_scale)


def iid_user(m, k=0.0, theta=0.0):
    return UserProfile(k, ula_los(ArrayGeometry(m), theta), np.eye(m, dtype=complex))


@pytest.fixture
def rng():
    return np.random.default_rng(20180716)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for n, m in sys.modules.items() if n.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
