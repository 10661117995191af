import numpy as np
import pytest

from ricean_mimo.channel import (
    ArrayGeometry,
    RngStream,
    UserProfile,
    build_channel_batch,
    build_channel_matrix,
    one_ring_covariance,
    one_ring_lags,
    quadrature_panels,
    ricean_weights,
    sample_channel,
    sample_channels,
    ula_los,
)
from ricean_mimo.errors import DimensionError, DomainError, ParameterError
from ricean_mimo.linalg import hermitian_eig

from conftest import iid_user, one_ring_user


# -- steering vectors -------------------------------------------------------------


def test_los_broadside_is_all_ones():
    np.testing.assert_allclose(ula_los(ArrayGeometry(7), 0.0), np.ones(7))


def test_los_endfire_two_elements():
    np.testing.assert_allclose(ula_los(ArrayGeometry(2, 0.5), np.pi / 2), [1.0, -1.0], atol=1e-15)


def test_los_entry_matches_scalar_evaluation():
    h = ula_los(ArrayGeometry(64), 0.3)
    assert np.isclose(np.vdot(h, h).real, 64.0, rtol=0, atol=1e-12)
    expected = complex(np.cos(-2 * np.pi * 0.5 * 5 * np.sin(0.3)), np.sin(-2 * np.pi * 0.5 * 5 * np.sin(0.3)))
    assert abs(h[5] - expected) < 1e-14
    np.testing.assert_allclose(np.abs(h), 1.0, atol=1e-15)


def test_geometry_validation():
    with pytest.raises(ParameterError):
        ArrayGeometry(0)
    with pytest.raises(ParameterError):
        ArrayGeometry(4, -0.5)


# -- one-ring covariance ----------------------------------------------------------


@pytest.mark.parametrize("m,delta_deg,phi0", [(8, 5, 0.1), (32, 60, 2.0), (100, 10, -1.2), (64, 180, 0.0)])
def test_one_ring_structure(m, delta_deg, phi0):
    r = one_ring_covariance(ArrayGeometry(m), np.deg2rad(delta_deg), phi0)
    np.testing.assert_allclose(np.diag(r), 1.0, atol=1e-12)
    assert np.max(np.abs(r - r.conj().T)) < 1e-12
    # Toeplitz: every diagonal constant
    for lag in range(1, m):
        d = np.diag(r, lag)
        assert np.max(np.abs(d - d[0])) < 1e-12
    assert hermitian_eig(r).eigenvalues[-1] >= -1e-12


def test_one_ring_wide_spread_large_array_trace():
    rng = np.random.default_rng(1)
    phi0 = rng.uniform(0, 2 * np.pi)
    r = one_ring_covariance(ArrayGeometry(100), np.deg2rad(10), phi0)
    assert abs(np.trace(r).real - 100) <= 1e-6


@pytest.mark.parametrize("m,delta_deg", [(16, 10), (100, 10), (100, 60), (512, 60), (256, 180)])
def test_one_ring_quadrature_self_check(m, delta_deg):
    geom = ArrayGeometry(m)
    delta = np.deg2rad(delta_deg)
    p = quadrature_panels(geom, delta)
    a = one_ring_lags(geom, delta, 0.9)
    b = one_ring_lags(geom, delta, 0.9, panels=2 * p)
    assert np.max(np.abs(a - b)) <= 1e-10


def test_one_ring_against_direct_integration():
    # Independent check: adaptive scalar quadrature of the defining integral.
    from scipy.integrate import quad

    geom, delta, phi0 = ArrayGeometry(12), np.deg2rad(25), 0.6
    c = one_ring_lags(geom, delta, phi0)
    for n in (1, 5, 11):
        f = lambda phi, part: getattr(np.exp(2j * np.pi * 0.5 * n * np.sin(phi)), part)
        re = quad(f, phi0 - delta, phi0 + delta, args=("real",), epsabs=1e-13)[0]
        im = quad(f, phi0 - delta, phi0 + delta, args=("imag",), epsabs=1e-13)[0]
        assert abs(c[n] - (re + 1j * im) / (2 * delta)) < 1e-11


def test_one_ring_small_spread_is_rank_one_los():
    geom, phi0 = ArrayGeometry(64), 0.7
    r = one_ring_covariance(geom, 1e-6, phi0)
    a = ula_los(geom, phi0)
    np.testing.assert_allclose(r, np.outer(a, a.conj()), atol=1e-8)
    assert abs(hermitian_eig(r).eigenvalues[0] - 64) < 1e-6


def test_one_ring_spread_bounds():
    geom = ArrayGeometry(8)
    with pytest.raises(ParameterError):
        one_ring_covariance(geom, 0.0, 0.0)
    with pytest.raises(ParameterError):
        one_ring_covariance(geom, 3.2, 0.0)


# -- user profiles --------------------------------------------------------------------


def test_user_invariants_checked():
    m = 4
    with pytest.raises(DomainError):
        UserProfile(1.0, 2 * np.ones(m), np.eye(m))
    with pytest.raises(DomainError):
        UserProfile(1.0, np.ones(m), 2 * np.eye(m))
    with pytest.raises(DimensionError):
        UserProfile(1.0, np.ones(m), np.eye(m + 1))
    with pytest.raises(ParameterError):
        UserProfile(-1.0, np.ones(m), np.eye(m))
    with pytest.raises(ParameterError):
        UserProfile(1.0, np.ones(m), np.eye(m), large_scale=0.0)


def test_ricean_weights_limits():
    assert ricean_weights(0.0) == (0.0, 1.0)
    assert ricean_weights(1.0) == (0.5, 0.5)
    assert ricean_weights(np.inf) == (1.0, 0.0)


# -- sampling --------------------------------------------------------------------------


def test_stream_reproducible():
    user = one_ring_user(16, 1.0, 20, 0.3)
    a = sample_channel(user, RngStream(7, 3))
    b = sample_channel(user, RngStream(7, 3))
    c = sample_channel(user, RngStream(7, 4))
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)


def test_large_k_returns_los():
    user = one_ring_user(16, 1e12, 20, 0.3)
    g = sample_channel(user, RngStream(0))
    assert np.linalg.norm(g - user.los) / np.linalg.norm(user.los) <= 1e-5


def test_rayleigh_power():
    user = iid_user(64)
    g = sample_channels(user, RngStream(11), 100_000)
    ratio = np.mean(np.sum(np.abs(g) ** 2, axis=0)) / 64
    assert 0.99 <= ratio <= 1.01


def test_sample_mean_is_los_component():
    user = one_ring_user(8, 1.0, 30, 1.1)
    n = 100_000
    g = sample_channels(user, RngStream(5), n)
    mean = g.mean(axis=1)
    target = np.sqrt(0.5) * user.los
    # diffuse part has complex variance R_ii / (K + 1) = 1/2, i.e. 1/4 per real component
    se = np.sqrt(0.25 / n)
    assert np.all(np.abs(mean.real - target.real) <= 3 * se)
    assert np.all(np.abs(mean.imag - target.imag) <= 3 * se)


def test_empirical_covariance_matches_model():
    k = 2.0
    user = one_ring_user(6, k, 40, 0.5)
    n = 100_000
    g = sample_channels(user, RngStream(9), n)
    x = np.sqrt(k + 1) * (g - user.mean()[:, None])
    emp = x @ x.conj().T / n
    # Var of x_i conj(x_j) is R_ii R_jj = 1 for complex Gaussian, so SE = 1/sqrt(n)
    se = 1.0 / np.sqrt(n)
    assert np.max(np.abs(emp - user.covariance)) <= 4 * se * np.sqrt(2)


def test_channel_matrix_single_column_matches_sample():
    user = one_ring_user(10, 0.5, 15, -0.4)
    g = build_channel_matrix([user], RngStream(3, 1))
    np.testing.assert_array_equal(g[:, 0], sample_channel(user, RngStream(3, 1)))


def test_channel_matrix_pure_los_columns():
    u1 = one_ring_user(10, np.inf, 15, 0.2)
    u2 = one_ring_user(10, np.inf, 15, 1.4)
    g = build_channel_matrix([u1, u2], RngStream(0))
    np.testing.assert_allclose(g, np.column_stack([u1.los, u2.los]))


def test_channel_matrix_dimension_mismatch():
    with pytest.raises(DimensionError):
        build_channel_matrix([iid_user(4), iid_user(5)], RngStream(0))


def test_columns_uncorrelated_iid():
    m, l, n = 100, 10, 10_000
    users = [iid_user(m, 0.0, t) for t in np.linspace(0, 1, l)]
    g = build_channel_batch(users, RngStream(2), n)
    gram = np.einsum("nmk,nml->kl", g.conj(), g) / (n * m)
    # each entry of G^H G / M has variance 1/M per trial
    assert np.max(np.abs(gram - np.eye(l))) <= 5 / np.sqrt(m * n)
