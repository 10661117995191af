"""
Semi-correlated Ricean channel synthesis for a uniform linear array.

A user's uplink channel is

    g = sqrt(K / (K + 1)) * h_los + sqrt(1 / (K + 1)) * R^(1/2) @ h_w

with ``h_w ~ CN(0, I_M)``. ``UserProfile`` bundles ``K``, ``h_los``, ``R``
(and its cached square root) and the large-scale gain.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from functools import cached_property, lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionError, DomainError, ParameterError
from .linalg import hermitian_eig, psd_sqrt

__all__ = [
    "ArrayGeometry",
    "UserProfile",
    "RngStream",
    "ricean_weights",
    "ula_los",
    "one_ring_lags",
    "quadrature_panels",
    "one_ring_covariance",
    "one_ring_factors",
    "one_ring_user",
    "sample_channel",
    "sample_channels",
    "build_channel_matrix",
    "build_channel_batch",
]

# Gauss-Legendre nodes per panel for the one-ring integral, and the largest
# phase excursion a single panel is allowed to cover.
QUADRATURE_ORDER = 129
PANEL_PHASE_SWING = 100.0


@dataclass(frozen=True)
class ArrayGeometry:
    """ULA with ``m`` elements spaced ``spacing_wavelengths`` wavelengths apart."""

    m: int
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"antenna count must be a positive integer, got {self.m}")
        if not (np.isfinite(self.spacing_wavelengths) and self.spacing_wavelengths > 0):
            raise ParameterError("antenna spacing must be positive")


@dataclass(frozen=True)
class RngStream:
    """
    Reproducible random stream identified by ``(seed, stream_id)``.

    Streams with different ids are statistically independent; the same pair
    always yields the same sequence.  Sub-streams are addressed by extending
    the key with ``child``.
    """

    seed: int
    stream_id: int = 0
    path: tuple = ()

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,) + self.path)
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, *key: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id, self.path + tuple(int(k) for k in key))


RngLike = Union[RngStream, np.random.Generator]


def _as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def ricean_weights(k_factor: float) -> tuple[float, float]:
    """Return ``(K/(K+1), 1/(K+1))``, with ``K = inf`` giving ``(1, 0)``."""
    if np.isnan(k_factor) or k_factor < 0:
        raise ParameterError(f"K-factor must be >= 0, got {k_factor}")
    if np.isinf(k_factor):
        return 1.0, 0.0
    return k_factor / (k_factor + 1.0), 1.0 / (k_factor + 1.0)


@dataclass(frozen=True)
class UserProfile:
    """
    Propagation state of one single-antenna user.

    ``los`` must have squared norm ``M`` and ``covariance`` trace ``M``;
    both are checked on construction.  ``sqrt`` optionally supplies a known
    square root of ``covariance`` so it is not recomputed.
    """

    k_factor: float
    los: np.ndarray
    covariance: np.ndarray
    large_scale: float = 1.0
    check: bool = field(default=True, repr=False, compare=False)
    sqrt: InitVar[Optional[np.ndarray]] = None

    def __post_init__(self, sqrt):
        los = np.asarray(self.los, dtype=complex).reshape(-1)
        cov = np.asarray(self.covariance, dtype=complex)
        object.__setattr__(self, "los", los)
        object.__setattr__(self, "covariance", cov)
        m = los.size
        if cov.shape != (m, m):
            raise DimensionError(f"covariance shape {cov.shape} does not match LoS length {m}")
        ricean_weights(self.k_factor)
        if not (np.isfinite(self.large_scale) and self.large_scale > 0):
            raise ParameterError("large-scale coefficient must be positive")
        if not (np.all(np.isfinite(los)) and np.all(np.isfinite(cov))):
            raise DomainError("user profile contains non-finite entries")
        if self.check:
            norm2 = np.vdot(los, los).real
            if abs(norm2 - m) > 1e-9 * m:
                raise DomainError(f"LoS squared norm {norm2} != M = {m}")
            tr = np.trace(cov).real
            if abs(tr - m) > 1e-6 * m:
                raise DomainError(f"covariance trace {tr} != M = {m}")
            if np.max(np.abs(cov - cov.conj().T)) > 1e-9 * max(1.0, np.max(np.abs(cov))):
                raise DomainError("covariance is not Hermitian")
        if sqrt is not None:
            self.__dict__["covariance_sqrt"] = np.asarray(sqrt, dtype=complex)

    @property
    def m(self) -> int:
        return self.los.size

    @cached_property
    def covariance_sqrt(self) -> np.ndarray:
        return psd_sqrt(self.covariance)

    @property
    def los_weight(self) -> float:
        return ricean_weights(self.k_factor)[0]

    @property
    def diffuse_weight(self) -> float:
        return ricean_weights(self.k_factor)[1]

    def mean(self) -> np.ndarray:
        """Expected channel vector ``sqrt(K/(K+1)) * h_los``."""
        return np.sqrt(self.los_weight) * self.los


def ula_los(geom: ArrayGeometry, theta: float) -> np.ndarray:
    """
    ULA steering vector with entries ``exp(-j 2 pi (d/lambda) m sin(theta))``.

    Every entry has unit modulus so the squared norm is ``M``.
    """
    m = np.arange(geom.m)
    phase = -2.0 * np.pi * geom.spacing_wavelengths * np.sin(theta) * m
    return np.exp(1j * phase)


@lru_cache(maxsize=8)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def quadrature_panels(geom: ArrayGeometry, delta: float) -> int:
    """Number of composite panels needed so each sees <= ~100 rad of phase swing."""
    # |d/dphi (2 pi (d/lambda) n sin phi)| <= 2 pi (d/lambda) (M - 1)
    swing = 2.0 * np.pi * geom.spacing_wavelengths * (geom.m - 1) * 2.0 * delta
    return max(1, int(np.ceil(swing / PANEL_PHASE_SWING)))


def one_ring_lags(
    geom: ArrayGeometry,
    delta: float,
    phi0: float,
    panels: int | None = None,
    order: int = QUADRATURE_ORDER,
) -> np.ndarray:
    """
    First row of the one-ring covariance: ``c[n] = R[0, n]`` for ``n = 0..M-1``.

    ``c[n]`` is the average of ``exp(j 2 pi (d/lambda) n sin(phi))`` over
    ``phi`` uniform on ``[phi0 - delta, phi0 + delta]``, evaluated with a
    composite Gauss-Legendre rule of ``order`` nodes per panel.
    """
    if not (np.isfinite(delta) and 0 < delta <= np.pi):
        raise ParameterError(f"angular spread must lie in (0, pi], got {delta}")
    if panels is None:
        panels = quadrature_panels(geom, delta)
    x, w = _gauss_legendre(order)
    edges = np.linspace(-1.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    phase = 2.0 * np.pi * geom.spacing_wavelengths * np.sin(phi0 + delta * t)
    # exp(j n phase) factored as exp(j r phase) * exp(j b phase) with
    # n = b + r, r < block, so only O(sqrt(M)) rows need a full exp.
    m = geom.m
    block = max(1, int(np.ceil(np.sqrt(m))))
    base = np.exp(1j * np.outer(np.arange(block), phase)) * wt
    c = np.empty(m, dtype=complex)
    for b in range(0, m, block):
        rows = min(block, m - b)
        c[b:b + rows] = base[:rows] @ np.exp(1j * b * phase)
    # Weights sum to 2 on [-1, 1]; halving gives the uniform average.
    return c / 2.0


def _toeplitz_from_row(c: np.ndarray) -> np.ndarray:
    m = c.size
    idx = np.arange(m)
    lag = idx[None, :] - idx[:, None]
    return np.where(lag >= 0, c[np.abs(lag)], np.conj(c[np.abs(lag)]))


def one_ring_covariance(geom: ArrayGeometry, delta: float, phi0: float, panels: int | None = None) -> np.ndarray:
    """
    One-ring spatial covariance matrix.

    Entry ``(i, j)`` is the average over ``phi ~ U[phi0 - delta, phi0 + delta]``
    of ``a_i(phi) * conj(a_j(phi))`` where ``a`` is :func:`ula_los`, i.e.
    ``exp(j 2 pi (d/lambda) (j - i) sin(phi))``.  The result is Hermitian
    Toeplitz with unit diagonal, projected onto the PSD cone.

    Parameters
    ----------
    geom : ArrayGeometry
    delta : float
        Angular spread in radians, ``0 < delta <= pi``.
    phi0 : float
        Nominal direction of arrival in radians.
    panels : int, optional
        Number of 129-node Gauss-Legendre panels; by default chosen from the
        array aperture and ``delta``.
    """
    return one_ring_factors(geom, delta, phi0, panels)[0]


def one_ring_factors(geom: ArrayGeometry, delta: float, phi0: float, panels: int | None = None):
    """
    :func:`one_ring_covariance` together with the eigensystem used to
    project it, so callers can reuse the factorization.
    """
    c = one_ring_lags(geom, delta, phi0, panels)
    es = hermitian_eig(_toeplitz_from_row(c)).clipped()
    r = es.reconstruct()
    r = 0.5 * (r + r.conj().T)
    # Projection moves the diagonal by rounding-level amounts only; restore
    # the exact unit diagonal implied by the integral.
    np.fill_diagonal(r, 1.0)
    return r, es


def one_ring_user(geom: ArrayGeometry, k_factor: float, delta: float, phi0: float, large_scale: float = 1.0) -> "UserProfile":
    """User with ULA LoS at ``phi0`` and a one-ring covariance centered there."""
    r, es = one_ring_factors(geom, delta, phi0)
    return UserProfile(float(k_factor), ula_los(geom, phi0), r, float(large_scale), sqrt=es.sqrt())


def _complex_normal(gen: np.random.Generator, shape) -> np.ndarray:
    re = gen.standard_normal(shape)
    im = gen.standard_normal(shape)
    return (re + 1j * im) * np.sqrt(0.5)


def sample_channels(user: UserProfile, rng: RngLike, n: int) -> np.ndarray:
    """Draw ``n`` independent channel vectors of ``user`` as an ``(M, n)`` array."""
    gen = _as_generator(rng)
    los_w, dif_w = user.los_weight, user.diffuse_weight
    h_w = _complex_normal(gen, (user.m, n))
    g = np.sqrt(dif_w) * (user.covariance_sqrt @ h_w) if dif_w > 0 else np.zeros_like(h_w)
    if los_w > 0:
        g += np.sqrt(los_w) * user.los[:, None]
    return g


def sample_channel(user: UserProfile, rng: RngLike) -> np.ndarray:
    """Draw one channel vector of ``user``."""
    return sample_channels(user, rng, 1)[:, 0]


def _common_m(users: Sequence[UserProfile]) -> int:
    if len(users) == 0:
        raise DimensionError("at least one user is required")
    ms = {u.m for u in users}
    if len(ms) != 1:
        raise DimensionError(f"users have different antenna counts: {sorted(ms)}")
    return ms.pop()


def build_channel_matrix(users: Sequence[UserProfile], rng: RngLike) -> np.ndarray:
    """
    Stack one independent channel draw per user into an ``(M, L)`` matrix.

    Columns are drawn in user order from a single generator.
    """
    m = _common_m(users)
    gen = _as_generator(rng)
    g = np.empty((m, len(users)), dtype=complex)
    for k, user in enumerate(users):
        g[:, k] = sample_channels(user, gen, 1)[:, 0]
    return g


def build_channel_batch(users: Sequence[UserProfile], rng: RngLike, n: int) -> np.ndarray:
    """``n`` independent channel matrices as an ``(n, M, L)`` array."""
    m = _common_m(users)
    gen = _as_generator(rng)
    out = np.empty((n, m, len(users)), dtype=complex)
    for k, user in enumerate(users):
        out[:, :, k] = sample_channels(user, gen, n).T
    return out
