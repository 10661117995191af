"""
User pairs that defeat favorable propagation.

Four constructions are provided:

1. ``EIGEN_ALIGNED``: user 2's LoS points along the principal eigenvector of
   user 1's covariance, so ``term1 / M^2`` tracks ``lambda_1 / M``.
2. ``SHARED_SPIKED_COVARIANCE``: both users share
   ``diag(M/2, M/(2M-2), ..., M/(2M-2))`` so ``tr(R^2) / M^2 -> 1/4``.
3. ``LOS_ALIGNED``: ``h_2 = exp(j alpha) h_1``.
4. ``LOS_NEAR_ALIGNED``: ULA directions with ``sin(theta_l) - sin(theta_k) =
   gamma / M^c``; for ``c = 1`` the normalized LoS overlap tends to a
   nonzero sinc-squared limit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import ArrayGeometry, RngLike, UserProfile, _as_generator, one_ring_covariance, one_ring_factors, ricean_weights, ula_los
from .errors import InfeasibleAngleError, ParameterError

__all__ = [
    "ScenarioKind",
    "ScenarioSpec",
    "build_scenario_1",
    "build_scenario_2",
    "build_scenario_3",
    "build_scenario_4",
    "build_scenario",
    "scenario_4_angle",
    "scenario_4_limit",
    "spiked_covariance",
    "dirichlet_overlap",
]


class ScenarioKind(str, enum.Enum):
    EIGEN_ALIGNED = "EigenAligned"
    SHARED_SPIKED_COVARIANCE = "SharedSpikedCovariance"
    LOS_ALIGNED = "LosAligned"
    LOS_NEAR_ALIGNED = "LosNearAligned"


@dataclass(frozen=True)
class ScenarioSpec:
    """
    Declarative description of an adversarial pair.

    Angles left as ``None`` are drawn uniformly on ``[0, 2 pi)`` by
    :func:`build_scenario`.  ``delta`` of ``None`` means identity
    covariances where the construction allows it.  ``second_delta`` gives
    user 2 of an EigenAligned pair a one-ring covariance at user 1's
    nominal angle instead of the identity.
    """

    kind: ScenarioKind
    m: int
    k_factors: tuple[float, float] = (1.0, 1.0)
    gamma: Optional[float] = None
    delta: Optional[float] = None
    alpha_phase: float = 0.0
    theta: Optional[float] = None
    exponent: float = 1.0
    spacing_wavelengths: float = 0.5
    second_delta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        if (self.gamma is not None) != (self.kind is ScenarioKind.LOS_NEAR_ALIGNED):
            raise ParameterError("gamma is required for LosNearAligned and only for it")
        if self.m < 2:
            raise ParameterError("scenarios need at least two antennas")
        if self.second_delta is not None and self.kind is not ScenarioKind.EIGEN_ALIGNED:
            raise ParameterError("second_delta applies to EigenAligned only")
        for k in self.k_factors:
            ricean_weights(k)


def _user(geom: ArrayGeometry, k_factor, los, delta, phi0) -> UserProfile:
    if delta is None:
        eye = np.eye(geom.m, dtype=complex)
        return UserProfile(float(k_factor), los, eye, sqrt=eye)
    r, es = one_ring_factors(geom, delta, phi0)
    return UserProfile(float(k_factor), los, r, sqrt=es.sqrt())


def build_scenario_1(m, delta, phi0, k_factors=(1.0, 1.0), spacing_wavelengths=0.5, covariance_2=None):
    """
    User 1 has a one-ring covariance centered at ``phi0`` and LoS at ``phi0``;
    user 2's LoS is ``sqrt(M) u_1`` with ``u_1`` the principal eigenvector of
    user 1's covariance.  User 2's covariance defaults to the identity.
    """
    geom = ArrayGeometry(m, spacing_wavelengths)
    r1, es1 = one_ring_factors(geom, delta, phi0)
    u1 = es1.eigenvectors[:, 0]
    los2 = u1 / np.linalg.norm(u1) * np.sqrt(m)
    user1 = UserProfile(float(k_factors[0]), ula_los(geom, phi0), r1, sqrt=es1.sqrt())
    if covariance_2 is None:
        eye = np.eye(m, dtype=complex)
        user2 = UserProfile(float(k_factors[1]), los2, eye, sqrt=eye)
    else:
        user2 = UserProfile(float(k_factors[1]), los2, np.asarray(covariance_2, dtype=complex))
    return user1, user2


def spiked_covariance(m: int) -> np.ndarray:
    """``diag(M/2, M/(2M-2), ..., M/(2M-2))``; trace ``M``, one eigenvalue ``M/2``."""
    if m < 2:
        raise ParameterError("spiked covariance needs M >= 2")
    d = np.full(m, m / (2.0 * m - 2.0))
    d[0] = m / 2.0
    return np.diag(d).astype(complex)


def build_scenario_2(m, k_factors=(1.0, 1.0), thetas=None, rng: RngLike | None = None, spacing_wavelengths=0.5):
    """
    Both users share :func:`spiked_covariance`.  LoS directions are taken from
    ``thetas`` or drawn uniformly on ``[0, 2 pi)`` from ``rng``.
    """
    geom = ArrayGeometry(m, spacing_wavelengths)
    if thetas is None:
        if rng is None:
            raise ParameterError("either thetas or rng must be given")
        thetas = _as_generator(rng).uniform(0.0, 2.0 * np.pi, size=2)
    r = spiked_covariance(m)
    s = np.sqrt(r)
    return tuple(UserProfile(float(k), ula_los(geom, t), r, sqrt=s) for k, t in zip(k_factors, thetas))


def build_scenario_3(m, theta, alpha_phase=0.0, k_factors=(1.0, 1.0), delta=None, spacing_wavelengths=0.5):
    """Aligned LoS: ``h_2 = exp(j alpha) h_1``; both covariances one-ring at ``theta``."""
    geom = ArrayGeometry(m, spacing_wavelengths)
    h1 = ula_los(geom, theta)
    user1 = _user(geom, k_factors[0], h1, delta, theta)
    user2 = UserProfile(float(k_factors[1]), np.exp(1j * alpha_phase) * h1, user1.covariance, sqrt=user1.covariance_sqrt)
    return user1, user2


def scenario_4_angle(theta_k: float, gamma: float, m: int, exponent: float = 1.0) -> float:
    """Angle ``theta_l`` with ``sin(theta_l) = sin(theta_k) + gamma / M^exponent``."""
    if not gamma > 0:
        raise ParameterError("gamma must be positive")
    s = np.sin(theta_k) + gamma / float(m) ** exponent
    if abs(s) > 1.0:
        raise InfeasibleAngleError(f"sin(theta_l) = {s:.6f} is outside [-1, 1]")
    return float(np.arcsin(s))


def build_scenario_4(m, theta_k, gamma, k_factors=(1.0, 1.0), delta=None, spacing_wavelengths=0.5, exponent=1.0):
    """ULA users whose direction sines differ by ``gamma / M^exponent``."""
    geom = ArrayGeometry(m, spacing_wavelengths)
    theta_l = scenario_4_angle(theta_k, gamma, m, exponent)
    return (
        _user(geom, k_factors[0], ula_los(geom, theta_k), delta, theta_k),
        _user(geom, k_factors[1], ula_los(geom, theta_l), delta, theta_l),
    )


def scenario_4_limit(gamma: float, spacing_wavelengths: float = 0.5, k_factors=(np.inf, np.inf)) -> float:
    """
    Large-``M`` limit of ``term3 / M^2`` for the near-aligned ULA pair.

    Equals ``w * (lambda / (2 pi gamma d))^2 * |exp(j 2 pi gamma d / lambda) - 1|^2``
    with ``w = K_k/(K_k+1) * K_l/(K_l+1)``, i.e. ``w * sinc^2`` of half the
    phase step.  ``gamma = 0`` returns the continuous extension ``w``.
    """
    if gamma < 0 or not np.isfinite(gamma):
        raise ParameterError("gamma must be a finite non-negative number")
    w = ricean_weights(k_factors[0])[0] * ricean_weights(k_factors[1])[0]
    half = np.pi * gamma * spacing_wavelengths
    if half == 0.0:
        return w
    return float(w * (np.sin(half) / half) ** 2)


def dirichlet_overlap(m: int, sine_gap: float, spacing_wavelengths: float = 0.5) -> float:
    """
    ``|a(theta_l)^H a(theta_k)|^2 / M^2`` for two ULA vectors whose
    direction sines differ by ``sine_gap``, in closed form.
    """
    x = np.pi * spacing_wavelengths * sine_gap
    den = m * np.sin(x)
    if den == 0.0:
        return 1.0
    return float((np.sin(m * x) / den) ** 2)


def build_scenario(spec: ScenarioSpec, rng: RngLike | None = None) -> tuple[UserProfile, UserProfile]:
    """Build the pair described by ``spec``, drawing missing angles from ``rng``."""
    gen = _as_generator(rng) if rng is not None else None

    def angle():
        if spec.theta is not None:
            return spec.theta
        if gen is None:
            raise ParameterError("a random stream is needed to draw the scenario angle")
        return float(gen.uniform(0.0, 2.0 * np.pi))

    d = spec.spacing_wavelengths
    if spec.kind is ScenarioKind.EIGEN_ALIGNED:
        if spec.delta is None:
            raise ParameterError("EigenAligned needs an angular spread")
        phi0 = angle()
        cov2 = None
        if spec.second_delta is not None:
            cov2 = one_ring_covariance(ArrayGeometry(spec.m, d), spec.second_delta, phi0)
        return build_scenario_1(spec.m, spec.delta, phi0, spec.k_factors, d, cov2)
    if spec.kind is ScenarioKind.SHARED_SPIKED_COVARIANCE:
        if gen is None:
            raise ParameterError("SharedSpikedCovariance draws its LoS directions and needs a random stream")
        return build_scenario_2(spec.m, spec.k_factors, rng=gen, spacing_wavelengths=d)
    if spec.kind is ScenarioKind.LOS_ALIGNED:
        return build_scenario_3(spec.m, angle(), spec.alpha_phase, spec.k_factors, spec.delta, d)
    if gen is None and spec.theta is None:
        raise ParameterError("a random stream is needed to draw the scenario angle")
    # Redraw until sin(theta_k) + gamma/M^c stays inside [-1, 1].
    for _ in range(1000):
        theta = angle()
        try:
            return build_scenario_4(spec.m, theta, spec.gamma, spec.k_factors, spec.delta, d, spec.exponent)
        except InfeasibleAngleError:
            if spec.theta is not None:
                raise
    raise InfeasibleAngleError("could not draw a feasible angle for LosNearAligned")
