"""
Mean inter-user interference under maximum-ratio processing.

The mean of ``T_kl = |g_k^H g_l|^2`` splits into four closed-form terms:

* ``term1`` -- LoS of user ``l`` seen through the covariance of user ``k``
* ``term2`` -- overlap of the two covariances, ``tr(R_l R_k)``
* ``term3`` -- overlap of the two LoS vectors
* ``term4`` -- LoS of user ``k`` seen through the covariance of user ``l``

Normalizing each by ``M^2`` gives the quantities whose large-``M`` limits
decide whether favorable propagation holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .channel import UserProfile, ricean_weights
from .errors import DimensionError, NotPSDError, ParameterError
from .linalg import PSD_TOLERANCE, hermitian_eig

__all__ = [
    "InterferenceBreakdown",
    "AlignmentProfile",
    "ScalingReport",
    "mean_interference",
    "instantaneous_interference",
    "ritz_bounds",
    "alignment_profile",
    "trace_product_bound",
    "trace_product",
    "quadratic_form",
    "scaling_report",
    "fit_loglog_slope",
    "classify_slope",
    "VANISHING",
    "NON_VANISHING",
    "INCONCLUSIVE",
]

VANISHING = "vanishing"
NON_VANISHING = "non-vanishing"
INCONCLUSIVE = "inconclusive"

# Normalized metrics at or below this are treated as identically zero in
# log-log fits (orthogonal ULA vectors only reach ~1e-30 in floating point).
ZERO_FLOOR = 1e-20


@dataclass(frozen=True)
class InterferenceBreakdown:
    term1: float
    term2: float
    term3: float
    term4: float

    @property
    def total(self) -> float:
        return self.term1 + self.term2 + self.term3 + self.term4

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.term1, self.term2, self.term3, self.term4)

    def normalized(self, m: int) -> "InterferenceBreakdown":
        """Every term divided by ``M^2``."""
        s = 1.0 / float(m) ** 2
        return InterferenceBreakdown(*(t * s for t in self.as_tuple()))


@dataclass(frozen=True)
class AlignmentProfile:
    """Coordinates of ``h_los / sqrt(M)`` in the eigenbasis of a covariance."""

    betas: np.ndarray
    eigenvalues: np.ndarray

    def normalized_quadratic_form(self) -> float:
        """``(1/M) sum_i |beta_i|^2 lambda_i``."""
        return float(np.sum(np.abs(self.betas) ** 2 * self.eigenvalues) / self.betas.size)


@dataclass
class ScalingReport:
    """
    Normalized C1/C2/C3 metrics over a sweep of antenna counts.

    ``c1`` is ``h_l^H R_k h_l / M^2``, ``c2`` is ``tr(R_l R_k) / M^2`` and
    ``c3`` is ``|h_l^H h_k|^2 / M^2``.  ``slopes`` holds the log-log slope
    of each, fitted on the upper half of the grid; ``-inf`` marks a metric
    that is identically zero there.
    """

    m_values: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    slopes: tuple[float, float, float] = field(default=(np.nan, np.nan, np.nan))

    @property
    def metrics(self) -> dict[str, np.ndarray]:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3}

    def classification(self) -> dict[str, str]:
        return {name: classify_slope(s) for name, s in zip(("c1", "c2", "c3"), self.slopes)}


def _same_length(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")


def quadratic_form(x: np.ndarray, r: np.ndarray) -> float:
    """``x^H R x`` as a real number (``R`` Hermitian)."""
    return float(np.vdot(x, r @ x).real)


def trace_product(r_a: np.ndarray, r_b: np.ndarray) -> float:
    """``tr(R_a R_b)`` for Hermitian ``R_a``, ``R_b`` without forming the product."""
    if r_a.shape != r_b.shape:
        raise DimensionError(f"shape mismatch: {r_a.shape} vs {r_b.shape}")
    # tr(A B) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B
    return float(np.vdot(r_b, r_a).real)


def mean_interference(user_k: UserProfile, user_l: UserProfile) -> InterferenceBreakdown:
    """
    Closed-form ``E|g_k^H g_l|^2`` split into its four terms.

    Large-scale gains are not applied.
    """
    if user_k.m != user_l.m:
        raise DimensionError(f"antenna counts differ: {user_k.m} vs {user_l.m}")
    a_k, b_k = ricean_weights(user_k.k_factor)
    a_l, b_l = ricean_weights(user_l.k_factor)
    h_k, h_l = user_k.los, user_l.los
    r_k, r_l = user_k.covariance, user_l.covariance

    term1 = a_l * b_k * quadratic_form(h_l, r_k) if a_l * b_k else 0.0
    term2 = b_k * b_l * trace_product(r_l, r_k) if b_k * b_l else 0.0
    term3 = a_k * a_l * abs(np.vdot(h_l, h_k)) ** 2 if a_k * a_l else 0.0
    term4 = a_k * b_l * quadratic_form(h_k, r_l) if a_k * b_l else 0.0
    # Quadratic forms of PSD matrices are >= 0; clip rounding noise.
    return InterferenceBreakdown(max(term1, 0.0), max(term2, 0.0), term3, max(term4, 0.0))


def instantaneous_interference(g_k, g_l) -> float:
    """``|g_k^H g_l|^2``."""
    g_k = np.asarray(g_k, dtype=complex)
    g_l = np.asarray(g_l, dtype=complex)
    _same_length(g_k, g_l)
    return float(abs(np.vdot(g_k, g_l)) ** 2)


def _psd_eig(r):
    es = hermitian_eig(r)
    w = es.eigenvalues
    if w[-1] < -PSD_TOLERANCE * max(abs(w[0]), 1e-300):
        raise NotPSDError(f"smallest eigenvalue {w[-1]:.3e} is negative")
    return es


def ritz_bounds(h_bar, r) -> tuple[float, float]:
    """
    Rayleigh-Ritz bounds ``(lambda_min / M, lambda_max / M)``.

    For ``||h_bar||^2 = M`` these sandwich ``h_bar^H R h_bar / M^2``; when
    ``tr(R) = M`` the upper bound is at most one.
    """
    h_bar = np.asarray(h_bar, dtype=complex)
    es = _psd_eig(r)
    m = h_bar.size
    if es.eigenvalues.size != m:
        raise DimensionError("LoS vector and covariance sizes differ")
    return float(es.eigenvalues[-1] / m), float(es.eigenvalues[0] / m)


def alignment_profile(h_bar, r) -> AlignmentProfile:
    """Expansion coefficients ``beta_i = u_i^H h_bar / sqrt(M)`` in the eigenbasis of ``r``."""
    h_bar = np.asarray(h_bar, dtype=complex)
    es = _psd_eig(r)
    if es.eigenvalues.size != h_bar.size:
        raise DimensionError("LoS vector and covariance sizes differ")
    betas = es.eigenvectors.conj().T @ h_bar / np.sqrt(h_bar.size)
    return AlignmentProfile(betas, es.eigenvalues)


def trace_product_bound(r_l, r_k) -> tuple[float, float]:
    """Return ``(tr(R_l R_k) / M^2, lambda_max(R_l) / M)``."""
    r_l = np.asarray(r_l, dtype=complex)
    r_k = np.asarray(r_k, dtype=complex)
    m = r_l.shape[0]
    value = trace_product(r_l, r_k) / m**2
    bound = hermitian_eig(r_l).eigenvalues[0] / m
    return max(value, 0.0), float(bound)


def fit_loglog_slope(m_values, metric) -> float:
    """
    Least-squares slope of ``log(metric)`` against ``log(M)``.

    Points at or below ``ZERO_FLOOR`` are dropped; if fewer than two points
    remain the metric is considered identically vanishing and ``-inf`` is
    returned.
    """
    m_values = np.asarray(m_values, dtype=float)
    metric = np.asarray(metric, dtype=float)
    keep = metric > ZERO_FLOOR
    if np.count_nonzero(keep) < 2:
        return -np.inf
    slope, _ = np.polyfit(np.log(m_values[keep]), np.log(metric[keep]), 1)
    return float(slope)


def classify_slope(slope: float) -> str:
    if slope <= -0.5:
        return VANISHING
    if slope > -0.1:
        return NON_VANISHING
    return INCONCLUSIVE


def scaling_report(
    user_factory: Callable[[int], tuple[UserProfile, UserProfile]],
    m_values: Sequence[int],
) -> ScalingReport:
    """
    Evaluate the C1-C3 metrics for the pair ``(k, l) = user_factory(M)``.

    Slopes are fitted on the last half of ``m_values`` (for an odd count the
    middle point is included) to keep pre-asymptotic behavior out of the fit.
    """
    m_values = np.asarray(m_values, dtype=int)
    if m_values.size < 2 or np.any(np.diff(m_values) <= 0):
        raise ParameterError("m_values must be strictly increasing with at least two points")
    c1, c2, c3 = [], [], []
    for m in m_values:
        user_k, user_l = user_factory(int(m))
        if user_k.m != m or user_l.m != m:
            raise DimensionError(f"factory returned users with M={user_k.m},{user_l.m} for M={m}")
        h_k, h_l = user_k.los, user_l.los
        c1.append(max(quadratic_form(h_l, user_k.covariance), 0.0) / m**2)
        c2.append(max(trace_product(user_l.covariance, user_k.covariance), 0.0) / m**2)
        c3.append(abs(np.vdot(h_l, h_k)) ** 2 / m**2)
    report = ScalingReport(m_values, np.array(c1), np.array(c2), np.array(c3))
    tail = slice(m_values.size // 2, None)
    report.slopes = tuple(fit_loglog_slope(m_values[tail], c[tail]) for c in (report.c1, report.c2, report.c3))
    return report
