"""
Capacity, MRC spectral efficiency and Gram-matrix concentration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import RngStream, UserProfile, _common_m, build_channel_batch, ricean_weights
from .errors import DimensionError, NumericalError, ParameterError
from .interference import quadratic_form, trace_product

__all__ = [
    "GramDeviation",
    "capacity_per_user",
    "mrc_sinr",
    "mrc_se_per_user",
    "expected_gram",
    "gram_deviation",
    "effective_channel",
]

# Trials per independent random sub-stream in Monte-Carlo loops.  Fixed so
# results do not depend on how the work is split.
MC_BLOCK = 1024


def _large_scale(d, l: int) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim == 2:
        d = np.diag(d)
    d = np.broadcast_to(d, (l,)) if d.ndim == 0 else d
    if d.shape != (l,):
        raise DimensionError(f"expected {l} large-scale coefficients, got shape {d.shape}")
    if np.any(~np.isfinite(d)) or np.any(d <= 0):
        raise ParameterError("large-scale coefficients must be positive")
    return d


def effective_channel(g, d) -> np.ndarray:
    """``B = G D^(1/2)`` for a diagonal ``D`` given as a vector, matrix or scalar."""
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2:
        raise DimensionError("channel matrix must be 2-D (M x L)")
    return g * np.sqrt(_large_scale(d, g.shape[1]))


def capacity_per_user(g, d, p_u: float) -> float:
    """
    Sum capacity divided by the number of users,
    ``(1/L) log2 det(I_L + p_u B^H B)`` with ``B = G D^(1/2)``.

    The log-determinant comes from a Cholesky factor of the ``L x L``
    Hermitian matrix.
    """
    if not p_u >= 0:
        raise ParameterError("transmit power must be non-negative")
    b = effective_channel(g, d)
    l = b.shape[1]
    a = np.eye(l) + p_u * (b.conj().T @ b)
    c = np.linalg.cholesky(0.5 * (a + a.conj().T))
    logdet = 2.0 * np.sum(np.log(np.diag(c).real))
    cap = logdet / np.log(2.0) / l
    if not np.isfinite(cap):
        raise NumericalError("capacity is not finite")
    return float(max(cap, 0.0))


def mrc_sinr(g, d, p_u: float) -> np.ndarray:
    """
    Per-user MRC SINR with unit noise power:
    ``p ||b_k||^4 / (p sum_{l != k} |b_k^H b_l|^2 + ||b_k||^2)``.
    """
    if not p_u >= 0:
        raise ParameterError("transmit power must be non-negative")
    b = effective_channel(g, d)
    gram = b.conj().T @ b
    power = np.real(np.diag(gram))
    cross = np.abs(gram) ** 2
    interference = cross.sum(axis=1) - power**2
    num = p_u * power**2
    den = p_u * np.clip(interference, 0.0, None) + power
    with np.errstate(invalid="ignore", divide="ignore"):
        sinr = np.where(power > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return sinr


def mrc_se_per_user(g, d, p_u: float) -> np.ndarray:
    """``log2(1 + SINR_k)`` for every user; zero channels give zero."""
    return np.log2(1.0 + mrc_sinr(g, d, p_u))


def expected_gram(users: Sequence[UserProfile]) -> np.ndarray:
    """``(1/M) E[G^H G]`` in closed form."""
    m = _common_m(users)
    l = len(users)
    out = np.empty((l, l), dtype=complex)
    means = [u.mean() for u in users]
    for k, uk in enumerate(users):
        a_k, b_k = ricean_weights(uk.k_factor)
        out[k, k] = (a_k * m + b_k * np.trace(uk.covariance).real) / m
        for j in range(k + 1, l):
            out[k, j] = np.vdot(means[k], means[j]) / m
            out[j, k] = np.conj(out[k, j])
    return out


@dataclass(frozen=True)
class GramDeviation:
    """
    Mean-square deviation of ``(1/M) G^H G`` from its mean.

    ``max_entry_msd`` is the largest entrywise Monte-Carlo MSD and
    ``max_entry_se`` its standard error.  ``s1_var``, ``s2_var``, ``s3_var``
    are the closed-form variances of the three zero-mean parts of entry
    ``(k, l)``; their sum is the exact MSD of that entry, which the
    Monte-Carlo ``pair_msd`` estimates.
    """

    m: int
    max_entry_msd: float
    max_entry_se: float
    s1_var: float
    s2_var: float
    s3_var: float
    pair_msd: float
    pair_se: float
    trials: int


def gram_variances(user_k: UserProfile, user_l: UserProfile) -> tuple[float, float, float]:
    """Closed-form ``(E|S1|^2, E|S2|^2, E|S3|^2)`` for entry ``(k, l)``."""
    m = user_k.m
    a_k, b_k = ricean_weights(user_k.k_factor)
    a_l, b_l = ricean_weights(user_l.k_factor)
    s1 = a_k * b_l * quadratic_form(user_k.los, user_l.covariance) / m**2 if a_k * b_l else 0.0
    s2 = a_l * b_k * quadratic_form(user_l.los, user_k.covariance) / m**2 if a_l * b_k else 0.0
    s3 = b_k * b_l * trace_product(user_l.covariance, user_k.covariance) / m**2 if b_k * b_l else 0.0
    return max(s1, 0.0), max(s2, 0.0), max(s3, 0.0)


def gram_deviation(users: Sequence[UserProfile], m: int | None, trials: int, rng: RngStream, pair=(0, 1)) -> GramDeviation:
    """
    Monte-Carlo mean-square deviation of the normalized Gram matrix.

    Trials are drawn in blocks of ``MC_BLOCK`` from sub-streams
    ``rng.child(block)`` and accumulated in block order.
    """
    users = list(users)
    m_users = _common_m(users)
    if m is not None and m != m_users:
        raise DimensionError(f"users have M={m_users}, expected {m}")
    if trials < 100:
        raise ParameterError("gram_deviation needs at least 100 trials")
    if len(users) < 2:
        raise DimensionError("at least two users are needed")
    k, l = pair
    mean = expected_gram(users)
    acc = np.zeros(mean.shape)
    acc2 = np.zeros(mean.shape)
    for block, start in enumerate(range(0, trials, MC_BLOCK)):
        n = min(MC_BLOCK, trials - start)
        g = build_channel_batch(users, rng.child(block), n)
        x = np.einsum("nmk,nml->nkl", g.conj(), g) / m_users
        dev = np.abs(x - mean) ** 2
        acc += dev.sum(axis=0)
        acc2 += (dev**2).sum(axis=0)
    msd = acc / trials
    se = np.sqrt(np.clip(acc2 / trials - msd**2, 0.0, None) / trials)
    idx = np.unravel_index(np.argmax(msd), msd.shape)
    s1, s2, s3 = gram_variances(users[k], users[l])
    return GramDeviation(
        m=m_users,
        max_entry_msd=float(msd[idx]),
        max_entry_se=float(se[idx]),
        s1_var=s1,
        s2_var=s2,
        s3_var=s3,
        pair_msd=float(msd[k, l]),
        pair_se=float(se[k, l]),
        trials=trials,
    )
