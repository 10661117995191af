"""
Seeded Monte-Carlo experiments.

Every trial owns the random stream ``RngStream(seed, trial)``; results are
collected in trial order, so a run is reproducible bit for bit regardless of
the number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from ..channel import (
    ArrayGeometry,
    RngStream,
    UserProfile,
    build_channel_batch,
    build_channel_matrix,
    one_ring_user,
    ula_los,
)
from ..errors import ConfigError, NumericalError
from ..interference import ScalingReport, mean_interference, scaling_report
from ..performance import MC_BLOCK, GramDeviation, capacity_per_user, gram_deviation, mrc_se_per_user
from ..scenarios import ScenarioSpec, build_scenario
from ..scheduler import drop_users
from .config import ExperimentConfig

__all__ = [
    "TrialEnsemble",
    "PairValidation",
    "SaturationRow",
    "estimate_cdf",
    "draw_users",
    "scenario_spec",
    "run_cdf_experiment",
    "run_saturation_sweep",
    "run_term_validation",
    "run_scaling_experiment",
    "run_gram_experiment",
]


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def estimate_cdf(values) -> tuple[np.ndarray, np.ndarray]:
    """
    Right-continuous empirical CDF.

    Returns the distinct sorted sample values and ``P(X <= value)`` at each.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("cannot estimate a CDF from an empty sample")
    x, counts = np.unique(v, return_counts=True)
    return x, np.cumsum(counts) / v.size


@dataclass
class TrialEnsemble:
    per_trial_values: np.ndarray
    retained: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.per_trial_values))

    @property
    def std_error(self) -> float:
        v = self.per_trial_values
        return float(np.std(v, ddof=1) / np.sqrt(v.size)) if v.size > 1 else 0.0

    @property
    def cdf_grid(self) -> tuple[np.ndarray, np.ndarray]:
        return estimate_cdf(self.per_trial_values)

    def percentile(self, q: float) -> float:
        return float(np.percentile(self.per_trial_values, q))


# -- geometry -----------------------------------------------------------------

_IDENTITY_CACHE: dict[int, np.ndarray] = {}


def _identity(m: int) -> np.ndarray:
    eye = _IDENTITY_CACHE.get(m)
    if eye is None:
        eye = _IDENTITY_CACHE[m] = np.eye(m, dtype=complex)
    return eye


def _k_factors(cfg: ExperimentConfig, gen: np.random.Generator, n: int) -> np.ndarray:
    if cfg.k_factor_mode == "zero":
        return np.zeros(n)
    if cfg.k_factor_mode == "fixed":
        return np.full(n, cfg.k_factor)
    lo, hi = cfg.k_bounds
    return gen.uniform(lo, hi, size=n)


def draw_users(cfg: ExperimentConfig, m: int, gen: np.random.Generator) -> list[UserProfile]:
    """
    Random geometry: ``L`` nominal angles i.i.d. uniform on ``[0, 2 pi)``,
    K-factors per ``k_factor_mode``, one-ring or identity covariances.
    """
    geom = ArrayGeometry(m, cfg.spacing_wavelengths)
    angles = gen.uniform(0.0, 2.0 * np.pi, size=cfg.l)
    ks = _k_factors(cfg, gen, cfg.l)
    deltas = cfg.deltas_rad()
    d = cfg.large_scale_values()
    users = []
    for k in range(cfg.l):
        los = ula_los(geom, angles[k])
        if deltas is None:
            eye = _identity(m)
            users.append(UserProfile(ks[k], los, eye, d[k], sqrt=eye))
        else:
            users.append(one_ring_user(geom, ks[k], deltas[k], angles[k], d[k]))
    return users


def scenario_spec(cfg: ExperimentConfig, m: int, k_factors) -> ScenarioSpec:
    sc = cfg.scenario
    deltas = cfg.deltas_rad()
    return ScenarioSpec(
        kind=sc.kind,
        m=m,
        k_factors=tuple(float(k) for k in k_factors),
        gamma=sc.gamma,
        delta=None if deltas is None else float(deltas[0]),
        alpha_phase=float(np.deg2rad(sc.alpha_phase_deg)),
        theta=None if sc.theta_deg is None else float(np.deg2rad(sc.theta_deg)),
        exponent=sc.exponent,
        spacing_wavelengths=cfg.spacing_wavelengths,
        second_delta=None if sc.second_delta_deg is None else float(np.deg2rad(sc.second_delta_deg)),
    )


def _trial_users(cfg: ExperimentConfig, m: int, gen: np.random.Generator) -> list[UserProfile]:
    if cfg.scenario is None:
        return draw_users(cfg, m, gen)
    ks = _k_factors(cfg, gen, 2)
    pair = build_scenario(scenario_spec(cfg, m, ks), gen)
    d = cfg.large_scale_values()
    return [
        UserProfile(u.k_factor, u.los, u.covariance, float(d[i]), check=False, sqrt=u.covariance_sqrt)
        for i, u in enumerate(pair)
    ]


def _finite(x, what):
    if not np.all(np.isfinite(x)):
        raise NumericalError(f"non-finite {what}")
    return x


# -- capacity CDF ---------------------------------------------------------------


def run_cdf_experiment(
    cfg: ExperimentConfig,
    threads: int = 1,
    retained: Optional[Sequence[Sequence[int]]] = None,
) -> TrialEnsemble:
    """
    Per-user capacity over independent geometry + fading draws.

    When ``drop_count > 0`` the users with the largest aggregate ``term2``
    (or total mean interference) are removed before the capacity is
    evaluated.  ``retained`` forces the served user set per trial instead,
    e.g. to evaluate uncorrelated fading on the same users a correlated run
    kept.
    """
    if cfg.experiment != "cdf":
        raise ConfigError("field 'experiment': expected 'cdf'")
    m = cfg.m_values[0]
    trials = cfg.n_trials
    if retained is not None and len(retained) != trials:
        raise ConfigError(f"retained sets given for {len(retained)} trials, expected {trials}")

    def one(t):
        gen = RngStream(cfg.seed, t).generator()
        users = draw_users(cfg, m, gen)
        if retained is not None:
            keep = tuple(retained[t])
        elif cfg.drop_count:
            keep = drop_users(users, cfg.drop_count, cfg.drop_metric, cfg.drop_aggregate).retained_indices
        else:
            keep = tuple(range(cfg.l))
        served = [users[k] for k in keep]
        g = build_channel_matrix(served, gen)
        cap = capacity_per_user(g, [u.large_scale for u in served], cfg.p_u)
        return cap, keep

    out = _map(one, range(trials), threads)
    values = _finite(np.array([c for c, _ in out]), "capacity")
    return TrialEnsemble(values, [k for _, k in out])


# -- MRC saturation ---------------------------------------------------------------


@dataclass(frozen=True)
class SaturationRow:
    m: int
    mean_se: float
    se_stderr: float


def run_saturation_sweep(cfg: ExperimentConfig, threads: int = 1) -> list[SaturationRow]:
    """
    Average per-user MRC spectral efficiency against ``M``.

    Each trial draws a fresh geometry (scenario pair, or a random geometry
    when no scenario is set) and one fading realization.
    """
    if cfg.experiment != "saturation":
        raise ConfigError("field 'experiment': expected 'saturation'")
    rows = []
    for i, m in enumerate(cfg.m_values):

        def one(t, i=i, m=m):
            gen = RngStream(cfg.seed, t).child(i).generator()
            users = _trial_users(cfg, m, gen)
            g = build_channel_matrix(users, gen)
            return float(np.mean(mrc_se_per_user(g, [u.large_scale for u in users], cfg.p_u)))

        vals = _finite(np.array(_map(one, range(cfg.n_trials), threads)), "spectral efficiency")
        stderr = float(np.std(vals, ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else 0.0
        rows.append(SaturationRow(int(m), float(np.mean(vals)), stderr))
    return rows


# -- closed form vs Monte Carlo -------------------------------------------------------


@dataclass(frozen=True)
class PairValidation:
    k: int
    l: int
    terms: tuple[float, float, float, float]
    total: float
    mc_mean: float
    mc_se: float

    @property
    def z(self) -> float:
        return (self.mc_mean - self.total) / self.mc_se if self.mc_se > 0 else 0.0


def _merge(a, b):
    # Chan et al. pairwise update of (count, mean, M2).
    n_a, mean_a, m2_a = a
    n_b, mean_b, m2_b = b
    n = n_a + n_b
    delta = mean_b - mean_a
    return n, mean_a + delta * n_b / n, m2_a + m2_b + delta**2 * n_a * n_b / n


def monte_carlo_interference(users: Sequence[UserProfile], trials: int, stream: RngStream, threads: int = 1):
    """
    Sample mean and standard error of ``|g_k^H g_l|^2`` for every pair ``k < l``.

    Returns ``(pairs, means, std_errors)``.
    """
    l = len(users)
    iu = np.triu_indices(l, k=1)
    starts = list(range(0, trials, MC_BLOCK))

    def block(b):
        n = min(MC_BLOCK, trials - starts[b])
        g = build_channel_batch(users, stream.child(b), n)
        gram = np.einsum("nmk,nml->nkl", g.conj(), g)
        t = np.abs(gram[:, iu[0], iu[1]]) ** 2
        mean = t.mean(axis=0)
        return n, mean, ((t - mean) ** 2).sum(axis=0)

    parts = _map(block, range(len(starts)), threads)
    acc = parts[0]
    for p in parts[1:]:
        acc = _merge(acc, p)
    n, mean, m2 = acc
    se = np.sqrt(m2 / (n - 1) / n) if n > 1 else np.zeros_like(mean)
    return list(zip(iu[0].tolist(), iu[1].tolist())), mean, se


def run_term_validation(cfg: ExperimentConfig, threads: int = 1) -> list[PairValidation]:
    """
    Compare the closed-form mean interference with a Monte-Carlo estimate
    for every user pair of one geometry drawn from ``RngStream(seed).child(0)``.
    """
    if cfg.experiment != "terms":
        raise ConfigError("field 'experiment': expected 'terms'")
    root = RngStream(cfg.seed)
    m = cfg.m_values[0]
    users = _trial_users(cfg, m, root.child(0).generator())
    pairs, means, ses = monte_carlo_interference(users, cfg.n_trials, root.child(1), threads)
    out = []
    for (k, l), mc, se in zip(pairs, means, ses):
        br = mean_interference(users[k], users[l])
        out.append(PairValidation(k, l, br.as_tuple(), br.total, float(mc), float(se)))
    _finite([p.total for p in out] + [p.mc_mean for p in out], "interference")
    return out


# -- asymptotic scaling ------------------------------------------------------------------


def run_scaling_experiment(cfg: ExperimentConfig, threads: int = 1) -> ScalingReport:
    """
    C1-C3 metrics of users 0 and 1 over ``cfg.m``.

    The same random stream is replayed for every ``M`` so the angles (and
    K-factors) are identical across the sweep.
    """
    if cfg.experiment != "scaling":
        raise ConfigError("field 'experiment': expected 'scaling'")
    if cfg.l < 2:
        raise ConfigError("field 'l': scaling needs at least 2 users")
    stream = RngStream(cfg.seed).child(0)

    def factory(m):
        users = _trial_users(cfg, m, stream.generator())
        return users[0], users[1]

    return scaling_report(factory, cfg.m_values)


# -- Gram concentration -----------------------------------------------------------------


def run_gram_experiment(cfg: ExperimentConfig, threads: int = 1) -> list[GramDeviation]:
    """Gram-matrix mean-square deviation for each ``M`` (one geometry per ``M``)."""
    if cfg.experiment != "gram":
        raise ConfigError("field 'experiment': expected 'gram'")
    if cfg.l < 2:
        raise ConfigError("field 'l': gram needs at least 2 users")
    root = RngStream(cfg.seed)

    def one(i):
        m = cfg.m_values[i]
        users = _trial_users(cfg, m, root.child(0).generator())
        return gram_deviation(users, m, cfg.n_trials, root.child(1, i))

    return _map(one, range(len(cfg.m_values)), threads)
