"""
Experiment configuration: JSON schema, validation and hashing.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Optional, Union

import numpy as np

from ..errors import ConfigError
from ..scenarios import ScenarioKind

__all__ = ["ExperimentConfig", "ScenarioConfig", "REFERENCE_LARGE_SCALE", "load_config", "parse_config"]

EXPERIMENTS = ("cdf", "saturation", "terms", "scaling", "gram")
K_MODES = ("zero", "fixed", "uniform")

# Large-scale fading coefficients used for the capacity experiments.
REFERENCE_LARGE_SCALE = (0.749, 0.546, 0.425, 0.635, 0.468, 0.31, 0.64, 0.757, 0.695, 0.515)

DEFAULT_TRIALS = {"cdf": 1000, "saturation": 200, "terms": 10_000, "scaling": 1, "gram": 10_000}


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    gamma: Optional[float] = None
    alpha_phase_deg: float = 0.0
    theta_deg: Optional[float] = None
    exponent: float = 1.0
    # EigenAligned only: one-ring half-spread of user 2 (identity when None).
    second_delta_deg: Optional[float] = None


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Full description of one experiment run.

    ``delta_deg`` of ``None`` selects identity covariances (uncorrelated
    fading); a number or per-user list selects one-ring covariances with
    that half-spread in degrees.  ``large_scale`` is a list of ``L``
    coefficients, ``"unit"``, or ``"reference"`` (the first ``L`` of
    :data:`REFERENCE_LARGE_SCALE`).
    """

    experiment: str
    m: Union[int, tuple[int, ...]] = 100
    l: int = 10
    p_u_db: float = 0.0
    spacing_wavelengths: float = 0.5
    delta_deg: Union[None, float, tuple[float, ...]] = None
    k_factor_mode: str = "zero"
    k_factor: float = 1.0
    k_bounds: tuple[float, float] = (0.0, 2.0)
    large_scale: Union[str, tuple[float, ...]] = "reference"
    scenario: Optional[ScenarioConfig] = None
    drop_count: int = 0
    drop_metric: str = "term2"
    drop_aggregate: str = "sum"
    trials: Optional[int] = None
    seed: int = 0

    # -- derived values -------------------------------------------------
    @property
    def p_u(self) -> float:
        return 10.0 ** (self.p_u_db / 10.0)

    @property
    def m_values(self) -> tuple[int, ...]:
        return self.m if isinstance(self.m, tuple) else (self.m,)

    @property
    def n_trials(self) -> int:
        return self.trials if self.trials is not None else DEFAULT_TRIALS[self.experiment]

    def deltas_rad(self) -> Optional[np.ndarray]:
        if self.delta_deg is None:
            return None
        d = np.deg2rad(np.asarray(self.delta_deg, dtype=float))
        return np.broadcast_to(d, (self.l,)).copy()

    def large_scale_values(self) -> np.ndarray:
        if self.large_scale == "unit":
            return np.ones(self.l)
        if self.large_scale == "reference":
            return np.array(REFERENCE_LARGE_SCALE[: self.l])
        return np.array(self.large_scale, dtype=float)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["trials"] = self.n_trials
        return d

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return validate(replace(self, **kw))


def _err(name, msg):
    raise ConfigError(f"field '{name}': {msg}")


def _number(name, v, lo=None, hi=None, integer=False, strict_lo=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _err(name, f"expected a number, got {v!r}")
    if integer and int(v) != v:
        _err(name, f"expected an integer, got {v!r}")
    if not np.isfinite(v):
        _err(name, "must be finite")
    if lo is not None and (v <= lo if strict_lo else v < lo):
        _err(name, f"must be {'>' if strict_lo else '>='} {lo}, got {v}")
    if hi is not None and v > hi:
        _err(name, f"must be <= {hi}, got {v}")
    return int(v) if integer else float(v)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.experiment not in EXPERIMENTS:
        _err("experiment", f"must be one of {EXPERIMENTS}, got {cfg.experiment!r}")
    for m in cfg.m_values:
        _number("m", m, lo=1, integer=True)
    if cfg.experiment in ("scaling",) and len(cfg.m_values) < 4:
        _err("m", "scaling needs at least 4 antenna counts")
    if len(cfg.m_values) > 1 and any(b <= a for a, b in zip(cfg.m_values, cfg.m_values[1:])):
        _err("m", "antenna counts must be strictly increasing")
    _number("l", cfg.l, lo=1, integer=True)
    _number("p_u_db", cfg.p_u_db)
    _number("spacing_wavelengths", cfg.spacing_wavelengths, lo=0, strict_lo=True)
    if cfg.delta_deg is not None:
        ds = cfg.delta_deg if isinstance(cfg.delta_deg, tuple) else (cfg.delta_deg,)
        if isinstance(cfg.delta_deg, tuple) and len(ds) != cfg.l:
            _err("delta_deg", f"per-user list must have {cfg.l} entries")
        for d in ds:
            _number("delta_deg", d, lo=0, hi=180, strict_lo=True)
    if cfg.k_factor_mode not in K_MODES:
        _err("k_factor_mode", f"must be one of {K_MODES}")
    _number("k_factor", cfg.k_factor, lo=0)
    lo, hi = cfg.k_bounds
    _number("k_bounds", lo, lo=0)
    _number("k_bounds", hi, lo=lo)
    if isinstance(cfg.large_scale, str):
        if cfg.large_scale not in ("unit", "reference"):
            _err("large_scale", "must be 'unit', 'reference' or a list of positive numbers")
        if cfg.large_scale == "reference" and cfg.l > len(REFERENCE_LARGE_SCALE):
            _err("large_scale", f"'reference' supplies only {len(REFERENCE_LARGE_SCALE)} coefficients")
    else:
        if len(cfg.large_scale) != cfg.l:
            _err("large_scale", f"expected {cfg.l} coefficients, got {len(cfg.large_scale)}")
        for v in cfg.large_scale:
            _number("large_scale", v, lo=0, strict_lo=True)
    if cfg.scenario is not None:
        sc = cfg.scenario
        try:
            kind = ScenarioKind(sc.kind)
        except ValueError:
            _err("scenario.kind", f"unknown scenario {sc.kind!r}; expected one of {[k.value for k in ScenarioKind]}")
        if (sc.gamma is not None) != (kind is ScenarioKind.LOS_NEAR_ALIGNED):
            _err("scenario.gamma", "required for LosNearAligned and only for it")
        if sc.gamma is not None:
            _number("scenario.gamma", sc.gamma, lo=0, strict_lo=True)
        _number("scenario.alpha_phase_deg", sc.alpha_phase_deg)
        if sc.theta_deg is not None:
            _number("scenario.theta_deg", sc.theta_deg)
        _number("scenario.exponent", sc.exponent, lo=1)
        if sc.second_delta_deg is not None:
            if sc.kind != ScenarioKind.EIGEN_ALIGNED.value:
                _err("scenario.second_delta_deg", "applies to EigenAligned only")
            _number("scenario.second_delta_deg", sc.second_delta_deg, lo=0, hi=180, strict_lo=True)
        if cfg.l != 2:
            _err("l", "scenario experiments involve exactly 2 users")
        if kind is ScenarioKind.EIGEN_ALIGNED and cfg.delta_deg is None:
            _err("delta_deg", "EigenAligned needs an angular spread")
    if cfg.experiment == "saturation" and cfg.scenario is None and cfg.l < 1:
        _err("l", "must be >= 1")
    _number("drop_count", cfg.drop_count, lo=0, integer=True)
    if cfg.drop_count >= cfg.l:
        _err("drop_count", f"must be smaller than l = {cfg.l}")
    if cfg.drop_metric not in ("term2", "total"):
        _err("drop_metric", "must be 'term2' or 'total'")
    if cfg.drop_aggregate not in ("sum", "max"):
        _err("drop_aggregate", "must be 'sum' or 'max'")
    if cfg.trials is not None:
        _number("trials", cfg.trials, lo=1, integer=True)
        if cfg.experiment == "gram" and cfg.trials < 100:
            _err("trials", "gram needs at least 100 trials")
    _number("seed", cfg.seed, lo=0, hi=2**64 - 1, integer=True)
    return cfg


def parse_config(doc: dict[str, Any]) -> ExperimentConfig:
    """Build a validated config from a decoded JSON object; unknown keys are rejected."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")
    if "experiment" not in doc:
        raise ConfigError("field 'experiment': missing")
    doc = dict(doc)
    for key in ("m", "delta_deg", "large_scale", "k_bounds"):
        if isinstance(doc.get(key), list):
            doc[key] = tuple(doc[key])
    if "k_bounds" in doc and len(doc["k_bounds"]) != 2:
        raise ConfigError("field 'k_bounds': expected [low, high]")
    if doc.get("scenario") is not None:
        sc = doc["scenario"]
        if not isinstance(sc, dict):
            raise ConfigError("field 'scenario': expected an object")
        sknown = {f.name for f in fields(ScenarioConfig)}
        bad = sorted(set(sc) - sknown)
        if bad:
            raise ConfigError(f"unknown scenario field(s): {', '.join(bad)}")
        if "kind" not in sc:
            raise ConfigError("field 'scenario.kind': missing")
        doc["scenario"] = ScenarioConfig(**sc)
    return validate(ExperimentConfig(**doc))


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    return parse_config(doc)
