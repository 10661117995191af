"""
Interference analysis of massive MIMO uplinks in semi-correlated Ricean fading.

Submodules
----------
linalg        Hermitian eigendecomposition, PSD square root and projection.
channel       ULA steering vectors, one-ring covariances, channel sampling.
interference  Closed-form mean interference terms and scaling diagnostics.
scenarios     Adversarial user pairs that break channel orthogonality.
performance   Capacity, MRC spectral efficiency, Gram-matrix concentration.
scheduler     Greedy user dropping by covariance overlap.
harness       Experiment configs, Monte-Carlo runners, CSV output and CLI.
"""

__version__ = "0.1.0"

from .channel import (
    ArrayGeometry,
    RngStream,
    UserProfile,
    build_channel_matrix,
    one_ring_covariance,
    one_ring_user,
    sample_channel,
    sample_channels,
    ula_los,
)
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    InfeasibleAngleError,
    NotPSDError,
    NumericalError,
    ParameterError,
)
from .interference import (
    InterferenceBreakdown,
    alignment_profile,
    instantaneous_interference,
    mean_interference,
    ritz_bounds,
    scaling_report,
    trace_product_bound,
)
from .linalg import EigenSystem, hermitian_eig, psd_project, psd_sqrt
from .performance import capacity_per_user, expected_gram, gram_deviation, mrc_se_per_user
from .scenarios import (
    ScenarioKind,
    ScenarioSpec,
    build_scenario,
    build_scenario_1,
    build_scenario_2,
    build_scenario_3,
    build_scenario_4,
    scenario_4_limit,
)
from .scheduler import drop_users, rank_users_by_term2
