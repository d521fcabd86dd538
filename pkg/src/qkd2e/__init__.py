"""Quantum key distribution over polarization/time-bin doubly entangled pairs.

The package splits into a small state-vector core (`quantum`, `source`), the
protocol layer (`eavesdrop`, `protocol`), inequality monitoring (`wigner`),
analytic channel-information results (`info`), and report plumbing
(`reports`, `plots`, `cli`).
"""

from .eavesdrop import EavesdropConfig
from .info import (
    AttackAnalytics,
    ErrorCorrectionParams,
    analytics_table,
    bsc_information,
    cascade_error,
    equal_info_ratio_rows,
    huttner_ekert_bound,
    strategy_analytics,
    xor_error,
)
from .protocol import (
    SessionConfig,
    SessionLog,
    SiftedKey,
    run_session,
    session_summary,
    sift,
    sift_for_xor,
    xor_key,
)
from .source import SourceParams, biphoton_state, phase_basis, pol_basis
from .wigner import (
    WignerSettings,
    coincidence_probability,
    estimate_wigner,
    intercepted_wigner,
    interception_slope,
    lhv_survey,
    max_undetected_fraction,
    wigner_session,
    wigner_value,
)

__version__ = "0.1.0"

__all__ = [
    "AttackAnalytics",
    "EavesdropConfig",
    "ErrorCorrectionParams",
    "SessionConfig",
    "SessionLog",
    "SiftedKey",
    "SourceParams",
    "WignerSettings",
    "analytics_table",
    "biphoton_state",
    "bsc_information",
    "cascade_error",
    "coincidence_probability",
    "equal_info_ratio_rows",
    "estimate_wigner",
    "huttner_ekert_bound",
    "intercepted_wigner",
    "interception_slope",
    "lhv_survey",
    "max_undetected_fraction",
    "phase_basis",
    "pol_basis",
    "run_session",
    "session_summary",
    "sift",
    "sift_for_xor",
    "strategy_analytics",
    "wigner_session",
    "wigner_value",
    "xor_error",
    "xor_key",
]
