"""Monte Carlo engine: exit-time sampling, harmonic-measure estimation,
contraction-factor estimation, and certificate verification."""

from .deltahat import DeltaHatResult, cap_hit_probability, estimate_delta_hat, poisson_exit_points
from .engine import (
    ExitSample,
    McEstimate,
    PathParams,
    estimate_h,
    estimate_uf,
    estimate_ug_wos,
    estimate_v_alpha,
    run_exit_batch,
    run_wos_batch,
    sample_exit,
)
from .verify import SLACK_SE, VerdictRow, VerdictTable, verify_certificates

__all__ = [
    "DeltaHatResult",
    "ExitSample",
    "McEstimate",
    "PathParams",
    "SLACK_SE",
    "VerdictRow",
    "VerdictTable",
    "cap_hit_probability",
    "estimate_delta_hat",
    "estimate_h",
    "estimate_uf",
    "estimate_ug_wos",
    "estimate_v_alpha",
    "poisson_exit_points",
    "run_exit_batch",
    "run_wos_batch",
    "sample_exit",
    "verify_certificates",
]
