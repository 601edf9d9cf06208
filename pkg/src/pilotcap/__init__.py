"""Pilot-length optimization for training-based block-fading SIMO links.

Computes the worst-case capacity of a block of ``T`` symbols in which the
first ``t_tau`` are pilots used for MMSE channel estimation, finds the best
integer ``t_tau``, and checks the estimator statistics by seeded Monte Carlo.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .capacity import (
    CapacityValue,
    capacity,
    capacity_high_power_approx,
    error_floor_low_power,
    mutual_information_from_covariance,
    mutual_information_kronecker,
    mutual_information_kronecker_direct,
)
from .errors import (
    AsymmetryTooLarge,
    ConvergenceFailure,
    DimensionMismatch,
    InvalidConfig,
    InvalidMatrix,
    InvalidObservation,
    InvalidPlan,
    NotPositiveDefinite,
    NotPsd,
    NotSquare,
    ParseError,
    PilotCapError,
)
from .estimation import (
    ChannelStats,
    EstimatorStats,
    LinkBudget,
    TrainingObservation,
    TrainingPlan,
    effective_noise,
    error_covariance,
    estimated_covariance,
    estimator_stats,
    mmse_estimate,
)
from .montecarlo import SimConfig, SimReport, amgm_oracle, run_estimation_sim, sample_gaussian_vector
from .optimizer import AsymptoticReport, CapacityCurve, argmax_trend, asymptotic_report, sweep
from .rng import CounterRng
from .spd_core import SpdCheckReport, SymMatrix, check_spd, cholesky, log_det, solve_spd, sym_eigen
