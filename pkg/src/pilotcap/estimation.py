"""MMSE channel estimation from a block of identical pilot symbols.

A SIMO channel ``H ~ N(0, C)`` (``m`` receive antennas) is probed with
``t_tau`` copies of the pilot ``x_tau = sqrt(P)`` in unit-variance white
noise.  With ``A = P C + I / t_tau``:

* estimate covariance   ``Ĉ = P C A⁻¹ C``
* error covariance      ``C̃ = A⁻¹ C / t_tau``
* effective data noise  ``V = I + P C̃``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidConfig, InvalidObservation, InvalidPlan, NotPsd
from .spd_core import SymMatrix, as_sym, check_spd, solve_spd, symmetrize


@dataclass(frozen=True)
class ChannelStats:
    """Channel covariance ``C``; must be positive semidefinite."""

    c: SymMatrix

    def __post_init__(self):
        c = as_sym(self.c)
        object.__setattr__(self, "c", c)
        report = check_spd(c)
        if not report.is_psd:
            raise NotPsd(report.min_eigenvalue, report.tolerance)

    @classmethod
    def from_array(cls, a):
        return cls(SymMatrix(a))

    @property
    def m(self) -> int:
        return self.c.dim


@dataclass(frozen=True)
class LinkBudget:
    """Per-symbol power ``P`` (linear) and coherence block length ``T``.

    ``P = 0`` is accepted as the degenerate no-signal case.
    """

    power: float
    block_length: int

    def __post_init__(self):
        if not (math.isfinite(self.power) and self.power >= 0.0):
            raise InvalidConfig(f"power must be finite and >= 0, got {self.power!r}")
        if int(self.block_length) != self.block_length or self.block_length < 2:
            raise InvalidConfig(f"block_length must be an integer >= 2, got {self.block_length!r}")
        object.__setattr__(self, "power", float(self.power))
        object.__setattr__(self, "block_length", int(self.block_length))


@dataclass(frozen=True)
class TrainingPlan:
    t_tau: int

    def __post_init__(self):
        if int(self.t_tau) != self.t_tau:
            raise InvalidPlan(f"t_tau must be an integer, got {self.t_tau!r}")
        object.__setattr__(self, "t_tau", int(self.t_tau))

    def data_symbols(self, budget: LinkBudget) -> int:
        return budget.block_length - self.t_tau


@dataclass(frozen=True)
class EstimatorStats:
    c_hat: SymMatrix
    c_tilde: SymMatrix
    v: SymMatrix


@dataclass(frozen=True)
class TrainingObservation:
    """Received pilot vectors ``y(1..t_tau)`` (rows) and the pilot amplitude."""

    y_list: np.ndarray = field(repr=False)
    x_tau: float

    def __post_init__(self):
        y = np.array(self.y_list, dtype=np.float64)
        if y.ndim == 1:
            y = y.reshape(1, -1)
        if y.ndim != 2 or y.shape[0] < 1:
            raise InvalidObservation("y_list must hold at least one observation vector")
        y.setflags(write=False)
        object.__setattr__(self, "y_list", y)
        object.__setattr__(self, "x_tau", float(self.x_tau))

    @classmethod
    def with_power(cls, y_list, power):
        """Observation using the fixed pilot ``x_tau = +sqrt(power)``."""
        return cls(y_list, math.sqrt(power))

    @property
    def t_tau(self) -> int:
        return self.y_list.shape[0]


def _require_training(plan: TrainingPlan):
    if plan.t_tau < 1:
        raise InvalidPlan(f"at least one training symbol is required, got t_tau={plan.t_tau}")


def _regularized(stats: ChannelStats, power: float, t_tau: int) -> np.ndarray:
    # P C + I / t_tau, PD for every PSD C once t_tau >= 1
    return power * stats.c.values + np.eye(stats.m) / t_tau


def error_covariance(stats: ChannelStats, budget: LinkBudget, plan: TrainingPlan) -> SymMatrix:
    """Covariance ``C̃`` of the estimation error ``H - Ĥ``."""
    _require_training(plan)
    a = _regularized(stats, budget.power, plan.t_tau)
    return symmetrize(solve_spd(a, stats.c.values) / plan.t_tau)


def estimated_covariance(stats: ChannelStats, budget: LinkBudget, plan: TrainingPlan) -> SymMatrix:
    """Covariance ``Ĉ`` of the MMSE estimate ``Ĥ``."""
    _require_training(plan)
    a = _regularized(stats, budget.power, plan.t_tau)
    c = stats.c.values
    return symmetrize(budget.power * (c @ solve_spd(a, c)))


def effective_noise(stats: ChannelStats, budget: LinkBudget, plan: TrainingPlan) -> SymMatrix:
    """Per-symbol covariance ``V = I + P C̃`` of noise plus estimation self-interference."""
    c_tilde = error_covariance(stats, budget, plan)
    return SymMatrix(np.eye(stats.m) + budget.power * c_tilde.values)


def estimator_stats(stats: ChannelStats, budget: LinkBudget, plan: TrainingPlan) -> EstimatorStats:
    c_tilde = error_covariance(stats, budget, plan)
    return EstimatorStats(
        c_hat=estimated_covariance(stats, budget, plan),
        c_tilde=c_tilde,
        v=SymMatrix(np.eye(stats.m) + budget.power * c_tilde.values),
    )


def estimator_gain(stats: ChannelStats, budget: LinkBudget, plan: TrainingPlan) -> np.ndarray:
    """Matrix ``G = x_tau C A⁻¹`` mapping the averaged pilot observation to ``Ĥ``."""
    _require_training(plan)
    a = _regularized(stats, budget.power, plan.t_tau)
    # C A⁻¹ = (A⁻¹ C)ᵀ because both factors are symmetric
    return math.sqrt(budget.power) * solve_spd(a, stats.c.values).T


def mmse_estimate(stats: ChannelStats, budget: LinkBudget, obs: TrainingObservation) -> np.ndarray:
    """MMSE channel estimate ``Ĥ = x_tau C (P C + I/t_tau)⁻¹ ȳ``."""
    if obs.y_list.shape[1] != stats.m:
        raise DimensionMismatch(
            f"observations have dimension {obs.y_list.shape[1]}, channel has m={stats.m}"
        )
    if abs(obs.x_tau**2 - budget.power) > 1e-12 * max(budget.power, 1e-300):
        raise InvalidObservation(
            f"pilot amplitude {obs.x_tau!r} does not satisfy x_tau² = P = {budget.power!r}"
        )
    ybar = obs.y_list.mean(axis=0)
    a = _regularized(stats, budget.power, obs.t_tau)
    return obs.x_tau * (stats.c.values @ solve_spd(a, ybar))
