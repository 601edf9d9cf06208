"""Worst-case capacity of the training-based SIMO block.

With ``t_tau`` pilots and ``T_d = T - t_tau`` data symbols at full power::

    capacity = T_d * (log2 det(P C + I) - log2 det(P C̃ + I))   [bits / block]

No factor 1/2 is applied even though the channel is real-valued; the
expression is kept as published.  ``t_tau = 0`` yields ``-inf`` and
``t_tau = T`` yields exactly ``0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidPlan
from .estimation import ChannelStats, LinkBudget, TrainingPlan, error_covariance
from .spd_core import as_sym, log_det, sym_eigen

LN2 = math.log(2.0)
KRONECKER_MAX_DIM = 64


@dataclass(frozen=True)
class CapacityValue:
    bits_per_block: float
    bits_per_symbol: float


def log2_det(a) -> float:
    return log_det(a) / LN2


def log_gap(stats: ChannelStats, power: float, c_tilde) -> float:
    """Per-data-symbol gap ``log2 det(P C + I) - log2 det(P C̃ + I)``."""
    eye = np.eye(stats.m)
    c_tilde = as_sym(c_tilde)
    return log2_det(power * stats.c.values + eye) - log2_det(power * c_tilde.values + eye)


def _check_range(budget: LinkBudget, plan: TrainingPlan, lowest=0):
    if not lowest <= plan.t_tau <= budget.block_length:
        raise InvalidPlan(
            f"t_tau={plan.t_tau} outside [{lowest}, {budget.block_length}]"
        )


def capacity(stats: ChannelStats, budget: LinkBudget, plan: TrainingPlan) -> CapacityValue:
    """Worst-case capacity in bits per block (and per symbol of the block)."""
    _check_range(budget, plan)
    T = budget.block_length
    if plan.t_tau == 0:
        return CapacityValue(-math.inf, -math.inf)
    t_d = T - plan.t_tau
    if t_d == 0:
        return CapacityValue(0.0, 0.0)
    bits = t_d * log_gap(stats, budget.power, error_covariance(stats, budget, plan))
    return CapacityValue(bits, bits / T)


def _spectral_terms(sigmas, lam_c, lam_ct):
    s = np.asarray(sigmas, dtype=np.float64)[:, None]
    # log1p keeps small sigma * lambda products accurate
    return (np.sum(np.log1p(s * lam_c[None, :])) - np.sum(np.log1p(s * lam_ct[None, :]))) / LN2


def mutual_information_kronecker(sigmas, stats: ChannelStats, c_tilde) -> float:
    """Gaussian mutual information of the data block for input spectrum ``sigmas``.

    ``sigmas`` are the eigenvalues of the data input covariance ``X_d``; the
    value is ``sum_i [log2 det(sigma_i C + I) - log2 det(sigma_i C̃ + I)]``,
    computed from the eigenvalues of ``C`` and ``C̃``.
    """
    c_tilde = as_sym(c_tilde)
    if c_tilde.dim != stats.m:
        raise DimensionMismatch(f"c_tilde has dim {c_tilde.dim}, expected {stats.m}")
    s = np.asarray(sigmas, dtype=np.float64).ravel()
    if np.any(s < 0):
        raise ValueError("input spectrum must be nonnegative")
    # clip tiny negative eigenvalues of a PSD-singular covariance
    lam_c = np.maximum(sym_eigen(stats.c)[0], 0.0)
    lam_ct = np.maximum(sym_eigen(c_tilde)[0], 0.0)
    return float(_spectral_terms(s, lam_c, lam_ct))


def mutual_information_from_covariance(x_d, stats: ChannelStats, c_tilde) -> float:
    """Same as :func:`mutual_information_kronecker` for a full ``X_d`` matrix."""
    lam = np.maximum(sym_eigen(x_d)[0], 0.0)
    return mutual_information_kronecker(lam, stats, c_tilde)


def mutual_information_kronecker_direct(x_d, stats: ChannelStats, c_tilde) -> float:
    """``log2 det(X_d ⊗ C + I) - log2 det(X_d ⊗ C̃ + I)`` with the Kronecker products
    formed explicitly.  Limited to ``T_d * m <= 64``; used as a cross-check of
    the spectral form.
    """
    x_d = as_sym(x_d)
    c_tilde = as_sym(c_tilde)
    n = x_d.dim * stats.m
    if n > KRONECKER_MAX_DIM:
        raise DimensionMismatch(f"T_d * m = {n} exceeds {KRONECKER_MAX_DIM}")
    if c_tilde.dim != stats.m:
        raise DimensionMismatch(f"c_tilde has dim {c_tilde.dim}, expected {stats.m}")
    eye = np.eye(n)
    big_c = np.kron(x_d.values, stats.c.values) + eye
    big_ct = np.kron(x_d.values, c_tilde.values) + eye
    return log2_det(big_c) - log2_det(big_ct)


def capacity_high_power_approx(stats: ChannelStats, budget: LinkBudget, plan: TrainingPlan) -> float:
    """Large-``P`` approximation ``T_d (log2 det(P C) - m log2(1/t_tau + 1))``.

    Raises :class:`NotPositiveDefinite` when ``C`` is singular.
    """
    _check_range(budget, plan, lowest=1)
    m = stats.m
    t_d = budget.block_length - plan.t_tau
    log2_det_pc = log2_det(budget.power * stats.c.values)
    if t_d == 0:
        return 0.0
    return t_d * (log2_det_pc - m * math.log2(1.0 / plan.t_tau + 1.0))


def error_floor_low_power(stats: ChannelStats, budget: LinkBudget, plan: TrainingPlan) -> float:
    """Relative distance ``||C̃ - C||_F / ||C||_F`` of the error covariance from
    its zero-power limit ``C``."""
    c_tilde = error_covariance(stats, budget, plan)
    c = stats.c.values
    norm_c = np.linalg.norm(c)
    if norm_c == 0.0:
        return 0.0
    return float(np.linalg.norm(c_tilde.values - c) / norm_c)
