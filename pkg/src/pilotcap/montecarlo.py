"""Seeded Monte Carlo checks of the estimator statistics and of equal-power
optimality.

All randomness comes from :class:`pilotcap.rng.CounterRng`.  A simulation
run is a pure function of its :class:`SimConfig`; rerunning with the same
seed reproduces the report bit for bit on the same backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from .capacity import mutual_information_kronecker
from .errors import InvalidConfig, NotPositiveDefinite
from .estimation import (
    ChannelStats,
    LinkBudget,
    TrainingPlan,
    error_covariance,
    estimated_covariance,
    estimator_gain,
)
from .rng import UINT64_MASK, CounterRng
from .spd_core import SymMatrix, as_sym, cholesky, sym_eigen, symmetrize


@dataclass(frozen=True)
class SimConfig:
    seed: int
    num_trials: int
    stats: ChannelStats
    budget: LinkBudget
    plan: TrainingPlan

    def __post_init__(self):
        if not 0 <= int(self.seed) <= UINT64_MASK:
            raise InvalidConfig("seed must be an unsigned 64-bit integer")
        if int(self.num_trials) < 1:
            raise InvalidConfig("num_trials must be >= 1")
        if self.plan.t_tau < 1:
            raise InvalidConfig("simulation needs t_tau >= 1")


@dataclass(frozen=True)
class SimReport:
    empirical_c_hat: SymMatrix
    empirical_c_tilde: SymMatrix
    cross_cov: np.ndarray
    cross_cov_stderr: np.ndarray
    frobenius_rel_err_c_tilde: float
    num_trials: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "empirical_c_hat": self.empirical_c_hat.values.tolist(),
            "empirical_c_tilde": self.empirical_c_tilde.values.tolist(),
            "cross_cov": self.cross_cov.tolist(),
            "cross_cov_stderr": self.cross_cov_stderr.tolist(),
            "frobenius_rel_err_c_tilde": self.frobenius_rel_err_c_tilde,
            "num_trials": self.num_trials,
            "seed": self.seed,
        }


class OracleResult(NamedTuple):
    max_random_mi: float
    equal_power_mi: float


def gaussian_factor(c) -> np.ndarray:
    """Factor ``F`` with ``F Fᵀ = c``: Cholesky when PD, else ``U sqrt(max(λ, 0))``."""
    c = as_sym(c)
    try:
        return cholesky(c)
    except NotPositiveDefinite:
        lam, U = sym_eigen(c)
        return U * np.sqrt(np.maximum(lam, 0.0))[None, :]


def sample_gaussian_vector(chol_factor, rng: CounterRng) -> np.ndarray:
    F = np.asarray(chol_factor, dtype=np.float64)
    return F @ rng.normals(F.shape[1])


def run_estimation_sim(config: SimConfig) -> SimReport:
    """Draw ``H``, pilot noise and the MMSE estimate ``num_trials`` times.

    Per trial: ``y(t) = H x_tau + w(t)`` for ``t = 1..t_tau``, then
    ``Ĥ = G ȳ`` and ``H̃ = H - Ĥ``.  Second moments use the known zero mean.
    """
    stats, budget, plan = config.stats, config.budget, config.plan
    F = gaussian_factor(stats.c)
    G = estimator_gain(stats, budget, plan)
    n = int(config.num_trials)
    s_hh, s_tt, s_ht, s_ht2 = _backend.kernels.mmse_trials(
        F, G, math.sqrt(budget.power), plan.t_tau, int(config.seed), 0, n
    )
    emp_hat = symmetrize(s_hh / n)
    emp_tilde = symmetrize(s_tt / n)
    cross = s_ht / n
    # standard error of the mean of the products Ĥ_i H̃_j
    var = np.maximum(s_ht2 / n - cross**2, 0.0)
    stderr = np.sqrt(var / max(n - 1, 1))
    c_tilde = error_covariance(stats, budget, plan).values
    ref = np.linalg.norm(c_tilde)
    diff = np.linalg.norm(emp_tilde.values - c_tilde)
    rel = float(diff / ref) if ref > 0 else float(diff)
    return SimReport(emp_hat, emp_tilde, cross, stderr, rel, n, int(config.seed))


def analytic_reference(config: SimConfig):
    """``(Ĉ, C̃)`` the simulation should converge to."""
    return (
        estimated_covariance(config.stats, config.budget, config.plan),
        error_covariance(config.stats, config.budget, config.plan),
    )


def random_spectrum(rng: CounterRng, t_d: int, power: float) -> np.ndarray:
    """Uniform(0, 1] draws rescaled to sum to ``t_d * power``."""
    u = rng.uniforms(t_d)
    return u * (t_d * power / np.sum(u))


def amgm_oracle(stats: ChannelStats, c_tilde, power: float, t_d: int, num_spectra: int,
                rng: CounterRng) -> OracleResult:
    """Best mutual information over random trace-constrained input spectra,
    next to the equal-power value ``sigma_i = P``."""
    if t_d < 2:
        raise InvalidConfig("t_d must be >= 2")
    if num_spectra < 1:
        raise InvalidConfig("num_spectra must be >= 1")
    equal = mutual_information_kronecker(np.full(t_d, float(power)), stats, c_tilde)
    best = -math.inf
    for _ in range(num_spectra):
        mi = mutual_information_kronecker(random_spectrum(rng, t_d, power), stats, c_tilde)
        best = max(best, mi)
    return OracleResult(best, equal)
