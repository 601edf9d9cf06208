"""Exhaustive search for the capacity-maximizing number of pilot symbols."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .capacity import capacity, capacity_high_power_approx
from .errors import InvalidConfig
from .estimation import ChannelStats, LinkBudget, TrainingPlan

TIE_RTOL = 1e-12


@dataclass(frozen=True)
class CapacityCurve:
    entries: tuple  # ((t_tau, bits_per_block), ...) for t_tau = 1..T
    argmax_t_tau: int
    max_bits: float
    block_length: int

    @property
    def t_tau(self) -> np.ndarray:
        return np.array([t for t, _ in self.entries])

    @property
    def bits(self) -> np.ndarray:
        return np.array([b for _, b in self.entries])

    def bits_at(self, t_tau: int) -> float:
        return self.entries[t_tau - 1][1]


@dataclass(frozen=True)
class AsymptoticReport:
    argmax_exact: int
    argmax_high_p_approx: int
    high_p_agreement: bool


def argmax_smallest(entries) -> tuple[int, float]:
    """Smallest ``t_tau`` whose value is within ``1e-12 * |max|`` of the maximum."""
    values = np.array([v for _, v in entries], dtype=np.float64)
    best = float(np.max(values))
    cutoff = best - TIE_RTOL * abs(best)
    idx = int(np.flatnonzero(values >= cutoff)[0])
    return int(entries[idx][0]), float(values[idx])


def _evaluate(objective: Callable[[int], float], T: int, max_workers):
    t_values = range(1, T + 1)
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            # map() yields in submission order, so assembly stays ascending
            values = list(pool.map(objective, t_values))
    else:
        values = [objective(t) for t in t_values]
    return tuple(zip(t_values, values))


def sweep(stats: ChannelStats, budget: LinkBudget, max_workers=None) -> CapacityCurve:
    """Capacity at every ``t_tau`` in ``[1, T]`` and the (smallest) maximizer.

    No unimodality is assumed; every integer is evaluated.
    """

    def objective(t):
        return capacity(stats, budget, TrainingPlan(t)).bits_per_block

    entries = _evaluate(objective, budget.block_length, max_workers)
    best_t, best = argmax_smallest(entries)
    return CapacityCurve(entries, best_t, best, budget.block_length)


def asymptotic_report(stats: ChannelStats, budget: LinkBudget) -> AsymptoticReport:
    exact = sweep(stats, budget)

    def approx(t):
        return capacity_high_power_approx(stats, budget, TrainingPlan(t))

    approx_t, _ = argmax_smallest(_evaluate(approx, budget.block_length, None))
    return AsymptoticReport(exact.argmax_t_tau, approx_t, exact.argmax_t_tau == approx_t)


def argmax_trend(stats: ChannelStats, budget: LinkBudget, powers: Sequence[float]):
    """``[(P, argmax t_tau), ...]`` for each power, one full sweep per power."""
    powers = [float(p) for p in powers]
    if not powers:
        raise InvalidConfig("powers must be nonempty")
    if any(p <= 0 for p in powers):
        raise InvalidConfig("powers must be positive")
    if any(b <= a for a, b in zip(powers, powers[1:])):
        raise InvalidConfig("powers must be strictly ascending")
    out = []
    for p in powers:
        curve = sweep(stats, LinkBudget(p, budget.block_length))
        out.append((p, curve.argmax_t_tau))
    return out
