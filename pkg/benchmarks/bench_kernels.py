"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--trials 200000]
"""

import argparse
import time

import numpy as np

from pilotcap import _backend
from pilotcap.estimation import ChannelStats, LinkBudget, TrainingPlan, estimator_gain
from pilotcap.optimizer import sweep
from pilotcap.reference import EXAMPLE1_COVARIANCE, EXAMPLE2_COVARIANCE


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(k, trials):
    rng = np.random.default_rng(0)
    b = rng.standard_normal((40, 40))
    spd40 = b @ b.T / 40 + 0.1 * np.eye(40)
    stats = ChannelStats.from_array(EXAMPLE1_COVARIANCE)
    budget, plan = LinkBudget(100.0, 100), TrainingPlan(4)
    factor = np.linalg.cholesky(EXAMPLE1_COVARIANCE)
    gain = estimator_gain(stats, budget, plan)
    return {
        "cholesky 40x40": lambda: k.cholesky_lower(spd40, 0.0),
        "jacobi 40x40": lambda: k.jacobi_eigh(spd40, 100, 1e-15),
        "normals 1e6": lambda: k.normals(1, 0, 1_000_000),
        f"mmse_trials {trials}": lambda: k.mmse_trials(factor, gain, 10.0, 4, 1, 0, trials),
    }


def sweep_case():
    stats = ChannelStats.from_array(EXAMPLE2_COVARIANCE)
    return lambda: sweep(stats, LinkBudget(0.01, 100))


def ms(v):
    return f"{v * 1e3:10.2f}ms" if v is not None else f"{'-':>12}"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--trials", type=int, default=200_000)
    args = parser.parse_args()

    names = _backend.available()
    if "compiled" not in names:
        print("compiled kernels not built; only the fallback is timed")
    results = {}
    for name in names:
        for label, fn in cases(_backend.get(name), args.trials).items():
            results.setdefault(label, {})[name] = best_of(fn, args.repeat)
        # full 10x10 sweep through spd_core, with each backend swapped in
        saved = _backend.kernels
        _backend.kernels = _backend.get(name)
        try:
            results.setdefault("sweep 10x10, T=100", {})[name] = best_of(sweep_case(), args.repeat)
        finally:
            _backend.kernels = saved

    print(f"{'kernel':<26}{'python':>12}{'compiled':>12}{'speedup':>10}")
    for label, row in results.items():
        py = row.get("python")
        cc = row.get("compiled")
        speed = f"{py / cc:9.1f}x" if py and cc else f"{'-':>10}"
        print(f"{label:<26}{ms(py)}{ms(cc)}{speed}")


if __name__ == "__main__":
    main()
