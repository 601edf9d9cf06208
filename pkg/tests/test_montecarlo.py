import math

import numpy as np
import pytest

from pilotcap import _backend
from pilotcap.capacity import mutual_information_kronecker
from pilotcap.errors import InvalidConfig
from pilotcap.estimation import (
    ChannelStats,
    LinkBudget,
    TrainingObservation,
    TrainingPlan,
    error_covariance,
    mmse_estimate,
)
from pilotcap.montecarlo import (
    SimConfig,
    amgm_oracle,
    analytic_reference,
    gaussian_factor,
    random_spectrum,
    run_estimation_sim,
    sample_gaussian_vector,
)
from pilotcap.reference import EXAMPLE1_COVARIANCE
from pilotcap.rng import CounterRng

from .conftest import random_spd


def draw(c, n, seed=7):
    F = gaussian_factor(c)
    rng = CounterRng(seed)
    return np.array([sample_gaussian_vector(F, rng) for _ in range(n)])


class TestSampling:
    def test_identity(self, backend):
        n = 20000
        x = draw(np.eye(3), n)
        assert np.all(np.abs((x**2).mean(axis=0) - 1.0) < 3 / math.sqrt(n))

    def test_diagonal(self, backend):
        n = 20000
        x = draw(np.diag([4.0, 9.0]), n)
        # relative: a sample std has standard error sigma / sqrt(2N)
        np.testing.assert_allclose(np.sqrt((x**2).mean(axis=0)), [2.0, 3.0], rtol=3 / math.sqrt(n))

    def test_example1_covariance(self, ex1):
        n = 200_000
        x = draw(ex1.c.values, n, seed=11)
        emp = x.T @ x / n
        c = ex1.c.values
        assert np.linalg.norm(emp - c) / np.linalg.norm(c) <= 0.02

    def test_singular_factor(self):
        c = np.array([[1.0, 1.0], [1.0, 1.0]])
        F = gaussian_factor(c)
        np.testing.assert_allclose(F @ F.T, c, atol=1e-14)

    def test_uses_cholesky_when_pd(self, ex1):
        F = gaussian_factor(ex1.c)
        assert np.all(np.triu(F, 1) == 0.0)
        np.testing.assert_allclose(F @ F.T, ex1.c.values, rtol=1e-14)


def example1_config(n=200_000, seed=1, P=100.0, t=4):
    stats = ChannelStats.from_array(EXAMPLE1_COVARIANCE)
    return SimConfig(seed, n, stats, LinkBudget(P, 100), TrainingPlan(t))


class TestEstimationSim:
    def test_error_covariance_within_three_percent(self, backend):
        report = run_estimation_sim(example1_config())
        assert report.frobenius_rel_err_c_tilde <= 0.03
        c_hat, _ = analytic_reference(example1_config())
        rel = np.linalg.norm(report.empirical_c_hat.values - c_hat.values) / np.linalg.norm(c_hat.values)
        assert rel <= 0.03

    def test_cross_covariance_uncorrelated(self, backend):
        report = run_estimation_sim(example1_config())
        assert np.all(np.abs(report.cross_cov) <= 4 * report.cross_cov_stderr)
        assert np.all(report.cross_cov_stderr > 0)

    def test_deterministic(self, backend):
        a = run_estimation_sim(example1_config(n=5000, seed=42)).to_dict()
        b = run_estimation_sim(example1_config(n=5000, seed=42)).to_dict()
        assert a == b
        c = run_estimation_sim(example1_config(n=5000, seed=43)).to_dict()
        assert a != c

    def test_backends_agree(self, monkeypatch):
        if "compiled" not in _backend.available():
            pytest.skip("compiled kernels not built")
        reports = []
        for name in ("compiled", "python"):
            monkeypatch.setattr(_backend, "kernels", _backend.get(name))
            reports.append(run_estimation_sim(example1_config(n=3000, seed=5)))
        x, y = reports
        np.testing.assert_allclose(x.empirical_c_tilde.values, y.empirical_c_tilde.values, rtol=1e-10)
        np.testing.assert_allclose(x.cross_cov, y.cross_cov, rtol=1e-9, atol=1e-12)

    def test_zero_power(self, backend):
        report = run_estimation_sim(example1_config(n=50_000, P=0.0))
        c = report.empirical_c_tilde.values
        np.testing.assert_array_equal(report.empirical_c_hat.values, np.zeros((2, 2)))
        assert np.linalg.norm(c - EXAMPLE1_COVARIANCE) / np.linalg.norm(EXAMPLE1_COVARIANCE) <= 0.03

    def test_first_trial_matches_mmse_estimate(self, ex1):
        """Rebuild trial 0 from the documented draw layout and estimate it
        through the public estimator rather than the kernel's gain matrix."""
        config = example1_config(n=1, seed=3, P=2.0, t=3)
        m, t = 2, 3
        z = CounterRng(3).normals(m * (1 + t))
        H = gaussian_factor(ex1.c) @ z[:m]
        x = math.sqrt(2.0)
        y = x * H[None, :] + z[m:].reshape(t, m)
        hhat = mmse_estimate(ex1, config.budget, TrainingObservation(y, x))
        report = run_estimation_sim(config)
        np.testing.assert_allclose(report.empirical_c_hat.values, np.outer(hhat, hhat), rtol=1e-12)
        np.testing.assert_allclose(report.cross_cov, np.outer(hhat, H - hhat), rtol=1e-10, atol=1e-14)

    def test_report_fields(self):
        report = run_estimation_sim(example1_config(n=100))
        d = report.to_dict()
        assert d["num_trials"] == 100 and d["seed"] == 1
        assert np.array_equal(np.asarray(d["empirical_c_tilde"]), np.asarray(d["empirical_c_tilde"]).T)
        assert report.frobenius_rel_err_c_tilde >= 0

    @pytest.mark.parametrize("kw", [{"n": 0}, {"t": 0}, {"seed": -1}, {"seed": 2**64}])
    def test_config_validation(self, kw):
        with pytest.raises(InvalidConfig):
            example1_config(**kw)


class TestAmgmOracle:
    @pytest.mark.parametrize("seed", range(5))
    def test_dominance(self, seed):
        rng = np.random.default_rng(seed)
        stats = ChannelStats.from_array(random_spd(rng, 2))
        ct = error_covariance(stats, LinkBudget(1.0, 10), TrainingPlan(3))
        result = amgm_oracle(stats, ct, 1.0, 3, 1000, CounterRng(seed))
        assert result.max_random_mi <= result.equal_power_mi + 1e-9

    def test_forced_equal_spectrum(self, ex1):
        ct = error_covariance(ex1, LinkBudget(1.0, 10), TrainingPlan(3))
        equal = amgm_oracle(ex1, ct, 1.0, 3, 1, CounterRng(0)).equal_power_mi
        assert mutual_information_kronecker(np.full(3, 1.0), ex1, ct) == pytest.approx(equal, abs=1e-12)

    def test_scalar_concentrated_split(self, scalar_stats):
        ct = error_covariance(scalar_stats, LinkBudget(1.0, 10), TrainingPlan(1))
        concentrated = mutual_information_kronecker([2.0, 0.0], scalar_stats, ct)
        equal = amgm_oracle(scalar_stats, ct, 1.0, 2, 10, CounterRng(1)).equal_power_mi
        assert concentrated == pytest.approx(math.log2(1.5), rel=1e-14)
        assert equal == pytest.approx(2 * (1 - math.log2(1.5)), rel=1e-14)
        assert concentrated < equal

    def test_spectrum_trace(self):
        s = random_spectrum(CounterRng(9), 5, 2.5)
        assert s.min() > 0 and s.sum() == pytest.approx(12.5, rel=1e-14)

    @pytest.mark.parametrize("t_d,n", [(1, 10), (3, 0)])
    def test_validation(self, ex1, t_d, n):
        with pytest.raises(InvalidConfig):
            amgm_oracle(ex1, ex1.c, 1.0, t_d, n, CounterRng(0))
