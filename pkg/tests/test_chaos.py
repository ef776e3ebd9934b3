"""Attractor export, delay embedding and Lyapunov-exponent tests.

Slope oracles: a periodic orbit has zero mean divergence slope, a
contracting linear system a negative one; both bounds were calibrated on
the exact configurations used here.
"""

import numpy as np
import pytest

from fdde_atlas import (
    ConfigError,
    DegenerateError,
    EmbeddingConfig,
    FddeProblem,
    LengthError,
    Trajectory,
    attractor_xy,
    delay_embed,
    linear_rhs,
    mle,
    parse_rhs,
    simulate,
)


def _traj(values, h=0.1):
    return Trajectory(0.0, h, np.asarray(values, float))


class TestAttractorXY:
    def test_constant_trajectory_sits_at_a_point(self):
        pts = attractor_xy(_traj([2.0] * 50), tau=0.5)
        assert pts.shape == (45, 2)
        assert np.all(pts == 2.0)

    def test_zero_delay_is_the_diagonal(self):
        pts = attractor_xy(_traj([1.0, 2.0, 3.0]), tau=0.0)
        assert np.all(pts[:, 0] == pts[:, 1])

    def test_pair_alignment(self):
        pts = attractor_xy(_traj(np.arange(10.0)), tau=0.3)
        # x(t) leads x(t - tau) by k = 3 samples
        assert np.all(pts[:, 0] - pts[:, 1] == 3.0)

    def test_count_is_exact(self):
        n, k = 100, 7
        for skip in (0.0, 0.25, 0.5):
            pts = attractor_xy(_traj(np.arange(float(n))), tau=k * 0.1, transient_skip=skip)
            assert len(pts) == n - k - int(round(skip * n))

    def test_too_short_raises(self):
        with pytest.raises(LengthError):
            attractor_xy(_traj([1.0, 2.0]), tau=0.5)


class TestDelayEmbed:
    def test_two_dim_unit_lag(self):
        cfg = EmbeddingConfig(dimension=2, lag=1, fit_range=(0, 1), transient_skip=0.0)
        out = delay_embed(_traj([1.0, 2.0, 3.0, 4.0]), cfg)
        assert out.tolist() == [[1, 2], [2, 3], [3, 4]]

    def test_vector_count(self):
        cfg = EmbeddingConfig(dimension=3, lag=2, fit_range=(0, 2), transient_skip=0.0)
        out = delay_embed(_traj(np.arange(10.0)), cfg)
        assert out.shape == (6, 3)

    def test_dimension_one_rejected_by_config(self):
        with pytest.raises(ConfigError):
            EmbeddingConfig(dimension=1, lag=1)

    def test_bad_configs(self):
        with pytest.raises(ConfigError):
            EmbeddingConfig(dimension=2, lag=0)
        with pytest.raises(ConfigError):
            EmbeddingConfig(dimension=2, lag=1, fit_range=(5, 5))
        with pytest.raises(ConfigError):
            EmbeddingConfig(dimension=2, lag=1, transient_skip=1.0)

    def test_too_short_raises(self):
        cfg = EmbeddingConfig(dimension=4, lag=3, fit_range=(0, 50), transient_skip=0.0)
        with pytest.raises(LengthError):
            delay_embed(_traj(np.arange(20.0)), cfg)


import functools


@functools.lru_cache(maxsize=1)
def _decaying_trajectory():
    rhs = linear_rhs(-3.0, -7.0)
    tau = 0.95 * 0.27582411913999666  # 5% inside the stability boundary at 0.8
    return simulate(FddeProblem(rhs, 0.8, tau, 0.1, horizon=40.0)), tau


class TestMle:
    def test_periodic_signal_has_flat_divergence(self):
        h = 0.05
        t = np.arange(0.0, 400.0, h)
        lag = round((np.pi / 2) / h)
        cfg = EmbeddingConfig(dimension=4, lag=lag, theiler=2 * lag,
                              fit_range=(10, 200), transient_skip=0.1)
        est = mle(_traj(np.sin(t), h), cfg)
        assert abs(est.mle) <= 0.05

    def test_decaying_system_contracts(self):
        traj, tau = _decaying_trajectory()
        lag = round(tau / traj.step)
        cfg = EmbeddingConfig(dimension=4, lag=lag, theiler=2 * lag,
                              fit_range=(10, 200), transient_skip=0.1)
        est = mle(traj, cfg)
        assert est.mle < 0

    def test_time_reversal_flips_the_sign_class(self):
        traj, tau = _decaying_trajectory()
        lag = round(tau / traj.step)
        cfg = EmbeddingConfig(dimension=4, lag=lag, theiler=2 * lag,
                              fit_range=(10, 200), transient_skip=0.1)
        reversed_traj = Trajectory(0.0, traj.step, traj.values[::-1].copy())
        assert mle(traj, cfg).mle < 0
        assert mle(reversed_traj, cfg).mle > 0

    def test_scale_invariance(self):
        traj, tau = _decaying_trajectory()
        lag = round(tau / traj.step)
        cfg = EmbeddingConfig(dimension=4, lag=lag, theiler=2 * lag,
                              fit_range=(10, 200), transient_skip=0.1)
        base = mle(traj, cfg)
        scaled = mle(Trajectory(0.0, traj.step, 3.7 * traj.values), cfg)
        assert abs(base.mle - scaled.mle) <= 1e-9
        shift = np.array([c for _, c in scaled.divergence_curve]) - np.array(
            [c for _, c in base.divergence_curve]
        )
        assert np.abs(shift - np.log(3.7)).max() <= 1e-9

    def test_constant_series_is_degenerate(self):
        cfg = EmbeddingConfig(dimension=2, lag=1, fit_range=(0, 5), transient_skip=0.0)
        with pytest.raises(DegenerateError):
            mle(_traj([4.0] * 300), cfg)

    def test_divergence_curve_is_nonempty_and_fit_recorded(self):
        traj, tau = _decaying_trajectory()
        lag = round(tau / traj.step)
        cfg = EmbeddingConfig(dimension=3, lag=lag, theiler=lag,
                              fit_range=(5, 80), transient_skip=0.1)
        est = mle(traj, cfg)
        assert len(est.divergence_curve) > 0
        assert est.fit_residual >= 0.0
