"""Solver tests: quadrature weights, analytic limits, qualitative verdicts.

The fractional no-delay oracle is a truncated power series for the
one-parameter Mittag-Leffler function, summed independently of the solver.
"""

import math

import numpy as np
import pytest

from fdde_atlas import (
    ConfigError,
    FddeProblem,
    SystemParams,
    Trajectory,
    amplitude_verdict,
    boundary_tau,
    delayed_value,
    kernel_weights,
    linear_rhs,
    parse_rhs,
    simulate,
    stability_verdict,
    Verdict,
)
from fdde_atlas.solver import snap_step


def mittag_leffler(alpha, z, tol=1e-18):
    """Truncated series sum_k z^k / Gamma(alpha k + 1); |z| small enough
    here that float64 summation is accurate to ~1e-15."""
    total = 0.0
    for k in range(400):
        term = z**k / math.gamma(alpha * k + 1.0)
        total += term
        if abs(term) < tol * max(1.0, abs(total)) and k > 10:
            break
    return total


# -------------------------------------------------------------- kernel weights

class TestKernelWeights:
    def test_order_one_reduces_to_classical_rules(self):
        h = 0.125
        for n in (1, 2, 5, 30):
            kw = kernel_weights(1.0, n, h)
            assert np.allclose(kw.predictor, h)
            expect = np.full(n + 1, h)
            expect[0] = expect[-1] = h / 2
            assert np.allclose(kw.corrector, expect)

    def test_half_order_frozen_values(self):
        # closed forms evaluated by hand for alpha = 1/2, n = 2, h = 1:
        # predictor: 2(sqrt(2)-1), 2; corrector: A/Gamma(2.5) with
        # A = (1 - 0.5*sqrt(2), 2*sqrt(2) - 2, 1)
        kw = kernel_weights(0.5, 2, 1.0)
        assert kw.predictor == pytest.approx(
            [0.8284271247461903, 2.0], rel=1e-14
        )
        assert kw.corrector == pytest.approx(
            [0.2203297375284314, 0.6231866060136242, 0.752252778063675],
            rel=1e-14,
        )

    def test_positivity(self):
        for alpha in np.arange(0.1, 1.01, 0.1):
            for n in (1, 3, 17, 1000):
                kw = kernel_weights(float(alpha), n, 0.01)
                assert np.all(kw.predictor > 0)
                assert np.all(kw.corrector > 0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ConfigError):
            kernel_weights(0.5, 0, 1.0)
        with pytest.raises(ConfigError):
            kernel_weights(1.5, 4, 1.0)


# -------------------------------------------------------------- delayed_value

class TestDelayedValue:
    def _traj(self, values, h=0.1):
        return Trajectory(0.0, h, np.asarray(values, float))

    def test_history_before_delay_horizon(self):
        traj = self._traj([1.0, 2.0, 3.0])
        assert delayed_value(traj, 0, 0.2, history=9.0) == 9.0
        assert delayed_value(traj, 1, 0.2, history=9.0) == 9.0

    def test_zero_delay_is_identity(self):
        traj = self._traj([1.0, 2.0, 3.0])
        for i in range(3):
            assert delayed_value(traj, i, 0.0, history=9.0) == traj.values[i]

    def test_direct_indexing(self):
        traj = self._traj(list(range(20)))
        assert delayed_value(traj, 10, 0.3, history=-1.0) == 7.0


# ------------------------------------------------------------------- simulate

class TestSimulate:
    def test_classical_exponential(self):
        pr = FddeProblem(parse_rhs("-x"), 1.0, 0.0, 1.0, horizon=5.0, step=1e-3)
        tr = simulate(pr)
        assert np.abs(tr.values - np.exp(-tr.times)).max() < 1e-4

    def test_mittag_leffler_oracle(self):
        pr = FddeProblem(parse_rhs("-x"), 0.6, 0.0, 1.0, horizon=2.0, step=1e-3)
        tr = simulate(pr)
        ref = np.array([mittag_leffler(0.6, -(t**0.6)) for t in tr.times])
        assert np.abs(tr.values - ref).max() < 1e-3

    def test_equilibrium_is_preserved_exactly(self):
        rhs = parse_rhs("-9*x - x^2 - 10.9*xd - xd^3")  # equilibrium at 0
        tr = simulate(FddeProblem(rhs, 0.5, 0.38, 0.0, horizon=5.0))
        assert np.all(tr.values == 0.0)
        rhs2 = parse_rhs("x - x^2 + 5*xd - xd^3")  # equilibrium at 2
        tr2 = simulate(FddeProblem(rhs2, 0.27, 0.31, 2.0, horizon=5.0))
        assert np.all(tr2.values == 2.0)

    def test_trajectory_length_and_grid(self):
        tr = simulate(FddeProblem(parse_rhs("-x"), 0.8, 0.5, 1.0, horizon=3.0, step=0.1))
        h, k = snap_step(0.5, 0.1)
        assert tr.step == h and k == 5
        assert len(tr.values) == math.floor(3.0 / h) + 1

    def test_delay_snapping(self):
        h, k = snap_step(0.31, 2.0**-7 * 0.31)
        assert k == 128 and h * k == pytest.approx(0.31, rel=1e-15)
        h, k = snap_step(0.5, 0.4)  # round(1.25) -> 1
        assert k == 1 and h == 0.5

    def test_stable_reference_run_decays(self):
        rhs = parse_rhs("-9*x - x^2 - 10.9*xd - xd^3")
        tr = simulate(FddeProblem(rhs, 0.45, 0.38, 0.1, horizon=60.0))
        assert tr.blowup is None
        assert amplitude_verdict(tr, 0.0) == "decayed"

    def test_unstable_reference_run_blows_up(self):
        rhs = parse_rhs("-9*x - x^2 - 10.9*xd - xd^3")
        tr = simulate(FddeProblem(rhs, 0.30, 0.38, 0.1, horizon=60.0))
        assert tr.blowup is not None
        idx, value = tr.blowup
        assert abs(value) > 1e10 or not math.isfinite(value)
        assert len(tr.values) == idx
        assert np.all(np.isfinite(tr.values))
        assert amplitude_verdict(tr, 0.0) == "divergent"

    def test_config_errors(self):
        with pytest.raises(ConfigError):
            FddeProblem(parse_rhs("-x"), 0.0, 0.1, 1.0)
        with pytest.raises(ConfigError):
            FddeProblem(parse_rhs("-x"), 0.5, -0.1, 1.0)
        with pytest.raises(ConfigError):
            FddeProblem(parse_rhs("-x"), 0.5, 0.1, 1.0, horizon=1.0, step=-0.1)
        with pytest.raises(ConfigError):
            FddeProblem(parse_rhs("-x"), 0.5, 0.1, 1.0, horizon=0.001, step=0.01)


class TestConvergence:
    def test_halving_h_shrinks_error_at_least_twofold(self):
        rhs = parse_rhs("-x + 0.5*xd")
        sols = {}
        for h in (0.05, 0.025, 0.00625):
            tr = simulate(FddeProblem(rhs, 0.9, 0.5, 1.0, horizon=5.0, step=h))
            sols[h] = tr.values
        ref = sols[0.00625]
        err = {}
        for h in (0.05, 0.025):
            stride = round(h / 0.00625)
            err[h] = np.abs(sols[h] - ref[::stride][: len(sols[h])]).max()
        assert err[0.05] / err[0.025] >= 2.0

    def test_order_one_is_second_order_accurate(self):
        errs = []
        for h in (0.01, 0.005, 0.0025):
            tr = simulate(FddeProblem(parse_rhs("-x"), 1.0, 0.0, 1.0, horizon=5.0, step=h))
            errs.append(np.abs(tr.values - np.exp(-tr.times)).max())
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
        assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)

    def test_zero_delay_matches_manual_stepper(self):
        # independent scalar reimplementation of the same quadrature
        alpha, h, n_steps, x0 = 0.7, 0.02, 200, 1.0

        def f(x, xd):
            return -x + 0.5 * xd

        g1 = math.gamma(alpha + 1.0)
        g2 = math.gamma(alpha + 2.0)
        xs = [x0]
        fs = [f(x0, x0)]
        for n in range(1, n_steps + 1):
            pred = x0 + h**alpha / g1 * sum(
                ((n - j) ** alpha - (n - 1 - j) ** alpha) * fs[j] for j in range(n)
            )
            a0c = (n - 1) ** (alpha + 1) - (n - alpha - 1) * n**alpha
            mid = sum(
                (
                    (n - j + 1) ** (alpha + 1)
                    - 2 * (n - j) ** (alpha + 1)
                    + (n - j - 1) ** (alpha + 1)
                )
                * fs[j]
                for j in range(1, n)
            )
            xn = x0 + h**alpha / g2 * (a0c * fs[0] + mid + f(pred, pred))
            xs.append(xn)
            fs.append(f(xn, xn))

        tr = simulate(
            FddeProblem(parse_rhs("-x + 0.5*xd"), alpha, 0.0, x0,
                        horizon=n_steps * h, step=h)
        )
        assert np.abs(tr.values - np.asarray(xs)).max() < 1e-13


# ------------------------------------------------- cross-module verdict checks

class TestLinearVerdictAgreement:
    def test_hopf_crossing_amplitudes(self):
        params = SystemParams(-3, -7)
        tau_c = boundary_tau(params, 0.8)
        rhs = linear_rhs(-3, -7)
        for factor, should_decay in ((0.95, True), (1.05, False)):
            tr = simulate(FddeProblem(rhs, 0.8, factor * tau_c, 0.1, horizon=60.0))
            dev = np.abs(tr.values)
            q = len(dev) // 5
            first, last = dev[:q].max(), dev[-q:].max()
            if should_decay:
                assert last < first
            else:
                assert last > first

    @pytest.mark.parametrize(
        "a,b,alpha,tau",
        [
            (-9.0, -10.9, 0.45, 0.38),
            (-9.0, -10.9, 0.7, 0.45),
            (-3.0, -7.0, 1.0, 0.31),
            (-1.0, -1.5, 0.4, 2.5),
        ],
    )
    def test_stable_points_shrink(self, a, b, alpha, tau):
        assert stability_verdict(SystemParams(a, b), alpha, tau) is Verdict.STABLE
        tr = simulate(FddeProblem(linear_rhs(a, b), alpha, tau, 0.1, horizon=60.0))
        dev = np.abs(tr.values)
        q = len(dev) // 5
        assert dev[-q:].max() < dev[:q].max()

    @pytest.mark.parametrize(
        "a,b,alpha,tau",
        [
            (-9.0, -10.9, 0.3, 0.38),
            (-3.0, -7.0, 0.27, 0.31),
            (-1.0, -1.5, 0.91, 2.5),
        ],
    )
    def test_unstable_points_grow(self, a, b, alpha, tau):
        assert stability_verdict(SystemParams(a, b), alpha, tau) is Verdict.UNSTABLE
        tr = simulate(FddeProblem(linear_rhs(a, b), alpha, tau, 0.1, horizon=60.0))
        if tr.blowup is not None:
            return  # grew past the threshold, clearly unstable
        dev = np.abs(tr.values)
        q = len(dev) // 5
        assert dev[-q:].max() > dev[:q].max()
