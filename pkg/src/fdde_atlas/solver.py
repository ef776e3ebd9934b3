"""Predictor-corrector time stepping for scalar Caputo-type FDDEs.

Solves D^alpha x(t) = f(x(t), x(t - tau)) with constant history on
[-tau, 0] by rewriting it as the weakly singular Volterra equation

    x(t) = x(0) + (1 / Gamma(alpha)) * integral_0^t (t-s)^(alpha-1) f ds

and discretizing on a uniform grid with the fractional Adams-Bashforth
(rectangle) predictor followed by one Adams-Moulton (product-trapezoid)
correction.  The full memory sum is kept: step n costs O(n), a whole run
O(N^2).  The delay is snapped onto the grid (h = tau / round(tau / h)) so
the delayed value is an exact lookup, never an interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError

BLOWUP_THRESHOLD = 1e10
DEFAULT_STEP_FRACTION = 2.0 ** -7  # h = 2^-7 * min(1, tau); also h for tau = 0
DEFAULT_HORIZON = 100.0


@dataclass(frozen=True)
class FddeProblem:
    """One simulation: rhs f(x, xd), order, delay, history level and grid.

    `step=None` picks the default h = 2^-7 * min(1, tau) (2^-7 when tau=0).
    The actual step used may differ slightly from the request because of
    delay snapping; read it back from the returned Trajectory.
    """

    rhs: Callable[[float, float], float]
    alpha: float
    tau: float
    history: float
    horizon: float = DEFAULT_HORIZON
    step: Optional[float] = None

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ConfigError(f"order must be in (0, 1], got {self.alpha}")
        if self.tau < 0.0:
            raise ConfigError(f"delay must be nonnegative, got {self.tau}")
        if self.step is not None and not self.step > 0.0:
            raise ConfigError(f"step must be positive, got {self.step}")
        h = self.step if self.step is not None else default_step(self.tau)
        if self.horizon < h:
            raise ConfigError(
                f"horizon {self.horizon} shorter than one step {h}"
            )


@dataclass
class Trajectory:
    """Uniformly sampled solution values x(t0), x(t0+h), ...

    `blowup` is (index, value) when |x| crossed the 1e10 threshold (or went
    non-finite) and the run stopped there; values up to that index are kept.
    """

    t0: float
    step: float
    values: np.ndarray
    blowup: Optional[tuple[int, float]] = None

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.step * np.arange(len(self.values))


@dataclass(frozen=True)
class KernelWeights:
    """Quadrature weights of the memory integral for one target step n.

    `predictor[j]`, j = 0..n-1, are the fractional rectangle weights
    ((n-j)^a - (n-1-j)^a) h^a / a (the 1/Gamma(alpha) normalization is
    applied by the caller).  `corrector[j]`, j = 0..n, are the full
    product-trapezoid weights for the kernel (t-s)^(a-1)/Gamma(a); the
    last entry multiplies the predicted right-hand side.
    """

    alpha: float
    step: float
    predictor: np.ndarray
    corrector: np.ndarray


def default_step(tau: float) -> float:
    if tau > 0.0:
        return DEFAULT_STEP_FRACTION * min(1.0, tau)
    return DEFAULT_STEP_FRACTION


def snap_step(tau: float, step: float) -> tuple[float, int]:
    """Adjust the step so the delay is an exact multiple of it.

    Returns (h, k) with k = tau / h an integer (k = 0 when tau = 0).
    """
    if tau == 0.0:
        return step, 0
    k = max(1, round(tau / step))
    return tau / k, k


def kernel_weights(alpha: float, n: int, step: float = 1.0) -> KernelWeights:
    """Predictor and corrector weights for computing x at step n >= 1."""
    if n < 1:
        raise ConfigError(f"need n >= 1, got {n}")
    if not (0.0 < alpha <= 1.0):
        raise ConfigError(f"order must be in (0, 1], got {alpha}")
    j = np.arange(n, dtype=float)
    ha = step ** alpha
    predictor = ((n - j) ** alpha - (n - 1 - j) ** alpha) * ha / alpha
    corr = np.empty(n + 1)
    a1 = alpha + 1.0
    corr[0] = (n - 1) ** a1 - (n - a1) * n ** alpha
    jj = np.arange(1, n, dtype=float)
    corr[1:n] = (n - jj + 1) ** a1 - 2.0 * (n - jj) ** a1 + (n - jj - 1) ** a1
    corr[n] = 1.0
    corr *= ha / math.gamma(alpha + 2.0)
    return KernelWeights(alpha, step, predictor, corr)


def delayed_value(traj: Trajectory, index: int, tau: float, history: float) -> float:
    """x(t_index - tau) assuming tau is snapped to the trajectory grid."""
    k = round(tau / traj.step) if tau > 0.0 else 0
    i = index - k
    return history if i < 0 else float(traj.values[i])


def simulate(problem: FddeProblem) -> Trajectory:
    """Integrate the problem on [0, horizon].

    With an exact equilibrium as constant history the output is constant to
    machine precision (every quadrature increment vanishes).  The run stops
    early, recording `blowup`, as soon as the state passes 1e10 in absolute
    value or turns non-finite.
    """
    f = problem.rhs
    alpha = problem.alpha
    h, k = snap_step(
        problem.tau,
        problem.step if problem.step is not None else default_step(problem.tau),
    )
    n_steps = int(math.floor(problem.horizon / h + 1e-9))
    x0 = problem.history

    x = np.empty(n_steps + 1)
    fh = np.empty(n_steps + 1)
    x[0] = x0
    fh[0] = f(x0, x0)  # x(-tau) = x0 for k > 0; x(0) itself for tau = 0

    # power tables shared by every step's weights
    m = np.arange(0, n_steps + 2, dtype=float)
    pa = m ** alpha
    pa1 = m ** (alpha + 1.0)
    dpow = pa[1:] - pa[:-1]                      # dpow[i] = (i+1)^a - i^a
    d2pow = pa1[2:] - 2.0 * pa1[1:-1] + pa1[:-2]  # second difference at i+1
    c_pred = h ** alpha / math.gamma(alpha + 1.0)
    c_corr = h ** alpha / math.gamma(alpha + 2.0)

    def failed(n, value):
        return Trajectory(0.0, h, x[:n].copy(), blowup=(n, float(value)))

    for n in range(1, n_steps + 1):
        pred = x0 + c_pred * float(np.dot(dpow[:n], fh[n - 1 :: -1]))
        if not math.isfinite(pred) or abs(pred) > BLOWUP_THRESHOLD:
            return failed(n, pred)
        xd = pred if k == 0 else (x0 if n < k else x[n - k])
        f_pred = f(pred, xd)
        a0c = (n - 1) ** (alpha + 1.0) - (n - alpha - 1.0) * n ** alpha
        tail = float(np.dot(d2pow[: n - 1], fh[n - 1 : 0 : -1])) if n >= 2 else 0.0
        xn = x0 + c_corr * (a0c * fh[0] + tail + f_pred)
        if not math.isfinite(xn) or abs(xn) > BLOWUP_THRESHOLD:
            return failed(n, xn)
        x[n] = xn
        fh[n] = f(xn, xn if k == 0 else (x0 if n < k else x[n - k]))

    return Trajectory(0.0, h, x)


def amplitude_verdict(traj: Trajectory, x_star: float) -> str:
    """Coarse qualitative verdict: 'decayed', 'divergent' or 'bounded'.

    Compares the peak deviation from x_star over the trailing 20% of the
    run against the leading 20%; a recorded blowup, or growth past twice
    the initial amplitude, counts as divergent; shrinking below half of it
    counts as decayed.
    """
    if traj.blowup is not None:
        return "divergent"
    dev = np.abs(traj.values - x_star)
    q = max(1, len(dev) // 5)
    first = float(dev[:q].max())
    last = float(dev[-q:].max())
    if first == 0.0:
        return "decayed" if last == 0.0 else "divergent"
    if last < 0.5 * first:
        return "decayed"
    if last > 2.0 * first:
        return "divergent"
    return "bounded"
