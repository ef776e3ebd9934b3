"""Chaos diagnostics: attractor sections, delay embedding and the largest
Lyapunov exponent.

The exponent estimator follows the nearest-neighbor divergence recipe:
embed the series, pair every point with its nearest neighbor outside a
temporal exclusion window, track the mean log separation of the pairs k
steps ahead, and read the exponent off the initial slope of that curve.
A positive slope on a bounded attractor is the chaos signature; the
magnitude depends on the embedding and fit window, so the fit residual is
reported alongside for judging the linear stretch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigError, DegenerateError, LengthError
from .solver import Trajectory

_QUERY_CHUNK = 4096
_DEGENERATE_SPAN = 1e-14


@dataclass(frozen=True)
class EmbeddingConfig:
    """Reconstruction and fit parameters for the exponent estimator.

    fit_range is a pair of sample offsets (k_min, k_max) into the
    divergence curve; the exponent is the least-squares slope of mean log
    distance versus time over that stretch.
    """

    dimension: int = 4
    lag: int = 1
    theiler: int = 0
    fit_range: tuple[int, int] = (10, 200)
    transient_skip: float = 0.3

    def __post_init__(self):
        if self.dimension < 2:
            raise ConfigError(f"embedding dimension must be >= 2, got {self.dimension}")
        if self.lag < 1:
            raise ConfigError(f"lag must be >= 1, got {self.lag}")
        if self.theiler < 0:
            raise ConfigError(f"theiler window must be >= 0, got {self.theiler}")
        k_min, k_max = self.fit_range
        if not 0 <= k_min < k_max:
            raise ConfigError(f"need 0 <= k_min < k_max, got {self.fit_range}")
        if not 0.0 <= self.transient_skip < 1.0:
            raise ConfigError(
                f"transient_skip must be in [0, 1), got {self.transient_skip}"
            )


@dataclass(frozen=True)
class LyapunovEstimate:
    """Largest-exponent fit: slope (1/time units), the divergence curve as
    (time, mean log distance) pairs, and the RMS residual of the fit."""

    mle: float
    divergence_curve: tuple[tuple[float, float], ...]
    fit_residual: float


def _skipped(values: np.ndarray, fraction: float) -> tuple[np.ndarray, int]:
    s = int(round(fraction * len(values)))
    return values[s:], s


def attractor_xy(
    traj: Trajectory, tau: float, transient_skip: float = 0.0
) -> np.ndarray:
    """Pairs (x(t), x(t - tau)) for scatter export, oldest first.

    Exactly len(traj) - round(tau/h) - skip pairs are produced; tau = 0
    degenerates to the diagonal.
    """
    if not 0.0 <= transient_skip < 1.0:
        raise ConfigError(f"transient_skip must be in [0, 1), got {transient_skip}")
    x = np.asarray(traj.values, dtype=float)
    k = round(tau / traj.step) if tau > 0.0 else 0
    s = int(round(transient_skip * len(x)))
    if len(x) - k - s <= 0:
        raise LengthError(
            f"trajectory of {len(x)} samples cannot host a delay of {k} samples"
            f" plus a transient of {s}"
        )
    start = k + s
    return np.column_stack([x[start:], x[start - k : len(x) - k]])


def delay_embed(traj: Trajectory, cfg: EmbeddingConfig) -> np.ndarray:
    """Delay-coordinate vectors v_i = (x_i, x_{i+L}, ..., x_{i+(m-1)L})."""
    x, _ = _skipped(np.asarray(traj.values, dtype=float), cfg.transient_skip)
    m, lag = cfg.dimension, cfg.lag
    count = len(x) - (m - 1) * lag
    if count <= cfg.fit_range[1]:
        raise LengthError(
            f"{len(x)} samples are too few for dimension {m}, lag {lag} and"
            f" fit range {cfg.fit_range}"
        )
    return np.column_stack([x[i * lag : i * lag + count] for i in range(m)])


def _nearest_neighbors(points: np.ndarray, theiler: int) -> np.ndarray:
    """Index of each point's nearest neighbor outside the temporal window;
    -1 where none exists among the k closest candidates."""
    n = len(points)
    k_query = min(n, 2 * theiler + 4)
    tree = cKDTree(points)
    nn = np.full(n, -1, dtype=np.int64)
    for lo in range(0, n, _QUERY_CHUNK):
        chunk = points[lo : lo + _QUERY_CHUNK]
        _, idx = tree.query(chunk, k=k_query, workers=-1)
        if idx.ndim == 1:
            idx = idx[:, None]
        for row in range(len(chunk)):
            i = lo + row
            for j in idx[row, 1:]:
                if abs(int(j) - i) > theiler:
                    nn[i] = j
                    break
    return nn


def mle(traj: Trajectory, cfg: EmbeddingConfig) -> LyapunovEstimate:
    """Largest Lyapunov exponent of a trajectory under `cfg`.

    Raises DegenerateError for an (almost) constant series and LengthError
    when the series cannot support the embedding and fit window.
    """
    x, _ = _skipped(np.asarray(traj.values, dtype=float), cfg.transient_skip)
    if np.ptp(x) < _DEGENERATE_SPAN:
        raise DegenerateError("series is constant; no divergence to measure")
    points = delay_embed(traj, cfg)
    n = len(points)
    nn = _nearest_neighbors(points, cfg.theiler)
    base = np.nonzero(nn >= 0)[0]
    if len(base) == 0:
        raise DegenerateError("no neighbor pairs outside the theiler window")
    partner = nn[base]

    k_min, k_max = cfg.fit_range
    h = traj.step
    times = np.empty(k_max + 1)
    curve = np.empty(k_max + 1)
    for k in range(k_max + 1):
        ok = (base + k < n) & (partner + k < n)
        d = np.linalg.norm(points[base[ok] + k] - points[partner[ok] + k], axis=1)
        d = d[d > 0.0]
        times[k] = k * h
        curve[k] = np.log(d).mean() if len(d) else np.nan
    sel = np.isfinite(curve)
    sel[:k_min] = False
    if sel.sum() < 2:
        raise DegenerateError("fewer than two usable points in the fit range")
    design = np.column_stack([times[sel], np.ones(int(sel.sum()))])
    coef, residual, *_ = np.linalg.lstsq(design, curve[sel], rcond=None)
    fit_residual = (
        float(np.sqrt(residual[0] / sel.sum())) if len(residual) else 0.0
    )
    pairs = tuple(
        (float(t), float(c)) for t, c in zip(times, curve) if math.isfinite(c)
    )
    return LyapunovEstimate(float(coef[0]), pairs, fit_residual)
