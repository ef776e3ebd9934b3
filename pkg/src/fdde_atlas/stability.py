"""Hopf boundary curve, region classification and critical fractional orders.

The linear system D^alpha x = a x(t) + b x(t-tau) with 0 < alpha <= 1 has
three parameter regimes in the (a, b) plane:

* U  (b > -a): unstable for every delay.
* S  (a < 0, a < b < -a): stable for every delay.
* delay-dependent (b < -|a|): stable exactly for delays below a boundary
  curve tau_c(a, b, alpha).  The shape of alpha -> tau_c splits this strip
  further into DS1 (monotone increasing), DS2 (interior maximum) and, for
  a < 0, DS3 (monotone decreasing).

`a0_of` computes the DS1/DS2 border: the b at which the interior maximum
of the boundary curve detaches from alpha = 1, i.e. the root of
d tau_c/d alpha at alpha = 1.  `a1_of` gives the DS2/DS3 border b = a - 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoRootError

ROOT_XTOL = 1e-10          # argument tolerance for all bracketed root solves
MARGINAL_TOL = 1e-10       # relative tie tolerance for stability_verdict
BOUNDARY_LINE_TOL = 1e-12  # relative tolerance for the a0/a1 boundary lines
A0_SCAN_CAP = 1e6          # give up the a0 bracket search beyond this |b|


@dataclass(frozen=True)
class SystemParams:
    """Coefficients (a, b) of the linearized system a x(t) + b x(t - tau)."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"coefficients must be finite, got {self}")


class Region(enum.Enum):
    U = "U"
    S = "S"
    DS1 = "DS1"
    DS2 = "DS2"
    DS3 = "DS3"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class RegionLabel:
    """Classification verdict plus the border values it was based on."""

    region: Region
    a0: Optional[float] = None
    a1: Optional[float] = None


class StableSide(enum.Enum):
    ABOVE = "above"   # stable for alpha above the threshold
    BELOW = "below"   # stable for alpha below the threshold


class CriticalAlphaKind(enum.Enum):
    ALL_STABLE = "all-stable"
    ALL_UNSTABLE = "all-unstable"
    THRESHOLD = "threshold"
    WINDOW = "window"


@dataclass(frozen=True)
class CriticalAlphaResult:
    """How the alpha axis splits into stable/unstable orders at fixed tau."""

    kind: CriticalAlphaKind
    alpha0: Optional[float] = None
    stable_side: Optional[StableSide] = None
    alpha1: Optional[float] = None
    alpha2: Optional[float] = None

    @staticmethod
    def all_stable():
        return CriticalAlphaResult(CriticalAlphaKind.ALL_STABLE)

    @staticmethod
    def all_unstable():
        return CriticalAlphaResult(CriticalAlphaKind.ALL_UNSTABLE)

    @staticmethod
    def threshold(alpha0, side):
        return CriticalAlphaResult(
            CriticalAlphaKind.THRESHOLD, alpha0=alpha0, stable_side=side
        )

    @staticmethod
    def window(alpha1, alpha2):
        return CriticalAlphaResult(
            CriticalAlphaKind.WINDOW, alpha1=alpha1, alpha2=alpha2
        )


@dataclass(frozen=True)
class TauExtrema:
    """Boundary-curve landmarks: tau* = tau_c(a, b, 1) and, in DS2, the
    interior maximum (alpha**, tau**)."""

    tau_star: float
    alpha_peak: Optional[float] = None
    tau_peak: Optional[float] = None


class Verdict(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"fractional order must be in (0, 1], got {alpha}")


def _check_case1(params: SystemParams) -> None:
    if not params.b < -abs(params.a):
        raise DomainError(
            f"boundary curve needs b < -|a|; got a={params.a}, b={params.b}"
        )


def boundary_tau(params: SystemParams, alpha: float) -> float:
    """Critical delay of the Hopf crossing for b < -|a|.

    The linear system is asymptotically stable for delays in [0, result)
    and loses stability just beyond it.  Strictly positive on the whole
    domain; may overflow to inf as alpha -> 0 when a - b < 1.
    """
    _check_case1(params)
    _check_alpha(alpha)
    a, b = params.a, params.b
    c = math.cos(alpha * math.pi / 2.0)
    s = math.sin(alpha * math.pi / 2.0)
    w = a * c + math.sqrt(b * b - a * a * s * s)
    u = (w * c - a) / b
    # absorb rounding at the arccos endpoints
    if u > 1.0:
        if u > 1.0 + 1e-12:
            raise DomainError(f"arccos argument {u} outside [-1, 1]")
        u = 1.0
    elif u < -1.0:
        if u < -1.0 - 1e-12:
            raise DomainError(f"arccos argument {u} outside [-1, 1]")
        u = -1.0
    try:
        scale = math.exp(-math.log(w) / alpha)
    except OverflowError:
        scale = math.inf
    return math.acos(u) * scale


def _dlogtau_at_one(a: float, b: float) -> float:
    """d log(tau_c)/d alpha evaluated at alpha = 1 (closed form).

    Positive where the boundary curve still rises at alpha = 1 (DS1 side),
    negative where it already falls (DS2/DS3 side); its unique root in
    b < -|a| is the DS1/DS2 border a0(a).
    """
    r = math.sqrt(b * b - a * a)
    return (
        -(math.pi / 2.0) / math.acos(-a / b)
        + math.log(r)
        + (a * math.pi / 2.0) / r
    )


def a0_implicit_residual(a: float, a0: float) -> float:
    """Residual of the implicit a0 equation (cosine form, natural log)."""
    r = math.sqrt(a0 * a0 - a * a)
    denom = a * math.pi / 2.0 + r * math.log(r)
    if denom == 0.0:
        return math.inf
    return (-a / a0) - math.cos(-(r * math.pi / 2.0) / denom)


def a0_of(a: float) -> float:
    """The DS1/DS2 border b = a0(a), root of d tau_c/d alpha|_{alpha=1} = 0.

    Bracketed by scanning b downward from -|a| - 1e-6 in geometrically
    growing offsets, then refined by Brent's method.  The returned value
    also zeroes the implicit-equation residual (`a0_implicit_residual`) to well
    below 1e-8.
    """
    eps = 1e-6
    prev_b = -abs(a) - eps
    prev = _dlogtau_at_one(a, prev_b)
    offset = eps
    while abs(a) + offset <= A0_SCAN_CAP:
        offset *= 2.0
        b = -abs(a) - offset
        cur = _dlogtau_at_one(a, b)
        if math.isfinite(cur) and math.isfinite(prev) and (cur < 0) != (prev < 0):
            root = brentq(
                lambda bb: _dlogtau_at_one(a, bb), b, prev_b, xtol=1e-12
            )
            return float(root)
        prev_b, prev = b, cur
    raise NoRootError(
        f"no sign change of the a0 condition for a={a} within |b| <= {A0_SCAN_CAP:g}"
    )


def a1_of(a: float) -> Optional[float]:
    """The DS2/DS3 border b = a - 1, defined only for a < 0."""
    if a < 0.0:
        return a - 1.0
    return None


def classify_region(params: SystemParams) -> RegionLabel:
    """Place (a, b) into U / S / DS1 / DS2 / DS3 or Boundary.

    Exact ties on the separating lines (b = -a, b = a for a < 0, b = a0,
    b = a1) report Boundary rather than silently picking a side.
    """
    a, b = params.a, params.b
    if b == -a or (a < 0.0 and b == a):
        return RegionLabel(Region.BOUNDARY)
    if b > -a:
        return RegionLabel(Region.U)
    if a < 0.0 and a < b < -a:
        return RegionLabel(Region.S)
    # remaining: b < -|a| (the strict inequalities above exclude the lines)
    a0 = a0_of(params.a)
    a1 = a1_of(params.a)
    if abs(b - a0) <= BOUNDARY_LINE_TOL * max(1.0, abs(a0)):
        return RegionLabel(Region.BOUNDARY, a0=a0, a1=a1)
    if a1 is not None and abs(b - a1) <= BOUNDARY_LINE_TOL * max(1.0, abs(a1)):
        return RegionLabel(Region.BOUNDARY, a0=a0, a1=a1)
    if b < a0:
        return RegionLabel(Region.DS1, a0=a0)
    if a < 0.0:
        if b < a1:
            return RegionLabel(Region.DS2, a0=a0, a1=a1)
        return RegionLabel(Region.DS3, a0=a0, a1=a1)
    return RegionLabel(Region.DS2, a0=a0)


def _golden_max(f, lo: float, hi: float, xtol: float = 1e-10):
    """Golden-section maximization of a unimodal f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a_, b_ = lo, hi
    c_ = b_ - invphi * (b_ - a_)
    d_ = a_ + invphi * (b_ - a_)
    fc, fd = f(c_), f(d_)
    while b_ - a_ > xtol:
        if fc > fd:
            b_, d_, fd = d_, c_, fc
            c_ = b_ - invphi * (b_ - a_)
            fc = f(c_)
        else:
            a_, c_, fc = c_, d_, fd
            d_ = a_ + invphi * (b_ - a_)
            fd = f(d_)
    x = 0.5 * (a_ + b_)
    return x, f(x)


_COARSE_GRID = np.linspace(1e-3, 1.0, 256)


def tau_extrema(params: SystemParams) -> TauExtrema:
    """tau* = tau_c(params, 1) plus the interior maximum when one exists.

    A 256-point coarse scan of (0, 1] guards the golden-section refinement
    against flat stretches; curves whose maximum sits at either end of the
    order range (DS1, DS3) report no peak.
    """
    _check_case1(params)
    tau_star = boundary_tau(params, 1.0)

    def f(alpha):
        return boundary_tau(params, alpha)

    vals = [f(x) for x in _COARSE_GRID]
    i = int(np.argmax(vals))
    if i == 0 or i == len(_COARSE_GRID) - 1 or not math.isfinite(vals[i]):
        return TauExtrema(tau_star)
    alpha_peak, tau_peak = _golden_max(f, _COARSE_GRID[i - 1], _COARSE_GRID[i + 1])
    return TauExtrema(tau_star, alpha_peak=float(alpha_peak), tau_peak=float(tau_peak))


def _bracket_below(f, hi: float, target: float, want_less: bool) -> float:
    """Halve alpha from hi/2 down until f(alpha) is on the requested side."""
    lo = hi / 2.0
    while lo > 1e-12:
        v = f(lo)
        if (v < target) == want_less:
            return lo
        lo /= 2.0
    raise NoRootError("could not bracket the critical order near alpha -> 0")


def critical_alpha(params: SystemParams, tau: float) -> CriticalAlphaResult:
    """Split the order axis at fixed delay by solving tau_c(alpha) = tau.

    DS1: threshold with stability above it (or all-unstable past tau*).
    DS2: threshold below tau*, a stable window between tau* and tau**,
    all-unstable beyond tau**.  DS3: all-stable up to tau*, threshold with
    stability below it past tau*.  Roots are Brent-refined to 1e-10.
    """
    _check_case1(params)
    if not tau > 0.0:
        raise DomainError(f"delay must be positive, got {tau}")

    def f(alpha):
        return boundary_tau(params, alpha)

    ext = tau_extrema(params)
    tau_star = ext.tau_star

    def solve(lo, hi):
        return float(brentq(lambda x: f(x) - tau, lo, hi, xtol=ROOT_XTOL))

    if ext.alpha_peak is not None:
        # DS2-shaped curve: rises to (alpha**, tau**), falls back to tau*
        if tau <= tau_star:
            lo = _bracket_below(f, ext.alpha_peak, tau, want_less=True)
            return CriticalAlphaResult.threshold(
                solve(lo, ext.alpha_peak), StableSide.ABOVE
            )
        if tau < ext.tau_peak:
            lo = _bracket_below(f, ext.alpha_peak, tau, want_less=True)
            alpha1 = solve(lo, ext.alpha_peak)
            alpha2 = solve(ext.alpha_peak, 1.0)
            return CriticalAlphaResult.window(alpha1, alpha2)
        return CriticalAlphaResult.all_unstable()

    # no interior peak: the curve is monotone on (0, 1]
    rising = f(0.5) < tau_star
    if rising:
        if tau > tau_star:
            return CriticalAlphaResult.all_unstable()
        lo = _bracket_below(f, 1.0, tau, want_less=True)
        return CriticalAlphaResult.threshold(solve(lo, 1.0), StableSide.ABOVE)
    if tau <= tau_star:
        return CriticalAlphaResult.all_stable()
    lo = _bracket_below(f, 1.0, tau, want_less=False)
    return CriticalAlphaResult.threshold(solve(lo, 1.0), StableSide.BELOW)


def stability_verdict(params: SystemParams, alpha: float, tau: float) -> Verdict:
    """Stability of the linearized system at a concrete (alpha, tau).

    Delay-independent regions answer directly; in the delay-dependent strip
    the delay is compared against the boundary curve, with ties (relative
    tolerance 1e-10) and region-border parameter lines reported as marginal.
    """
    _check_alpha(alpha)
    if tau < 0.0:
        raise DomainError(f"delay must be nonnegative, got {tau}")
    a, b = params.a, params.b
    if b == -a or (a < 0.0 and b == a):
        return Verdict.MARGINAL
    if b > -a:
        return Verdict.UNSTABLE
    if a < 0.0 and a < b < -a:
        return Verdict.STABLE
    tau_c = boundary_tau(params, alpha)
    if math.isfinite(tau_c) and abs(tau - tau_c) <= MARGINAL_TOL * max(1.0, tau_c):
        return Verdict.MARGINAL
    return Verdict.STABLE if tau < tau_c else Verdict.UNSTABLE
