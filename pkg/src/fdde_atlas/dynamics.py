"""Right-hand sides f(x, x_delayed), equilibria and linearization.

The linearized pair (a, b) = (d f/d x, d f/d x_delayed) evaluated at an
equilibrium is the coordinate used by the stability map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import expressions
from .errors import DomainError
from .stability import (
    CriticalAlphaResult,
    Region,
    RegionLabel,
    SystemParams,
    Verdict,
    classify_region,
    critical_alpha,
    stability_verdict,
)

EQUILIBRIUM_TOL = 1e-9


@dataclass(frozen=True)
class Rhs2:
    """Two-argument right-hand side f(x, xd), xd being the delayed state.

    `origin` records where the function came from: ("parsed", source text)
    or ("builtin", example id).
    """

    func: Callable[[float, float], float]
    origin: tuple[str, str]
    ast: Optional[expressions.Node] = field(default=None, compare=False)

    def __call__(self, x: float, xd: float) -> float:
        return self.func(x, xd)


@dataclass(frozen=True)
class Equilibrium:
    """An equilibrium x* with the linearized coefficients a, b at it."""

    x_star: float
    a: float
    b: float


@dataclass(frozen=True)
class EquilibriumReport:
    equilibrium: Equilibrium
    region: RegionLabel
    verdict: Verdict
    critical: Optional[CriticalAlphaResult]


def parse_rhs(text: str) -> Rhs2:
    """Parse an expression in `x` and `xd` into an evaluatable Rhs2."""
    ast = expressions.parse(text)
    return Rhs2(expressions.compile_node(ast), ("parsed", text), ast)


def linear_rhs(a: float, b: float) -> Rhs2:
    """The linear system a*x + b*xd."""
    return parse_rhs(f"{float(a)!r}*x + {float(b)!r}*xd")


def builtin_rhs(example_id: str) -> Rhs2:
    """Named right-hand sides used by the reproduction manifest."""
    try:
        text = _BUILTIN_TEXT[example_id]
    except KeyError:
        raise KeyError(
            f"unknown builtin {example_id!r}; known: {sorted(_BUILTIN_TEXT)}"
        ) from None
    ast = expressions.parse(text)
    return Rhs2(expressions.compile_node(ast), ("builtin", example_id), ast)


_BUILTIN_TEXT = {
    "ex1-linear": "-1.5*x - 5*xd",
    "ex1-positive": "2*x - x^2 - xd^3 - 4*xd",
    "ex2": "-9*x - x^2 - 10.9*xd - xd^3",
    "ex2-positive": "9*x - 9.03*xd",
    "ex3": "-x - x^2 - 1.5*xd - xd^3",
    "sec5": "x - x^2 + 5*xd - xd^3",
}


def find_equilibria(rhs, lo: float, hi: float, grid: int = 400) -> list[float]:
    """Roots of g(x) = f(x, x) on [lo, hi] via sign scan plus bisection.

    Only transversal (sign-changing) roots are found; tangential roots of
    even multiplicity are out of scope.  Result is deduplicated and sorted.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    if grid < 2:
        raise DomainError("grid must be >= 2")
    xs = np.linspace(lo, hi, grid)
    g = np.array([rhs(x, x) for x in xs])
    roots = []
    for i in range(len(xs) - 1):
        gi, gj = g[i], g[i + 1]
        if gi == 0.0:
            roots.append(xs[i])
            continue
        if np.isfinite(gi) and np.isfinite(gj) and (gi < 0) != (gj < 0):
            a_, b_ = xs[i], xs[i + 1]
            fa = gi
            while b_ - a_ > 1e-12:
                m = 0.5 * (a_ + b_)
                fm = rhs(m, m)
                if fm == 0.0:
                    a_ = b_ = m
                    break
                if (fa < 0) != (fm < 0):
                    b_ = m
                else:
                    a_, fa = m, fm
            roots.append(0.5 * (a_ + b_))
    if g[-1] == 0.0:
        roots.append(xs[-1])
    out: list[float] = []
    for r in sorted(roots):
        if not out or abs(r - out[-1]) > 1e-8 * max(1.0, abs(r)):
            out.append(float(r))
    return out


def linearize(rhs, x_star: float) -> Equilibrium:
    """Central-difference partials at (x*, x*), Richardson-extrapolated once.

    Requires |f(x*, x*)| <= 1e-9 (x* actually is an equilibrium).
    """
    resid = abs(rhs(x_star, x_star))
    if not resid <= EQUILIBRIUM_TOL:
        raise DomainError(
            f"x*={x_star} is not an equilibrium: |f(x*,x*)| = {resid:.3e}"
        )
    h = 1e-6 * max(1.0, abs(x_star))

    def d1(step):
        return (rhs(x_star + step, x_star) - rhs(x_star - step, x_star)) / (2 * step)

    def d2(step):
        return (rhs(x_star, x_star + step) - rhs(x_star, x_star - step)) / (2 * step)

    # one Richardson step: (4 D(h/2) - D(h)) / 3 kills the O(h^2) term
    a = (4.0 * d1(h / 2) - d1(h)) / 3.0
    b = (4.0 * d2(h / 2) - d2(h)) / 3.0
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError("non-finite partial derivatives at equilibrium")
    return Equilibrium(x_star, float(a), float(b))


def analyze_equilibrium(rhs, x_star, alpha, tau) -> EquilibriumReport:
    """Linearize, classify the (a, b) region and judge stability at (alpha, tau).

    The critical-order split of the alpha axis is attached whenever the
    parameters fall in the delay-dependent region (b < -|a|).
    """
    eq = linearize(rhs, x_star)
    params = SystemParams(eq.a, eq.b)
    region = classify_region(params)
    verdict = stability_verdict(params, alpha, tau)
    critical = None
    if region.region in (Region.DS1, Region.DS2, Region.DS3) and tau > 0:
        critical = critical_alpha(params, tau)
    return EquilibriumReport(eq, region, verdict, critical)
