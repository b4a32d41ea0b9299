"""Adaptive Simpson quadrature.

Deliberately a small, self-contained recursive bisection scheme rather than a
wrapper around a library integrator: the tolerances and the subdivision budget
are part of the artifact's reproducibility contract, and the rule is simple
enough to reimplement identically anywhere.

The classic scheme: Simpson on [a, b], Simpson on each half, accept when

    |S_left + S_right - S_whole| <= 15 * tol

and return the Richardson-extrapolated sum. The tolerance is halved on each
side as the recursion descends; tol at a node is max(abs_tol_local,
rel_tol * |local estimate|). Exhausting the subdivision budget raises
QuadratureError carrying the tolerance actually achieved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import QuadratureError, UsageError


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol < 0:
            raise UsageError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise UsageError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureConfig()

# Tail mass discarded when an improper integral is truncated to quantiles.
TRUNCATION_TAIL = 1e-12


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


class _Budget:
    __slots__ = ("left", "worst")

    def __init__(self, n):
        self.left = n
        self.worst = 0.0


# A 2^-60 wide subinterval is below float resolution on any sane domain;
# treat needing one as a failure rather than recursing to the frame limit.
_MAX_DEPTH = 60


def _adapt(f, a, b, fa, fm, fb, whole, abs_tol, rel_tol, budget, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    err = left + right - whole
    tol = max(abs_tol, rel_tol * abs(left + right))
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    budget.worst = max(budget.worst, abs(err) / 15.0)
    if budget.left <= 0 or depth >= _MAX_DEPTH:
        raise QuadratureError("subdivision budget exhausted", budget.worst)
    budget.left -= 1
    half_abs = 0.5 * abs_tol
    return _adapt(
        f, a, m, fa, flm, fm, left, half_abs, rel_tol, budget, depth + 1
    ) + _adapt(f, m, b, fm, frm, fb, right, half_abs, rel_tol, budget, depth + 1)


def integrate(f, a, b, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Integrate a scalar callable over the finite interval [a, b]."""
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise UsageError("integrate needs finite limits; truncate first")
    if b <= a:
        return 0.0
    fa = f(a)
    m = 0.5 * (a + b)
    fm = f(m)
    fb = f(b)
    whole = _simpson(fa, fm, fb, b - a)
    budget = _Budget(config.max_subdivisions)
    return _adapt(
        f, a, b, fa, fm, fb, whole, config.abs_tol, config.rel_tol, budget, 0
    )


def shock_bounds(shock, lo=None, hi=None):
    """Truncation bounds for integrals weighted by the shock density.

    Improper limits are replaced by the 1e-12 / 1 - 1e-12 quantiles; finite
    piece boundaries are clipped into that window.
    """
    qlo = shock.quantile(TRUNCATION_TAIL)
    qhi = shock.quantile(1.0 - TRUNCATION_TAIL)
    a = qlo if lo is None else min(max(float(lo), qlo), qhi)
    b = qhi if hi is None else min(max(float(hi), qlo), qhi)
    return a, b


def integrate_shock(fn, shock, lo=None, hi=None, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Integral of fn(gamma) * shock.pdf(gamma) over [lo, hi] (default: whole line)."""
    a, b = shock_bounds(shock, lo, hi)
    return integrate(lambda g: fn(g) * shock.pdf(g), a, b, config)
