"""Spoiler-party extension: a third candidate fixed at x=1, y=1 with a
valence penalty v < 0, entering while both majors sit at y=0 (b_L < b_R < 0).

The spoiler only ever draws votes away: conservatives defect when their
emerging-issue draw beats -v, liberals when it beats p - v, so Right bleeds
more as the natural home of x=1 voters. An advisory referendum can repair
that by revealing the shock and letting the majors reposition; once either
major matches the spoiler's emerging position the spoiler's support
collapses and the race reverts to the two-party formulas.

lambda_hat tracks the probability Right finishes ahead of Left, the margin
the analytic results are stated in; whether the spoiler itself can win is a
question for the finite-agent simulator, and the wide-dispersion classifier
below presumes dispersion large enough that it cannot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .distributions import DistributionSpec
from .election import ClampDiagnostics, lambda_win, win_given_shock
from .errors import InvalidParamsError, UsageError
from .model import ElectorateParams
from .model import validate as validate_base
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate_shock
from .thresholds import _brent

DEFAULT_VALENCE = -0.01

# Stand-in for "taste dispersion large": 50x every other scale in play.
WIDE_DISPERSION_FACTOR = 50.0


@dataclass(frozen=True)
class ThirdPartyParams:
    base: ElectorateParams
    v: float = DEFAULT_VALENCE

    @property
    def sigma(self) -> float:
        """Taste dispersion, the scale the wide-dispersion analysis varies."""
        return self.base.taste.scale


def validate_third(tp: ThirdPartyParams) -> list[str]:
    violations = validate_base(tp.base)
    if not tp.base.b_R < 0:
        violations.append(
            f"spoiler analysis needs both majors at y=0 (b_L < b_R < 0), "
            f"got b_R={tp.base.b_R}"
        )
    if not tp.v < 0:
        violations.append(f"valence v must be negative, got {tp.v}")
    return violations


def require_valid_third(tp: ThirdPartyParams) -> None:
    violations = validate_third(tp)
    if violations:
        raise InvalidParamsError(violations)


def lambda_hat(
    tp: ThirdPartyParams,
    gamma,
    diagnostics: ClampDiagnostics | None = None,
) -> float:
    """P(Right ahead of Left | shock) in the three-way race, majors at y=0.

    Right keeps a conservative with probability B(-v - b_R - gamma), Left
    keeps a liberal with probability B(p - v - b_L - gamma); the noise split
    turns the retained-share gap into this win probability, clamped to [0,1]
    with the clamp recorded. Callers are expected to pass validated params;
    this runs inside quadrature loops and does not re-check.
    """
    b = tp.base
    B = b.taste.cdf
    d = diagnostics if diagnostics is not None else ClampDiagnostics()
    raw = 0.5 - b.mu / (2.0 * (1.0 - b.mu)) * (
        (1.0 - b.r) * B(b.p - tp.v - b.b_L - gamma)
        - b.r * B(-tp.v - b.b_R - gamma)
    )
    return d.note(raw)


def win_prob_third(
    tp: ThirdPartyParams,
    held: bool,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
    diagnostics: ClampDiagnostics | None = None,
) -> float:
    """P(Right ahead of Left), without or with an advisory referendum.

    Unheld: lambda_hat integrated over the shock. Held: below -b_R nothing
    moves (both majors hold y=0, spoiler intact); on [-b_R, -b_L) Right
    repositions to y=1, absorbing the spoiler's base, and the race is the
    standard diverged two-party one; above -b_L both majors sit at y=1 and
    the race is single-issue at share r.
    """
    require_valid_third(tp)
    b = tp.base
    d = diagnostics if diagnostics is not None else ClampDiagnostics()
    if not held:
        return integrate_shock(
            lambda g: lambda_hat(tp, g, d), b.shock, None, None, config
        )
    G = b.shock.cdf
    low = integrate_shock(
        lambda g: lambda_hat(tp, g, d), b.shock, None, -b.b_R, config
    )
    mid = integrate_shock(
        lambda g: win_given_shock(b, g, d), b.shock, -b.b_R, -b.b_L, config
    )
    top = (1.0 - G(-b.b_L)) * d.note(lambda_win(b.r, b.mu))
    return low + mid + top


def net_benefit_third(
    tp: ThirdPartyParams,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
    diagnostics: ClampDiagnostics | None = None,
) -> float:
    """Right's gain, ahead-of-Left probability, from the advisory referendum.

    Two pieces, matching where the reveal changes anything: the middle
    interval where Right repositions, and the upper tail where both majors
    do. Identical (up to quadrature) to the difference of the two
    win_prob_third calls; kept in this form so the sign analysis stays
    legible.
    """
    require_valid_third(tp)
    b = tp.base
    d = diagnostics if diagnostics is not None else ClampDiagnostics()
    lam_r = d.note(lambda_win(b.r, b.mu))
    mid = integrate_shock(
        lambda g: win_given_shock(b, g, d) - lambda_hat(tp, g, d),
        b.shock,
        -b.b_R,
        -b.b_L,
        config,
    )
    tail = integrate_shock(
        lambda g: lam_r - lambda_hat(tp, g, d), b.shock, -b.b_L, None, config
    )
    return mid + tail


def worse_off_condition(
    tp: ThirdPartyParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> bool:
    """True when the spoiler's presence lowers Right's chance of beating Left.

    Compares the expected defection damage on each side; holds whenever
    r >= 1/2, and more broadly whenever Right has more to lose from the
    spoiler than Left does.
    """
    require_valid_third(tp)
    b = tp.base
    B = b.taste.cdf
    left = (1.0 - b.r) * integrate_shock(
        lambda g: B(-b.p + tp.v + b.b_L + g), b.shock, None, None, config
    )
    right = b.r * integrate_shock(
        lambda g: B(tp.v + b.b_R + g), b.shock, None, None, config
    )
    return left < right


def phi(b_L: float, b_R: float, shock: DistributionSpec) -> float:
    """Wide-dispersion sign kernel: 1 - 2 G(-b_L) + G(-b_R).

    As taste dispersion grows, the referendum's net benefit to Right gets
    the sign of (r - 1/2) * phi. Strictly increasing in b_L, strictly
    decreasing in b_R; positive at b_R = b_L, and at b_R = 0 positive only
    for b_L above the shock's lower quartile.
    """
    if not b_L < 0:
        raise UsageError(f"b_L must be negative, got {b_L}")
    if not b_L <= b_R <= 0:
        raise UsageError(f"need b_L <= b_R <= 0, got b_R={b_R}")
    G = shock.cdf
    return 1.0 - 2.0 * G(-b_L) + G(-b_R)


class PhiThresholds(NamedTuple):
    b_L_star: float
    b_R_star: float | None


def phi_thresholds(b_L: float, shock: DistributionSpec) -> PhiThresholds:
    """Where phi changes sign as its arguments move.

    b_L_star is the shock's lower quartile: above it phi > 0 for every
    b_R in [b_L, 0]. Below it phi crosses zero at a unique b_R_star in
    (b_L, 0), found by Brent; None when no crossing exists.
    """
    if not b_L < 0:
        raise UsageError(f"b_L must be negative, got {b_L}")
    b_L_star = shock.quantile(0.25)
    if b_L >= b_L_star:
        return PhiThresholds(b_L_star, None)
    root, _, _ = _brent(lambda x: phi(b_L, x, shock), b_L, 0.0, "b_R_star")
    return PhiThresholds(b_L_star, root)


@dataclass(frozen=True)
class ReferendumPreference:
    """Hold-or-not classification in the wide-dispersion regime.

    decision follows the asymptotic sign; exact_net_benefit is the quadrature
    value at the actual (finite) dispersion so the two can be compared.
    """

    decision: str
    standing: str
    asymptotic_sign: float
    phi_value: float
    exact_net_benefit: float
    flags: tuple[str, ...]


def classify_referendum_preference(
    tp: ThirdPartyParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> ReferendumPreference:
    """Does Right want the advisory referendum, given a dominant taste scale?

    Preconditions: mu < 2/3 (the clamp-free range of the three-way margin)
    and taste dispersion at least WIDE_DISPERSION_FACTOR times every other
    scale, the proxy for "dispersion large". r = 1/2 has no strict majority
    and is rejected rather than classified.
    """
    require_valid_third(tp)
    b = tp.base
    if not b.mu < 2.0 / 3.0:
        raise UsageError(
            f"classification requires mu < 2/3, got {b.mu}"
        )
    floor = WIDE_DISPERSION_FACTOR * max(
        b.p, abs(b.b_L), abs(b.b_R), b.shock.scale, abs(tp.v)
    )
    if tp.sigma < floor:
        raise UsageError(
            f"taste scale {tp.sigma} is below the wide-dispersion proxy "
            f"{floor:.6g} ({WIDE_DISPERSION_FACTOR:g}x the largest other "
            f"scale in play)"
        )
    if b.r == 0.5:
        raise UsageError("r = 1/2: no strict majority, nothing to classify")
    ph = phi(b.b_L, b.b_R, b.shock)
    asym = (b.r - 0.5) * ph
    flags = ["wide_dispersion_proxy"]
    if abs(ph) < 0.01:
        flags.append("phi_near_zero")
    return ReferendumPreference(
        decision="hold" if asym > 0 else "not_hold",
        standing="advantaged" if b.r > 0.5 else "disadvantaged",
        asymptotic_sign=math.copysign(1.0, asym) if asym != 0 else 0.0,
        phi_value=ph,
        exact_net_benefit=net_benefit_third(tp, config),
        flags=tuple(flags),
    )
