"""Same-day binding referendum as a turnout lever.

Here the referendum shares the ballot with the election, so parties cannot
reposition afterwards; y=0 stays in force unless a referendum passes y=1.
Policy voters face a uniform voting cost on [0, c_bar] and participate only
when their stake clears it: p alone without a referendum, p + |b_i| with one.
The referendum therefore mobilizes each party in proportion to the mean
absolute emerging-issue stake of its supporters, intensity(b_J), and the
paying side is decided by r against the threshold r_T.

Supports are truncated so stakes stay below c_bar: tastes to [-sigma, sigma],
the shock to [-kappa, kappa], with the size ordering in validate_turnout
keeping every participation probability strictly inside (0, 1) for at least
some cost draws.

A note on bias signs: nothing here needs b_L < 0 < b_R or any ordering. The
whole calculus runs through |b_J|, and the symmetry identities
r_T(b_L, b_R) = r_T(-b_L, b_R) = r_T(b_L, -b_R) only make sense if sign
flips are representable, so validate_turnout deliberately skips the sign
constraints the sequential-referendum model imposes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .distributions import TruncatedDistribution
from .errors import InvalidParamsError
from .model import ElectorateParams
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate
from .thresholds import ThresholdReport


@dataclass(frozen=True)
class TurnoutParams:
    base: ElectorateParams
    c_bar: float
    sigma: float
    kappa: float

    @property
    def taste_t(self) -> TruncatedDistribution:
        return TruncatedDistribution(self.base.taste, self.sigma)

    @property
    def shock_t(self) -> TruncatedDistribution:
        return TruncatedDistribution(self.base.shock, self.kappa)


def validate_turnout(tp: TurnoutParams) -> list[str]:
    """Collect every constraint violation; empty list means usable."""
    v = []
    b = tp.base
    if not 0 < b.r < 1:
        v.append(f"r must lie in (0, 1), got {b.r}")
    if not 0 < b.mu < 1:
        v.append(f"mu must lie in (0, 1), got {b.mu}")
    if not b.p > 0:
        v.append(f"p must be positive, got {b.p}")
    if 0 < b.mu < 1:
        lo, hi = 1.0 - 1.0 / (2.0 * b.mu), 1.0 / (2.0 * b.mu)
        if not lo < b.r < hi:
            v.append(
                f"competitiveness requires r in ({lo:.6g}, {hi:.6g}), got {b.r}"
            )
    if not tp.sigma > 0:
        v.append(f"sigma must be positive, got {tp.sigma}")
    if not tp.kappa > 0:
        v.append(f"kappa must be positive, got {tp.kappa}")
    if not tp.c_bar > b.p + tp.kappa + tp.sigma:
        v.append(
            f"need c_bar > p + kappa + sigma, got {tp.c_bar} vs "
            f"{b.p + tp.kappa + tp.sigma}"
        )
    if not tp.kappa > max(abs(b.b_R), abs(b.b_L)):
        v.append(
            f"need kappa > max(|b_R|, |b_L|), got {tp.kappa} vs "
            f"{max(abs(b.b_R), abs(b.b_L))}"
        )
    if not tp.sigma > b.p + tp.kappa:
        v.append(f"need sigma > p + kappa, got {tp.sigma} vs {b.p + tp.kappa}")
    return v


def require_valid_turnout(tp: TurnoutParams) -> None:
    violations = validate_turnout(tp)
    if violations:
        raise InvalidParamsError(violations)


def intensity(
    b_J: float, tp: TurnoutParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Mean absolute stake E|u + b_J + gamma| over both truncated draws.

    Even in b_J and strictly increasing in |b_J|. Nested adaptive Simpson;
    the inner integrand loses smoothness where u + b_J + gamma changes sign,
    so the inner range splits at the kink, and the inner pass runs at 100x
    tighter tolerance so its noise stays invisible to the outer refinement.
    """
    require_valid_turnout(tp)
    taste_t, shock_t = tp.taste_t, tp.shock_t
    inner_config = replace(
        config, abs_tol=config.abs_tol * 1e-2, rel_tol=config.rel_tol * 1e-2
    )
    lo, hi = -tp.sigma, tp.sigma

    def inner(gamma):
        def f(u):
            return abs(u + b_J + gamma) * taste_t.pdf(u)

        kink = -b_J - gamma
        if kink <= lo or kink >= hi:
            return integrate(f, lo, hi, inner_config)
        return integrate(f, lo, kink, inner_config) + integrate(
            f, kink, hi, inner_config
        )

    return integrate(
        lambda g: inner(g) * shock_t.pdf(g), -tp.kappa, tp.kappa, config
    )


def win_prob_turnout(
    tp: TurnoutParams,
    referendum: bool,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Right's win probability with costly voting, with or without the ballot
    measure.

    The noise-voter margin turns a policy-vote share difference D into a win
    probability of 1/2 + D / (2(1-mu)). Without a referendum every policy
    voter's stake is p, so D = (mu p / c_bar)(2r - 1) and the probability is
    1/2 + (mu/(1-mu))(p/c_bar)(r - 1/2). A referendum raises voter i's stake
    to p + |b_i|, which adds (mu/c_bar)[r I(b_R) - (1-r) I(b_L)] to D and
    therefore half that, over (1-mu), to the win probability.
    """
    require_valid_turnout(tp)
    b = tp.base
    lever = b.mu / (1.0 - b.mu)
    prob = 0.5 + lever * (b.p / tp.c_bar) * (b.r - 0.5)
    if referendum:
        prob += (
            lever
            / (2.0 * tp.c_bar)
            * (
                b.r * intensity(b.b_R, tp, config)
                - (1.0 - b.r) * intensity(b.b_L, tp, config)
            )
        )
    return prob


def net_benefit_turnout(
    tp: TurnoutParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Right's gain from putting the measure on the ballot.

    The p terms cancel between the two win probabilities, leaving only the
    mobilization difference; positive exactly when r > r_T.
    """
    require_valid_turnout(tp)
    b = tp.base
    return (
        b.mu
        / (1.0 - b.mu)
        / (2.0 * tp.c_bar)
        * (
            b.r * intensity(b.b_R, tp, config)
            - (1.0 - b.r) * intensity(b.b_L, tp, config)
        )
    )


def r_T(
    tp: TurnoutParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> ThresholdReport:
    """Conservative share above which the referendum helps Right.

    Closed ratio I(b_L) / (I(b_L) + I(b_R)); equals 1/2 at |b_R| = |b_L|,
    falls as Right's supporters care more (|b_R| up), rises as Left's do.
    """
    require_valid_turnout(tp)
    i_L = intensity(tp.base.b_L, tp, config)
    i_R = intensity(tp.base.b_R, tp, config)
    value = i_L / (i_L + i_R)
    residual = abs(value * (i_L + i_R) - i_L)
    return ThresholdReport("r_T", value, residual, (0.0, 1.0), 0)
