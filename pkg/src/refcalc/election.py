"""Win probabilities and the net electoral value of holding a referendum.

The election layer: policy voters split between the parties according to the
positions on offer, noise voters split by a uniform popularity shock eta, and
Right wins when its total vote share exceeds one half. Conditional on a policy
voter share x going to Right, the win probability is affine in x,

    lambda(x) = 1/2 + mu/(1-mu) * (x - 1/2),

saturated into [0, 1] because eta is uniform on [0, 1]. Saturation is the
exact probability, not an approximation; a diagnostic flag records whether it
ever bound, since downstream closed-form thresholds are derived from the
unsaturated affine map and only coincide exactly when it never does (mu <= 1/2
guarantees that).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError
from .model import (
    ElectorateParams,
    ReferendumRegime,
    initial_positions,
    require_valid,
)
from .quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    integrate_shock,
)


@dataclass
class ClampDiagnostics:
    """Mutable flag threaded through integrations to record saturation."""

    clamped: bool = False

    def note(self, value):
        if value < 0.0 or value > 1.0:
            self.clamped = True
        return value if 0.0 <= value <= 1.0 else (0.0 if value < 0.0 else 1.0)


def lambda_win(share: float, mu: float) -> float:
    """Right's win probability given the policy-voter share backing it (unsaturated)."""
    if not 0 <= share <= 1:
        raise UsageError(f"share must lie in [0, 1], got {share}")
    if not 0 < mu < 1:
        raise UsageError(f"mu must lie in (0, 1), got {mu}")
    return 0.5 + mu / (1.0 - mu) * (share - 0.5)


def right_share_multi(params: ElectorateParams, gamma):
    """Right's policy-voter share when positions diverge on both dimensions.

    Conservatives stick with Right unless the emerging-policy draw outweighs
    the traditional advantage p; liberals mirror. Strictly increasing in gamma.
    """
    B = params.taste.cdf
    return params.r * B(gamma + params.b_R + params.p) + (1.0 - params.r) * B(
        gamma + params.b_L - params.p
    )


def _win_at_share(params, share, diag):
    d = diag if diag is not None else ClampDiagnostics()
    return d.note(lambda_win(share, params.mu))


def win_given_shock(
    params: ElectorateParams, gamma, diagnostics: ClampDiagnostics | None = None
):
    """Right's win probability conditional on the shock, positions diverged."""
    return _win_at_share(params, right_share_multi(params, gamma), diagnostics)


def win_prob(
    params: ElectorateParams,
    regime: ReferendumRegime,
    held: bool,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
    diagnostics: ClampDiagnostics | None = None,
) -> float:
    """Probability that Right wins the election.

    held=False ignores the regime and gives the baseline: a single-issue race
    decided by r when the parties agree on the emerging policy (b_R < 0), or
    the multi-issue integral of lambda(share(gamma)) when they diverge.
    A binding referendum collapses any divergence, so the race is single-issue
    at share r. A non-binding one makes positions shock-dependent: aligned in
    both tails (single-issue), diverged on the middle interval.
    """
    require_valid(params)
    diag = diagnostics if diagnostics is not None else ClampDiagnostics()

    def multi(lo=None, hi=None):
        return integrate_shock(
            lambda g: _win_at_share(params, right_share_multi(params, g), diag),
            params.shock,
            lo,
            hi,
            config,
        )

    if not held:
        if initial_positions(params).diverged:
            return multi()
        return _win_at_share(params, params.r, diag)

    if regime is ReferendumRegime.NO_REFERENDUM:
        raise UsageError("held=True is meaningless without a referendum regime")
    if regime is ReferendumRegime.BINDING:
        return _win_at_share(params, params.r, diag)
    if regime is ReferendumRegime.NON_BINDING:
        G = params.shock.cdf
        aligned_mass = G(-params.b_R) + 1.0 - G(-params.b_L)
        return aligned_mass * _win_at_share(params, params.r, diag) + multi(
            -params.b_R, -params.b_L
        )
    raise UsageError(f"unknown regime {regime!r}")


def net_benefit(
    params: ElectorateParams,
    regime: ReferendumRegime,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
    diagnostics: ClampDiagnostics | None = None,
) -> float:
    """Right's gain in win probability from the referendum being held.

    Equals win_prob(held) - win_prob(unheld), but computed from the piecewise
    form so each regime's sign structure is explicit:

    * binding, b_R < 0: exactly zero (the referendum changes nothing, both
      parties already match on the emerging policy);
    * binding, b_R >= 0: lambda(r) minus the multi-issue integral;
    * non-binding, b_R < 0: the middle-interval integral of
      lambda(share) - lambda(r), the only shocks that now split the parties;
    * non-binding, b_R >= 0: the two aligned tails of lambda(r) - lambda(share).
    """
    require_valid(params)
    diag = diagnostics if diagnostics is not None else ClampDiagnostics()

    def gap(g):
        return _win_at_share(params, params.r, diag) - _win_at_share(
            params, right_share_multi(params, g), diag
        )

    misaligned = initial_positions(params).diverged

    if regime is ReferendumRegime.BINDING:
        if not misaligned:
            return 0.0
        return integrate_shock(gap, params.shock, None, None, config)

    if regime is ReferendumRegime.NON_BINDING:
        if not misaligned:
            return -integrate_shock(
                gap, params.shock, -params.b_R, -params.b_L, config
            )
        lo_tail = integrate_shock(gap, params.shock, None, -params.b_R, config)
        hi_tail = integrate_shock(gap, params.shock, -params.b_L, None, config)
        return lo_tail + hi_tail

    raise UsageError("net_benefit compares held vs not held; pick a referendum regime")
