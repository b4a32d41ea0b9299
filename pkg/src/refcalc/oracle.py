"""Finite-agent Monte Carlo ground truth for the analytic formulas.

Every probability the analytic modules compute by quadrature is re-derived
here by brute force: draw a finite electorate, let everyone vote, count. Two
engines share the downstream accounting:

* the default counts engine draws sufficient statistics per replication
  (shock, noise share, party split, then multinomial cell counts over the
  relevant taste intervals), which is distributionally identical to drawing
  voters one by one but runs vectorized across replications;
* the agents engine (agent_level=True) materializes every voter and decides
  each ballot by explicit utility comparison, no interval algebra at all.
  It is slow and meant for cross-checking the counts engine at small sizes.

Determinism contract. The counts engine uses a single Philox stream seeded
with config.seed; the draw order per simulate() call is fixed: shock
uniforms, noise shares, party counts, mode-specific cell counts (listed in
each kernel), tie coins. The agents engine gives replication k its own
Philox stream from SeedSequence((seed, k + 1)); per replication the order is
shock uniform, noise share, party uniforms, taste uniforms, cost uniforms
(turnout only), tie coin. Identical config (seed included) therefore yields
bit-identical results regardless of how replications are scheduled.

Tie conventions: indifferent voters vote their own party; a spoiler loses
exact vote ties to either major; an exactly tied two-way election falls to a
fair coin from the stream; referendum tallies at exactly the threshold count
as yes. The continuum_tally toggle replaces every referendum-derived
quantity (tally, inferred positions, outcome, latent majority) by its exact
conditional-on-shock value, isolating election noise from tally noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import (
    ElectorateParams,
    ReferendumRegime,
    initial_positions,
    referendum_support,
    require_valid,
)
from .errors import UsageError
from .third_party import ThirdPartyParams, require_valid_third
from .turnout import TurnoutParams, require_valid_turnout

MODES = ("two_party", "third_party", "turnout")

_TINY = 1e-16  # keeps quantile-transform arguments strictly inside (0, 1)


@dataclass(frozen=True)
class SimConfig:
    n_policy_voters: int = 100_000
    n_replications: int = 10_000
    seed: int = 0
    mode: str = "two_party"
    agent_level: bool = False
    continuum_tally: bool = False


def _validate_config(config: SimConfig) -> None:
    if config.mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}, got {config.mode!r}")
    if not (isinstance(config.n_policy_voters, int) and config.n_policy_voters >= 1):
        raise UsageError(
            f"n_policy_voters must be a positive integer, got {config.n_policy_voters!r}"
        )
    if not (isinstance(config.n_replications, int) and config.n_replications >= 1):
        raise UsageError(
            f"n_replications must be a positive integer, got {config.n_replications!r}"
        )
    if not (isinstance(config.seed, int) and 0 <= config.seed < 2**64):
        raise UsageError(f"seed must be an integer in [0, 2^64), got {config.seed!r}")


@dataclass(frozen=True)
class SimResult:
    """Aggregated frequencies over replications, with binomial standard errors.

    win_freq_T and the turnout fields are NaN outside their modes, as is
    referendum_y1_share when no referendum is held. ahead_freq_R is the
    probability Right outpolls Left (equal to win_freq_R except in
    third_party mode, where the spoiler can in principle finish first).
    """

    mode: str
    regime: ReferendumRegime
    held: bool
    n_policy_voters: int
    n_replications: int
    win_freq_R: float
    win_freq_L: float
    win_freq_T: float
    ahead_freq_R: float
    se_win_R: float
    congruence_y: float
    se_congruence_y: float
    congruence_x: float
    se_congruence_x: float
    referendum_y1_share: float
    se_referendum_y1_share: float
    turnout_freq_R: float
    turnout_freq_L: float
    seed: int


@dataclass
class _RepArrays:
    win_R: np.ndarray
    win_L: np.ndarray
    win_T: np.ndarray
    ahead_R: np.ndarray
    cong_y: np.ndarray
    cong_x: np.ndarray
    y1_share: np.ndarray | None
    turnout_R: np.ndarray | None
    turnout_L: np.ndarray | None


def _uniform_open(rng, size=None):
    return np.clip(rng.random(size), _TINY, 1.0 - _TINY)


def _cells(rng, counts, *probs):
    """Batched multinomial: counts (R,), probs k arrays of (R,) summing to 1."""
    pvals = np.clip(np.stack(probs, axis=-1), 0.0, None)
    pvals /= pvals.sum(axis=-1, keepdims=True)
    return rng.multinomial(counts, pvals)


def _tally_thresholds(params: ElectorateParams) -> tuple[float, float]:
    """Referendum-support levels at which each party flips its position.

    A non-binding tally share t reveals the shock through the strictly
    increasing support curve, so party J adopts y=1 exactly when t is at
    least the support evaluated at the shock -b_J.
    """
    B = params.taste.cdf
    t_right = params.r * 0.5 + (1.0 - params.r) * B(params.b_L - params.b_R)
    t_left = params.r * B(params.b_R - params.b_L) + (1.0 - params.r) * 0.5
    return t_right, t_left


def _majority_yes(yes_count, n, continuum, support):
    if continuum:
        return support >= 0.5
    return 2 * yes_count >= n


def _two_party_positions(params, regime, tally):
    """Per-replication (y_R, y_L) arrays after the referendum stage."""
    ones = np.ones_like(tally, dtype=bool)
    if regime is ReferendumRegime.NO_REFERENDUM:
        pos = initial_positions(params)
        return ones & bool(pos.y_right), ones & bool(pos.y_left)
    if regime is ReferendumRegime.BINDING:
        outcome = tally >= 0.5
        return outcome, outcome.copy()
    t_right, t_left = _tally_thresholds(params)
    return tally >= t_right, tally >= t_left


def _counts_two_party(params, regime, config, rng):
    n, n_reps = config.n_policy_voters, config.n_replications
    B = params.taste.cdf
    gamma = params.shock.quantile(_uniform_open(rng, n_reps))
    eta = rng.random(n_reps)
    n_right = rng.binomial(n, params.r, size=n_reps)
    n_left = n - n_right

    # Conservative taste cells: below the election cut (vote Left when
    # diverged), between election and referendum cuts (Right, no), above
    # (Right, yes). Liberals mirror with the cuts on the other side of p.
    q_elect = B(-params.p - params.b_R - gamma)
    q_yes = B(-params.b_R - gamma)
    cons = _cells(rng, n_right, q_elect, q_yes - q_elect, 1.0 - q_yes)
    l_yes = B(-params.b_L - gamma)
    l_elect = B(params.p - params.b_L - gamma)
    libs = _cells(rng, n_left, l_yes, l_elect - l_yes, 1.0 - l_elect)
    coin = rng.random(n_reps)

    yes = cons[:, 2] + (n_left - libs[:, 0])
    support = referendum_support(params, gamma)
    tally = support if config.continuum_tally else yes / n

    y_right, y_left = _two_party_positions(params, regime, np.asarray(tally))
    diverged = y_right & ~y_left
    votes_right = np.where(
        diverged, cons[:, 1] + cons[:, 2] + libs[:, 2], n_right
    )
    share_right = params.mu * votes_right / n + (1.0 - params.mu) * eta
    win = (share_right > 0.5) | ((share_right == 0.5) & (coin < 0.5))

    y_impl = np.where(win, y_right, y_left)
    maj_yes = _majority_yes(yes, n, config.continuum_tally, support)
    maj_right = 2 * n_right >= n
    held = regime is not ReferendumRegime.NO_REFERENDUM
    return _RepArrays(
        win_R=win,
        win_L=~win,
        win_T=np.zeros(n_reps, dtype=bool),
        ahead_R=win,
        cong_y=y_impl == maj_yes,
        cong_x=win == maj_right,
        y1_share=np.asarray(tally, dtype=float) if held else None,
        turnout_R=None,
        turnout_L=None,
    )


def _counts_third_party(tp, regime, config, rng):
    params, v = tp.base, tp.v
    n, n_reps = config.n_policy_voters, config.n_replications
    B = params.taste.cdf
    gamma = params.shock.quantile(_uniform_open(rng, n_reps))
    eta = rng.random(n_reps)
    n_right = rng.binomial(n, params.r, size=n_reps)
    n_left = n - n_right

    # Conservative cuts, in increasing order: election cut (Left vs Right
    # when majors diverge), referendum yes cut, spoiler defection cut.
    qa = B(-params.p - params.b_R - gamma)
    qb = B(-params.b_R - gamma)
    qc = B(-v - params.b_R - gamma)
    cons = _cells(rng, n_right, qa, qb - qa, qc - qb, 1.0 - qc)
    # Liberal cuts: referendum yes, election cut, spoiler defection.
    la = B(-params.b_L - gamma)
    lb = B(params.p - params.b_L - gamma)
    lc = B(params.p - v - params.b_L - gamma)
    libs = _cells(rng, n_left, la, lb - la, lc - lb, 1.0 - lc)
    coin = rng.random(n_reps)

    yes = (cons[:, 2] + cons[:, 3]) + (n_left - libs[:, 0])
    support = referendum_support(params, gamma)
    tally = support if config.continuum_tally else yes / n

    if regime is ReferendumRegime.NO_REFERENDUM:
        y_right = np.zeros(n_reps, dtype=bool)
        y_left = np.zeros(n_reps, dtype=bool)
    else:
        t_right, t_left = _tally_thresholds(params)
        y_right = np.asarray(tally) >= t_right
        y_left = np.asarray(tally) >= t_left

    # Vote totals by post-referendum configuration. Majors both at y=1:
    # straight party-line voting, spoiler abandoned. Right alone at y=1: the
    # spoiler's base merges into Right, Left keeps everyone below its
    # election cut. Majors both at y=0: the pre-referendum three-way split.
    both = y_left
    only_right = y_right & ~y_left
    vr_pre = n_right - cons[:, 3]
    vl_pre = n_left - libs[:, 3]
    vt_pre = cons[:, 3] + libs[:, 3]
    vr_mid = (n_right - cons[:, 0]) + libs[:, 2] + libs[:, 3]
    vl_mid = cons[:, 0] + libs[:, 0] + libs[:, 1]
    votes_right = np.where(both, n_right, np.where(only_right, vr_mid, vr_pre))
    votes_left = np.where(both, n_left, np.where(only_right, vl_mid, vl_pre))
    votes_third = np.where(both | only_right, 0, vt_pre)

    s_right = params.mu * votes_right / n + (1.0 - params.mu) * eta
    s_left = params.mu * votes_left / n + (1.0 - params.mu) * (1.0 - eta)
    s_third = params.mu * votes_third / n

    ahead = (s_right > s_left) | ((s_right == s_left) & (coin < 0.5))
    win_third = (s_third > s_right) & (s_third > s_left)
    win_right = ~win_third & ahead
    win_left = ~win_third & ~ahead

    y_impl = np.where(win_third, True, np.where(win_right, y_right, y_left))
    x_impl = win_right | win_third
    maj_yes = _majority_yes(yes, n, config.continuum_tally, support)
    maj_right = 2 * n_right >= n
    held = regime is not ReferendumRegime.NO_REFERENDUM
    return _RepArrays(
        win_R=win_right,
        win_L=win_left,
        win_T=win_third,
        ahead_R=ahead,
        cong_y=y_impl == maj_yes,
        cong_x=x_impl == maj_right,
        y1_share=np.asarray(tally, dtype=float) if held else None,
        turnout_R=None,
        turnout_L=None,
    )


def _participation_cells(taste_t, b_J, gamma, p, c_bar):
    """Held-referendum cell probabilities for one party, given the shock.

    Cells: (participate, yes), (participate, no), (abstain, yes),
    (abstain, no). A voter's stake is p + |w| with w = u + b_J + gamma, and
    participation probability (p + |w|) / c_bar, integrated in closed form
    over each preference side via the truncated partial means.
    """
    shift = b_J + gamma
    f0 = taste_t.cdf(-shift)
    w = taste_t.half_width
    pos_mean = taste_t.partial_mean(-shift, w) + shift * (1.0 - f0)
    neg_mean = -(taste_t.partial_mean(-w, -shift) + shift * f0)
    p_yes = (p * (1.0 - f0) + pos_mean) / c_bar
    p_no = (p * f0 + neg_mean) / c_bar
    return p_yes, p_no, (1.0 - f0) - p_yes, f0 - p_no


def _counts_turnout(tp, regime, config, rng):
    params = tp.base
    n, n_reps = config.n_policy_voters, config.n_replications
    taste_t, shock_t = tp.taste_t, tp.shock_t
    gamma = shock_t.quantile(_uniform_open(rng, n_reps))
    eta = rng.random(n_reps)
    n_right = rng.binomial(n, params.r, size=n_reps)
    n_left = n - n_right
    held = regime is ReferendumRegime.BINDING

    if held:
        r_cells = _cells(
            rng,
            n_right,
            *_participation_cells(taste_t, params.b_R, gamma, params.p, tp.c_bar),
        )
        l_cells = _cells(
            rng,
            n_left,
            *_participation_cells(taste_t, params.b_L, gamma, params.p, tp.c_bar),
        )
        part_right = r_cells[:, 0] + r_cells[:, 1]
        part_left = l_cells[:, 0] + l_cells[:, 1]
        yes_latent = (r_cells[:, 0] + r_cells[:, 2]) + (l_cells[:, 0] + l_cells[:, 2])
        yes_cast = r_cells[:, 0] + l_cells[:, 0]
        no_cast = r_cells[:, 1] + l_cells[:, 1]
    else:
        p_vote = params.p / tp.c_bar
        part_right = rng.binomial(n_right, p_vote)
        part_left = rng.binomial(n_left, p_vote)
        yes_right = rng.binomial(
            n_right, 1.0 - taste_t.cdf(-params.b_R - gamma)
        )
        yes_left = rng.binomial(n_left, 1.0 - taste_t.cdf(-params.b_L - gamma))
        yes_latent = yes_right + yes_left
        yes_cast = no_cast = None
    coin = rng.random(n_reps)

    s_right = params.mu * part_right / n + (1.0 - params.mu) * eta
    s_left = params.mu * part_left / n + (1.0 - params.mu) * (1.0 - eta)
    margin = s_right - s_left
    win = (margin > 0) | ((margin == 0) & (coin < 0.5))

    support = params.r * (1.0 - taste_t.cdf(-params.b_R - gamma)) + (
        1.0 - params.r
    ) * (1.0 - taste_t.cdf(-params.b_L - gamma))
    if held:
        if config.continuum_tally:
            py_r, pn_r, *_ = _participation_cells(
                taste_t, params.b_R, gamma, params.p, tp.c_bar
            )
            py_l, pn_l, *_ = _participation_cells(
                taste_t, params.b_L, gamma, params.p, tp.c_bar
            )
            cast_yes_rate = params.r * py_r + (1.0 - params.r) * py_l
            cast_no_rate = params.r * pn_r + (1.0 - params.r) * pn_l
            y_impl = cast_yes_rate >= cast_no_rate
            y1_share = cast_yes_rate / (cast_yes_rate + cast_no_rate)
        else:
            y_impl = yes_cast >= no_cast
            total_cast = yes_cast + no_cast
            y1_share = np.where(
                total_cast > 0, yes_cast / np.maximum(total_cast, 1), np.nan
            )
    else:
        y_impl = np.zeros(n_reps, dtype=bool)
        y1_share = None

    maj_yes = _majority_yes(yes_latent, n, config.continuum_tally, support)
    maj_right = 2 * n_right >= n
    with np.errstate(invalid="ignore"):
        turnout_right = np.where(n_right > 0, part_right / np.maximum(n_right, 1), np.nan)
        turnout_left = np.where(n_left > 0, part_left / np.maximum(n_left, 1), np.nan)
    return _RepArrays(
        win_R=win,
        win_L=~win,
        win_T=np.zeros(n_reps, dtype=bool),
        ahead_R=win,
        cong_y=y_impl == maj_yes,
        cong_x=win == maj_right,
        y1_share=y1_share,
        turnout_R=turnout_right,
        turnout_L=turnout_left,
    )


def _agents_two_party(params, regime, config, rng_for):
    n, n_reps = config.n_policy_voters, config.n_replications
    out = _RepArrays(*[np.zeros(n_reps, dtype=bool) for _ in range(6)], None, None, None)
    held = regime is not ReferendumRegime.NO_REFERENDUM
    y1 = np.full(n_reps, np.nan) if held else None
    for k in range(n_reps):
        rng = rng_for(k)
        gamma = float(params.shock.quantile(_uniform_open(rng)))
        eta = rng.random()
        is_cons = rng.random(n) < params.r
        u = params.taste.quantile(_uniform_open(rng, n))
        b_i = np.where(is_cons, params.b_R, params.b_L) + gamma + u
        coin = rng.random()

        yes = b_i >= 0
        support = float(referendum_support(params, gamma))
        tally = support if config.continuum_tally else yes.mean()
        y_right, y_left = (
            bool(a[0])
            for a in _two_party_positions(params, regime, np.array([tally]))
        )

        util_right = params.p * is_cons + b_i * y_right
        util_left = params.p * ~is_cons + b_i * y_left
        vote_right = (util_right > util_left) | (
            (util_right == util_left) & is_cons
        )
        share = params.mu * vote_right.mean() + (1.0 - params.mu) * eta
        win = share > 0.5 or (share == 0.5 and coin < 0.5)

        y_impl = y_right if win else y_left
        maj_yes = bool(
            _majority_yes(int(yes.sum()), n, config.continuum_tally, support)
        )
        maj_right = 2 * int(is_cons.sum()) >= n
        out.win_R[k] = win
        out.win_L[k] = not win
        out.ahead_R[k] = win
        out.cong_y[k] = y_impl == maj_yes
        out.cong_x[k] = win == maj_right
        if held:
            y1[k] = tally
    out.y1_share = y1
    return out


def _agents_third_party(tp, regime, config, rng_for):
    params, v = tp.base, tp.v
    n, n_reps = config.n_policy_voters, config.n_replications
    out = _RepArrays(*[np.zeros(n_reps, dtype=bool) for _ in range(6)], None, None, None)
    held = regime is not ReferendumRegime.NO_REFERENDUM
    y1 = np.full(n_reps, np.nan) if held else None
    for k in range(n_reps):
        rng = rng_for(k)
        gamma = float(params.shock.quantile(_uniform_open(rng)))
        eta = rng.random()
        is_cons = rng.random(n) < params.r
        u = params.taste.quantile(_uniform_open(rng, n))
        b_i = np.where(is_cons, params.b_R, params.b_L) + gamma + u
        coin = rng.random()

        yes = b_i >= 0
        support = float(referendum_support(params, gamma))
        tally = support if config.continuum_tally else yes.mean()
        if held:
            t_right, t_left = _tally_thresholds(params)
            y_right, y_left = tally >= t_right, tally >= t_left
        else:
            y_right = y_left = False

        util_right = params.p * is_cons + b_i * y_right
        util_left = params.p * ~is_cons + b_i * y_left
        util_third = params.p * is_cons + b_i + v
        prefers_right = (util_right > util_left) | (
            (util_right == util_left) & is_cons
        )
        best_major = np.maximum(util_right, util_left)
        vote_third = util_third > best_major
        vote_right = ~vote_third & prefers_right
        vote_left = ~vote_third & ~prefers_right

        s_right = params.mu * vote_right.mean() + (1.0 - params.mu) * eta
        s_left = params.mu * vote_left.mean() + (1.0 - params.mu) * (1.0 - eta)
        s_third = params.mu * vote_third.mean()
        ahead = s_right > s_left or (s_right == s_left and coin < 0.5)
        win_third = s_third > s_right and s_third > s_left
        win_right = not win_third and ahead
        win_left = not win_third and not ahead

        y_impl = True if win_third else (y_right if win_right else y_left)
        x_impl = win_right or win_third
        maj_yes = bool(
            _majority_yes(int(yes.sum()), n, config.continuum_tally, support)
        )
        maj_right = 2 * int(is_cons.sum()) >= n
        out.win_R[k] = win_right
        out.win_L[k] = win_left
        out.win_T[k] = win_third
        out.ahead_R[k] = ahead
        out.cong_y[k] = y_impl == maj_yes
        out.cong_x[k] = x_impl == maj_right
        if held:
            y1[k] = tally
    out.y1_share = y1
    return out


def _agents_turnout(tp, regime, config, rng_for):
    params = tp.base
    n, n_reps = config.n_policy_voters, config.n_replications
    out = _RepArrays(*[np.zeros(n_reps, dtype=bool) for _ in range(6)], None, None, None)
    held = regime is ReferendumRegime.BINDING
    y1 = np.full(n_reps, np.nan) if held else None
    t_right = np.full(n_reps, np.nan)
    t_left = np.full(n_reps, np.nan)
    taste_t, shock_t = tp.taste_t, tp.shock_t
    for k in range(n_reps):
        rng = rng_for(k)
        gamma = float(shock_t.quantile(_uniform_open(rng)))
        eta = rng.random()
        is_cons = rng.random(n) < params.r
        u = taste_t.quantile(_uniform_open(rng, n))
        cost = rng.random(n) * tp.c_bar
        b_i = np.where(is_cons, params.b_R, params.b_L) + gamma + u
        coin = rng.random()

        stake = params.p + np.abs(b_i) if held else params.p
        votes = stake >= cost
        part_right = votes & is_cons
        part_left = votes & ~is_cons
        s_right = params.mu * part_right.mean() + (1.0 - params.mu) * eta
        s_left = params.mu * part_left.mean() + (1.0 - params.mu) * (1.0 - eta)
        win = s_right > s_left or (s_right == s_left and coin < 0.5)

        yes = b_i >= 0
        support = params.r * (
            1.0 - taste_t.cdf(-params.b_R - gamma)
        ) + (1.0 - params.r) * (1.0 - taste_t.cdf(-params.b_L - gamma))
        if held:
            yes_cast = int((votes & yes).sum())
            no_cast = int((votes & ~yes).sum())
            y_impl = yes_cast >= no_cast
            y1[k] = yes_cast / (yes_cast + no_cast) if yes_cast + no_cast else np.nan
        else:
            y_impl = False
        maj_yes = bool(
            _majority_yes(int(yes.sum()), n, config.continuum_tally, support)
        )
        n_cons = int(is_cons.sum())
        maj_right = 2 * n_cons >= n
        out.win_R[k] = win
        out.win_L[k] = not win
        out.ahead_R[k] = win
        out.cong_y[k] = y_impl == maj_yes
        out.cong_x[k] = win == maj_right
        t_right[k] = part_right.sum() / n_cons if n_cons else np.nan
        t_left[k] = part_left.sum() / (n - n_cons) if n - n_cons else np.nan
    out.y1_share = y1
    out.turnout_R = t_right
    out.turnout_L = t_left
    return out


def _check_target(target, regime, config):
    if config.mode == "two_party":
        if not isinstance(target, ElectorateParams):
            raise UsageError("two_party mode simulates an ElectorateParams")
        require_valid(target)
    elif config.mode == "third_party":
        if not isinstance(target, ThirdPartyParams):
            raise UsageError("third_party mode simulates a ThirdPartyParams")
        require_valid_third(target)
        if regime is ReferendumRegime.BINDING:
            raise UsageError(
                "a binding referendum with a spoiler in the race is not "
                "modeled; use non_binding or no_referendum"
            )
    else:
        if not isinstance(target, TurnoutParams):
            raise UsageError("turnout mode simulates a TurnoutParams")
        require_valid_turnout(target)
        if regime is ReferendumRegime.NON_BINDING:
            raise UsageError(
                "a same-day referendum leaves no room to reposition; use "
                "binding or no_referendum"
            )
        base = target.base
        needed = base.p + target.sigma + target.kappa + max(
            abs(base.b_L), abs(base.b_R)
        )
        if target.c_bar < needed:
            raise UsageError(
                f"simulation needs c_bar >= p + sigma + kappa + max|b_J| = "
                f"{needed:.6g} so no participation probability exceeds one, "
                f"got c_bar = {target.c_bar}"
            )
    if not isinstance(regime, ReferendumRegime):
        raise UsageError(f"regime must be a ReferendumRegime, got {regime!r}")


def _arrays(target, regime, config) -> _RepArrays:
    _check_target(target, regime, config)
    if config.agent_level:
        def rng_for(k):
            return np.random.Generator(
                np.random.Philox(np.random.SeedSequence((config.seed, k + 1)))
            )

        kernel = {
            "two_party": _agents_two_party,
            "third_party": _agents_third_party,
            "turnout": _agents_turnout,
        }[config.mode]
        return kernel(target, regime, config, rng_for)
    rng = np.random.Generator(np.random.Philox(config.seed))
    kernel = {
        "two_party": _counts_two_party,
        "third_party": _counts_third_party,
        "turnout": _counts_turnout,
    }[config.mode]
    return kernel(target, regime, config, rng)


def _binom_se(phat: float, n_reps: int) -> float:
    return math.sqrt(phat * (1.0 - phat) / n_reps)


def _mean_se(values) -> tuple[float, float]:
    if values is None:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=float)
    good = arr[~np.isnan(arr)]
    if good.size == 0:
        return math.nan, math.nan
    mean = float(good.mean())
    se = float(good.std(ddof=1) / math.sqrt(good.size)) if good.size > 1 else math.nan
    return mean, se


def simulate(target, regime: ReferendumRegime, config: SimConfig) -> SimResult:
    """Run the finite-agent election and aggregate replication frequencies.

    target must match config.mode: ElectorateParams for two_party,
    ThirdPartyParams for third_party, TurnoutParams for turnout. The regime
    doubles as the held flag: no_referendum is the baseline without one.
    """
    _validate_config(config)
    arrays = _arrays(target, regime, config)
    n_reps = config.n_replications
    win_R = float(arrays.win_R.mean())
    cong_y = float(arrays.cong_y.mean())
    cong_x = float(arrays.cong_x.mean())
    y1_mean, y1_se = _mean_se(arrays.y1_share)
    turnout_R, _ = _mean_se(arrays.turnout_R)
    turnout_L, _ = _mean_se(arrays.turnout_L)
    return SimResult(
        mode=config.mode,
        regime=regime,
        held=regime is not ReferendumRegime.NO_REFERENDUM,
        n_policy_voters=config.n_policy_voters,
        n_replications=n_reps,
        win_freq_R=win_R,
        win_freq_L=float(arrays.win_L.mean()),
        win_freq_T=float(arrays.win_T.mean()),
        ahead_freq_R=float(arrays.ahead_R.mean()),
        se_win_R=_binom_se(win_R, n_reps),
        congruence_y=cong_y,
        se_congruence_y=_binom_se(cong_y, n_reps),
        congruence_x=cong_x,
        se_congruence_x=_binom_se(cong_x, n_reps),
        referendum_y1_share=y1_mean,
        se_referendum_y1_share=y1_se,
        turnout_freq_R=turnout_R,
        turnout_freq_L=turnout_L,
        seed=config.seed,
    )


@dataclass(frozen=True)
class ThresholdEstimate:
    quantity: str
    value: float
    ci_low: float
    ci_high: float
    evaluations: int
    flags: tuple[str, ...] = ()


_THRESHOLD_RUNS = {
    "r_bind": ("two_party", ReferendumRegime.BINDING, 1.0),
    "r_star": ("two_party", ReferendumRegime.NON_BINDING, -1.0),
    "r_star_star": ("two_party", ReferendumRegime.NON_BINDING, 1.0),
    "r_T": ("turnout", ReferendumRegime.BINDING, 1.0),
}


def _with_r(target, r_value: float):
    if isinstance(target, ElectorateParams):
        return replace(target, r=r_value)
    if isinstance(target, ThirdPartyParams):
        return replace(target, base=replace(target.base, r=r_value))
    if isinstance(target, TurnoutParams):
        return replace(target, base=replace(target.base, r=r_value))
    raise UsageError(f"cannot sweep r on {type(target).__name__}")


def estimate_threshold(
    target,
    quantity: str,
    config: SimConfig,
    bracket: tuple[float, float] = (0.1, 0.9),
    tol: float = 1e-3,
) -> ThresholdEstimate:
    """Locate a benefit threshold in r from simulation alone.

    Bisection on the simulated net benefit (held minus baseline win
    frequency, common seed so the shock, noise, and party draws pair up),
    oriented by which side of the threshold benefits Right. The confidence
    interval combines the bisection width with 3 standard errors of the
    per-replication difference mapped through a secant slope estimate, so
    a flat net benefit honestly widens the interval.
    """
    if quantity not in _THRESHOLD_RUNS:
        raise UsageError(
            f"quantity must be one of {sorted(_THRESHOLD_RUNS)}, got {quantity!r}"
        )
    mode, regime, orient = _THRESHOLD_RUNS[quantity]
    if config.mode != mode:
        raise UsageError(f"{quantity} needs config.mode={mode!r}, got {config.mode!r}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0.0 < lo < hi < 1.0:
        raise UsageError(f"bracket must satisfy 0 < lo < hi < 1, got {bracket}")

    def measure(r_value):
        t = _with_r(target, r_value)
        diff = _arrays(t, regime, config).win_R.astype(np.float64) - _arrays(
            t, ReferendumRegime.NO_REFERENDUM, config
        ).win_R.astype(np.float64)
        se = (
            float(diff.std(ddof=1) / math.sqrt(diff.size))
            if diff.size > 1
            else math.inf
        )
        # Resolution floor: a run whose paired differences are all zero has
        # not shown the effect is zero, only that it is below one flipped
        # replication; never report a tighter uncertainty than that.
        return float(diff.mean()), max(se, 1.0 / diff.size)

    d_lo, se_lo = measure(lo)
    d_hi, se_hi = measure(hi)
    evaluations = 2
    slope = (d_hi - d_lo) / (hi - lo)
    spread = 3.0 * max(se_lo, se_hi) / max(abs(slope), 1e-12)

    if orient * d_lo >= 0.0:
        return ThresholdEstimate(
            quantity, lo, lo - spread, lo + spread, evaluations,
            ("no_sign_change_in_bracket",),
        )
    if orient * d_hi <= 0.0:
        return ThresholdEstimate(
            quantity, hi, hi - spread, hi + spread, evaluations,
            ("no_sign_change_in_bracket",),
        )

    se_mid = max(se_lo, se_hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        d_mid, se_mid = measure(mid)
        evaluations += 1
        if orient * d_mid >= 0.0:
            hi = mid
        else:
            lo = mid
    value = 0.5 * (lo + hi)
    half = 0.5 * tol + 3.0 * se_mid / max(abs(slope), 1e-12)
    return ThresholdEstimate(
        quantity, value, value - half, value + half, evaluations
    )
