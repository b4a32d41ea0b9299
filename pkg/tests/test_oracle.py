"""Finite-agent Monte Carlo oracle: determinism, engine agreement, and the
threshold estimator's honesty."""
from __future__ import annotations

import math
from dataclasses import replace

import pytest

from refcalc.election import win_prob
from refcalc.congruence import second_issue_congruence
from refcalc.errors import UsageError
from refcalc.model import DistributionSpec, ElectorateParams, ReferendumRegime
from refcalc.oracle import SimConfig, estimate_threshold, simulate
from refcalc.third_party import ThirdPartyParams, win_prob_third
from refcalc.turnout import TurnoutParams, win_prob_turnout

from conftest import SCENARIO_A

NO_REF = ReferendumRegime.NO_REFERENDUM
BINDING = ReferendumRegime.BINDING
NON_BINDING = ReferendumRegime.NON_BINDING

SPOILER = ThirdPartyParams(
    base=ElectorateParams(
        r=0.55,
        mu=0.5,
        p=0.2,
        b_L=-0.5,
        b_R=-0.1,
        taste=DistributionSpec("normal", 0.6),
        shock=DistributionSpec("normal", 0.25),
    ),
    v=-0.05,
)

TURNOUT = TurnoutParams(
    base=ElectorateParams(
        r=0.55,
        mu=0.6,
        p=0.2,
        b_L=-0.8,
        b_R=-0.4,
        taste=DistributionSpec("normal", 1.2),
        shock=DistributionSpec("normal", 0.3),
    ),
    c_bar=6.0,
    sigma=3.0,
    kappa=1.0,
)

FULL = SimConfig(n_policy_voters=100_000, n_replications=10_000, seed=11)


def _z(analytic, result):
    se = max(result.se_win_R, 1e-12)
    return abs(result.win_freq_R - analytic) / se


# ------------------------------------------------------------- determinism


def test_same_seed_same_result():
    cfg = SimConfig(n_policy_voters=5_000, n_replications=400, seed=42)
    a = simulate(SCENARIO_A, NON_BINDING, cfg)
    b = simulate(SCENARIO_A, NON_BINDING, cfg)
    assert a == b


def test_seed_changes_result():
    cfg = SimConfig(n_policy_voters=5_000, n_replications=400, seed=42)
    a = simulate(SCENARIO_A, NON_BINDING, cfg)
    c = simulate(SCENARIO_A, NON_BINDING, replace(cfg, seed=43))
    assert a.win_freq_R != c.win_freq_R


def test_agent_engine_is_deterministic_too():
    cfg = SimConfig(n_policy_voters=800, n_replications=60, seed=9, agent_level=True)
    assert simulate(SCENARIO_A, BINDING, cfg) == simulate(SCENARIO_A, BINDING, cfg)


# ------------------------------------------- analytic vs simulated (3 SE)


@pytest.mark.parametrize("regime", [NO_REF, BINDING, NON_BINDING])
def test_two_party_matches_analytic(regime):
    res = simulate(SCENARIO_A, regime, FULL)
    analytic = win_prob(SCENARIO_A, regime, held=regime is not NO_REF)
    assert _z(analytic, res) < 3.0
    assert res.win_freq_L == pytest.approx(1.0 - res.win_freq_R, abs=1e-12)
    assert res.win_freq_T == 0.0
    assert res.ahead_freq_R == res.win_freq_R


def test_two_party_congruence_matches_analytic():
    res = simulate(SCENARIO_A, NON_BINDING, FULL)
    rep = second_issue_congruence(SCENARIO_A, NON_BINDING)
    z = abs(res.congruence_y - rep.prob_with_ref) / max(res.se_congruence_y, 1e-12)
    assert z < 3.0


@pytest.mark.parametrize("held, regime", [(False, NO_REF), (True, NON_BINDING)])
def test_third_party_matches_analytic(held, regime):
    cfg = replace(FULL, mode="third_party")
    res = simulate(SPOILER, regime, cfg)
    assert _z(win_prob_third(SPOILER, held=held), res) < 3.0
    assert res.win_freq_R + res.win_freq_L + res.win_freq_T == pytest.approx(
        1.0, abs=1e-12
    )


@pytest.mark.parametrize("referendum, regime", [(False, NO_REF), (True, BINDING)])
def test_turnout_matches_analytic(referendum, regime):
    cfg = replace(FULL, mode="turnout")
    res = simulate(TURNOUT, regime, cfg)
    assert _z(win_prob_turnout(TURNOUT, referendum=referendum), res) < 3.0


def test_turnout_participation_levels():
    cfg = replace(FULL, mode="turnout")
    quiet = simulate(TURNOUT, NO_REF, cfg)
    loud = simulate(TURNOUT, BINDING, cfg)
    # Without the measure every policy voter's stake is p: participation p/c_bar.
    expected = TURNOUT.base.p / TURNOUT.c_bar
    assert quiet.turnout_freq_R == pytest.approx(expected, abs=5e-4)
    assert quiet.turnout_freq_L == pytest.approx(expected, abs=5e-4)
    # The ballot measure mobilizes both parties.
    assert loud.turnout_freq_R > quiet.turnout_freq_R
    assert loud.turnout_freq_L > quiet.turnout_freq_L


def test_binding_congruence_is_exactly_one():
    # Whatever the tally, a binding vote implements the tally's majority.
    for continuum in (False, True):
        cfg = SimConfig(
            n_policy_voters=2_000,
            n_replications=300,
            seed=5,
            continuum_tally=continuum,
        )
        res = simulate(SCENARIO_A, BINDING, cfg)
        assert res.congruence_y == 1.0
        assert res.se_congruence_y == 0.0


def test_continuum_tally_removes_tally_noise():
    noisy = simulate(
        SCENARIO_A, BINDING, SimConfig(n_policy_voters=500, n_replications=2_000, seed=3)
    )
    smooth = simulate(
        SCENARIO_A,
        BINDING,
        SimConfig(n_policy_voters=500, n_replications=2_000, seed=3, continuum_tally=True),
    )
    assert smooth.se_referendum_y1_share < noisy.se_referendum_y1_share


# ------------------------------------------------- engine cross-validation


@pytest.mark.parametrize(
    "label, target, regime, mode",
    [
        ("two_party", SCENARIO_A, NON_BINDING, "two_party"),
        ("third_party", SPOILER, NON_BINDING, "third_party"),
        ("turnout", TURNOUT, BINDING, "turnout"),
    ],
)
def test_agents_and_counts_engines_agree(label, target, regime, mode):
    counts_cfg = SimConfig(
        n_policy_voters=3_000, n_replications=300, seed=17, mode=mode
    )
    agents_cfg = replace(counts_cfg, agent_level=True)
    a = simulate(target, regime, counts_cfg)
    b = simulate(target, regime, agents_cfg)
    joint = math.sqrt(a.se_win_R**2 + b.se_win_R**2)
    assert abs(a.win_freq_R - b.win_freq_R) < 3.0 * max(joint, 1e-12), label


# ------------------------------------------------------------- convergence


def test_standard_error_halves_with_quadrupled_budget():
    # With a nearly degenerate shock the tally share's variance is pure
    # finite-sample noise, so its standard error scales as 1/sqrt(n R):
    # doubling both n and R should halve it, within 20 percent.
    params = replace(
        SCENARIO_A,
        shock=DistributionSpec("normal", 1e-4),
        taste=DistributionSpec("normal", 1.0),
    )
    small = simulate(
        params, NON_BINDING, SimConfig(n_policy_voters=2_000, n_replications=500, seed=7)
    )
    large = simulate(
        params,
        NON_BINDING,
        SimConfig(n_policy_voters=4_000, n_replications=1_000, seed=7),
    )
    ratio = large.se_referendum_y1_share / small.se_referendum_y1_share
    assert 0.4 < ratio < 0.6


# ------------------------------------------------------ threshold recovery


def test_estimate_r_bind_brackets_analytic():
    target = ElectorateParams(
        r=0.5, mu=0.5, p=0.05, b_L=-1.0, b_R=0.5,
        taste=DistributionSpec("normal", 1.0),
        shock=DistributionSpec("normal", 0.5),
    )
    cfg = SimConfig(n_policy_voters=20_000, n_replications=2_000, seed=0)
    est = estimate_threshold(target, "r_bind", cfg)
    assert est.flags == ()
    # FROZEN scipy: r_bind = 0.3582516326965752.
    assert est.ci_low < 0.3582516326965752 < est.ci_high
    assert est.evaluations > 2


def test_estimate_r_T_brackets_analytic():
    cfg = SimConfig(n_policy_voters=20_000, n_replications=2_000, seed=0, mode="turnout")
    # mu = 0.6 narrows the admissible r band to (1/6, 5/6); the default
    # bracket would step outside it, so pass one inside.
    est = estimate_threshold(TURNOUT, "r_T", cfg, bracket=(0.25, 0.75))
    # FROZEN scipy: r_T = 0.5346722369893764.
    assert est.ci_low < 0.5346722369893764 < est.ci_high


def test_estimate_threshold_reports_missing_sign_change():
    target = ElectorateParams(
        r=0.5, mu=0.5, p=0.05, b_L=-1.0, b_R=0.5,
        taste=DistributionSpec("normal", 1.0),
        shock=DistributionSpec("normal", 0.5),
    )
    cfg = SimConfig(n_policy_voters=5_000, n_replications=500, seed=0)
    est = estimate_threshold(target, "r_bind", cfg, bracket=(0.6, 0.9))
    assert est.flags == ("no_sign_change_in_bracket",)
    assert est.value == 0.6
    assert est.evaluations == 2


def test_estimate_threshold_rejects_unknown_quantity():
    cfg = SimConfig(n_policy_voters=100, n_replications=10, seed=0)
    with pytest.raises(UsageError):
        estimate_threshold(SCENARIO_A, "r_nonsense", cfg)
    with pytest.raises(UsageError):
        estimate_threshold(SCENARIO_A, "r_T", cfg)  # wrong mode for quantity
    with pytest.raises(UsageError):
        estimate_threshold(SCENARIO_A, "r_bind", cfg, bracket=(0.9, 0.1))


# ------------------------------------------------------------ input checks


def test_mode_and_target_must_match():
    cfg = SimConfig(n_policy_voters=100, n_replications=10, seed=0)
    with pytest.raises(UsageError):
        simulate(SPOILER, NO_REF, cfg)
    with pytest.raises(UsageError):
        simulate(SCENARIO_A, NO_REF, replace(cfg, mode="third_party"))
    with pytest.raises(UsageError):
        simulate(TURNOUT, NO_REF, replace(cfg, mode="two_party"))


def test_unsupported_regime_mode_pairs():
    cfg = SimConfig(n_policy_voters=100, n_replications=10, seed=0)
    with pytest.raises(UsageError):
        simulate(SPOILER, BINDING, replace(cfg, mode="third_party"))
    with pytest.raises(UsageError):
        simulate(TURNOUT, NON_BINDING, replace(cfg, mode="turnout"))


def test_turnout_cost_ceiling_guard():
    cheap = replace(TURNOUT, c_bar=4.5)  # passes the analytic bound, not the sim one
    cfg = SimConfig(n_policy_voters=100, n_replications=10, seed=0, mode="turnout")
    with pytest.raises(UsageError) as exc:
        simulate(cheap, BINDING, cfg)
    assert "participation probability" in str(exc.value)


def test_sim_config_validation():
    with pytest.raises(UsageError):
        simulate(SCENARIO_A, NO_REF, SimConfig(n_policy_voters=0, n_replications=10, seed=0))
    with pytest.raises(UsageError):
        simulate(SCENARIO_A, NO_REF, SimConfig(n_policy_voters=10, n_replications=0, seed=0))
    with pytest.raises(UsageError):
        simulate(SCENARIO_A, NO_REF, SimConfig(n_policy_voters=10, n_replications=10, seed=-1))
    with pytest.raises(UsageError):
        simulate(
            SCENARIO_A, NO_REF,
            SimConfig(n_policy_voters=10, n_replications=10, seed=0, mode="four_party"),
        )
