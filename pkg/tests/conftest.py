"""Shared parameter sets for the test suite.

Expected values tagged FROZEN were computed with standalone scipy routines
(scipy.integrate.quad / brentq / stats closed forms) before the tests were
written, so they do not depend on the package's own quadrature.
"""
from __future__ import annotations

import pytest

from refcalc.model import DistributionSpec, ElectorateParams

# Baseline two-party scenario used across election / congruence / oracle tests:
# diverged positions (b_R > 0), liberal-leaning electorate.
SCENARIO_A = ElectorateParams(
    r=0.45,
    mu=0.5,
    p=0.2,
    b_L=-0.5,
    b_R=0.3,
    taste=DistributionSpec("normal", 0.2),
    shock=DistributionSpec("normal", 0.25),
)

# Threshold-map primitives: wide taste dispersion, unit-stakes traditional issue.
PRIM_WIDE = dict(
    p=0.05,
    b_L=-1.0,
    taste=DistributionSpec("normal", 1.0),
    shock=DistributionSpec("normal", 0.5),
)

# Aligned-positions primitives for the r_star branch.
PRIM_NARROW = dict(
    p=0.2,
    b_L=-0.5,
    taste=DistributionSpec("normal", 0.2),
    shock=DistributionSpec("normal", 0.25),
)


@pytest.fixture
def scenario_a() -> ElectorateParams:
    return SCENARIO_A
