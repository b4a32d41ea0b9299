"""Scenario files: the JSON surface of the command-line tools.

A scenario is one electorate plus optional extension blocks. The parser is
deliberately strict: unknown keys are rejected with their JSON path, wrong
types name the expected one, and semantic validation reuses the library's
own validators so a file that loads here is accepted by every module.

Schema (all numbers JSON numbers, booleans JSON booleans):

    {
      "r": 0.45, "mu": 0.5, "p": 0.2, "b_L": -0.5, "b_R": -0.1,
      "taste": {"family": "normal", "scale": 0.2},
      "shock": {"family": "normal", "scale": 0.25},
      "regime": "no_referendum" | "binding" | "non_binding",   # optional
      "third_party": {"v": -0.01},                             # optional
      "turnout": {"c_bar": 9.0, "sigma": 1.2, "kappa": 0.7},   # optional
      "quadrature": {"abs_tol": ..., "rel_tol": ...,
                     "max_subdivisions": ...},                 # optional
      "sim": {"n_policy_voters": ..., "n_replications": ...,
              "seed": ..., "agent_level": ...,
              "continuum_tally": ...}                          # optional
    }

The sim block carries no "mode": the tools pick the oracle mode from which
extension blocks are present. In the third_party block v may be omitted
(defaults to the library's standard small valence penalty).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .distributions import FAMILIES, DistributionSpec
from .errors import ScenarioError
from .model import ElectorateParams, ReferendumRegime, require_valid
from .oracle import SimConfig
from .quadrature import QuadratureConfig
from .third_party import DEFAULT_VALENCE, ThirdPartyParams, require_valid_third
from .turnout import TurnoutParams, require_valid_turnout


@dataclass(frozen=True)
class Scenario:
    params: ElectorateParams
    regime: ReferendumRegime
    third: ThirdPartyParams | None
    turnout: TurnoutParams | None
    quadrature: QuadratureConfig
    sim: SimConfig


def _require_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioError(f"{path} must be a JSON object, got {type(value).__name__}")
    return value


def _reject_unknown(obj: dict, path: str, allowed) -> None:
    for key in obj:
        if key not in allowed:
            raise ScenarioError(
                f'unknown key "{key}" at {path}; allowed keys: {", ".join(sorted(allowed))}'
            )


def _real(obj: dict, key: str, path: str) -> float:
    if key not in obj:
        raise ScenarioError(f'missing required key "{key}" at {path}')
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path}.{key} must be a number, got {value!r}")
    return float(value)


def _integer(obj: dict, key: str, path: str) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{path}.{key} must be an integer, got {value!r}")
    return value


def _boolean(obj: dict, key: str, path: str) -> bool:
    value = obj[key]
    if not isinstance(value, bool):
        raise ScenarioError(f"{path}.{key} must be true or false, got {value!r}")
    return value


def _distribution(obj: dict, key: str, path: str) -> DistributionSpec:
    if key not in obj:
        raise ScenarioError(f'missing required key "{key}" at {path}')
    block = _require_object(obj[key], f"{path}.{key}")
    _reject_unknown(block, f"{path}.{key}", ("family", "scale"))
    family = block.get("family")
    if family not in FAMILIES:
        raise ScenarioError(
            f"{path}.{key}.family must be one of {FAMILIES}, got {family!r}"
        )
    scale = _real(block, "scale", f"{path}.{key}")
    if scale <= 0:
        raise ScenarioError(f"{path}.{key}.scale must be positive, got {scale}")
    return DistributionSpec(family=family, scale=scale)


_TOP_KEYS = (
    "r", "mu", "p", "b_L", "b_R", "taste", "shock",
    "regime", "third_party", "turnout", "quadrature", "sim",
)


def parse_scenario(data, source: str = "scenario") -> Scenario:
    """Build a validated Scenario from decoded JSON (a dict)."""
    obj = _require_object(data, source)
    _reject_unknown(obj, source, _TOP_KEYS)

    params = ElectorateParams(
        r=_real(obj, "r", source),
        mu=_real(obj, "mu", source),
        p=_real(obj, "p", source),
        b_L=_real(obj, "b_L", source),
        b_R=_real(obj, "b_R", source),
        taste=_distribution(obj, "taste", source),
        shock=_distribution(obj, "shock", source),
    )
    require_valid(params)

    regime = ReferendumRegime.NO_REFERENDUM
    if "regime" in obj:
        raw = obj["regime"]
        try:
            regime = ReferendumRegime(raw)
        except ValueError:
            raise ScenarioError(
                f"{source}.regime must be one of "
                f"{[m.value for m in ReferendumRegime]}, got {raw!r}"
            ) from None

    third = None
    if "third_party" in obj:
        block = _require_object(obj["third_party"], f"{source}.third_party")
        _reject_unknown(block, f"{source}.third_party", ("v",))
        v = _real(block, "v", f"{source}.third_party") if "v" in block else DEFAULT_VALENCE
        third = ThirdPartyParams(base=params, v=v)
        require_valid_third(third)

    turnout = None
    if "turnout" in obj:
        block = _require_object(obj["turnout"], f"{source}.turnout")
        _reject_unknown(block, f"{source}.turnout", ("c_bar", "sigma", "kappa"))
        turnout = TurnoutParams(
            base=params,
            c_bar=_real(block, "c_bar", f"{source}.turnout"),
            sigma=_real(block, "sigma", f"{source}.turnout"),
            kappa=_real(block, "kappa", f"{source}.turnout"),
        )
        require_valid_turnout(turnout)

    quadrature = QuadratureConfig()
    if "quadrature" in obj:
        block = _require_object(obj["quadrature"], f"{source}.quadrature")
        _reject_unknown(
            block, f"{source}.quadrature", ("abs_tol", "rel_tol", "max_subdivisions")
        )
        if "abs_tol" in block:
            quadrature = replace(
                quadrature, abs_tol=_real(block, "abs_tol", f"{source}.quadrature")
            )
        if "rel_tol" in block:
            quadrature = replace(
                quadrature, rel_tol=_real(block, "rel_tol", f"{source}.quadrature")
            )
        if "max_subdivisions" in block:
            quadrature = replace(
                quadrature,
                max_subdivisions=_integer(block, "max_subdivisions", f"{source}.quadrature"),
            )

    sim = SimConfig()
    if "sim" in obj:
        block = _require_object(obj["sim"], f"{source}.sim")
        _reject_unknown(
            block,
            f"{source}.sim",
            ("n_policy_voters", "n_replications", "seed", "agent_level", "continuum_tally"),
        )
        if "n_policy_voters" in block:
            sim = replace(sim, n_policy_voters=_integer(block, "n_policy_voters", f"{source}.sim"))
        if "n_replications" in block:
            sim = replace(sim, n_replications=_integer(block, "n_replications", f"{source}.sim"))
        if "seed" in block:
            sim = replace(sim, seed=_integer(block, "seed", f"{source}.sim"))
        if "agent_level" in block:
            sim = replace(sim, agent_level=_boolean(block, "agent_level", f"{source}.sim"))
        if "continuum_tally" in block:
            sim = replace(sim, continuum_tally=_boolean(block, "continuum_tally", f"{source}.sim"))

    return Scenario(
        params=params, regime=regime, third=third, turnout=turnout,
        quadrature=quadrature, sim=sim,
    )


def load_scenario(path: str) -> Scenario:
    """Read and validate a scenario file; errors carry line or path context."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}"
        ) from exc
    return parse_scenario(data, source=path)
