import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specidx.config import RunConfig
from specidx.errors import ConfigError


def test_defaults_valid():
    cfg = RunConfig()
    assert cfg.potential == "gaussian" and cfg.seed == 0
    assert cfg.build_potential().params["depth"] == 8.0


@settings(max_examples=50, deadline=None)
@given(lam_min=st.floats(1e-3, 10), span=st.floats(1e-3, 50), npoints=st.integers(2, 500),
       seed=st.integers(0, 2**32), depth=st.floats(-10, 10, allow_nan=False),
       nquad=st.one_of(st.none(), st.integers(32, 2000)))
def test_round_trip(lam_min, span, npoints, seed, depth, nquad):
    cfg = RunConfig(potential="square_well", params={"depth": depth, "width": 1.5},
                    lam_min=lam_min, lam_max=lam_min + span, npoints=npoints, seed=seed,
                    nquad=nquad)
    assert RunConfig.from_json(cfg.to_json()) == cfg


@pytest.mark.parametrize("bad", [
    {"potential": "morse"},
    {"lam_min": 0.0},
    {"lam_min": 2.0, "lam_max": 1.0},
    {"npoints": 1},
    {"nquad": 8},
    {"ode_tol": 0.0},
    {"tol_sing": -1.0},
    {"tol_index": 1e-2, "tol_gap": 1e-3},
    {"theta": 0.0},
    {"theta": 2 * math.pi},
])
def test_invalid(bad):
    with pytest.raises(ConfigError):
        RunConfig(**bad)


def test_unknown_key_and_bad_json():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"lambda_min": 1.0})
    with pytest.raises(ConfigError):
        RunConfig.from_json("{not json")
    with pytest.raises(ConfigError):
        RunConfig.from_json(json.dumps([1, 2]))


def test_bad_potential_parameters():
    with pytest.raises(ConfigError):
        RunConfig(potential="square_well", params={"depth": 1.0, "width": -1.0}).build_potential()
    with pytest.raises(ConfigError):
        RunConfig(potential="gaussian", params={"radius": 1.0}).build_potential()
