import json

import pytest

from castelbound.errors import ConfigError
from castelbound.targets import (BUILTIN_TARGETS, CONFIG_ENV, load_script, load_target,
                                 script_from_dict, target_from_dict)


def test_builtins_load(target):
    assert target.name in BUILTIN_TARGETS
    assert load_script(target).name == target.script


def test_target_json_round_trip(target):
    again = target_from_dict(target.to_json())
    assert again == target


def test_script_json_round_trip(target):
    script = load_script(target)
    assert script_from_dict(script.to_json()) == script


def test_unknown_fields_rejected():
    with pytest.raises(ConfigError):
        target_from_dict({"name": "t", "n": 5, "D1": 3, "colour": "red"})
    with pytest.raises(ConfigError):
        script_from_dict({"name": "s", "speed": 3})
    with pytest.raises(ConfigError):
        target_from_dict({"name": "t", "n": 5, "D1": 3, "axioms": {"no_lines": {"value": True, "anchor": "x"}}})


def test_axiom_needs_anchor():
    with pytest.raises(ConfigError):
        target_from_dict({"name": "t", "n": 5, "D1": 3, "axioms": {"no_planes": {"value": True}}})


def test_bad_epsilon_table():
    with pytest.raises(ConfigError):
        target_from_dict({"name": "t", "n": 2, "D1": 3, "epsilon_table": {"1": "1/4"}})


def test_env_search_path(tmp_path, monkeypatch):
    obj = load_target("x24").to_json()
    obj["name"] = "mine"
    obj["D1"] = 4
    (tmp_path / "targets").mkdir()
    (tmp_path / "targets" / "mine.json").write_text(json.dumps(obj))
    monkeypatch.setenv(CONFIG_ENV, str(tmp_path))
    assert load_target("mine").D1 == 4


def test_load_by_path(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"name": "t", "n": 3, "D1": 2}))
    assert load_target(str(path)).n == 3


def test_missing_target():
    with pytest.raises(ConfigError):
        load_target("no-such-target")
