"""Target threefold profiles and rule scripts, loaded from JSON."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .bounds import EpsilonTable
from .errors import ConfigError
from .numerics import parse_rat

CONFIG_ENV = "CASTELBOUND_CONFIG_DIR"

AXIOM_FIELDS = {
    "no_planes": bool,
    "plane_section_cap": int,
    "no_quadric_surfaces": bool,
    "quadric_intersection_degree": int,
    "p3_section_cap": int,
    "p4_ci222_available": bool,
}

TARGET_FIELDS = {"name", "label", "n", "ambient_dim", "s", "m_H", "D1", "epsilon_table",
                 "epsilon_fallback", "reference_bounds", "axioms", "script"}
REQUIRED_TARGET_FIELDS = {"name", "n", "D1"}

SCRIPT_FIELDS = {"name", "target", "kind", "base_max_d", "exclude_planar_line_bundle",
                 "planar_base_decrement", "three_projection_degrees", "planar_prune_degrees",
                 "genus_drops"}
DROP_FIELDS = {"degrees", "cases", "t", "via"}
DROP_VIAS = {"p3_section", "quadric_section", "ci222"}


@dataclass(frozen=True)
class Axiom:
    value: object
    anchor: str


@dataclass(frozen=True)
class AxiomSet:
    axioms: dict = field(default_factory=dict)

    def get(self, name: str):
        ax = self.axioms.get(name)
        return None if ax is None else ax.value

    def anchor(self, name: str) -> str:
        ax = self.axioms.get(name)
        return "" if ax is None else ax.anchor

    def __getattr__(self, name):
        if name in AXIOM_FIELDS:
            value = self.get(name)
            if value is None and AXIOM_FIELDS[name] is bool:
                return False
            return value
        raise AttributeError(name)

    def to_json(self) -> dict:
        return {k: {"value": a.value, "anchor": a.anchor} for k, a in sorted(self.axioms.items())}


@dataclass(frozen=True)
class TargetThreefold:
    name: str
    n: int
    D1: int
    label: str = ""
    ambient_dim: int = 3
    s: int = 1
    m_H: int = 1
    epsilon_table: Optional[EpsilonTable] = None
    epsilon_fallback: bool = False
    reference_bounds: Optional[tuple] = None
    axioms: AxiomSet = field(default_factory=AxiomSet)
    script: Optional[str] = None

    def to_json(self) -> dict:
        from .numerics import format_rat

        table = None
        if self.epsilon_table is not None:
            table = {str(f): format_rat(v) for f, v in self.epsilon_table.values.items()}
        return {
            "name": self.name, "label": self.label, "n": self.n, "ambient_dim": self.ambient_dim,
            "s": self.s, "m_H": self.m_H, "D1": self.D1, "epsilon_table": table,
            "epsilon_fallback": self.epsilon_fallback,
            "reference_bounds": None if self.reference_bounds is None else list(self.reference_bounds),
            "axioms": self.axioms.to_json(), "script": self.script,
        }


@dataclass(frozen=True)
class GenusDrop:
    degrees: tuple
    cases: tuple
    t: int
    via: str


@dataclass(frozen=True)
class RuleScript:
    name: str
    kind: str = "default"
    target: Optional[str] = None
    base_max_d: int = 2
    exclude_planar_line_bundle: bool = False
    planar_base_decrement: bool = False
    three_projection_degrees: frozenset = frozenset()
    planar_prune_degrees: frozenset = frozenset()
    genus_drops: tuple = ()

    def drops_for(self, d: int) -> list:
        return [g for g in self.genus_drops if d in g.degrees]

    def to_json(self) -> dict:
        return {
            "name": self.name, "kind": self.kind, "target": self.target,
            "base_max_d": self.base_max_d,
            "exclude_planar_line_bundle": self.exclude_planar_line_bundle,
            "planar_base_decrement": self.planar_base_decrement,
            "three_projection_degrees": sorted(self.three_projection_degrees),
            "planar_prune_degrees": sorted(self.planar_prune_degrees),
            "genus_drops": [{"degrees": list(g.degrees), "cases": list(g.cases), "t": g.t, "via": g.via}
                            for g in self.genus_drops],
        }


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown fields {extra}")


def _int(obj, key, where, default=None, minimum=None):
    value = obj.get(key, default)
    if value is None:
        raise ConfigError(f"{where}: missing {key!r}")
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: {key!r} must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}: {key!r} must be >= {minimum}")
    return value


def target_from_dict(obj: dict) -> TargetThreefold:
    if not isinstance(obj, dict):
        raise ConfigError("target config must be a JSON object")
    where = f"target {obj.get('name', '?')!r}"
    _reject_unknown(obj, TARGET_FIELDS, where)
    missing = sorted(REQUIRED_TARGET_FIELDS - set(obj))
    if missing:
        raise ConfigError(f"{where}: missing fields {missing}")
    n = _int(obj, "n", where, minimum=1)
    table = obj.get("epsilon_table")
    eps = None
    if table is not None:
        try:
            eps = EpsilonTable(n, {int(f): parse_rat(str(v)) for f, v in table.items()})
        except (ValueError, AttributeError) as exc:
            raise ConfigError(f"{where}: bad epsilon table ({exc})") from exc
    axioms = {}
    for key, entry in (obj.get("axioms") or {}).items():
        if key not in AXIOM_FIELDS:
            raise ConfigError(f"{where}: unknown axiom {key!r}")
        if not isinstance(entry, dict) or set(entry) - {"value", "anchor"} or "value" not in entry:
            raise ConfigError(f"{where}: axiom {key!r} must be {{value, anchor}}")
        value = entry["value"]
        kind = AXIOM_FIELDS[key]
        if kind is bool and not isinstance(value, bool):
            raise ConfigError(f"{where}: axiom {key!r} must be boolean")
        if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
            raise ConfigError(f"{where}: axiom {key!r} must be an integer")
        if not entry.get("anchor"):
            raise ConfigError(f"{where}: axiom {key!r} needs an anchor string")
        axioms[key] = Axiom(value, entry["anchor"])
    ref = obj.get("reference_bounds")
    return TargetThreefold(
        name=str(obj["name"]), n=n, D1=_int(obj, "D1", where, minimum=1),
        label=str(obj.get("label", "")), ambient_dim=_int(obj, "ambient_dim", where, 3),
        s=_int(obj, "s", where, 1, 1), m_H=_int(obj, "m_H", where, 1, 1),
        epsilon_table=eps, epsilon_fallback=bool(obj.get("epsilon_fallback", False)),
        reference_bounds=None if ref is None else tuple(int(x) for x in ref),
        axioms=AxiomSet(axioms), script=obj.get("script"),
    )


def script_from_dict(obj: dict) -> RuleScript:
    if not isinstance(obj, dict):
        raise ConfigError("rule script must be a JSON object")
    where = f"script {obj.get('name', '?')!r}"
    _reject_unknown(obj, SCRIPT_FIELDS, where)
    drops = []
    for entry in obj.get("genus_drops", []):
        _reject_unknown(entry, DROP_FIELDS, where)
        if entry.get("via") not in DROP_VIAS:
            raise ConfigError(f"{where}: genus drop 'via' must be one of {sorted(DROP_VIAS)}")
        t = _int(entry, "t", where, minimum=1)
        drops.append(GenusDrop(tuple(entry["degrees"]), tuple(entry["cases"]), t, entry["via"]))
    return RuleScript(
        name=str(obj.get("name", "unnamed")), kind=str(obj.get("kind", "custom")),
        target=obj.get("target"), base_max_d=_int(obj, "base_max_d", where, 2, 0),
        exclude_planar_line_bundle=bool(obj.get("exclude_planar_line_bundle", False)),
        planar_base_decrement=bool(obj.get("planar_base_decrement", False)),
        three_projection_degrees=frozenset(obj.get("three_projection_degrees", [])),
        planar_prune_degrees=frozenset(obj.get("planar_prune_degrees", [])),
        genus_drops=tuple(drops),
    )


BUILTIN_TARGETS = ("x5", "x24", "x33", "x223", "x2222", "pfaff-gr27-x", "pfaff-gr27-y")


def _search_dirs(kind: str) -> list[Path]:
    dirs = []
    env = os.environ.get(CONFIG_ENV)
    if env:
        for entry in env.split(os.pathsep):
            if entry:
                dirs.extend([Path(entry) / kind, Path(entry)])
    return dirs


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def _builtin(kind: str, name: str) -> Optional[dict]:
    res = resources.files("castelbound").joinpath("data", kind, f"{name}.json")
    if res.is_file():
        return json.loads(res.read_text())
    return None


def _lookup(kind: str, ref: str) -> dict:
    path = Path(ref)
    if path.suffix == ".json" and path.is_file():
        return _read_json(path)
    for d in _search_dirs(kind):
        candidate = d / f"{ref}.json"
        if candidate.is_file():
            return _read_json(candidate)
    obj = _builtin(kind, ref)
    if obj is None:
        raise ConfigError(f"no {kind[:-1]} named {ref!r}")
    return obj


def load_target(ref: str) -> TargetThreefold:
    """Load a target by built-in name, by name in $CASTELBOUND_CONFIG_DIR, or by path."""
    return target_from_dict(_lookup("targets", ref))


SCRIPT_ALIASES = {"paper": "reference"}


def load_script(target: TargetThreefold, which: str = "reference") -> RuleScript:
    """The target's own rule script ("reference"), the generic "default" one, or a name/path."""
    which = SCRIPT_ALIASES.get(which, which)
    if which == "default":
        return script_from_dict(_lookup("scripts", "default"))
    if which == "reference":
        if not target.script:
            raise ConfigError(f"target {target.name!r} names no rule script")
        return script_from_dict(_lookup("scripts", target.script))
    return script_from_dict(_lookup("scripts", which))
