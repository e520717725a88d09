"""Branch-and-bound certification of genus bounds for curves of low degree.

A curve of degree d on the target is projected to P^3.  Either its ideal sheaf
meets no wall down to b = b_d (NeutralBd), or the uppermost wall is induced by
O(-k) (LineBundleWall) or by I_{C1}(-k) for a subcurve C1 (CurveWall).  The
certified bound is the maximum over the cases that survive the rule script,
recursing into lower degrees for CurveWall pieces.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

from .bounds import bmt_bound, optimal_bound, planar_bound, surface_bound
from .errors import MissingAxiom, MissingTable, OutOfCertifiedRange
from .numerics import floor_of_surd, format_rat, parse_rat
from .targets import RuleScript, TargetThreefold, load_script
from .tiltwalls import (admissible_d1, b_d, curve_wall, divisor_wall_exists, line_bundle,
                        numerical_wall, reaches_b_d, ideal_class)

RULES = ("CaseAnalysis", "BaseSmall", "NeutralBd", "LineBundleWall", "CurveWall",
         "PlanarExclusion", "P3SectionExclusion", "ThreeProjectionExclusion",
         "GenusDropRefinement")

ANCHORS = {
    "CaseAnalysis": "maximum over the possible uppermost walls of the projected ideal sheaf",
    "BaseSmall": "a degree d curve has genus at most (d-1)(d-2)/2, with equality only for plane curves",
    "NeutralBd": "BMT inequality on P^3 applied to the projected ideal sheaf at (a, b) = (0, b_d)",
    "LineBundleWall": "wall induced by O(-k): the curve lies on a surface of degree k, "
                      "whose genus bound is d^2/(2k) + (k-4)d/2 + 1 - eps(d, k)",
    "CurveWall": "wall induced by I_{C1}(-k): g(C) = g(C1) + g(C2) + k d1 - 1 with deg C2 = d - d1",
    "PlanarExclusion": "a curve attaining the planar genus lies in a plane",
    "P3SectionExclusion": "if the projection does not drop the genus by t the curve lies in a P^{3+t}",
    "ThreeProjectionExclusion": "three projections with uppermost wall O(-2) force the curve onto "
                                "a quadric surface or a (2,2,2) complete intersection curve",
    "GenusDropRefinement": "genus of the curve is at most the genus of its projection minus t",
}

CI222_DEGREE = 8
CI222_GENUS = 5


@dataclass(frozen=True)
class CaseNode:
    rule: str
    value: Optional[Fraction]
    params: dict = field(default_factory=dict)
    anchor: str = ""
    children: tuple = ()

    @property
    def label(self) -> str:
        if self.rule == "LineBundleWall":
            return f"LineBundleWall({self.params['k']})"
        if self.rule == "CurveWall":
            return f"CurveWall({self.params['k']}, {self.params['d1']})"
        if self.rule == "GenusDropRefinement":
            return f"GenusDropRefinement({self.params['t']})"
        return self.rule

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "label": self.label,
            "value": None if self.value is None else format_rat(self.value),
            "params": self.params,
            "anchor": self.anchor,
            "children": [c.to_json() for c in self.children],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CaseNode":
        value = obj.get("value")
        return cls(obj["rule"], None if value is None else parse_rat(value), dict(obj.get("params", {})),
                   obj.get("anchor", ""), tuple(cls.from_json(c) for c in obj.get("children", [])))


def node(rule: str, value, params=None, children=(), anchor=None) -> CaseNode:
    return CaseNode(rule, None if value is None else Fraction(value), params or {},
                    ANCHORS[rule] if anchor is None else anchor, tuple(children))


@dataclass(frozen=True)
class Certificate:
    target: str
    d: int
    bound: Fraction
    tree: CaseNode
    script: str = ""

    def cases(self) -> list[CaseNode]:
        """Top-level cases that contribute a value."""
        if self.tree.rule != "CaseAnalysis":
            return [self.tree]
        return [c for c in self.tree.children if c.value is not None]

    def to_json(self) -> dict:
        return {"target": self.target, "d": self.d, "bound": format_rat(self.bound),
                "script": self.script, "tree": self.tree.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        return cls(obj["target"], int(obj["d"]), parse_rat(obj["bound"]),
                   CaseNode.from_json(obj["tree"]), obj.get("script", ""))


class Certifier:
    """Memoized certifier for one target under one rule script."""

    def __init__(self, target: TargetThreefold, script: Optional[RuleScript] = None):
        self.target = target
        self.script = script if script is not None else load_script(target, "reference")
        self._memo: dict[int, Certificate] = {}
        self._lock = threading.RLock()
        self._validate_script()

    # -- axioms ------------------------------------------------------------
    def _require(self, name: str, why: str):
        value = self.target.axioms.get(name)
        if value in (None, False):
            raise MissingAxiom(f"{why} needs axiom {name!r} for target {self.target.name!r}")
        return value

    def _validate_script(self) -> None:
        s = self.script
        if s.exclude_planar_line_bundle or s.planar_base_decrement:
            self._require("no_planes", "plane exclusion")
            self._require("plane_section_cap", "plane exclusion")
        for d in s.three_projection_degrees:
            self._three_projection_ok(d)
        for drop in s.genus_drops:
            for d in drop.degrees:
                self._drop_exclusion(drop, d)

    def _three_projection_ok(self, d: int) -> dict:
        self._require("p4_ci222_available", "three-projection exclusion")
        quad = self._require("quadric_intersection_degree", "three-projection exclusion")
        if not (d > quad and d > CI222_DEGREE):
            raise MissingAxiom(f"three-projection exclusion at d={d} needs d > {quad} and d > {CI222_DEGREE}")
        return {"quadric_intersection_degree": quad, "ci222_degree": CI222_DEGREE}

    def _section_exclusion(self, via: str, d: int) -> CaseNode:
        """Why the curve cannot lie in a P^3 section (one unit of genus drop)."""
        if via == "quadric_section":
            self._require("no_quadric_surfaces", "quadric-section drop")
            cap = self._require("quadric_intersection_degree", "quadric-section drop")
            params = {"quadric_intersection_degree": cap}
        else:
            cap = self._require("p3_section_cap", "P^3-section drop")
            params = {"p3_section_cap": cap}
        if d <= cap:
            raise MissingAxiom(f"section exclusion at d={d} needs d > {cap}")
        return node("P3SectionExclusion", None, {**params, "d": d})

    def _drop_exclusion(self, drop, d: int) -> tuple[list[CaseNode], Optional[int]]:
        """Exclusion nodes justifying a drop of t, plus an exceptional cap if one remains."""
        if drop.t > 2:
            raise MissingAxiom("genus drops beyond t = 2 have no supporting axiom")
        if drop.via == "ci222":
            if drop.t != 2:
                raise MissingAxiom("the (2,2,2) argument yields a drop of exactly 2")
            first = self._section_exclusion(
                "p3_section" if self.target.axioms.get("p3_section_cap") else "quadric_section", d)
            self._require("p4_ci222_available", "(2,2,2) drop")
            quad = self._require("quadric_intersection_degree", "(2,2,2) drop")
            if d <= quad:
                raise MissingAxiom(f"(2,2,2) drop at d={d} needs d > {quad}")
            exceptional = None
            if d <= CI222_DEGREE:
                # Linked to a residual curve of degree 8 - d inside a canonical curve of genus 5.
                residual = CI222_DEGREE - d
                exceptional = CI222_GENUS if residual == 0 else planar_bound(residual) + (d - residual) // 2
            second = node("ThreeProjectionExclusion", None,
                          {"d": d, "quadric_intersection_degree": quad, "ci222_degree": CI222_DEGREE,
                           "exceptional_cap": exceptional})
            return [first, second], exceptional
        if drop.t != 1:
            raise MissingAxiom(f"via={drop.via!r} yields a drop of exactly 1")
        return [self._section_exclusion(drop.via, d)], None

    # -- bounds ------------------------------------------------------------
    def bound(self, d: int) -> Fraction:
        return self.certify(d).bound

    def certify(self, d: int) -> Certificate:
        if d < 1 or d > self.target.D1:
            raise OutOfCertifiedRange(f"d={d} outside 1..{self.target.D1} for {self.target.name!r}")
        with self._lock:
            cached = self._memo.get(d)
            if cached is None:
                cached = self._certify(d)
                self._memo[d] = cached
            return cached

    def _plane_cap(self) -> Optional[int]:
        if self.target.axioms.no_planes:
            return self.target.axioms.plane_section_cap
        return None

    def _base(self, d: int) -> CaseNode:
        leaf = node("BaseSmall", planar_bound(d), {"d": d})
        cap = self._plane_cap()
        if self.script.planar_base_decrement and cap is not None and d > cap and d >= 3:
            return node("PlanarExclusion", planar_bound(d) - 1,
                        {"d": d, "plane_section_cap": cap}, [leaf])
        return leaf

    def _certify(self, d: int) -> Certificate:
        if d <= self.script.base_max_d:
            tree = self._base(d)
            return Certificate(self.target.name, d, tree.value, tree, self.script.name)

        cases: list[CaseNode] = []
        bd = b_d(d, 1)
        cases.append(node("NeutralBd", floor_of_surd(bmt_bound(d, bd)), {"d": d, "b_d": str(bd)}))

        k_max = isqrt(d)  # O(-k) lies in the heart only for b < -k, and b >= b_d = -sqrt(d)
        cap = self._plane_cap()
        for k in range(1, k_max + 1):
            wall = numerical_wall(ideal_class(d, 1), line_bundle(-k))
            if not reaches_b_d(wall, d, 1):
                continue
            leaf = node("LineBundleWall", floor_of_surd(surface_bound(d, k)), {"k": k})
            if k == 1 and self.script.exclude_planar_line_bundle and cap is not None and d > cap:
                cases.append(node("PlanarExclusion", None, {"k": 1, "plane_section_cap": cap}, [leaf]))
                continue
            if k == 2 and d in self.script.three_projection_degrees:
                cases.append(node("ThreeProjectionExclusion", None, self._three_projection_ok(d), [leaf]))
                continue
            cases.append(leaf)

        for k in range(1, k_max + 1):
            for d1 in range(1, d):
                if not admissible_d1(d, 1, k, d1):
                    continue
                if not reaches_b_d(curve_wall(d, 1, k, d1), d, 1):
                    continue
                cases.append(self._curve_wall(d, k, d1))

        cases = self._apply_drops(d, cases)
        value = max(c.value for c in cases if c.value is not None)
        tree = node("CaseAnalysis", value, {"d": d}, cases)
        return Certificate(self.target.name, d, value, tree, self.script.name)

    def _curve_wall(self, d: int, k: int, d1: int) -> CaseNode:
        d2 = d - d1
        g1, g2 = self.bound(d1), self.bound(d2)
        children = []
        if d in self.script.planar_prune_degrees and g1 == planar_bound(d1) and d1 >= 3:
            # A planar C1 puts d1 points of C on a plane; that k = 1 wall would sit higher.
            cur = curve_wall(d, 1, k, d1)
            new_wall = curve_wall(d, 1, 1, d - d1)
            if (divisor_wall_exists(d, 1, 1, d1) and new_wall is not None
                    and abs(new_wall.center) >= abs(cur.center)):
                g1 = g1 - 1
                children.append(node("PlanarExclusion", g1, {"d1": d1, "plane_degree": d1,
                                                             "forced_wall_center": format_rat(new_wall.center)}))
        value = g1 + g2 + k * d1 - 1
        params = {"k": k, "d1": d1, "pieces": [{"d": d1, "bound": format_rat(g1)},
                                                {"d": d2, "bound": format_rat(g2)}]}
        return node("CurveWall", value, params, children)

    def _apply_drops(self, d: int, cases: list[CaseNode]) -> list[CaseNode]:
        drops = self.script.drops_for(d)
        if not drops:
            return cases
        out = []
        for case in cases:
            for drop in drops:
                if case.value is not None and case.label in drop.cases:
                    reasons, exceptional = self._drop_exclusion(drop, d)
                    value = case.value - drop.t
                    if exceptional is not None:
                        value = max(value, Fraction(exceptional))
                    case = node("GenusDropRefinement", value,
                                {"t": drop.t, "via": drop.via, "case": case.label,
                                 "exceptional_cap": exceptional}, [case, *reasons])
            out.append(case)
        return out

    def table(self) -> list[Certificate]:
        return [self.certify(d) for d in range(1, self.target.D1 + 1)]


_CERTIFIERS: dict = {}
_CERT_LOCK = threading.Lock()


def _certifier(target: TargetThreefold, script: Optional[RuleScript]) -> Certifier:
    if script is None:
        script = load_script(target, "reference")
    key = (json.dumps(target.to_json(), sort_keys=True), json.dumps(script.to_json(), sort_keys=True))
    with _CERT_LOCK:
        cert = _CERTIFIERS.get(key)
        if cert is None:
            cert = _CERTIFIERS[key] = Certifier(target, script)
    return cert


def certify(target: TargetThreefold, d: int, script: Optional[RuleScript] = None) -> Certificate:
    return _certifier(target, script).certify(d)


def certify_table(target: TargetThreefold, script: Optional[RuleScript] = None) -> list[Certificate]:
    return _certifier(target, script).table()


def reference_bound(target: TargetThreefold, d: int) -> int:
    """Expected integer bound: floor of the conjectural optimum, else the config's reference value."""
    try:
        return floor_of_surd(optimal_bound(target, d))
    except MissingTable:
        if target.reference_bounds is None or d > len(target.reference_bounds):
            raise
        return target.reference_bounds[d - 1]


def explain(cert: Certificate, fmt: str = "text") -> str | dict:
    if fmt == "json":
        return cert.to_json()
    lines = [f"{cert.target} d={cert.d}: g <= {format_rat(cert.bound)}  [script {cert.script}]"]

    def walk(n: CaseNode, depth: int) -> None:
        value = "excluded" if n.value is None else format_rat(n.value)
        extras = {k: v for k, v in n.params.items() if k not in ("k", "d1", "t")}
        extra = f" {extras}" if extras else ""
        lines.append(f"{'  ' * depth}- {n.label}: {value}{extra}  -- {n.anchor}")
        for c in n.children:
            walk(c, depth + 1)

    walk(cert.tree, 1)
    return "\n".join(lines)
