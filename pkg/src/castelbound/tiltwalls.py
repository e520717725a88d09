"""Tilt-stability numerics on a polarized threefold.

Chern characters are normalized (``c_i = H^{3-i} ch_i / H^3``) and tilt points
are parameterized by ``(b, a^2)`` so that everything stays rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import DegenerateClass, KOutOfRange, NotASemicircle, UnknownCh3
from .numerics import Surd, as_rat, floor_of_surd, surd_cmp, to_surd


@dataclass(frozen=True)
class Polarization:
    n: int
    s: int = 1
    m_H: int = 1
    label: str = ""

    def __post_init__(self):
        if min(self.n, self.s, self.m_H) < 1:
            raise ValueError("n, s and m_H must be positive")

    @property
    def n_H(self) -> int:
        return self.s * self.n * self.m_H**2


@dataclass(frozen=True)
class ChernH:
    c0: Fraction
    c1: Fraction
    c2: Fraction
    c3: Fraction = Fraction(0)
    c3_known: bool = True

    def __post_init__(self):
        for name in ("c0", "c1", "c2", "c3"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))

    @classmethod
    def of(cls, c0, c1, c2, c3=None) -> "ChernH":
        if c3 is None:
            return cls(c0, c1, c2, 0, False)
        return cls(c0, c1, c2, c3, True)

    def __add__(self, other: "ChernH") -> "ChernH":
        return ChernH(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2,
                      self.c3 + other.c3, self.c3_known and other.c3_known)

    def __neg__(self) -> "ChernH":
        return ChernH(-self.c0, -self.c1, -self.c2, -self.c3, self.c3_known)

    def __sub__(self, other: "ChernH") -> "ChernH":
        return self + (-other)

    def scale(self, k) -> "ChernH":
        k = as_rat(k)
        return ChernH(k * self.c0, k * self.c1, k * self.c2, k * self.c3, self.c3_known)

    def is_zero(self) -> bool:
        return self.c0 == self.c1 == self.c2 == 0 and (not self.c3_known or self.c3 == 0)


@dataclass(frozen=True)
class TiltPoint:
    b: Fraction
    a_sq: Fraction
    boundary: bool = False

    def __post_init__(self):
        object.__setattr__(self, "b", as_rat(self.b))
        object.__setattr__(self, "a_sq", as_rat(self.a_sq))
        if self.a_sq < 0 or (self.a_sq == 0 and not self.boundary):
            raise ValueError("a_sq must be positive (a_sq = 0 only for boundary points)")

    @classmethod
    def on_boundary(cls, b) -> "TiltPoint":
        return cls(b, 0, True)


@dataclass(frozen=True)
class Vertical:
    b: Fraction


@dataclass(frozen=True)
class Semicircle:
    center: Fraction
    radius_sq: Fraction

    def __post_init__(self):
        if self.radius_sq <= 0:
            raise ValueError("radius_sq must be positive")


WallGeometry = Union[Vertical, Semicircle]


def twist(ch: ChernH, b) -> ChernH:
    b = as_rat(b)
    c0, c1, c2, c3 = ch.c0, ch.c1, ch.c2, ch.c3
    return ChernH(
        c0,
        c1 - b * c0,
        c2 - b * c1 + b * b / 2 * c0,
        c3 - b * c2 + b * b / 2 * c1 - b**3 / 6 * c0,
        ch.c3_known,
    )


def line_bundle(k) -> ChernH:
    """ch of O(k)."""
    return twist(ChernH(1, 0, 0, 0), -as_rat(k))


def ideal_class_p3(d: int, g: int) -> ChernH:
    if d < 1:
        raise ValueError("d must be positive")
    return ChernH(1, 0, -d, g + 2 * d - 1)


def ideal_class(d, n: int) -> ChernH:
    """(ch_0, ch_1, ch_2) of an ideal sheaf of a degree-d curve on a degree-n threefold."""
    return ChernH.of(1, 0, -Fraction(d, n))


def quotient_class_in_surface(d: int, g: int, n_surf: int) -> ChernH:
    if d < 1 or n_surf < 1:
        raise ValueError("d and n_surf must be positive")
    return ChernH(0, n_surf, -d - Fraction(n_surf**2, 2),
                  Fraction(n_surf**3, 6) + g + 2 * d - 1)


def discriminant(ch: ChernH) -> Fraction:
    return ch.c1 * ch.c1 - 2 * ch.c0 * ch.c2


def central_charge(ch: ChernH, pt: TiltPoint) -> tuple[Fraction, Fraction]:
    t = twist(ch, pt.b)
    return pt.a_sq / 2 * t.c0 - t.c2, t.c1


def slope(ch: ChernH, pt: TiltPoint):
    re, im = central_charge(ch, pt)
    if im == 0:
        return math.inf
    return -re / im


def numerical_wall(v: ChernH, w: ChernH) -> Optional[WallGeometry]:
    """Locus where the tilt slopes of v and w agree, or None if it is empty."""
    if v.is_zero() and w.is_zero():
        raise DegenerateClass("both classes are zero")
    r, c, e = v.c0, v.c1, v.c2
    r2, c2, e2 = w.c0, w.c1, w.c2
    # Slope equality after clearing denominators:
    # alpha*(b^2 + a^2) + beta*b + gamma = 0
    alpha = (c * r2 - r * c2) / 2
    beta = e2 * r - e * r2
    gamma = e * c2 - e2 * c
    if alpha != 0:
        center = -beta / (2 * alpha)
        radius_sq = center * center - gamma / alpha
        if radius_sq <= 0:
            return None
        return Semicircle(center, radius_sq)
    if beta != 0:
        return Vertical(-gamma / beta)
    return None


def wall_rightmost(wall: WallGeometry) -> Surd:
    if not isinstance(wall, Semicircle):
        raise NotASemicircle("rightmost point is defined for semicircles only")
    return Surd(wall.center, 1, wall.radius_sq)


def wall_leftmost(wall: WallGeometry) -> Surd:
    if not isinstance(wall, Semicircle):
        raise NotASemicircle("leftmost point is defined for semicircles only")
    return Surd(wall.center, -1, wall.radius_sq)


def rightmost_at_least(wall: WallGeometry, b) -> bool:
    """True when the semicircle's rightmost point is >= b (b may be a surd)."""
    if not isinstance(wall, Semicircle):
        raise NotASemicircle("rightmost point is defined for semicircles only")
    gap = to_surd(b) - wall.center
    # center + sqrt(radius_sq) >= b  <=>  sqrt(radius_sq) >= gap
    if gap.sign() <= 0:
        return True
    return surd_cmp(gap * gap, wall.radius_sq) <= 0


def bmt_q(ch: ChernH, pt: TiltPoint) -> Fraction:
    """BMT quadratic with the P^3 normalization."""
    if not ch.c3_known:
        raise UnknownCh3("ch_3 is required for the BMT quadratic")
    t = twist(ch, pt.b)
    return pt.a_sq * discriminant(ch) + 4 * t.c2 * t.c2 - 6 * t.c1 * t.c3


def b_d(d: int, n: int) -> Surd:
    return -Surd.sqrt(Fraction(d, n))


def rho_d(d: int, n: int) -> Surd:
    return Surd.sqrt(Fraction(d, 4 * n))


def _d1_caps(d: int, n: int, k: int) -> tuple[Fraction, Surd]:
    first = d - Fraction(k * k * n, 2)
    second = d + Fraction(k * k * n, 2) - k * Surd.sqrt(2 * n * d)
    return first, second


def admissible_d1(d: int, n: int, k: int, d1: int) -> bool:
    first, second = _d1_caps(d, n, k)
    return d1 < first and surd_cmp(d1, second) < 0


def max_admissible_d1(d: int, n: int, k: int) -> int:
    """Largest admissible d1 >= 0, or -1 when none is."""
    first, second = _d1_caps(d, n, k)
    cap = min(-(-first // 1) - 1, -floor_of_surd(-second) - 1)  # largest integer strictly below both
    return max(int(cap), -1)


def divisor_wall_exists(d: int, n: int, k: int, deg_CD: int) -> bool:
    if k < 1 or surd_cmp(k, -b_d(d, n)) > 0:
        raise KOutOfRange(f"k={k} outside [1, -b_d] for d={d}, n={n}")
    return admissible_d1(d, n, k, d - deg_CD)


def genus_decomposition(g1: int, g2: int, k: int, d1: int) -> int:
    return g1 + g2 + k * d1 - 1


def curve_wall(d: int, n: int, k: int, d1: int) -> Optional[WallGeometry]:
    """Wall for an ideal sheaf of a degree-d curve induced by I_{C1}(-k), deg C1 = d1."""
    v = ideal_class(d, n)
    w = twist(ideal_class(d1, n), k) if d1 else line_bundle(-k)
    return numerical_wall(v, w)


def reaches_b_d(wall: Optional[WallGeometry], d: int, n: int) -> bool:
    """True when a semicircular wall extends to b >= b_d, i.e. lies in the range studied."""
    return isinstance(wall, Semicircle) and rightmost_at_least(wall, b_d(d, n))


def wall_to_json(wall: Optional[WallGeometry]) -> Optional[dict]:
    from .numerics import format_rat, format_surd

    if wall is None:
        return None
    if isinstance(wall, Vertical):
        return {"kind": "vertical", "b": format_rat(wall.b)}
    return {
        "kind": "semicircle",
        "center": format_rat(wall.center),
        "radius_sq": format_rat(wall.radius_sq),
        "rightmost": format_surd(wall_rightmost(wall)),
    }


def chern_to_json(ch: ChernH) -> dict:
    from .numerics import format_rat

    return {
        "c0": format_rat(ch.c0),
        "c1": format_rat(ch.c1),
        "c2": format_rat(ch.c2),
        "c3": format_rat(ch.c3) if ch.c3_known else None,
    }


def chern_from_json(obj: dict) -> ChernH:
    from .numerics import parse_rat

    c3 = obj.get("c3")
    return ChernH.of(*(parse_rat(str(obj[k])) for k in ("c0", "c1", "c2")),
                     None if c3 is None else parse_rat(str(c3)))
