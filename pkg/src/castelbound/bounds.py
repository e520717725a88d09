"""Closed-form genus bounds for curves on polarized threefolds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import MissingTable
from .numerics import Surd, as_rat, to_surd


@dataclass(frozen=True)
class EpsilonTable:
    """Periodic correction ``f -> eps_X(f)`` for residues ``1 <= f <= n``."""

    n: int
    values: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        vals = {int(f): as_rat(v) for f, v in self.values.items()}
        if 0 in vals:  # residue 0 and residue n name the same class
            vals.setdefault(self.n, vals.pop(0))
        missing = [f for f in range(1, self.n + 1) if f not in vals]
        if missing:
            raise ValueError(f"epsilon table for n={self.n} lacks residues {missing}")
        if vals[self.n] != 0:
            raise ValueError("epsilon table must vanish at f = n")
        for f in range(1, self.n):
            if vals[f] != vals[self.n - f]:
                raise ValueError(f"epsilon table is not symmetric at f={f}")
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    def __call__(self, d: int) -> Fraction:
        f = d % self.n or self.n
        return self.values[f]


def epsilon(d: int, n: int) -> Fraction:
    f = d % n
    return Fraction(f, 2) * (n - f - 1 + Fraction(f, n))


def epsilon_max(n: int) -> Fraction:
    """Upper end of the band 0 <= epsilon(d, n) <= (n^2 - n)/8."""
    return Fraction(n * n - n, 8)


def planar_bound(d: int) -> int:
    if d < 1:
        raise ValueError("d must be positive")
    return (d - 1) * (d - 2) // 2


def surface_bound(d: int, n_surf: int) -> Fraction:
    if d < 1 or n_surf < 1:
        raise ValueError("d and n_surf must be positive")
    return Fraction(d * d, 2 * n_surf) + Fraction(n_surf - 4, 2) * d + 1 - epsilon(d, n_surf)


def bmt_bound(d: int, b0):
    """BMT genus bound at (a, b) = (0, b0); returns a Surd when b0 is irrational."""
    b0 = to_surd(b0)
    if b0.sign() >= 0:
        raise ValueError("b0 must be negative")
    value = Fraction(2 * d * d, 3) / (-b0) + (-b0 / 3 - 2) * d + 1
    return value.rational() if value.is_rational else value


def asymptotic_main_bound(d: int, n: int, m: int, s: int) -> Fraction:
    if min(d, n, m, s) < 1:
        raise ValueError("all arguments must be positive")
    return (Fraction(d * d, 2 * s * n) + Fraction(s * n * m**3 - 4 * m, 2) * d + 1
            - epsilon(m * d, s * n * m * m))


def castelnuovo_conjecture_bound(d: int, n: int) -> Fraction:
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive")
    return Fraction(d * d, 2 * n) + Fraction(d, 2) + 1


def optimal_bound(target, d: int) -> Fraction:
    """Conjectural optimal bound using the target's epsilon table."""
    table = getattr(target, "epsilon_table", None)
    if table is None:
        if getattr(target, "epsilon_fallback", False):
            return castelnuovo_conjecture_bound(d, target.n) - epsilon(d, target.n)
        raise MissingTable(f"target {target.name!r} has no epsilon table")
    return castelnuovo_conjecture_bound(d, target.n) - table(d)


def cy4_ch3_bound(d: int, n: int) -> Fraction:
    if d < 1:
        raise ValueError("d must be positive")
    return Fraction(d * d, 2 * n) + Fraction(n - 5, 2) * d - epsilon(d, n)


def genus_cap(bound) -> int:
    """Integer genus cap implied by a rational or surd bound."""
    from .numerics import floor_of_surd

    return floor_of_surd(bound)
