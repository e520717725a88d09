"""GV and PT generating series, truncated in q.

PT(q, t) = exp(F(q, t)) with the t^d coefficient of F given by

    F_d = sum_{r | d} sum_g GV_{g, d/r} (-1)^(g-1) / r * block(g, r),
    block(g, r) = ((-q)^(r/2) - (-q)^(-r/2))^(2g-2) = ((-q)^r - 2 + (-q)^(-r))^(g-1).

For g = 0 the block is expanded in ascending powers of q:
    1/((-q)^r - 2 + (-q)^(-r)) = sum_{k>=1} k (-q)^(r k).

Series are exact below their precision ``prec`` and may be unknown above it;
polynomials have ``prec = None``.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Optional

from .bounds import epsilon, planar_bound
from .constants import gv_vanish
from .errors import InconsistentSeries, PreconditionViolated, TooLarge, WindowTooNarrow
from .numerics import format_rat, parse_rat


@dataclass(frozen=True)
class LaurentQ:
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)
    prec: Optional[int] = None
    clipped: bool = False

    def __post_init__(self):
        clean = {}
        for e, c in self.coeffs.items():
            c = Fraction(c)
            if c and (self.prec is None or e <= self.prec):
                clean[int(e)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def zero(cls) -> "LaurentQ":
        return cls({})

    @classmethod
    def one(cls) -> "LaurentQ":
        return cls({0: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, e: int) -> Fraction:
        return self.coeffs.get(e, Fraction(0))

    def low(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def high(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    def __add__(self, other: "LaurentQ") -> "LaurentQ":
        prec = _min_prec(self.prec, other.prec)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentQ(out, prec, self.clipped or other.clipped)

    def __neg__(self) -> "LaurentQ":
        return LaurentQ({e: -c for e, c in self.coeffs.items()}, self.prec, self.clipped)

    def __sub__(self, other: "LaurentQ") -> "LaurentQ":
        return self + (-other)

    def scale(self, k) -> "LaurentQ":
        k = Fraction(k)
        return LaurentQ({e: k * c for e, c in self.coeffs.items()}, self.prec, self.clipped)

    def __mul__(self, other: "LaurentQ") -> "LaurentQ":
        if self.is_zero() or other.is_zero():
            # zero times an unknown tail is still only known up to the tail's precision
            return LaurentQ({}, _min_prec(self.prec, other.prec), self.clipped or other.clipped)
        lo_a, lo_b = self.low(), other.low()
        prec = _min_prec(None if self.prec is None else self.prec + lo_b,
                         None if other.prec is None else other.prec + lo_a)
        out: dict[int, Fraction] = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = ea + eb
                if prec is not None and e > prec:
                    continue
                out[e] = out.get(e, 0) + ca * cb
        return LaurentQ(out, prec, self.clipped or other.clipped)

    def truncate(self, prec: int) -> "LaurentQ":
        """Forget everything above ``prec``."""
        new = prec if self.prec is None else min(prec, self.prec)
        dropped = any(e > new for e in self.coeffs)
        return LaurentQ(self.coeffs, new, self.clipped or dropped or self.prec is not None)

    def window(self, e_min: int, e_max: int) -> "LaurentQ":
        """Coefficients inside [e_min, e_max]; flags clipping of nonzero terms or unknown tails."""
        if self.prec is not None and self.prec < e_max:
            raise WindowTooNarrow(f"series known only up to q^{self.prec}, window asks for q^{e_max}")
        kept = {e: c for e, c in self.coeffs.items() if e_min <= e <= e_max}
        dropped = len(kept) != len(self.coeffs) or self.prec is not None
        return LaurentQ(kept, e_max, self.clipped or dropped)

    def is_symmetric(self) -> bool:
        return self.prec is None and all(self[-e] == c for e, c in self.coeffs.items())

    def __eq__(self, other):
        if not isinstance(other, LaurentQ):
            return NotImplemented
        return self.coeffs == other.coeffs and self.prec == other.prec

    def __hash__(self):
        return hash((tuple(self.coeffs.items()), self.prec))

    def __str__(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            body = " + ".join(f"({format_rat(c)})q^{e}" for e, c in self.coeffs.items())
        return body if self.prec is None else f"{body} + O(q^{self.prec + 1})"


def _min_prec(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _binomial_power(r: int, power: int) -> dict[int, Fraction]:
    """((-q)^r - 2 + (-q)^(-r))^power = ((-q)^(r/2) - (-q)^(-r/2))^(2 power), power >= 0."""
    # (x - 1/x)^(2p) = sum_j C(2p, j) (-1)^j x^(2p - 2j), with x^2 = (-q)^r
    from math import comb

    out: dict[int, Fraction] = {}
    for j in range(2 * power + 1):
        half = power - j  # exponent of (-q)^r
        coef = comb(2 * power, j) * (-1) ** j * (-1) ** ((r * half) % 2)
        out[r * half] = out.get(r * half, 0) + Fraction(coef)
    return out


def g_block(g: int, r: int, window: Optional[tuple[int, int]] = None) -> LaurentQ:
    if g < 0 or r < 1:
        raise ValueError("need g >= 0 and r >= 1")
    if g >= 1:
        series = LaurentQ(_binomial_power(r, g - 1))
    else:
        if window is None:
            raise ValueError("the genus 0 block needs a truncation window")
        top = window[1]
        series = LaurentQ({r * k: Fraction(k * (-1) ** ((r * k) % 2)) for k in range(1, top // r + 1)},
                          prec=max(top, 0), clipped=True)
    if window is not None:
        series = series.window(*window) if g >= 1 else series.window(window[0], series.prec)
    return series


# -- tables ----------------------------------------------------------------------


@dataclass(frozen=True)
class GVTable:
    entries: Mapping[tuple, int] = field(default_factory=dict)
    d_max: int = 0

    def __post_init__(self):
        clean = {}
        for (g, d), v in self.entries.items():
            if g < 0 or d < 1:
                raise ValueError(f"bad GV index {(g, d)}")
            if v:
                clean[(int(g), int(d))] = int(v) if Fraction(v).denominator == 1 else Fraction(v)
        d_max = max([self.d_max, *(d for _, d in clean)]) if clean else self.d_max
        object.__setattr__(self, "entries", dict(sorted(clean.items())))
        object.__setattr__(self, "d_max", d_max)

    @property
    def g_max_per_d(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g, d in self.entries:
            out[d] = max(out.get(d, 0), g)
        return out

    def g_max(self) -> int:
        return max((g for g, _ in self.entries), default=0)

    def get(self, g: int, d: int):
        if d < 1 or d > self.d_max:
            raise KeyError(f"degree {d} outside table window 1..{self.d_max}")
        return self.entries.get((g, d), 0)

    def rows(self) -> list[tuple[int, int, int]]:
        return [(g, d, v) for (g, d), v in self.entries.items()]


@dataclass(frozen=True)
class PTTable:
    series: Mapping[int, LaurentQ]
    d_max: int
    window: tuple

    @property
    def entries(self) -> dict[tuple, Fraction]:
        return {(s, d): c for d, ser in self.series.items() for s, c in ser.coeffs.items()}

    @property
    def clipped(self) -> bool:
        return any(s.clipped for s in self.series.values())

    @classmethod
    def from_entries(cls, entries: Mapping[tuple, object], d_max: int, window: tuple) -> "PTTable":
        e_min, e_max = window
        per: dict[int, dict] = {d: {} for d in range(1, d_max + 1)}
        for (s, d), v in entries.items():
            if not (e_min <= s <= e_max) or not (1 <= d <= d_max):
                raise ValueError(f"PT entry {(s, d)} outside window")
            per[d][s] = Fraction(v)
        return cls({d: LaurentQ(c, e_max) for d, c in per.items()}, d_max, (e_min, e_max))

    def rows(self) -> list[tuple[int, int, Fraction]]:
        return sorted((s, d, v) for (s, d), v in self.entries.items())


def _divisors(d: int) -> list[int]:
    return [r for r in range(1, d + 1) if d % r == 0]


def _cover_term(gv: Mapping[tuple, object], d: int, prec: int, skip_r1: bool = False) -> LaurentQ:
    total = LaurentQ({}, None)
    any_g0 = False
    for r in _divisors(d):
        if skip_r1 and r == 1:
            continue
        base = d // r
        for (g, dd), v in gv.items():
            if dd != base or not v:
                continue
            if g == 0:
                any_g0 = True
                block = g_block(0, r, (-(10**9), prec))
            else:
                block = g_block(g, r)
            sign = -1 if (g - 1) % 2 else 1
            total = total + block.scale(Fraction(sign * Fraction(v), r))
    if any_g0 and total.prec is None:
        total = total.truncate(prec)
    return total


def gv_to_logpt(gv: GVTable, window: tuple[int, int]) -> dict[int, LaurentQ]:
    """t-degree coefficients of log PT, restricted to the q-window."""
    e_min, e_max = window
    out = {}
    for d in range(1, gv.d_max + 1):
        f = _cover_term(gv.entries, d, e_max)
        out[d] = f.window(e_min, e_max) if f.prec is not None else _clip_poly(f, e_min, e_max)
    return out


def _clip_poly(f: LaurentQ, e_min: int, e_max: int) -> LaurentQ:
    kept = {e: c for e, c in f.coeffs.items() if e_min <= e <= e_max}
    if len(kept) == len(f.coeffs):
        return LaurentQ(kept)
    return LaurentQ(kept, e_max, True)


def _exp_graded(F: Mapping[int, LaurentQ], d_max: int) -> dict[int, LaurentQ]:
    # d P_d = sum_{j=1}^{d} j F_j P_{d-j}
    P = {0: LaurentQ.one()}
    for d in range(1, d_max + 1):
        acc = LaurentQ({}, None)
        for j in range(1, d + 1):
            acc = acc + (F[j] * P[d - j]).scale(j)
        P[d] = acc.scale(Fraction(1, d))
    return P


def _log_graded(P: Mapping[int, LaurentQ], d_max: int) -> dict[int, LaurentQ]:
    # F_d = P_d - (1/d) sum_{j=1}^{d-1} j F_j P_{d-j}
    F: dict[int, LaurentQ] = {}
    for d in range(1, d_max + 1):
        acc = LaurentQ({}, None)
        for j in range(1, d):
            acc = acc + (F[j] * P[d - j]).scale(j)
        F[d] = P[d] - acc.scale(Fraction(1, d))
    return F


def pt_from_gv(gv: GVTable, window: tuple[int, int]) -> PTTable:
    e_min, e_max = window
    # Negative exponents of F_j reach down to -j (g_max - 1); keep enough tail to stay exact.
    margin = gv.d_max * max(gv.g_max() - 1, 0)
    inner = e_max + margin
    F = {d: _cover_term(gv.entries, d, inner) for d in range(1, gv.d_max + 1)}
    P = _exp_graded(F, gv.d_max)
    series = {}
    for d in range(1, gv.d_max + 1):
        p = P[d]
        low = p.low()
        if low is not None and low < e_min:
            raise WindowTooNarrow(f"PT_{d} has terms at q^{low}, below the window start {e_min}")
        series[d] = p.window(e_min, e_max) if p.prec is not None else _clip_poly(p, e_min, e_max)
    return PTTable(series, gv.d_max, (e_min, e_max))


def gv_from_pt(pt: PTTable, window: Optional[tuple[int, int]] = None) -> GVTable:
    """Recover GV invariants from a PT table by peeling genera degree by degree.

    Each series g_block(g, 1) with g >= 1 is symmetric with lowest term q^-(g-1)
    (coefficient 1 after the sign (-1)^(g-1)), and the genus 0 block has only
    positive exponents, so genera are read off from the most negative exponent
    upward; GV_1 is the q^0 coefficient and GV_0 the q^1 coefficient.
    """
    e_min, e_max = window or pt.window
    P = {0: LaurentQ.one()}
    for d in range(1, pt.d_max + 1):
        ser = pt.series.get(d, LaurentQ({}, e_max))
        P[d] = LaurentQ(ser.coeffs, e_max if ser.prec is None else min(ser.prec, e_max))
    F = _log_graded(P, pt.d_max)
    found: dict[tuple, Fraction] = {}
    for d in range(1, pt.d_max + 1):
        residual = F[d] - _cover_term(found, d, F[d].prec, skip_r1=True)
        prec = residual.prec
        if prec is None or prec < 1:
            raise WindowTooNarrow(f"log PT_{d} is exact only up to q^{prec}; need q^1")
        while residual.coeffs and residual.low() < 0:
            g = 1 - residual.low()
            coef = residual[residual.low()]
            found[(g, d)] = coef
            sign = -1 if (g - 1) % 2 else 1
            residual = residual - g_block(g, 1).scale(sign * coef)
        g_top = max([g for (g, dd) in found if dd == d], default=0)
        need = d * max(g_top - 1, 0)
        if need > e_max or e_min > -need:
            raise WindowTooNarrow(f"window {window or pt.window} too narrow for genus {g_top} at d={d}")
        for g, e in ((1, 0), (0, 1)):
            coef = residual[e]
            if coef:
                found[(g, d)] = coef
                sign = -1 if (g - 1) % 2 else 1
                blk = g_block(g, 1) if g else g_block(0, 1, (0, prec))
                residual = residual - blk.scale(sign * coef)
        leftover = {e: c for e, c in residual.coeffs.items() if prec is None or e <= prec}
        if leftover:
            raise InconsistentSeries(f"nonzero residual at d={d}: {sorted(leftover.items())[:3]}")
    for key, v in found.items():
        if v.denominator != 1:
            raise InconsistentSeries(f"non-integral GV invariant at {key}: {format_rat(v)}")
    return GVTable({k: int(v) for k, v in found.items()}, pt.d_max)


# -- partition inequality -------------------------------------------------------


def lemgv_f(x: int, N: int, n: int) -> Fraction:
    if N * N < n - 1:
        raise PreconditionViolated(f"need N^2 >= n - 1, got N={N}, n={n}")
    if x < N:
        return Fraction(planar_bound(x))
    return Fraction(x * x, 2 * n) + Fraction(n - 4, 2) * x + 1 - epsilon(x, n)


def lemgv_threshold(n: int, N: int) -> Fraction:
    return Fraction(n**3 - n**2, 4) + n * (N * N - n + 1)


def partitions(x: int, largest: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All partitions of x as non-increasing tuples."""
    if largest is None:
        largest = x
    if x == 0:
        yield ()
        return
    for first in range(min(x, largest), 0, -1):
        for rest in partitions(x - first, first):
            yield (first, *rest)


DEFAULT_PARTITION_CAP = 40


def partition_check(n: int, N: int, x: int, cap: int = DEFAULT_PARTITION_CAP) -> dict:
    if x > cap:
        raise TooLarge(f"x={x} exceeds the partition cap {cap}")
    if x < 1:
        raise ValueError("x must be positive")
    # every f(j) has denominator dividing 2n, so compare on that integer scale
    scale = 2 * n
    f = {}
    for j in range(1, x + 1):
        v = (lemgv_f(j, N, n) - 1) * scale
        if v.denominator != 1:
            raise ArithmeticError(f"f({j}) is not a multiple of 1/{scale}")
        f[j] = v.numerator
    lhs = f[x]
    for part in partitions(x):
        if sum(f[p] for p in part) > lhs:
            return {"holds": False, "witness": list(part)}
    return {"holds": True, "witness": None}


# -- vanishing ---------------------------------------------------------------------


def vanishing_consistency(gv: GVTable, n: int, m: int, N_H: int) -> list[dict]:
    flagged = []
    for (g, d), v in gv.entries.items():
        if v and gv_vanish(g, d, n, m, N_H):
            flagged.append({"g": g, "d": d, "value": v})
    return flagged


def random_gv_table(rng: random.Random, g_max: int = 4, d_max: int = 6, bound: int = 1000,
                    density: float = 0.5) -> GVTable:
    entries = {}
    for d in range(1, d_max + 1):
        for g in range(0, g_max + 1):
            if rng.random() < density:
                entries[(g, d)] = rng.randint(-bound, bound)
    return GVTable(entries, d_max)


# -- CSV ---------------------------------------------------------------------------


def _csv_rows(text: str, header: tuple[str, str, str]) -> list[tuple[int, int, str]]:
    reader = csv.reader(io.StringIO(text))
    rows = []
    for i, row in enumerate(reader):
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if i == 0 and cells[:3] == list(header):
            continue
        if len(cells) != 3:
            raise ValueError(f"line {i + 1}: expected 3 columns, got {len(cells)}")
        rows.append((int(cells[0]), int(cells[1]), cells[2]))
    return rows


def gv_from_csv(text: str, d_max: Optional[int] = None) -> GVTable:
    entries = {}
    for g, d, v in _csv_rows(text, ("g", "d", "value")):
        value = parse_rat(v)
        if value.denominator != 1:
            raise ValueError(f"GV invariant at {(g, d)} must be an integer")
        entries[(g, d)] = int(value)
    return GVTable(entries, d_max or 0)


def gv_to_csv(gv: GVTable) -> str:
    lines = ["g,d,value"] + [f"{g},{d},{v}" for g, d, v in gv.rows()]
    return "\n".join(lines) + "\n"


def pt_from_csv(text: str, window: tuple[int, int], d_max: Optional[int] = None) -> PTTable:
    entries = {(s, d): parse_rat(v) for s, d, v in _csv_rows(text, ("s", "d", "value"))}
    if d_max is None:
        d_max = max((d for _, d in entries), default=0)
    return PTTable.from_entries(entries, d_max, window)


def pt_to_csv(pt: PTTable) -> str:
    lines = ["s,d,value"] + [f"{s},{d},{format_rat(v)}" for s, d, v in pt.rows()]
    return "\n".join(lines) + "\n"
