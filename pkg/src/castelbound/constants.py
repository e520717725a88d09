"""Smallest-integer constants behind the asymptotic genus bounds, with minimality certificates.

Every constant is the least integer ``N`` satisfying a finite list of
conditions.  Each condition knows how to compute its own least solution
(:meth:`Condition.minimum`) and how to test a candidate directly
(:meth:`Condition.holds`).  The two are implemented independently: minima use
squaring and tail estimates, ``holds`` uses surd comparisons and plain scans.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, isqrt
from typing import Callable, Mapping, Optional, Sequence

from .bounds import cy4_ch3_bound, epsilon, epsilon_max
from .errors import IncompleteMap
from .numerics import Surd, format_rat, surd_cmp
from .tiltwalls import Polarization


def ceil_rat(x) -> int:
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def k_range(n: int, lo: int = 1) -> range:
    """Integers k with lo <= k <= 4n/3."""
    return range(lo, (4 * n) // 3 + 1)


# -- conditions -----------------------------------------------------------------


class Condition:
    id: str
    params: dict

    def minimum(self) -> int:
        raise NotImplementedError

    def holds(self, N: int) -> bool:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass
class LowerBound(Condition):
    """N >= value."""

    id: str
    value: Fraction
    params: dict = field(default_factory=dict)

    def minimum(self) -> int:
        return ceil_rat(self.value)

    def holds(self, N: int) -> bool:
        return N >= self.value

    def describe(self) -> str:
        return f"N >= {format_rat(self.value)}"


@dataclass
class SqrtCondition(Condition):
    """coef * sqrt(scale * N) >= rhs, with coef > 0."""

    id: str
    coef: Fraction
    scale: Fraction
    rhs: Fraction
    params: dict = field(default_factory=dict)

    def minimum(self) -> int:
        if self.rhs <= 0:
            return 0
        # Both sides are non-negative here, so squaring is safe.
        return ceil_rat((self.rhs / self.coef) ** 2 / self.scale)

    def holds(self, N: int) -> bool:
        if N < 0:
            return False
        lhs = Fraction(self.coef) * Surd.sqrt(Fraction(self.scale) * N)
        return surd_cmp(lhs, self.rhs) >= 0

    def describe(self) -> str:
        return (f"{format_rat(self.coef)}*sqrt({format_rat(self.scale)}*N)"
                f" >= {format_rat(self.rhs)}")


@dataclass
class EventualCondition(Condition):
    """diff(d) >= 0 for every d >= N, where diff = A*d^2 + B*d + periodic(d).

    ``periodic`` must be bounded below by ``floor_c`` and have period ``period``.
    """

    id: str
    A: Fraction
    B: Fraction
    periodic: Callable[[int], Fraction]
    floor_c: Fraction
    period: int
    params: dict = field(default_factory=dict)
    text: str = ""

    def diff(self, d: int) -> Fraction:
        return self.A * d * d + self.B * d + self.periodic(d)

    def tail_start(self) -> int:
        """First d0 >= 1 beyond which A*d^2 + B*d + floor_c >= 0 and increasing."""
        A, B, C = self.A, self.B, self.floor_c
        if A == 0 and B == 0:
            # Purely periodic: holds eventually iff it holds on one period.
            bad = [d for d in range(1, self.period + 1) if self.diff(d) < 0]
            if bad:
                raise ValueError(f"{self.id} fails periodically and has no threshold")
            return 1
        if A < 0 or (A == 0 and B < 0):
            raise ValueError(f"{self.id} fails for all large d")
        start = max(1, ceil_rat(-B / (2 * A)) if A else 1)
        q = lambda d: A * d * d + B * d + C  # noqa: E731
        if q(start) >= 0:
            return start
        # Jump close to the root via an integer square root, then step exactly.
        if A:
            disc = B * B - 4 * A * C
            est = (-B + Fraction(isqrt(ceil_rat(disc)))) / (2 * A)
            start = max(start, int(est) - 1)
        else:
            start = max(start, ceil_rat(-C / B) - 1)
        while q(start) < 0:
            start += 1
        return start

    def minimum(self) -> int:
        tail = self.tail_start()
        for d in range(tail - 1, 0, -1):
            if self.diff(d) < 0:
                return d + 1
        return 1

    def holds(self, N: int, horizon: Optional[int] = None) -> bool:
        # Direct scan; the horizon covers several periods past the quadratic vertex.
        if horizon is None:
            vertex = ceil_rat(-self.B / (2 * self.A)) if self.A else 0
            horizon = max(N, vertex, 1) + 4 * self.period + 64
            horizon = max(horizon, self.tail_start() + self.period)
        return all(self.diff(d) >= 0 for d in range(max(N, 1), horizon + 1))

    def describe(self) -> str:
        return self.text or f"{self.id} for every d >= N"


@dataclass(frozen=True)
class Inequality:
    id: str
    params: dict
    text: str
    minimum: int
    holds: bool
    binding: bool

    def to_json(self) -> dict:
        return {"id": self.id, "parameters": self.params, "text": self.text,
                "minimum": self.minimum, "holds": self.holds, "binding": self.binding}


@dataclass(frozen=True)
class ConstantReport:
    name: str
    value: int
    inequalities: tuple
    minimality_witness: Optional[Inequality]
    exact: Optional[Fraction] = None
    notes: tuple = ()
    conditions: tuple = field(default=(), repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "exact": None if self.exact is None else format_rat(self.exact),
            "inequalities": [i.to_json() for i in self.inequalities],
            "minimality_witness": None if self.minimality_witness is None
            else self.minimality_witness.to_json(),
            "notes": list(self.notes),
        }


def _solve(name: str, conditions: Sequence[Condition], floor_value: int = 1,
           notes: Sequence[str] = ()) -> ConstantReport:
    minima = [c.minimum() for c in conditions]
    value = max([floor_value, *minima])
    records = []
    witness = None
    for cond, low in zip(conditions, minima):
        rec = Inequality(cond.id, cond.params, cond.describe(), low, low <= value, low == value)
        records.append(rec)
        if witness is None and low == value:
            witness = rec
    return ConstantReport(name, value, tuple(records), witness, notes=tuple(notes),
                          conditions=tuple(conditions))


def verify_report(report: ConstantReport) -> bool:
    """Re-check a report by direct evaluation: value satisfies all, value-1 fails one."""
    v = report.value
    if not all(c.holds(v) for c in report.conditions):
        return False
    if v <= 1:  # constants are positive integers
        return True
    return any(not c.holds(v - 1) for c in report.conditions)


def brute_force_minimum(conditions: Sequence[Condition], floor_value: int = 1,
                        limit: int = 10**6) -> Optional[int]:
    """Scan N upward from floor_value; None when nothing below ``limit`` works."""
    for N in range(floor_value, limit):
        if all(c.holds(N) for c in conditions):
            return N
    return None


# -- eventual dominance helpers --------------------------------------------------


def _dominance(id_: str, n_small: int, n_big: int, m: int, const_shift: Fraction,
               params: dict, text: str) -> EventualCondition:
    """Bound with n_big (quadratic coefficient 1/(2 n_big)) stays below the n_small one at x = m*d.

    diff(d) = x^2 (1/(2 n_small) - 1/(2 n_big)) + const_shift * x - eps(x, n_small) + eps(x, n_big)
    """
    A = Fraction(m * m, 2 * n_small) - Fraction(m * m, 2 * n_big)
    B = const_shift * m

    def periodic(d: int) -> Fraction:
        return epsilon(m * d, n_big) - epsilon(m * d, n_small)

    return EventualCondition(id_, A, B, periodic, -epsilon_max(n_small),
                             _lcm(n_small, n_big), params, text)


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _s_dominance(n: int, s: int, m: int, id_: str) -> EventualCondition:
    # x^2/(2s) + s x/2 - eps(x,s) <= x^2/(2n) + n x/2 - eps(x,n)
    return _dominance(id_, n, s, m, Fraction(n - s, 2), {"s": s, "n": n, "m_H": m},
                      f"x^2/(2*{s}) + {s}*x/2 - eps(x,{s}) <= x^2/(2*{n}) + {n}*x/2 - eps(x,{n}),"
                      f" x = {m}*d, for every d >= N")


# -- Proposition-level constants ------------------------------------------------


def solve_N0(n: int) -> ConstantReport:
    if n < 1:
        raise ValueError("n must be positive")
    conds = [_s_dominance(n, s, 1, "surface-dominance") for s in range(n, (4 * n) // 3 + 1) if s > n]
    return _solve("N0", conds, notes=("s = n is an identity and is omitted",))


def n1_conditions(n: int, l: int, N0: Optional[int] = None) -> list[Condition]:
    if N0 is None:
        N0 = solve_N0(n).value
    conds: list[Condition] = [
        LowerBound("N0", Fraction(N0), {"N0": N0}),
        LowerBound("b_d-range", Fraction(16 * n * n, 9), {"n": n}),
        LowerBound("b_d-cover", Fraction((n - 1) * l + 1), {"n": n, "l": l}),
        LowerBound("epsilon-margin", max(Fraction(18, n) * epsilon(d, n) for d in range(1, n + 1)),
                   {"n": n}),
    ]
    for k in range(1, n):
        conds.append(SqrtCondition("no-wall", Fraction(k), Fraction(2), k * l + Fraction(k * k, 2),
                                   {"k": k, "l": l}))
    for k in k_range(n, n):
        conds.append(SqrtCondition("high-degree", Fraction(k), Fraction(2),
                                   N0 - 1 + Fraction(k * k, 2), {"k": k, "N0": N0}))
        conds.append(SqrtCondition("intersection", Fraction(k), Fraction(2),
                                   Fraction(4 * n * n, 3) - 1 + Fraction(k * k, 2), {"k": k}))
    return conds


def solve_N1(n: int, l: int, only: Optional[str] = None) -> ConstantReport:
    if n < 1 or l < 1:
        raise ValueError("n and l must be positive")
    conds = n1_conditions(n, l)
    if only is not None:
        conds = [c for c in conds if c.id == only]
        if not conds:
            raise ValueError(f"no condition {only!r} applies for n={n}")
        return _solve(f"N1[{only}]", conds)
    return _solve("N1", conds)


def nl_conditions(n: int, l: int, N1: Optional[int] = None) -> list[Condition]:
    if N1 is None:
        N1 = solve_N1(n, l).value
    conds: list[Condition] = [LowerBound("N1", Fraction(N1), {"N1": N1})]
    for k in k_range(n, n):
        rhs = k + Fraction(k * k, 2 * n) + epsilon_max(n) + Fraction(N1 * N1, 2)
        conds.append(SqrtCondition("genus-sum", Fraction(k, n), Fraction(2), rhs,
                                   {"k": k, "N1": N1}))
    return conds


def solve_N_nl(n: int, l: int) -> ConstantReport:
    if n < 1 or l < 1:
        raise ValueError("n and l must be positive")
    return _solve("N_nl", nl_conditions(n, l))


def divisor_conditions(n_target: int, n_D: int, m_H: int, l: int) -> list[Condition]:
    base = ceil_rat(Fraction(solve_N_nl(n_D, l).value, m_H))
    conds: list[Condition] = [LowerBound("N_nl/m_H", Fraction(base), {"n_D": n_D, "l": l, "m_H": m_H})]
    if n_D != n_target:
        conds.append(_dominance(
            "divisor-dominance", n_target, n_D, m_H, Fraction(n_target - n_D, 2),
            {"n_target": n_target, "n_D": n_D, "m_H": m_H},
            f"surface bound with n={n_D} <= surface bound with n={n_target} at x = {m_H}*d,"
            " for every d >= N"))
    return conds


def cor_in_divisor_threshold(n_target: int, n_D: int, m_H: int, l: int) -> int:
    return cor_in_divisor_report(n_target, n_D, m_H, l).value


def cor_in_divisor_report(n_target: int, n_D: int, m_H: int, l: int) -> ConstantReport:
    if n_target > n_D:
        raise ValueError("n_target must not exceed n_D")
    return _solve("N_divisor", divisor_conditions(n_target, n_D, m_H, l),
                  notes=("least integer satisfying the displayed comparison",))


# -- threshold chain --------------------------------------------------------------


def default_nH_map(pol: Polarization) -> dict[int, int]:
    n_H = pol.n_H
    return {k: n_H for k in k_range(n_H)}


def solve_theorem_chain(pol: Polarization, nH_by_k: Optional[Mapping[int, int]] = None,
                        nD_by_k: Optional[Mapping[int, int]] = None) -> dict[str, ConstantReport]:
    """N2, N3, N4 and N_H for a polarized threefold.

    ``nH_by_k[k]`` is the least degree of an effective divisor inside a member of
    |k m_H H|.  ``nD_by_k[k]`` is the degree used for the divisor containing the
    curve (defaults to ``nH_by_k``).  The surface degree for |k m_H H| is
    ``k * m_H**3 * H^3``.
    """
    m = pol.m_H
    if nH_by_k is None:
        nH_by_k = default_nH_map(pol)
    nH_by_k = {int(k): int(v) for k, v in nH_by_k.items()}
    if not nH_by_k:
        raise IncompleteMap("empty n_H map")
    n = min(nH_by_k.values())
    missing = [k for k in k_range(n) if k not in nH_by_k]
    if missing:
        raise IncompleteMap(f"n_H map lacks k = {missing}")
    nD_by_k = {int(k): int(v) for k, v in (nD_by_k or {}).items()}

    n2_conds = []
    for k in k_range(n):
        nt = nH_by_k[k]
        nd = nD_by_k.get(k, nt)
        l_k = k * m**3 * pol.n
        thr = cor_in_divisor_threshold(nt, nd, m, l_k)
        n2_conds.append(LowerBound("N_divisor", Fraction(thr),
                                   {"k": k, "n_target": nt, "n_D": nd, "l": l_k, "m_H": m}))
    N2 = _solve("N2", n2_conds)

    s_max = max(nH_by_k[k] for k in k_range(n))
    n3_conds: list[Condition] = [LowerBound("N2", Fraction(N2.value), {"N2": N2.value})]
    n3_conds += [_s_dominance(n, s, m, "surface-dominance") for s in range(n + 1, s_max + 1)]
    N3 = _solve("N3", n3_conds)

    n4_conds: list[Condition] = [
        LowerBound("N3", Fraction(N3.value), {"N3": N3.value}),
        LowerBound("b_d-range", Fraction(16 * n * n, 9), {"n": n}),
        LowerBound("epsilon-margin",
                   max(Fraction(18, n) * epsilon(m * d, n) for d in range(1, n + 1)), {"n": n, "m_H": m}),
    ]
    for k in k_range(n):
        n4_conds.append(SqrtCondition("high-degree", Fraction(k), Fraction(2 * m),
                                      m * (N3.value - 1) + Fraction(k * k, 2), {"k": k}))
        n4_conds.append(SqrtCondition("intersection", Fraction(k), Fraction(2 * m),
                                      k * n - 1 + Fraction(k * k, 2), {"k": k}))
    N4 = _solve("N4", n4_conds)

    nh_conds: list[Condition] = [LowerBound("N4", Fraction(N4.value), {"N4": N4.value})]
    for k in k_range(n):
        rhs = k + Fraction(k * k, 2 * n) + Fraction(n * n - n, 8 * m) + Fraction(m * N4.value**2, 2)
        nh_conds.append(SqrtCondition("genus-sum", Fraction(k, n), Fraction(2 * m), rhs, {"k": k}))
    NH = _solve("N_H", nh_conds)
    return {"N2": N2, "N3": N3, "N4": N4, "N_H": NH}


# -- vanishing thresholds --------------------------------------------------------


def gv_degree_threshold_exact(n: int, m: int, N_H: int) -> Fraction:
    return Fraction(n**3 * m**5 - n**2 * m**3, 4) + n * m * (m * m * N_H * N_H - n + 1)


def gv_degree_threshold(n: int, m: int, N_H: int) -> int:
    """Degree threshold for GV vanishing, rounded up when fractional."""
    if min(n, m, N_H) < 1:
        raise ValueError("all arguments must be positive")
    return ceil_rat(gv_degree_threshold_exact(n, m, N_H))


def gv_degree_threshold_report(n: int, m: int, N_H: int) -> dict:
    exact = gv_degree_threshold_exact(n, m, N_H)
    return {"exact": format_rat(exact), "value": ceil_rat(exact), "ceiled": exact.denominator != 1}


def vanishing_bound(d: int, n: int, m: int) -> Fraction:
    """d^2/(2n) + (n m^3 - 4m)/2 * d - eps(m d, n m^2)."""
    return Fraction(d * d, 2 * n) + Fraction(n * m**3 - 4 * m, 2) * d - epsilon(m * d, n * m * m)


def pt_dt_vanish(s: int, d: int, n: int, m: int, N_H: int) -> bool:
    return d >= N_H and s < -vanishing_bound(d, n, m)


def gv_vanish(g: int, d: int, n: int, m: int, N_H: int) -> bool:
    return d >= gv_degree_threshold(n, m, N_H) and g > vanishing_bound(d, n, m) + 1


def cy4_empty(d: int, betaH, n: int, N_H: int) -> bool:
    return d >= N_H and Fraction(betaH) < -cy4_ch3_bound(d, n)


def _linear_term(coef: Fraction, var: str) -> str:
    if coef == 1:
        return var
    if coef.denominator == 1:
        return f"{coef.numerator}*{var}"
    if coef.numerator == 1:
        return f"{var}/{coef.denominator}"
    return f"{coef.numerator}*{var}/{coef.denominator}"


def _join(terms: list[tuple[Fraction, str]]) -> str:
    out = ""
    for coef, var in terms:
        if coef == 0:
            continue
        body = _linear_term(abs(coef), var) if var else format_rat(abs(coef))
        if not out:
            out = ("-" if coef < 0 else "") + body
        else:
            out += (" - " if coef < 0 else " + ") + body
    return out or "0"


def gv_vanish_inequality(n: int, m: int) -> str:
    """Human-readable vanishing condition, e.g. ``g > d^2/10 + d/2 + 1 - eps(d, 5)``."""
    terms = [(Fraction(1, 2 * n), "d^2"), (Fraction(n * m**3 - 4 * m, 2), "d"), (Fraction(1), "")]
    eps_arg = "d" if m == 1 else f"{m}*d"
    return f"g > {_join(terms)} - eps({eps_arg}, {n * m * m})"


def pt_vanish_inequality(n: int, m: int) -> str:
    terms = [(Fraction(1, 2 * n), "d^2"), (Fraction(n * m**3 - 4 * m, 2), "d")]
    eps_arg = "d" if m == 1 else f"{m}*d"
    return f"s < -({_join(terms)} - eps({eps_arg}, {n * m * m}))"
