"""Exact arithmetic: rationals and single-radical surds ``p + q*sqrt(m)``.

Rationals are :class:`fractions.Fraction`.  A :class:`Surd` holds one square
root; square factors are pulled out on construction so that ``sqrt(12)``
and ``2*sqrt(3)`` share a radical.  Comparisons never touch floating point.

Sign of ``P + Q*sqrt(m)`` with ``m > 1`` not a perfect square:

    ====== ====== =========================================
    P      Q      sign
    ====== ====== =========================================
    any    0      sign(P)
    0      any    sign(Q)
    > 0    > 0    +1
    < 0    < 0    -1
    > 0    < 0    sign(P**2 - Q**2 * m)   (both sides >= 0)
    < 0    > 0    sign(Q**2 * m - P**2)   (both sides >= 0)
    ====== ====== =========================================

Only the last two rows square anything, and they do so after moving terms so
that both sides are non-negative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import floor, isqrt
from typing import Union

from .errors import MixedRadicals

Rat = Fraction

LESS, EQUAL, GREATER = -1, 0, 1


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rat_cmp(x, y) -> int:
    x, y = as_rat(x), as_rat(y)
    return (x > y) - (x < y)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


_TRIAL_LIMIT = 1000
_SMALL_PRIMES = [q for q in range(2, _TRIAL_LIMIT + 1) if all(q % f for f in range(2, isqrt(q) + 1))]


def _squarefree(m: int) -> tuple[int, int]:
    """Return (s, r) with m = s**2 * r.

    Primes q with q**3 <= m (and q <= 1000) are divided out completely.  What
    is left then has at most two prime factors, so it is either a perfect
    square or square-free, and one ``isqrt`` decides.  Radicands with large
    repeated factors beyond the prime limit may keep them; values with
    different radicals are still reconciled exactly in ``_align``.
    """
    if m < 0:
        raise ValueError("radicand must be non-negative")
    if m in (0, 1):
        return (1, m)
    s, rad, r = 1, 1, m
    for q in _SMALL_PRIMES:
        if q * q * q > r:
            break
        e = 0
        while r % q == 0:
            r //= q
            e += 1
        s *= q ** (e // 2)
        rad *= q ** (e % 2)
    root = isqrt(r)
    if root * root == r:
        return s * root, rad
    return s, rad * r


@dataclass(frozen=True)
class Surd:
    """The real number ``p + q*sqrt(m)`` in canonical form."""

    p: Fraction
    q: Fraction
    m: int

    def __init__(self, p=0, q=0, m=0):
        p, q = as_rat(p), as_rat(q)
        if isinstance(m, Fraction):
            # sqrt(a/b) = sqrt(a*b)/b
            q = q / m.denominator
            m = m.numerator * m.denominator
        s, r = _squarefree(int(m))
        q = q * s
        if r == 1:
            p, q, r = p + q, Fraction(0), 0
        if r == 0 or q == 0:
            q, r = Fraction(0), 0
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "m", r)

    @classmethod
    def sqrt(cls, x) -> "Surd":
        return cls(0, 1, as_rat(x))

    # -- structure ---------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.m == 0

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.p

    def _align(self, other) -> tuple["Surd", "Surd", int]:
        o = to_surd(other)
        if self.m and o.m and self.m != o.m:
            # sqrt(m2) = sqrt(m1*m2)/m1 * sqrt(m1) when m1*m2 is a square
            prod = self.m * o.m
            root = isqrt(prod)
            if root * root != prod:
                raise MixedRadicals(f"radicals sqrt({self.m}) and sqrt({o.m}) cannot be combined")
            o = Surd(o.p, o.q * Fraction(root, self.m), self.m)
        return self, o, self.m or o.m

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        a, b, m = self._align(other)
        return Surd(a.p + b.p, a.q + b.q, m)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.p, -self.q, self.m)

    def __sub__(self, other):
        return self + (-to_surd(other))

    def __rsub__(self, other):
        return to_surd(other) - self

    def __mul__(self, other):
        a, b, m = self._align(other)
        return Surd(a.p * b.p + a.q * b.q * m, a.p * b.q + a.q * b.p, m)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        norm = self.p * self.p - self.q * self.q * self.m
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        return Surd(self.p / norm, -self.q / norm, self.m)

    def __truediv__(self, other):
        return self * to_surd(other).inverse()

    def __rtruediv__(self, other):
        return to_surd(other) * self.inverse()

    # -- order -------------------------------------------------------------
    def sign(self) -> int:
        sp, sq = _sign(self.p), _sign(self.q)
        if sq == 0 or self.m == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        lhs, rhs = self.p * self.p, self.q * self.q * self.m
        return sp * _sign(lhs - rhs)

    def __eq__(self, other):
        try:
            return surd_cmp(self, other) == EQUAL
        except (TypeError, MixedRadicals):
            return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.p)
        return hash((self.p, self.q * self.q * self.m, self.q > 0))

    def __lt__(self, other):
        return surd_cmp(self, other) < 0

    def __le__(self, other):
        return surd_cmp(self, other) <= 0

    def __gt__(self, other):
        return surd_cmp(self, other) > 0

    def __ge__(self, other):
        return surd_cmp(self, other) >= 0

    def __float__(self):
        # Display only.
        return float(self.p) + float(self.q) * self.m ** 0.5

    def __str__(self):
        return format_surd(self)

    def __repr__(self):
        return f"Surd({format_surd(self)!r})"


Number = Union[int, Fraction, Surd]


def to_surd(x) -> Surd:
    if isinstance(x, Surd):
        return x
    return Surd(as_rat(x), 0, 0)


def surd_cmp(x, y) -> int:
    """Exact three-way comparison of two values sharing at most one radical."""
    return (to_surd(x) - to_surd(y)).sign()


def floor_of_surd(x) -> int:
    x = to_surd(x)
    if x.is_rational:
        return floor(x.p)
    # floor(q*sqrt(m)) from an integer square root, then fix up with exact compares.
    t = x.q * x.q * x.m  # (q*sqrt(m))**2 as a rational
    root = isqrt(t.numerator * t.denominator) // t.denominator
    guess = floor(x.p) + (root if x.q > 0 else -root - 1)
    while surd_cmp(x, guess) < 0:
        guess -= 1
    while surd_cmp(x, guess + 1) >= 0:
        guess += 1
    return guess


def ceil_of_surd(x) -> int:
    return -floor_of_surd(-to_surd(x))


# -- serialization ------------------------------------------------------------

_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal string exactly."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    if _DECIMAL_RE.match(s):
        return Fraction(Decimal(s))
    raise ValueError(f"not a rational: {text!r}")


def format_rat(x) -> str:
    x = as_rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_to_decimal(x) -> str | None:
    """Exact decimal expansion, or None when the denominator has other primes than 2 and 5."""
    x = as_rat(x)
    den, twos, fives = x.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    places = max(twos, fives)
    scaled = x * 10**places
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    sign = "-" if x < 0 else ""
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def format_surd(x) -> str:
    x = to_surd(x)
    if x.is_rational:
        return format_rat(x.p)
    return f"{format_rat(x.p)}+{format_rat(x.q)}*sqrt({x.m})"


_SURD_RE = re.compile(r"^\s*([^*]+?)\s*\+\s*([^*]+?)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*$")


def parse_surd(text: str) -> Surd:
    """Parse the ``"p+q*sqrt(m)"`` format produced by :func:`format_surd`."""
    match = _SURD_RE.match(text)
    if match:
        return Surd(parse_rat(match[1]), parse_rat(match[2]), int(match[3]))
    return Surd(parse_rat(text), 0, 0)
