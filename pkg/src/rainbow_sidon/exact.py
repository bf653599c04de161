"""Exact rationals and certified rational intervals.

Threshold formulas involve ``log2 n`` and fractional powers of ``n``, which
are irrational in general.  They are carried as closed intervals with
:class:`~fractions.Fraction` endpoints that provably contain the true value.
When a quantity is rational the interval collapses to a point and every
comparison is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

Number = Union[int, Fraction]

DEFAULT_BITS = 256


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x: Number) -> "Interval":
        return cls(Fraction(x), Fraction(x))

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("interval is not a single rational")
        return self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @staticmethod
    def _lift(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval.exact(x)

    def __add__(self, other):
        o = self._lift(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("only integer powers of intervals are supported")
        if e < 0:
            return (self ** -e).reciprocal()
        if self.lo >= 0:
            return Interval(self.lo**e, self.hi**e)
        if self.hi <= 0:
            a, b = abs(self.hi) ** e, abs(self.lo) ** e
            return Interval(a, b) if e % 2 == 0 else Interval(-b, -a)
        m = max(abs(self.lo), abs(self.hi)) ** e
        return Interval(0 if e % 2 == 0 else self.lo**e, m)

    # Three-valued comparisons: None means the intervals overlap.
    def le(self, other) -> bool | None:
        o = self._lift(other)
        if self.hi <= o.lo:
            return True
        if self.lo > o.hi:
            return False
        return None

    def lt(self, other) -> bool | None:
        o = self._lift(other)
        if self.hi < o.lo:
            return True
        if self.lo >= o.hi:
            return False
        return None

    def render(self) -> str:
        if self.is_exact:
            return render_fraction(self.lo)
        return f"[{render_fraction(self.lo)}, {render_fraction(self.hi)}]"

    def decimal(self, digits: int = 12) -> str:
        return to_decimal(self.mid, digits)

    def to_json(self) -> dict:
        if self.is_exact:
            return {"exact": render_fraction(self.lo), "approx": to_decimal(self.lo)}
        return {"lower": to_decimal(self.lo, 20), "upper": to_decimal(self.hi, 20),
                "approx": to_decimal(self.mid)}


def render_fraction(x: Number) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_decimal(x: Number, digits: int = 12) -> str:
    """Decimal rendering of a rational with ``digits`` significant digits."""
    x = Fraction(x)
    if x == 0:
        return "0"
    with mpmath.workdps(digits + 10):
        v = mpmath.mpf(x.numerator) / x.denominator
        return mpmath.nstr(v, digits)


def falling(n: int, k: int) -> int:
    """``n (n-1) ... (n-k+1)``; zero when ``k > n >= 0``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1
    for i in range(k):
        out *= n - i
    return out


def binom_convex(x: Number, k: int) -> Fraction:
    """Binomial coefficient extended to a convex function of real ``x``.

    ``x (x-1) ... (x-k+1) / k!`` for ``x >= k - 1`` and zero below.
    """
    x = Fraction(x)
    if x < k - 1:
        return Fraction(0)
    out = Fraction(1)
    for i in range(k):
        out *= x - i
    return out / math.factorial(k)


def _raw_to_fraction(raw) -> Fraction:
    p, q = mpmath.libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def log2_interval(x: Number, bits: int = DEFAULT_BITS) -> Interval:
    """Certified enclosure of ``log2 x`` for rational ``x > 0``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log2 of a non-positive number")
    for v, sign in ((x, 1), (1 / x, -1)):
        if v.denominator == 1 and v.numerator & (v.numerator - 1) == 0:
            return Interval.exact(sign * (v.numerator.bit_length() - 1))
    iv = mpmath.iv
    saved = iv.prec
    iv.prec = bits
    try:
        val = iv.log(iv.mpf(x.numerator) / iv.mpf(x.denominator)) / iv.log(2)
        a, b = val._mpi_
        return Interval(_raw_to_fraction(a), _raw_to_fraction(b))
    finally:
        iv.prec = saved


def iroot(x: int, q: int) -> int:
    """``floor(x ** (1/q))`` for integer ``x >= 0``."""
    if x < 0 or q < 1:
        raise ValueError("iroot needs x >= 0 and q >= 1")
    if x < 2:
        return x
    r = 1 << -(-x.bit_length() // q)
    while True:
        s = ((q - 1) * r + x // r ** (q - 1)) // q
        if s >= r:
            break
        r = s
    while r**q > x:
        r -= 1
    while (r + 1) ** q <= x:
        r += 1
    return r


def power_interval(base: int, exponent: Fraction, bits: int = DEFAULT_BITS) -> Interval:
    """Certified enclosure of ``base ** exponent`` for integer ``base >= 1``."""
    exponent = Fraction(exponent)
    if base < 1:
        raise ValueError("base must be a positive integer")
    p, q = exponent.numerator, exponent.denominator
    if p < 0:
        return power_interval(base, -exponent, bits).reciprocal()
    x = base**p
    if q == 1:
        return Interval.exact(x)
    root = iroot(x, q)
    if root**q == x:
        return Interval.exact(root)
    scale = 1 << bits
    lo = iroot(x * scale**q, q)
    return Interval(Fraction(lo, scale), Fraction(lo + 1, scale))


def decide(build, bits_schedule=(DEFAULT_BITS, 1024, 4096)):
    """Evaluate a three-valued comparison, refining precision until decided.

    ``build(bits)`` must return ``True``, ``False`` or ``None``.
    """
    result = None
    for bits in bits_schedule:
        result = build(bits)
        if result is not None:
            return result
    return result
