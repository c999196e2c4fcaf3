"""Exact extended reals: rationals, quadratic surds ``a + b*sqrt(d)`` and +-inf.

Comparison is exact. A surd with two different radicands is compared by
repeated squaring, never by floating point.
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from typing import Union

from .errors import EmptyGap, ParseError

__all__ = [
    "Ordering", "ExtReal", "rat", "surd", "NEG_INF", "POS_INF", "as_ext",
    "compare", "rational_between", "floor_ext", "midpoint", "parse_ext",
]

Number = Union[int, Fraction]


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


_NEG_INF, _RAT, _SURD, _POS_INF = -2, 0, 1, 2


def _squarefree_part(d: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``d == s*s*r`` and ``r`` squarefree."""
    s, r, p = 1, 1, 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        if d % p == 0:
            d //= p
            r *= p
        p += 1
    return s, r * d


class ExtReal:
    """A point of R u {-inf, +inf} with an exact finite description.

    Instances are immutable and canonical, so ``==`` is structural equality
    and agrees with numeric equality.
    """

    __slots__ = ("kind", "a", "b", "d")

    def __init__(self, kind: int, a: Fraction = Fraction(0), b: Fraction = Fraction(0), d: int = 0):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("ExtReal is immutable")

    # -- predicates -----------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.kind == _RAT

    @property
    def is_surd(self) -> bool:
        return self.kind == _SURD

    @property
    def is_finite(self) -> bool:
        return self.kind in (_RAT, _SURD)

    @property
    def is_neg_inf(self) -> bool:
        return self.kind == _NEG_INF

    @property
    def is_pos_inf(self) -> bool:
        return self.kind == _POS_INF

    @property
    def value(self) -> Fraction:
        if self.kind != _RAT:
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- arithmetic needed for endpoint manipulation ----------------------
    def __neg__(self) -> ExtReal:
        if self.kind == _NEG_INF:
            return POS_INF
        if self.kind == _POS_INF:
            return NEG_INF
        return ExtReal(self.kind, -self.a, -self.b, self.d)

    def __add__(self, other: Number) -> ExtReal:
        if isinstance(other, ExtReal):
            if other.kind != _RAT:
                return NotImplemented
            other = other.a
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if not self.is_finite:
            return self
        return ExtReal(self.kind, self.a + other, self.b, self.d)

    __radd__ = __add__

    def __sub__(self, other: Number) -> ExtReal:
        if isinstance(other, ExtReal):
            if other.kind != _RAT:
                return NotImplemented
            other = other.a
        return self + (-Fraction(other))

    def scale(self, k: Number) -> ExtReal:
        """Multiply by a nonzero rational."""
        k = Fraction(k)
        if k == 0:
            raise ValueError("scale factor must be nonzero")
        if not self.is_finite:
            return self if k > 0 else -self
        return ExtReal(self.kind, self.a * k, self.b * k, self.d)

    def affine(self, a: Fraction, b: Fraction) -> ExtReal:
        """``a*self + b`` for rational ``a > 0``."""
        return self.scale(a) + b

    # -- comparison -------------------------------------------------------
    def _key(self):
        return (self.kind, self.a, self.b, self.d)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.kind == _RAT and self.a == other
        if not isinstance(other, ExtReal):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self.kind == _RAT:
            return hash(self.a)
        return hash(self._key())

    def __lt__(self, other) -> bool:
        return compare(self, as_ext(other)) < 0

    def __le__(self, other) -> bool:
        return compare(self, as_ext(other)) <= 0

    def __gt__(self, other) -> bool:
        return compare(self, as_ext(other)) > 0

    def __ge__(self, other) -> bool:
        return compare(self, as_ext(other)) >= 0

    def __float__(self) -> float:
        if self.kind == _NEG_INF:
            return -math.inf
        if self.kind == _POS_INF:
            return math.inf
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self) -> str:
        if self.kind == _NEG_INF:
            return "-inf"
        if self.kind == _POS_INF:
            return "inf"
        if self.kind == _RAT:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.d})"

    def __repr__(self) -> str:
        return f"ExtReal({self})"


NEG_INF = ExtReal(_NEG_INF)
POS_INF = ExtReal(_POS_INF)


def rat(x: Number | str) -> ExtReal:
    return ExtReal(_RAT, Fraction(x))


def surd(a: Number, b: Number, d: int) -> ExtReal:
    """Build ``a + b*sqrt(d)``.

    Square factors of ``d`` are pulled into ``b``; a perfect square ``d``
    yields a rational. ``b == 0`` and ``d < 1`` are rejected so a surd is
    never a disguised rational by accident of input.
    """
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        raise ValueError("surd coefficient b must be nonzero")
    if not isinstance(d, int) or d < 1:
        raise ValueError("surd radicand must be a positive integer")
    s, r = _squarefree_part(d)
    if r == 1:
        return rat(a + b * s)
    return ExtReal(_SURD, a, b * s, r)


def as_ext(x) -> ExtReal:
    if isinstance(x, ExtReal):
        return x
    if isinstance(x, (int, Fraction)):
        return rat(x)
    if isinstance(x, str):
        return parse_ext(x)
    raise TypeError(f"cannot convert {x!r} to ExtReal")


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_surd(p: Fraction, q: Fraction, d: int) -> int:
    """Sign of ``p + q*sqrt(d)`` with ``d`` squarefree > 1."""
    sp, sq = _sgn(p), _sgn(q)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs; p^2 == q^2 d is impossible for irrational sqrt(d)
    return sp if p * p > q * q * d else sq


def _sign_two(p: Fraction, q1: Fraction, d1: int, q2: Fraction, d2: int) -> int:
    """Sign of ``p + q1*sqrt(d1) + q2*sqrt(d2)``; d1 != d2 squarefree > 1."""
    if q1 == 0:
        return _sign_surd(p, q2, d2)
    if q2 == 0:
        return _sign_surd(p, q1, d1)
    # S = q1 sqrt(d1) + q2 sqrt(d2) is nonzero (1, sqrt d1, sqrt d2 independent)
    s1, s2 = _sgn(q1), _sgn(q2)
    if s1 == s2:
        s = s1
    else:
        s = s1 if q1 * q1 * d1 > q2 * q2 * d2 else s2
    sp = _sgn(p)
    if sp == 0 or sp == s:
        return s
    # |p| vs |S|: p^2 - S^2 = (p^2 - q1^2 d1 - q2^2 d2) - 2 q1 q2 sqrt(d1 d2)
    g, r = _squarefree_part(d1 * d2)
    diff = _sign_surd(p * p - q1 * q1 * d1 - q2 * q2 * d2, -2 * q1 * q2 * g, r)
    return sp if diff > 0 else s


def compare(x: ExtReal, y: ExtReal) -> Ordering:
    """Exact three-way comparison in the extended real order."""
    x, y = as_ext(x), as_ext(y)
    if not (x.is_finite and y.is_finite):
        kx = x.kind if not x.is_finite else 0
        ky = y.kind if not y.is_finite else 0
        return Ordering((kx > ky) - (kx < ky))
    p = x.a - y.a
    if x.kind == _RAT and y.kind == _RAT:
        return Ordering(_sgn(p))
    if x.kind == _RAT:
        return Ordering(_sign_surd(p, -y.b, y.d))
    if y.kind == _RAT:
        return Ordering(_sign_surd(p, x.b, x.d))
    if x.d == y.d:
        return Ordering(_sign_surd(p, x.b - y.b, x.d))
    return Ordering(_sign_two(p, x.b, x.d, -y.b, y.d))


def floor_ext(x: ExtReal) -> int:
    """Exact floor of a finite extended real."""
    if not x.is_finite:
        raise ValueError("floor of an infinite value")
    if x.is_rational:
        return math.floor(x.a)
    n = math.floor(float(x))
    while compare(rat(n), x) > 0:
        n -= 1
    while compare(rat(n + 1), x) <= 0:
        n += 1
    return n


def _ceil_ext(x: ExtReal) -> int:
    return -floor_ext(-x)


def midpoint(x: ExtReal, y: ExtReal) -> ExtReal | None:
    """``(x+y)/2`` when representable as an ExtReal, else None."""
    if not (x.is_finite and y.is_finite):
        return None
    if x.is_rational and y.is_rational:
        return rat((x.a + y.a) / 2)
    if x.is_rational or y.is_rational or x.d == y.d:
        d = x.d or y.d
        b = (x.b + y.b) / 2
        a = (x.a + y.a) / 2
        return rat(a) if b == 0 else ExtReal(_SURD, a, b, d)
    return None


def _smallest_integer_between(lo: ExtReal, hi: ExtReal) -> int | None:
    """Integer of least absolute value strictly inside (lo, hi), if any."""
    if compare(lo, rat(0)) < 0 < compare(hi, rat(0)):
        return 0
    if compare(lo, rat(0)) >= 0:
        k = floor_ext(lo) + 1
        return k if compare(rat(k), hi) < 0 else None
    k = _ceil_ext(hi) - 1
    return k if compare(rat(k), lo) > 0 else None


def _advance(p0: int, q0: int, p1: int, q1: int, keep) -> int:
    """Largest k >= 1 with keep((p0 + k p1)/(q0 + k q1)); keep(k=1) holds."""
    lo, hi = 1, 2
    while keep(Fraction(p0 + hi * p1, q0 + hi * q1)):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if keep(Fraction(p0 + mid * p1, q0 + mid * q1)):
            lo = mid
        else:
            hi = mid
    return lo


def rational_between(lo, hi) -> Fraction:
    """The simplest rational strictly between ``lo`` and ``hi``.

    Simplest means least denominator; among integers, least absolute value.
    Found by a Stern-Brocot descent from the unit interval containing the
    gap, with runs of same-direction steps taken in one go.
    """
    lo, hi = as_ext(lo), as_ext(hi)
    if compare(lo, hi) >= 0:
        raise EmptyGap(f"no rational strictly between {lo} and {hi}")
    k = _smallest_integer_between(lo, hi)
    if k is not None:
        return Fraction(k)
    n = floor_ext(lo)
    p0, q0, p1, q1 = n, 1, n + 1, 1
    while True:
        m = Fraction(p0 + p1, q0 + q1)
        if compare(rat(m), lo) <= 0:
            k = _advance(p0, q0, p1, q1, lambda f: compare(rat(f), lo) <= 0)
            p0, q0 = p0 + k * p1, q0 + k * q1
        elif compare(rat(m), hi) >= 0:
            k = _advance(p1, q1, p0, q0, lambda f: compare(rat(f), hi) >= 0)
            p1, q1 = p1 + k * p0, q1 + k * q0
        else:
            return m


_SURD_RE = re.compile(
    r"^(?P<a>.*?)(?P<sign>[+-]?)\s*(?:\(?\s*(?P<b>\d+(?:/\d+)?)\s*\)?\s*\*\s*)?sqrt\(\s*(?P<d>\d+)\s*\)$"
)


def parse_ext(text: str) -> ExtReal:
    """Parse ``p/q``, ``p``, ``a + b*sqrt(d)``, ``-inf`` or ``inf``."""
    s = text.strip()
    if s in ("inf", "+inf", "oo"):
        return POS_INF
    if s in ("-inf", "-oo"):
        return NEG_INF
    try:
        if "sqrt" not in s:
            return rat(Fraction(s.replace(" ", "")))
        m = _SURD_RE.match(s)
        if not m:
            raise ValueError
        a_txt = m.group("a").strip()
        a = Fraction(a_txt.replace(" ", "")) if a_txt else Fraction(0)
        b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
        if m.group("sign") == "-":
            b = -b
        elif not m.group("sign") and a_txt:
            raise ValueError
        return surd(a, b, int(m.group("d")))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse extended real {text!r}") from exc
