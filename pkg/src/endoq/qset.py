"""Finitely presented subsets of Q: intervals with extended-real endpoints.

An interval ``(lo, hi)`` always denotes a set of *rationals*; the endpoints
may be irrational or infinite. A closed flag is only meaningful at a finite
rational endpoint and is dropped everywhere else.
"""
from __future__ import annotations

import functools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EmptyInterval, ParseError
from .exact import (NEG_INF, POS_INF, ExtReal, as_ext, compare, parse_ext,
                    rat, rational_between)

__all__ = [
    "QInterval", "QSet", "interval", "make_interval", "point", "normalize",
    "member", "complement", "maximal_intervals", "is_closed_in_Q",
    "order_type_signature", "reduce_signature", "parse_interval", "parse_qset",
    "FULL", "EMPTY", "random_qset",
]


@dataclass(frozen=True)
class QInterval:
    lo: ExtReal
    lo_closed: bool
    hi: ExtReal
    hi_closed: bool

    def __post_init__(self):
        lo, hi = as_ext(self.lo), as_ext(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_closed", bool(self.lo_closed) and lo.is_rational)
        object.__setattr__(self, "hi_closed", bool(self.hi_closed) and hi.is_rational)
        c = compare(lo, hi)
        if c > 0 or (c == 0 and not (self.lo_closed and self.hi_closed)):
            raise EmptyInterval(f"empty interval {self._text()}")

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    @property
    def has_min(self) -> bool:
        return self.lo_closed

    @property
    def has_max(self) -> bool:
        return self.hi_closed

    def contains(self, q) -> bool:
        x = as_ext(q)
        c1, c2 = compare(self.lo, x), compare(x, self.hi)
        return (c1 < 0 or (c1 == 0 and self.lo_closed)) and (c2 < 0 or (c2 == 0 and self.hi_closed))

    def center(self) -> Fraction:
        """A canonical rational member."""
        if self.is_singleton:
            return self.lo.value
        return rational_between(self.lo, self.hi)

    def intersect(self, other: QInterval) -> QInterval | None:
        c = compare(self.lo, other.lo)
        if c > 0:
            lo, lc = self.lo, self.lo_closed
        elif c < 0:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        c = compare(self.hi, other.hi)
        if c < 0:
            hi, hc = self.hi, self.hi_closed
        elif c > 0:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return make_interval(lo, hi, lc, hc)

    def _text(self) -> str:
        if self.lo == self.hi and self.lo_closed and self.hi_closed:
            return "{" + str(self.lo) + "}"
        return ("[" if self.lo_closed else "(") + f"{self.lo},{self.hi}" + ("]" if self.hi_closed else ")")

    __str__ = _text

    def __repr__(self) -> str:
        return f"QInterval({self._text()})"


def make_interval(lo, hi, lo_closed: bool = False, hi_closed: bool = False) -> QInterval | None:
    """Like :class:`QInterval` but returns None for an empty set."""
    try:
        return QInterval(as_ext(lo), lo_closed, as_ext(hi), hi_closed)
    except EmptyInterval:
        return None


def interval(text_or_lo, hi=None, lo_closed: bool = False, hi_closed: bool = False) -> QInterval:
    if hi is None:
        return parse_interval(text_or_lo)
    return QInterval(as_ext(text_or_lo), lo_closed, as_ext(hi), hi_closed)


def point(q) -> QInterval:
    x = rat(q) if not isinstance(q, ExtReal) else q
    return QInterval(x, True, x, True)


def _joinable(a: QInterval, b: QInterval) -> bool:
    """Whether ``a`` (with ``a.lo <= b.lo``) and ``b`` form one interval of Q."""
    c = compare(a.hi, b.lo)
    if c > 0:
        return True
    if c < 0:
        return False
    return a.hi_closed or b.lo_closed or not a.hi.is_rational


def _hull(a: QInterval, b: QInterval) -> QInterval:
    c = compare(a.hi, b.hi)
    if c > 0:
        hi, hc = a.hi, a.hi_closed
    elif c < 0:
        hi, hc = b.hi, b.hi_closed
    else:
        hi, hc = a.hi, a.hi_closed or b.hi_closed
    c = compare(a.lo, b.lo)
    lc = a.lo_closed if c < 0 else (b.lo_closed if c > 0 else a.lo_closed or b.lo_closed)
    return QInterval(a.lo if c <= 0 else b.lo, lc, hi, hc)


_lo_key = functools.cmp_to_key(lambda x, y: compare(x.lo, y.lo) or (y.lo_closed - x.lo_closed))


class QSet:
    """A canonical finite union of pairwise separated intervals of Q."""

    __slots__ = ("components",)

    def __init__(self, raw: Iterable[QInterval | None] = ()):
        ivs = sorted((iv for iv in raw if iv is not None), key=_lo_key)
        out: list[QInterval] = []
        for iv in ivs:
            if out and _joinable(out[-1], iv):
                out[-1] = _hull(out[-1], iv)
            else:
                out.append(iv)
        self.components: tuple[QInterval, ...] = tuple(out)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other) -> bool:
        return isinstance(other, QSet) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __contains__(self, q) -> bool:
        return member(self, q)

    def __str__(self) -> str:
        if not self.components:
            return "{}"
        return " u ".join(str(c) for c in self.components)

    def __repr__(self) -> str:
        return f"QSet({self})"

    @property
    def is_finite(self) -> bool:
        return all(c.is_singleton for c in self.components)

    def union(self, other: QSet) -> QSet:
        return QSet(self.components + other.components)

    def intersect(self, other: QSet) -> QSet:
        return QSet(a.intersect(b) for a in self.components for b in other.components)

    def max(self) -> Fraction | None:
        if self.components and self.components[-1].hi_closed:
            return self.components[-1].hi.value
        return None

    def min(self) -> Fraction | None:
        if self.components and self.components[0].lo_closed:
            return self.components[0].lo.value
        return None


FULL = QSet([QInterval(NEG_INF, False, POS_INF, False)])
EMPTY = QSet()


def normalize(raw: Sequence[QInterval | None]) -> QSet:
    """Sort, merge and canonicalize a list of intervals."""
    return QSet(raw)


def member(X: QSet, q) -> bool:
    return any(c.contains(q) for c in X.components)


def complement(X: QSet) -> QSet:
    gaps = []
    lo, lc = NEG_INF, False
    for c in X.components:
        gaps.append(make_interval(lo, c.lo, lc, not c.lo_closed))
        lo, lc = c.hi, not c.hi_closed
    gaps.append(make_interval(lo, POS_INF, lc, False))
    return QSet(gaps)


def maximal_intervals(A: QSet) -> list[QInterval]:
    """The classes of the convexity relation on A, in increasing order."""
    return list(A.components)


def is_closed_in_Q(I: QInterval) -> bool:
    """Whether I equals ``{x in Q : p <= x <= q}`` for some extended reals p, q."""
    if I is None:
        raise EmptyInterval("empty interval has no closedness")
    lo_ok = I.lo_closed or not I.lo.is_rational
    hi_ok = I.hi_closed or not I.hi.is_rational
    return lo_ok and hi_ok


# --- order-type signatures ------------------------------------------------

def reduce_signature(word: str, order: Sequence[int] | None = None) -> str:
    """Rewrite ``DD -> D`` and ``DPD -> D`` to normal form.

    ``order`` optionally picks which redex to contract at each step (index
    into the list of current redexes, taken modulo its length); the result is
    the same for every choice.
    """
    step = 0
    while True:
        redexes = []
        for i in range(len(word)):
            if word.startswith("DD", i):
                redexes.append((i, 2))
            if word.startswith("DPD", i):
                redexes.append((i, 3))
        if not redexes:
            return word
        pick = 0 if order is None else order[step % len(order)] % len(redexes)
        i, n = redexes[pick]
        word = word[:i] + "D" + word[i + n:]
        step += 1


def _atoms(X: QSet) -> str:
    out = []
    for c in X.components:
        if c.is_singleton:
            out.append("P")
            continue
        if c.lo_closed:
            out.append("P")
        out.append("D")
        if c.hi_closed:
            out.append("P")
    return "".join(out)


def order_type_signature(X: QSet) -> str:
    """Normal-form word over {P, D}; equal words iff order-isomorphic sets."""
    out: list[str] = []
    for ch in _atoms(X):
        out.append(ch)
        while True:
            if out[-2:] == ["D", "D"]:
                del out[-1]
            elif out[-3:] == ["D", "P", "D"]:
                del out[-2:]
            else:
                break
    return "".join(out)


# --- text grammar ------------------------------------------------------------

_IV_RE = re.compile(r"^\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*$")


def parse_interval(text: str) -> QInterval:
    s = text.strip()
    if s.startswith("{") and s.endswith("}"):
        body = s[1:-1].strip()
        x = parse_ext(body)
        if not x.is_rational:
            raise ParseError(f"singleton must be rational: {text!r}")
        return point(x)
    m = _IV_RE.match(s)
    if not m:
        raise ParseError(f"cannot parse interval {text!r}")
    iv = make_interval(parse_ext(m.group(2)), parse_ext(m.group(3)),
                       m.group(1) == "[", m.group(4) == "]")
    if iv is None:
        raise ParseError(f"empty interval {text!r}")
    return iv


def parse_qset(text: str) -> QSet:
    s = text.strip()
    if s in ("{}", "empty", ""):
        return EMPTY
    if s in ("Q", "QQ"):
        return FULL
    return QSet(parse_interval(part) for part in re.split(r"\s+u\s+", s))


def _random_endpoint(rng: random.Random) -> ExtReal:
    kind = rng.randrange(5)
    if kind == 0:
        return rat(rng.randint(-4, 4))
    if kind == 1:
        return rat(Fraction(rng.randint(-8, 8), 2))
    if kind == 2:
        return parse_ext("sqrt(2)") + rng.randint(-3, 2)
    if kind == 3:
        return parse_ext("sqrt(3)") + rng.randint(-3, 2)
    return parse_ext("1/2*sqrt(2)") + Fraction(rng.randint(-6, 6), 2)


def random_qset(rng: random.Random, max_components: int = 4) -> QSet:
    """A random finite union of intervals with mixed rational/surd endpoints."""
    parts = []
    for _ in range(rng.randint(0, max_components)):
        if rng.random() < 0.2:
            parts.append(point(Fraction(rng.randint(-8, 8), rng.choice((1, 2)))))
            continue
        lo = NEG_INF if rng.random() < 0.15 else _random_endpoint(rng)
        hi = POS_INF if rng.random() < 0.15 else _random_endpoint(rng)
        if compare(lo, hi) > 0:
            lo, hi = hi, lo
        parts.append(make_interval(lo, hi, rng.random() < 0.5, rng.random() < 0.5))
    return QSet(parts)
