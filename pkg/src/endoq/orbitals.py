"""Orbitals of automorphisms of Q.

For an automorphism the orbital of a moved point x is the largest interval
around x without fixed points; iterates of x run through it in one
direction. Fixed points are orbitals of their own.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .endo import (Affine, CanonIso, Endo, Identity, apply, compose, equal,
                   invert)
from .errors import (IsoFixedSetUnsupported, NotAutomorphism, NotBijective,
                     NotCommuting)
from .qset import QInterval, QSet, complement, point

__all__ = ["Sign", "Orbital", "fixed_set", "orbital", "orbital_partition",
           "check_conjugation", "check_commuting_preserves"]


class Sign(Enum):
    UP = "up"
    DOWN = "down"
    FIXED = "fixed"


@dataclass(frozen=True)
class Orbital:
    support: QInterval
    sign: Sign
    anchor: Fraction

    def __str__(self) -> str:
        if self.sign is Sign.FIXED:
            return f"{self.support} fixed"
        return f"{self.support} {self.sign.value}"


def _require_automorphism(f: Endo) -> Endo:
    try:
        return invert(f)
    except NotBijective as exc:
        raise NotAutomorphism(str(exc)) from exc


def fixed_set(f: Endo) -> QSet:
    """All rational fixed points of the automorphism f."""
    _require_automorphism(f)
    parts = []
    for dom, m in f.pieces:
        if isinstance(m, Identity):
            parts.append(dom)
        elif isinstance(m, Affine):
            if m.a == 1:
                continue
            x = m.b / (1 - m.a)
            if dom.contains(x):
                parts.append(point(x))
        elif isinstance(m, CanonIso) and (m.src.hi <= m.dst.lo or m.dst.hi <= m.src.lo):
            # disjoint source and target: only a shared endpoint can be fixed
            for e in (dom.lo, dom.hi):
                if e.is_rational and dom.contains(e) and m.ext(e) == e:
                    parts.append(point(e))
        else:
            raise IsoFixedSetUnsupported(f"cannot decide the fixed points of {m} on {dom}")
    return QSet(parts)


def orbital(f: Endo, x) -> Orbital:
    x = Fraction(x)
    F = fixed_set(f)
    y = apply(f, x)
    if y == x:
        return Orbital(point(x), Sign.FIXED, x)
    support = next(c for c in complement(F).components if c.contains(x))
    return Orbital(support, Sign.UP if y > x else Sign.DOWN, x)


def orbital_partition(f: Endo) -> tuple[list[Orbital], QSet]:
    """The infinite orbitals in increasing order, and the fixed set."""
    F = fixed_set(f)
    out = []
    for c in complement(F).components:
        a = c.center()
        out.append(Orbital(c, Sign.UP if apply(f, a) > a else Sign.DOWN, a))
    return out, F


def _map_interval(g: Endo, iv: QInterval) -> QInterval:
    """Image of an interval under an automorphism, via endpoint images."""
    lo = g.piece_at(iv.lo.value).map.ext(iv.lo) if iv.lo.is_rational else _ext_at(g, iv.lo)
    hi = g.piece_at(iv.hi.value).map.ext(iv.hi) if iv.hi.is_rational else _ext_at(g, iv.hi)
    return QInterval(lo, iv.lo_closed, hi, iv.hi_closed)


def _ext_at(g: Endo, x):
    """Monotone extension of g to an irrational or infinite point."""
    if not x.is_finite:
        return x
    for dom, m in g.pieces:
        if dom.lo < x < dom.hi:
            return m.ext(x)
        if x == dom.hi:
            return m.ext(x)
    raise ValueError(f"{x} is outside every piece")


def check_conjugation(f: Endo, g: Endo, x) -> bool:
    """U_f(x) g equals U_{g^-1 f g}(x g)."""
    x = Fraction(x)
    g_inv = _require_automorphism(g)
    left = _map_interval(g, orbital(f, x).support)
    conj = compose(compose(g_inv, f), g)
    right = orbital(conj, apply(g, x)).support
    return left == right


def check_commuting_preserves(f: Endo, g: Endo) -> bool:
    """For commuting f, g: every infinite orbital of f is mapped onto itself by g."""
    _require_automorphism(g)
    verdict = equal(compose(f, g), compose(g, f))
    if verdict.value is not True:
        raise NotCommuting(f"maps do not commute ({verdict})")
    orbs, _ = orbital_partition(f)
    return all(_map_interval(g, o.support) == o.support for o in orbs)
