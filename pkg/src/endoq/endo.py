"""Finitely-piecewise order-preserving self-maps of Q.

Maps act on the right: ``compose(f, g)`` is "first f, then g", so
``apply(compose(f, g), q) == apply(g, apply(f, q))``.

Each piece carries a map that is either constant or a strictly increasing
map with rational coefficients on every affine stretch. Injective piece maps
extend monotonically to irrational and infinite points, which is how images
and preimages of intervals are transported exactly.
"""
from __future__ import annotations

import functools
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import NotBijective, NotOrderPreserving, ParseError, TypeMismatch
from .exact import (NEG_INF, POS_INF, ExtReal, as_ext, compare, parse_ext, rat,
                    rational_between)
from .qset import (FULL, QInterval, QSet, make_interval, parse_interval, point)

__all__ = [
    "Identity", "Const", "Affine", "CanonIso", "IsoChain", "PieceMap", "Piece",
    "Endo", "Tristate", "TRUE", "FALSE", "canon_iso", "apply", "compose",
    "image", "kernel_classes", "preimage", "is_idempotent", "invert", "equal",
    "probe_points", "parse_endo",
]


# --- canonical rung isomorphisms ----------------------------------------------

class _Rungs:
    """Anchor sequence of an interval: center, then simplest-rational steps
    toward each endpoint. Anchors depend only on the interval."""

    def __init__(self, iv: QInterval):
        self.iv = iv
        c = iv.center()
        self.center = c
        self.right = [c]
        self.left = [c]
        self._lock = threading.Lock()

    def right_anchor(self, k: int) -> Fraction:
        if k >= len(self.right):
            with self._lock:
                while k >= len(self.right):
                    self.right.append(rational_between(self.right[-1], self.iv.hi))
        return self.right[k]

    def left_anchor(self, k: int) -> Fraction:
        if k >= len(self.left):
            with self._lock:
                while k >= len(self.left):
                    self.left.append(rational_between(self.iv.lo, self.left[-1]))
        return self.left[k]

    def rung(self, side: int, k: int) -> tuple[Fraction, Fraction]:
        if side > 0:
            return self.right_anchor(k), self.right_anchor(k + 1)
        return self.left_anchor(k + 1), self.left_anchor(k)

    def locate(self, x: ExtReal) -> tuple[int, int]:
        """Rung ``(side, k)`` whose closed span contains interior point x."""
        if compare(x, rat(self.center)) >= 0:
            k = 0
            while compare(rat(self.right_anchor(k + 1)), x) < 0:
                k += 1
            return 1, k
        k = 0
        while compare(rat(self.left_anchor(k + 1)), x) > 0:
            k += 1
        return -1, k


@functools.lru_cache(maxsize=None)
def _rungs(iv: QInterval) -> _Rungs:
    return _Rungs(iv)


def _iso_ext(src: QInterval, dst: QInterval, x: ExtReal) -> ExtReal:
    if src.is_singleton:
        return dst.lo
    c_lo, c_hi = compare(x, src.lo), compare(x, src.hi)
    if c_lo < 0 or c_hi > 0:
        raise ValueError(f"{x} outside {src}")
    if c_lo == 0:
        return dst.lo
    if c_hi == 0:
        return dst.hi
    rs, rd = _rungs(src), _rungs(dst)
    side, k = rs.locate(x)
    a0, a1 = rs.rung(side, k)
    b0, b1 = rd.rung(side, k)
    slope = (b1 - b0) / (a1 - a0)
    return x.affine(slope, b0 - slope * a0)


# --- piece maps -------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    injective = True

    def __call__(self, q: Fraction) -> Fraction:
        return q

    def ext(self, x: ExtReal) -> ExtReal:
        return x

    inv_ext = ext

    def inverse(self) -> Identity:
        return self

    def links(self) -> tuple:
        return ()

    def __str__(self) -> str:
        return "id"


@dataclass(frozen=True)
class Const:
    c: Fraction
    injective = False

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))

    def __call__(self, q: Fraction) -> Fraction:
        return self.c

    def ext(self, x: ExtReal) -> ExtReal:
        return rat(self.c)

    def __str__(self) -> str:
        return f"const {self.c}"


@dataclass(frozen=True)
class Affine:
    a: Fraction
    b: Fraction
    injective = True

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a <= 0:
            raise NotOrderPreserving("affine slope must be positive")

    def __call__(self, q: Fraction) -> Fraction:
        return self.a * q + self.b

    def ext(self, x: ExtReal) -> ExtReal:
        return x.affine(self.a, self.b)

    def inv_ext(self, y: ExtReal) -> ExtReal:
        return self.inverse().ext(y)

    def inverse(self) -> Affine:
        return Affine(1 / self.a, -self.b / self.a)

    def links(self) -> tuple:
        return (self,)

    def __str__(self) -> str:
        return f"affine {self.a} {self.b}"


@dataclass(frozen=True)
class CanonIso:
    src: QInterval
    dst: QInterval
    injective = True

    def __call__(self, q: Fraction) -> Fraction:
        return _iso_ext(self.src, self.dst, rat(q)).value

    def ext(self, x: ExtReal) -> ExtReal:
        return _iso_ext(self.src, self.dst, x)

    def inv_ext(self, y: ExtReal) -> ExtReal:
        return _iso_ext(self.dst, self.src, y)

    def inverse(self) -> CanonIso:
        return CanonIso(self.dst, self.src)

    def links(self) -> tuple:
        return (self,)

    def __str__(self) -> str:
        return f"iso {self.src} -> {self.dst}"


@dataclass(frozen=True)
class IsoChain:
    chain: tuple
    injective = True

    def __call__(self, q: Fraction) -> Fraction:
        for link in self.chain:
            q = link(q)
        return q

    def ext(self, x: ExtReal) -> ExtReal:
        for link in self.chain:
            x = link.ext(x)
        return x

    def inv_ext(self, y: ExtReal) -> ExtReal:
        for link in reversed(self.chain):
            y = link.inv_ext(y)
        return y

    def inverse(self) -> IsoChain:
        return IsoChain(tuple(link.inverse() for link in reversed(self.chain)))

    def links(self) -> tuple:
        return self.chain

    def __str__(self) -> str:
        return "chain [" + " then ".join(str(link) for link in self.chain) + "]"


PieceMap = Union[Identity, Const, Affine, CanonIso, IsoChain]


def _fold_links(links: Sequence) -> PieceMap:
    """Collapse a chain: affine runs multiply out, iso(X,Y) then iso(Y,Z)
    is iso(X,Z) rung by rung, iso(X,X) and affine 1 0 vanish."""
    out: list = []
    for link in links:
        out.append(link)
        while len(out) >= 2:
            a, b = out[-2], out[-1]
            if isinstance(a, Affine) and isinstance(b, Affine):
                merged = [Affine(a.a * b.a, b.a * a.b + b.b)]
            elif isinstance(a, CanonIso) and isinstance(b, CanonIso) and a.dst == b.src:
                merged = [CanonIso(a.src, b.dst)]
            else:
                break
            out[-2:] = merged
        while out and (
            (isinstance(out[-1], Affine) and out[-1].a == 1 and out[-1].b == 0)
            or (isinstance(out[-1], CanonIso) and out[-1].src == out[-1].dst)
        ):
            out.pop()
    if not out:
        return Identity()
    if len(out) == 1:
        return out[0]
    return IsoChain(tuple(out))


def _simplify(m: PieceMap, dom: QInterval) -> PieceMap:
    if dom.is_singleton:
        return Const(m.ext(dom.lo).value)
    if isinstance(m, Const):
        return m
    return _fold_links(m.links())


def _then(m1: PieceMap, m2: PieceMap) -> PieceMap:
    """Map-level composition: m1 first, then m2."""
    if isinstance(m2, Const):
        return m2
    if isinstance(m1, Const):
        return Const(m2(m1.c))
    return _fold_links(m1.links() + m2.links())


def canon_iso(I: QInterval, J: QInterval) -> PieceMap:
    """The canonical order-isomorphism from I onto J (rung by rung)."""
    if I.has_min != J.has_min or I.has_max != J.has_max:
        raise TypeMismatch(f"{I} and {J} have different endpoint types")
    if I.is_singleton != J.is_singleton:
        raise TypeMismatch(f"{I} and {J} are not both singletons")
    if I == J:
        return Identity()
    if I.is_singleton:
        return Affine(1, J.lo.value - I.lo.value)
    return CanonIso(I, J)


# --- three-valued verdicts ---------------------------------------------------

@dataclass(frozen=True)
class Tristate:
    """``value`` is True, False, or None (undecided after ``depth`` probes)."""

    value: bool | None
    depth: int = 0
    witness: Fraction | None = None

    @property
    def decided(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        if self.value is None:
            return f"Undecided({self.depth})"
        return str(self.value)


TRUE = Tristate(True)
FALSE = Tristate(False)


# --- endomorphisms ------------------------------------------------------------

class Piece(NamedTuple):
    domain: QInterval
    map: PieceMap


def _join(a: QInterval, b: QInterval) -> QInterval:
    return QInterval(a.lo, a.lo_closed, b.hi, b.hi_closed)


def _check_partition(pieces: Sequence[Piece]) -> None:
    if not pieces:
        raise NotOrderPreserving("an endomorphism needs at least one piece")
    if not pieces[0].domain.lo.is_neg_inf or not pieces[-1].domain.hi.is_pos_inf:
        raise NotOrderPreserving("piece domains do not cover Q")
    for p, q in zip(pieces, pieces[1:]):
        d1, d2 = p.domain, q.domain
        if d1.hi != d2.lo or not d1.hi.is_finite:
            raise NotOrderPreserving(f"domains {d1} and {d2} are not adjacent")
        if d1.hi.is_rational and d1.hi_closed == d2.lo_closed:
            raise NotOrderPreserving(f"domains {d1} and {d2} overlap or leave a gap")


def _check_monotone(pieces: Sequence[Piece]) -> None:
    for p, q in zip(pieces, pieces[1:]):
        if compare(p.map.ext(p.domain.hi), q.map.ext(q.domain.lo)) > 0:
            raise NotOrderPreserving(f"map decreases across {p.domain.hi}")


def _move_boundaries(pieces: list[Piece]) -> bool:
    """Hand rational boundary points from a constant piece to an adjacent
    injective piece that takes the same value there."""
    for i in range(len(pieces) - 1):
        a, b = pieces[i], pieces[i + 1]
        bd = a.domain.hi
        if not bd.is_rational:
            continue
        if a.domain.hi_closed and isinstance(a.map, Const) and b.map.injective \
                and b.map.ext(bd) == a.map.c:
            rest = make_interval(a.domain.lo, bd, a.domain.lo_closed, False)
            new_b = Piece(QInterval(bd, True, b.domain.hi, b.domain.hi_closed), b.map)
            pieces[i:i + 2] = ([Piece(rest, a.map)] if rest else []) + [new_b]
            return True
        if b.domain.lo_closed and isinstance(b.map, Const) and a.map.injective \
                and a.map.ext(bd) == b.map.c:
            rest = make_interval(bd, b.domain.hi, False, b.domain.hi_closed)
            new_a = Piece(QInterval(a.domain.lo, a.domain.lo_closed, bd, True), a.map)
            pieces[i:i + 2] = [new_a] + ([Piece(rest, b.map)] if rest else [])
            return True
    return False


def _normalize(raw: Iterable) -> tuple[Piece, ...]:
    pieces = [Piece(d, m) for d, m in raw]
    _check_partition(pieces)
    for d, m in pieces:
        if isinstance(m, CanonIso) and (compare(d.lo, m.src.lo) < 0 or compare(d.hi, m.src.hi) > 0):
            raise NotOrderPreserving(f"piece domain {d} exceeds iso source {m.src}")
    _check_monotone(pieces)
    pieces = [Piece(d, _simplify(m, d)) for d, m in pieces]
    while True:
        merged: list[Piece] = []
        for p in pieces:
            if merged and merged[-1].map == p.map:
                merged[-1] = Piece(_join(merged[-1].domain, p.domain), p.map)
            else:
                merged.append(p)
        pieces = merged
        if not _move_boundaries(pieces):
            break
    return tuple(pieces)


class Endo:
    """An order-preserving map Q -> Q given by finitely many pieces.

    Construction normalizes: adjacent pieces with equal maps merge, boundary
    points of a constant run that an injective neighbour reaches continuously
    go to that neighbour, and anything non-monotone is rejected.
    """

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable):
        self.pieces: tuple[Piece, ...] = _normalize(pieces)

    @classmethod
    def identity(cls) -> Endo:
        return cls([(FULL.components[0], Identity())])

    @classmethod
    def const(cls, c) -> Endo:
        return cls([(FULL.components[0], Const(Fraction(c)))])

    @classmethod
    def affine(cls, a, b) -> Endo:
        return cls([(FULL.components[0], Affine(a, b))])

    def __call__(self, q) -> Fraction:
        return apply(self, q)

    def __eq__(self, other) -> bool:
        return isinstance(other, Endo) and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash(self.pieces)

    def __str__(self) -> str:
        return "\n".join(f"piece on {p.domain}: {p.map}" for p in self.pieces)

    def __repr__(self) -> str:
        return "Endo(" + "; ".join(f"{p.domain}: {p.map}" for p in self.pieces) + ")"

    def piece_at(self, q) -> Piece:
        x = as_ext(q)
        lo, hi = 0, len(self.pieces) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            d = self.pieces[mid].domain
            c = compare(x, d.hi)
            if c < 0 or (c == 0 and d.hi_closed):
                hi = mid
            else:
                lo = mid + 1
        return self.pieces[lo]


def apply(f: Endo, q) -> Fraction:
    q = Fraction(q)
    return f.piece_at(q).map(q)


def _piece_image(p: Piece) -> QInterval:
    if isinstance(p.map, Const):
        return point(p.map.c)
    return QInterval(p.map.ext(p.domain.lo), p.domain.lo_closed,
                     p.map.ext(p.domain.hi), p.domain.hi_closed)


def image(f: Endo) -> QSet:
    return QSet(_piece_image(p) for p in f.pieces)


def _pull_back(p: Piece, target: QInterval) -> QInterval | None:
    """Points of ``p.domain`` that ``p.map`` (injective) sends into target."""
    img = _piece_image(p)
    x = img.intersect(target)
    if x is None:
        return None
    if x.lo == img.lo and x.lo_closed == img.lo_closed:
        lo, lc = p.domain.lo, p.domain.lo_closed
    else:
        lo, lc = p.map.inv_ext(x.lo), x.lo_closed
    if x.hi == img.hi and x.hi_closed == img.hi_closed:
        hi, hc = p.domain.hi, p.domain.hi_closed
    else:
        hi, hc = p.map.inv_ext(x.hi), x.hi_closed
    return make_interval(lo, hi, lc, hc)


def compose(f: Endo, g: Endo) -> Endo:
    """First f, then g."""
    out: list[tuple[QInterval, PieceMap]] = []
    for p in f.pieces:
        if isinstance(p.map, Const):
            out.append((p.domain, Const(apply(g, p.map.c))))
            continue
        for gp in g.pieces:
            dom = _pull_back(p, gp.domain)
            if dom is not None:
                out.append((dom, _then(p.map, gp.map)))
    return Endo(out)


def preimage(f: Endo, q) -> QInterval | None:
    """The kernel class ``q f^-1`` as an interval (None when q is not an image value)."""
    q = Fraction(q)
    parts = []
    for p in f.pieces:
        if isinstance(p.map, Const):
            if p.map.c == q:
                parts.append(p.domain)
        else:
            x = p.map.inv_ext(rat(q)) if _piece_image(p).contains(q) else None
            if x is not None and x.is_rational and p.domain.contains(x):
                parts.append(point(x))
    s = QSet(parts)
    return s.components[0] if s else None


def kernel_classes(f: Endo) -> list[tuple[Fraction, QInterval]]:
    """Kernel classes with more than one element, as ``(value, class)``."""
    out = []
    for i, p in enumerate(f.pieces):
        if not isinstance(p.map, Const):
            continue
        cls = preimage(f, p.map.c)
        if cls is not None and not cls.is_singleton and (not out or out[-1][0] != p.map.c):
            out.append((p.map.c, cls))
    return out


def probe_points(iv: QInterval, depth: int) -> list[Fraction]:
    """Canonical rational probes inside ``iv``: center, anchors, endpoints."""
    if iv.is_singleton:
        return [iv.lo.value]
    r = _rungs(iv)
    pts = [r.center]
    for k in range(1, depth + 1):
        pts.append(r.right_anchor(k))
        pts.append(r.left_anchor(k))
        # a non-anchor point in each rung too, so rung-affine maps are probed off their knots
        a0, a1 = r.rung(1, k - 1)
        pts.append(rational_between(a0, a1))
    if iv.lo_closed:
        pts.append(iv.lo.value)
    if iv.hi_closed:
        pts.append(iv.hi.value)
    return pts


DEFAULT_DEPTH = 10


def is_idempotent(f: Endo, depth: int = DEFAULT_DEPTH) -> Tristate:
    """Whether f fixes its image pointwise (equivalently f.f = f)."""
    undecided = False
    for comp in image(f).components:
        for p in f.pieces:
            x = comp.intersect(p.domain)
            if x is None:
                continue
            m = p.map
            if isinstance(m, Identity):
                continue
            if isinstance(m, Const):
                if x.is_singleton and x.lo == m.c:
                    continue
                w = x.center() if not x.is_singleton else x.lo.value
                if w == m.c:
                    w = next(t for t in probe_points(x, 2) if t != m.c)
                return Tristate(False, witness=w)
            if isinstance(m, Affine):
                if x.is_singleton and m(x.lo.value) == x.lo.value:
                    continue
                w = next(t for t in probe_points(x, 2) if m(t) != t)
                return Tristate(False, witness=w)
            for t in probe_points(x, depth):
                if m(t) != t:
                    return Tristate(False, witness=t)
            undecided = True
    return Tristate(None, depth) if undecided else TRUE


def invert(f: Endo) -> Endo:
    if any(not p.map.injective for p in f.pieces) or image(f) != FULL:
        raise NotBijective("map is not a bijection of Q")
    return Endo((_piece_image(p), p.map.inverse()) for p in f.pieces)


def _regions(f: Endo, g: Endo) -> list[QInterval]:
    """Common refinement of both piece partitions into open gaps and points."""
    cuts = {}
    for h in (f, g):
        for p in h.pieces[1:]:
            cuts[p.domain.lo] = True
    pts = sorted(cuts, key=functools.cmp_to_key(compare))
    out = []
    lo = NEG_INF
    for c in pts + [POS_INF]:
        iv = make_interval(lo, c)
        if iv is not None:
            out.append(iv)
        if c.is_rational:
            out.append(point(c))
        lo = c
    return out


def _as_affine(m: PieceMap) -> Affine | None:
    if isinstance(m, Identity):
        return Affine(1, 0)
    if isinstance(m, Affine):
        return m
    return None


def equal(f: Endo, g: Endo, depth: int = DEFAULT_DEPTH) -> Tristate:
    """Pointwise equality; exact except where unrelated iso pieces meet."""
    if f == g:
        return TRUE
    undecided = False
    for r in _regions(f, g):
        if r.is_singleton:
            q = r.lo.value
            if apply(f, q) != apply(g, q):
                return Tristate(False, witness=q)
            continue
        c = r.center()
        m1, m2 = f.piece_at(c).map, g.piece_at(c).map
        if m1 == m2:
            continue
        if isinstance(m1, Const) or isinstance(m2, Const) or (
                _as_affine(m1) is not None and _as_affine(m2) is not None):
            # distinct maps of these kinds agree at no more than one point of r
            w = next(t for t in probe_points(r, 2) if m1(t) != m2(t))
            return Tristate(False, witness=w)
        for t in probe_points(r, depth):
            if m1(t) != m2(t):
                return Tristate(False, witness=t)
        undecided = True
    return Tristate(None, depth) if undecided else TRUE


# --- text form ---------------------------------------------------------------

_PIECE_RE = re.compile(r"^\s*piece on (?P<dom>.+?):\s*(?P<map>.+?)\s*$")


def _parse_link(text: str) -> PieceMap:
    t = text.strip()
    if t == "id":
        return Identity()
    if t.startswith("const "):
        return Const(parse_ext(t[6:]).value)
    if t.startswith("affine "):
        parts = t[7:].split()
        if len(parts) != 2:
            raise ParseError(f"bad affine map {text!r}")
        return Affine(parse_ext(parts[0]).value, parse_ext(parts[1]).value)
    if t.startswith("iso "):
        src, sep, dst = t[4:].partition("->")
        if not sep:
            raise ParseError(f"bad iso map {text!r}")
        return CanonIso(parse_interval(src), parse_interval(dst))
    if t.startswith("chain [") and t.endswith("]"):
        return IsoChain(tuple(_parse_link(x) for x in t[7:-1].split(" then ")))
    raise ParseError(f"unknown piece map {text!r}")


def parse_endo(text: str) -> Endo:
    """Parse the serialized form; pieces separated by newlines or ``;``.

    A lone map without ``piece on`` (e.g. ``affine 2 0``) covers all of Q.
    """
    pieces = []
    for line in re.split(r"[;\n]", text):
        if not line.strip():
            continue
        m = _PIECE_RE.match(line)
        if not m:
            # a bare map stands for a single piece on all of Q
            m = _PIECE_RE.match("piece on (-inf,inf): " + line.strip())
        if not m:
            raise ParseError(f"cannot parse piece {line!r}")
        try:
            pieces.append((parse_interval(m.group("dom")), _parse_link(m.group("map"))))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    try:
        return Endo(pieces)
    except NotOrderPreserving as exc:
        raise ParseError(str(exc)) from exc
