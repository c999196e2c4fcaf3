"""Countable linear orders given by queries rather than by a finite list.

Supported kinds are Q itself, subsets of Q given as a :class:`QSet`, the
rigid orders C_x built from an enumeration x of Q, ordered sums, and finite
chains. A back-and-forth search probes whether two such orders are
isomorphic: an obstruction settles the question, a partial isomorphism is
only evidence.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Sequence

from .errors import InvalidCode, NotOrdered
from .exact import NEG_INF, POS_INF, Ordering, rat, rational_between
from .qset import QSet, make_interval

__all__ = [
    "Enumeration", "canonical_enumeration", "mask_enumeration", "QOrder",
    "SubsetOrder", "CxOrder", "SumOrder", "FiniteChain", "ordered_sum",
    "compare_elems", "exists_between", "back_and_forth", "PartialIso",
    "Obstruction", "BudgetExhausted", "cx_rigidity_probe", "ForcedMapOk",
    "Contradiction",
]


def _cmp(a, b) -> Ordering:
    return Ordering((a > b) - (a < b))


# --- enumerations of Q -------------------------------------------------------

def _sb_node(bits: int, length: int) -> Fraction:
    """Stern-Brocot node reached from 1 by ``length`` moves (MSB first, 1 = right)."""
    lp, lq, hp, hq = 0, 1, 1, 0
    p, q = 1, 1
    for k in range(length - 1, -1, -1):
        if (bits >> k) & 1:
            lp, lq = p, q
        else:
            hp, hq = p, q
        p, q = lp + hp, lq + hq
    return Fraction(p, q)


def _sb_path(x: Fraction) -> tuple[int, int]:
    """Inverse of :func:`_sb_node` for positive x, via the continued fraction."""
    p, q = x.numerator, x.denominator
    bits, length = 0, 0
    while True:
        if p == q:
            return bits, length
        # a run of moves in one direction has the length of a partial quotient
        if p > q:
            k = (p - 1) // q if p % q == 0 else p // q
            bits = (bits << k) | ((1 << k) - 1)
            p -= k * q
        else:
            k = (q - 1) // p if q % p == 0 else q // p
            bits <<= k
            q -= k * p
        length += k


@dataclass(frozen=True)
class Enumeration:
    """A bijection N -> Q with its exact inverse.

    ``mask`` lists the pairs ``(2i, 2i+1)`` whose positions are swapped
    relative to the canonical enumeration.
    """

    mask: frozenset = frozenset()

    def _pi(self, n: int) -> int:
        return n ^ 1 if (n >> 1) in self.mask else n

    def forward(self, n: int) -> Fraction:
        if n < 0:
            raise InvalidCode(f"negative index {n}")
        return _canonical_forward(self._pi(n))

    def rank(self, q) -> int:
        return self._pi(_canonical_rank(Fraction(q)))

    __call__ = forward


@functools.lru_cache(maxsize=65536)
def _canonical_forward(n: int) -> Fraction:
    if n == 0:
        return Fraction(0)
    k = (n + 1) // 2
    m = k - 1
    level = (m + 1).bit_length() - 1
    pos = m + 1 - (1 << level)
    # levels are read right to left, so the path bits are the complement of pos
    s = _sb_node((1 << level) - 1 - pos, level)
    return s if n % 2 else -s


def _canonical_rank(q: Fraction) -> int:
    if q == 0:
        return 0
    bits, level = _sb_path(abs(q))
    pos = (1 << level) - 1 - bits
    k = (1 << level) + pos
    return 2 * k - 1 if q > 0 else 2 * k


def canonical_enumeration() -> Enumeration:
    """0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 3/2, ... (Stern-Brocot levels, right to left)."""
    return Enumeration()


def mask_enumeration(e: Enumeration, A) -> Enumeration:
    """Swap positions 2i and 2i+1 of e for every i in the finite set A."""
    return Enumeration(e.mask ^ frozenset(A))


# --- order kinds -------------------------------------------------------------

class _Order:
    """Interface shared by every kind. Codes are hashable Python values."""

    def valid(self, a) -> bool:
        raise NotImplementedError

    def check(self, *codes) -> None:
        for a in codes:
            if not self.valid(a):
                raise InvalidCode(f"{a!r} is not an element of {self}")

    def compare(self, a, b) -> Ordering:
        raise NotImplementedError

    def between(self, a, b) -> bool:
        """Strict betweenness, ``a < b`` assumed; None bounds are unbounded."""
        raise NotImplementedError

    def has_pred(self, a) -> bool:
        return False

    def has_succ(self, a) -> bool:
        return False

    def elements(self) -> Iterator:
        raise NotImplementedError

    def candidates(self, lo, hi) -> list:
        """Representatives of every element type strictly inside the cut."""
        raise NotImplementedError


@dataclass(frozen=True)
class QOrder(_Order):
    _e: Enumeration = field(default_factory=Enumeration)

    def valid(self, a) -> bool:
        return isinstance(a, (int, Fraction)) and not isinstance(a, bool)

    def compare(self, a, b) -> Ordering:
        return _cmp(Fraction(a), Fraction(b))

    def between(self, a, b) -> bool:
        return True

    def elements(self) -> Iterator:
        n = 0
        while True:
            yield self._e.forward(n)
            n += 1

    def candidates(self, lo, hi) -> list:
        return [rational_between(NEG_INF if lo is None else lo, POS_INF if hi is None else hi)]

    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class SubsetOrder(_Order):
    X: QSet

    def valid(self, a) -> bool:
        return isinstance(a, (int, Fraction)) and not isinstance(a, bool) and a in self.X

    def compare(self, a, b) -> Ordering:
        return _cmp(Fraction(a), Fraction(b))

    def _part(self, lo, hi) -> QSet:
        cut = make_interval(NEG_INF if lo is None else rat(lo), POS_INF if hi is None else rat(hi))
        if cut is None:
            return QSet()
        return QSet(c.intersect(cut) for c in self.X.components)

    def between(self, a, b) -> bool:
        return bool(self._part(a, b))

    def _component(self, a) -> int:
        for k, c in enumerate(self.X.components):
            if c.contains(a):
                return k
        raise InvalidCode(f"{a} not in {self.X}")

    def has_pred(self, a) -> bool:
        k = self._component(a)
        c = self.X.components[k]
        return c.lo_closed and c.lo == rat(a) and k > 0 and self.X.components[k - 1].hi_closed

    def has_succ(self, a) -> bool:
        k = self._component(a)
        comps = self.X.components
        c = comps[k]
        return c.hi_closed and c.hi == rat(a) and k + 1 < len(comps) and comps[k + 1].lo_closed

    def special_points(self) -> list[Fraction]:
        out = []
        for c in self.X.components:
            if c.lo_closed:
                out.append(c.lo.value)
            if c.hi_closed and not c.is_singleton:
                out.append(c.hi.value)
        return out

    def elements(self) -> Iterator:
        yield from self.special_points()
        dense = [_bisections(c) for c in self.X.components if not c.is_singleton]
        while dense:
            for g in dense:
                yield next(g)

    def candidates(self, lo, hi) -> list:
        out = []
        for c in self._part(lo, hi).components:
            if c.lo_closed:
                out.append(c.lo.value)
            if not c.is_singleton:
                out.append(c.center())
                if c.hi_closed:
                    out.append(c.hi.value)
        return out

    def __str__(self) -> str:
        return f"SubsetOrder({self.X})"


def _bisections(c) -> Iterator[Fraction]:
    """Interior points of c level by level: simplest rational in each gap."""
    cuts = [c.lo, c.hi]
    while True:
        nxt = [cuts[0]]
        for a, b in zip(cuts, cuts[1:]):
            m = rational_between(a, b)
            yield m
            nxt += [rat(m), b]
        cuts = nxt


@dataclass(frozen=True)
class CxOrder(_Order):
    """Each x_n is replaced by the chain (n,0) < (n,1) < ... < (n,n)."""

    e: Enumeration = field(default_factory=Enumeration)
    scan: int = 48

    def valid(self, a) -> bool:
        return (isinstance(a, tuple) and len(a) == 2 and all(isinstance(t, int) for t in a)
                and a[0] >= 0 and 0 <= a[1] <= a[0])

    def compare(self, a, b) -> Ordering:
        if a[0] == b[0]:
            return _cmp(a[1], b[1])
        return _cmp(self.e.forward(a[0]), self.e.forward(b[0]))

    def between(self, a, b) -> bool:
        if a is None or b is None:
            return True
        if a[0] == b[0]:
            return b[1] - a[1] > 1
        return True

    def witness_between(self, a, b):
        """An element strictly between a < b, or None for a covering pair."""
        if a[0] == b[0]:
            return (a[0], a[1] + 1) if b[1] - a[1] > 1 else None
        q = rational_between(self.e.forward(a[0]), self.e.forward(b[0]))
        return (self.e.rank(q), 0)

    def has_pred(self, a) -> bool:
        return a[1] > 0

    def has_succ(self, a) -> bool:
        return a[1] < a[0]

    def elements(self) -> Iterator:
        n = 0
        while True:
            for i in range(n + 1):
                yield (n, i)
            n += 1

    def candidates(self, lo, hi) -> list:
        out = []
        if lo is not None and lo[1] < lo[0]:
            out.append((lo[0], lo[1] + 1))
        if hi is not None and hi[1] > 0:
            out.append((hi[0], hi[1] - 1))
        xlo = NEG_INF if lo is None else rat(self.e.forward(lo[0]))
        xhi = POS_INF if hi is None else rat(self.e.forward(hi[0]))
        first = self.e.rank(rational_between(xlo, xhi))
        for n in sorted({first, *range(self.scan)}):
            x = rat(self.e.forward(n))
            if xlo < x < xhi:
                out.extend({(n, 0), (n, n), (n, min(1, n))})
        return [c for c in dict.fromkeys(out) if _in_cut(self, c, lo, hi)]

    def __str__(self) -> str:
        return "CxOrder"


@dataclass(frozen=True)
class FiniteChain(_Order):
    n: int

    def valid(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.n

    def compare(self, a, b) -> Ordering:
        return _cmp(a, b)

    def between(self, a, b) -> bool:
        lo = -1 if a is None else a
        hi = self.n if b is None else b
        return hi - lo > 1

    def has_pred(self, a) -> bool:
        return a > 0

    def has_succ(self, a) -> bool:
        return a < self.n - 1

    def elements(self) -> Iterator:
        return iter(range(self.n))

    def candidates(self, lo, hi) -> list:
        return list(range(-1 if lo is None else lo, self.n if hi is None else hi))[1:]

    def __str__(self) -> str:
        return f"FiniteChain({self.n})"


@dataclass(frozen=True)
class SumOrder(_Order):
    """Every ``('L', a)`` lies below every ``('R', b)``."""

    left: Any
    right: Any

    def _side(self, a):
        return self.left if a[0] == "L" else self.right

    def valid(self, a) -> bool:
        return (isinstance(a, tuple) and len(a) == 2 and a[0] in ("L", "R")
                and self._side(a).valid(a[1]))

    def compare(self, a, b) -> Ordering:
        if a[0] != b[0]:
            return Ordering.LESS if a[0] == "L" else Ordering.GREATER
        return self._side(a).compare(a[1], b[1])

    def between(self, a, b) -> bool:
        found = False
        if a is None or a[0] == "L":
            hi = b[1] if b is not None and b[0] == "L" else None
            found = self.left.between(None if a is None else a[1], hi)
        if not found and (b is None or b[0] == "R"):
            lo = a[1] if a is not None and a[0] == "R" else None
            found = self.right.between(lo, None if b is None else b[1])
        return found

    def has_pred(self, a) -> bool:
        side = self._side(a)
        if side.has_pred(a[1]):
            return True
        if a[0] == "R" and not side.between(None, a[1]):
            return _has_max(self.left)
        return False

    def has_succ(self, a) -> bool:
        side = self._side(a)
        if side.has_succ(a[1]):
            return True
        if a[0] == "L" and not side.between(a[1], None):
            return _has_min(self.right)
        return False

    def elements(self) -> Iterator:
        gens = [(("L", x) for x in self.left.elements()), (("R", x) for x in self.right.elements())]
        live = [True, True]
        while any(live):
            for k in (0, 1):
                if live[k]:
                    try:
                        yield next(gens[k])
                    except StopIteration:
                        live[k] = False

    def candidates(self, lo, hi) -> list:
        out = []
        if lo is None or lo[0] == "L":
            h = hi[1] if hi is not None and hi[0] == "L" else None
            out += [("L", c) for c in self.left.candidates(None if lo is None else lo[1], h)]
        if hi is None or hi[0] == "R":
            l = lo[1] if lo is not None and lo[0] == "R" else None
            out += [("R", c) for c in self.right.candidates(l, None if hi is None else hi[1])]
        return out

    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


def _has_max(O: _Order) -> bool:
    return any(not O.between(c, None) for c in O.candidates(None, None))


def _has_min(O: _Order) -> bool:
    return any(not O.between(None, c) for c in O.candidates(None, None))


def _in_cut(O: _Order, x, lo, hi) -> bool:
    return (lo is None or O.compare(lo, x) < 0) and (hi is None or O.compare(x, hi) < 0)


def ordered_sum(A, B) -> SumOrder:
    return SumOrder(A, B)


def compare_elems(O, a, b) -> Ordering:
    O.check(a, b)
    return O.compare(a, b)


def exists_between(O, a, b) -> bool:
    O.check(a, b)
    if O.compare(a, b) >= 0:
        raise NotOrdered(f"{a!r} is not below {b!r}")
    return O.between(a, b)


# --- back and forth ------------------------------------------------------------

@dataclass(frozen=True)
class PartialIso:
    pairs: tuple

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class Obstruction:
    """No extension exists: ``element`` of ``side`` (0 = A, 1 = B) cannot be matched."""

    side: int
    element: Any
    matched: tuple


@dataclass(frozen=True)
class BudgetExhausted:
    nodes: int


class _OutOfBudget(Exception):
    pass


def _locate(O: _Order, xs: Sequence, x) -> int | None:
    """Insertion index of x among the sorted codes xs, None if already present."""
    lo, hi = 0, len(xs)
    while lo < hi:
        mid = (lo + hi) // 2
        c = O.compare(xs[mid], x)
        if c == 0:
            return None
        if c < 0:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _local_type(O: _Order, x, lo, hi) -> tuple:
    return (O.between(lo, x), O.between(x, hi), O.has_pred(x), O.has_succ(x))


def back_and_forth(A, B, depth: int, budget: int = 200_000):
    """Alternate forth/back extension steps, ``depth`` rounds of two steps.

    Each side's elements are played in a fixed order; answers are searched
    with backtracking among type representatives. Returns :class:`PartialIso`
    (evidence of isomorphism), :class:`Obstruction` (proof of
    non-isomorphism), or :class:`BudgetExhausted`.
    """
    orders = (A, B)
    iters = [A.elements(), B.elements()]
    lists: list[list] = [[], []]
    done = [False, False]

    def nth(side: int, k: int):
        while len(lists[side]) <= k and not done[side]:
            try:
                lists[side].append(next(iters[side]))
            except StopIteration:
                done[side] = True
        return lists[side][k] if k < len(lists[side]) else None

    nodes = 0
    deepest: list = [None]

    def step(sides: tuple[list, list], moves: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _OutOfBudget
        if moves == 2 * depth:
            return True
        for side in (moves % 2, 1 - moves % 2):
            k = 0
            while True:
                x = nth(side, k)
                if x is None or _locate(orders[side], sides[side], x) is not None:
                    break
                k += 1
            if x is not None:
                break
        else:
            return True
        S, T = orders[side], orders[1 - side]
        xs, ys = sides[side], sides[1 - side]
        pos = _locate(S, xs, x)
        lo_x = xs[pos - 1] if pos > 0 else None
        hi_x = xs[pos] if pos < len(xs) else None
        lo_y = ys[pos - 1] if pos > 0 else None
        hi_y = ys[pos] if pos < len(ys) else None
        want = _local_type(S, x, lo_x, hi_x)
        for y in T.candidates(lo_y, hi_y):
            if _local_type(T, y, lo_y, hi_y) != want:
                continue
            xs.insert(pos, x)
            ys.insert(pos, y)
            if step(sides, moves + 1):
                return True
            del xs[pos], ys[pos]
        if deepest[0] is None or moves >= deepest[0][0]:
            deepest[0] = (moves, side, x, tuple(zip(*sides)))
        return False

    state: tuple[list, list] = ([], [])
    try:
        ok = step(state, 0)
    except _OutOfBudget:
        return BudgetExhausted(nodes)
    if ok:
        return PartialIso(tuple(zip(state[0], state[1])))
    _, side, x, matched = deepest[0]
    return Obstruction(side, x, matched)


# --- rigidity of C_x ------------------------------------------------------------

@dataclass(frozen=True)
class ForcedMapOk:
    N: int


@dataclass(frozen=True)
class Contradiction:
    m: int
    n: int


def cx_rigidity_probe(e1: Enumeration, e2: Enumeration, N: int):
    """Check that x_n -> y_n is order-preserving on indices below N.

    An isomorphism C_x -> C_y must send the block of size n+1 to the block of
    size n+1, so a pair ordered differently by x and y rules it out.
    The scan starts from the highest index pair.
    """
    xs = [e1.forward(n) for n in range(N)]
    ys = [e2.forward(n) for n in range(N)]
    for n in range(N - 1, 0, -1):
        for m in range(n - 1, -1, -1):
            if (xs[m] < xs[n]) != (ys[m] < ys[n]):
                return Contradiction(m, n) if xs[m] < xs[n] else Contradiction(n, m)
    return ForcedMapOk(N)
