"""Green's relations.

On finite chains everything is decided by brute force over the whole monoid
O_n of monotone self-maps of {1..n}. On endomorphisms of Q the relations
are read off images, kernels and order types, which is exact only where the
elements involved are known to be regular.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernels
from .endo import (Affine, Endo, Tristate, FALSE, TRUE, image,
                   is_idempotent, kernel_classes, preimage)
from .errors import InfiniteImage, TooLarge
from .exact import NEG_INF, POS_INF, rat, rational_between
from .qset import QInterval, make_interval, order_type_signature

__all__ = [
    "enumerate_chain_endos", "GreenTable", "green_classify", "same_image",
    "same_kernel", "is_regular_finite_image", "d_related", "simplest_in",
]

MAX_ENUM = 8
MAX_CLASSIFY = 6


def enumerate_chain_endos(n: int) -> list[tuple[int, ...]]:
    """All monotone maps of {1..n} as value tuples, in lexicographic order."""
    if not 1 <= n <= MAX_ENUM:
        raise TooLarge(f"chain size must be between 1 and {MAX_ENUM}")
    return list(itertools.combinations_with_replacement(range(1, n + 1), n))


def _partition(labels: np.ndarray) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(i)
    return sorted(groups.values())


def _classes(related: np.ndarray) -> np.ndarray:
    """Class label (least member) of each element for an equivalence matrix."""
    return related.argmax(axis=1)


def _join(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    parent = list(range(len(a)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lab in (a, b):
        for i, r in enumerate(lab):
            x, y = find(i), find(int(r))
            if x != y:
                parent[max(x, y)] = min(x, y)
    return np.array([find(i) for i in range(len(a))])


@dataclass
class GreenTable:
    n: int
    elements: list[tuple[int, ...]]
    comp: np.ndarray
    L: np.ndarray
    R: np.ndarray
    H: np.ndarray
    D: np.ndarray
    idempotent: np.ndarray
    regular_witness: np.ndarray
    left_witness: np.ndarray
    right_witness: np.ndarray

    @property
    def regular(self) -> np.ndarray:
        return self.regular_witness >= 0

    def classes(self, which: str) -> list[list[int]]:
        return _partition(getattr(self, which))

    def image(self, i: int) -> frozenset:
        return frozenset(self.elements[i])

    def kernel(self, i: int) -> tuple[tuple[int, ...], ...]:
        v = self.elements[i]
        blocks: list[list[int]] = []
        for x in range(self.n):
            if blocks and v[blocks[-1][-1] - 1] == v[x]:
                blocks[-1].append(x + 1)
            else:
                blocks.append([x + 1])
        return tuple(tuple(b) for b in blocks)

    def l_witness(self, f: int, g: int) -> int:
        """u with u then g equal to f (-1 if f is not in the left ideal of g)."""
        return int(self.left_witness[f, g])

    def r_witness(self, f: int, g: int) -> int:
        """u with g then u equal to f (-1 if f is not in the right ideal of g)."""
        return int(self.right_witness[f, g])

    def rows(self) -> list[tuple[str, ...]]:
        out = []
        for i, e in enumerate(self.elements):
            out.append((
                _fmt_map(e),
                "{" + ",".join(map(str, sorted(self.image(i)))) + "}",
                "|".join(" ".join(map(str, b)) for b in self.kernel(i)),
                _fmt_map(self.elements[self.L[i]]),
                _fmt_map(self.elements[self.R[i]]),
                _fmt_map(self.elements[self.D[i]]),
                "yes" if self.idempotent[i] else "no",
                "yes" if self.regular[i] else "no",
            ))
        return out

    def render(self) -> str:
        head = ("element", "image", "kernel", "L", "R", "D", "idempotent", "regular")
        rows = [head] + self.rows()
        widths = [max(len(r[k]) for r in rows) for k in range(len(head))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        lines.append(
            f"elements: {len(self.elements)}  D-classes: {len(self.classes('D'))}  "
            f"L-classes: {len(self.classes('L'))}  R-classes: {len(self.classes('R'))}  "
            f"H-classes: {len(self.classes('H'))}"
        )
        return "\n".join(lines)


def _fmt_map(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def green_classify(n: int) -> GreenTable:
    """Classify O_n by witness search over the whole monoid."""
    if not 1 <= n <= MAX_CLASSIFY:
        raise TooLarge(f"classification supports chains of size 1..{MAX_CLASSIFY}")
    elems = enumerate_chain_endos(n)
    maps = np.array(elems, dtype=np.int64) - 1
    weights = n ** np.arange(n, dtype=np.int64)
    lookup = np.full(n ** n, -1, dtype=np.int64)
    lookup[maps @ weights] = np.arange(len(elems))
    comp = _kernels.compose_table(maps, lookup)
    lw = _kernels.left_witnesses(comp)
    rw = _kernels.right_witnesses(comp)
    in_left = lw >= 0
    in_right = rw >= 0
    Lrel = in_left & in_left.T
    Rrel = in_right & in_right.T
    L = _classes(Lrel)
    R = _classes(Rrel)
    H = _classes(Lrel & Rrel)
    D = _join(L, R)
    idem = comp[np.arange(len(elems)), np.arange(len(elems))] == np.arange(len(elems))
    reg = _kernels.regular_witnesses(comp)
    return GreenTable(n, elems, comp, L, R, H, D, idem, reg, lw, rw)


def expected_counts(n: int) -> dict[str, int]:
    """Class counts for O_n: D by image size k, L by k-subsets, R by convex k-partitions."""
    return {
        "elements": comb(2 * n - 1, n - 1),
        "D": n,
        "L": sum(comb(n, k) for k in range(1, n + 1)),
        "R": sum(comb(n - 1, k - 1) for k in range(1, n + 1)),
    }


# --- criteria on endomorphisms of Q ---------------------------------------------------

def same_image(f: Endo, g: Endo) -> bool:
    return image(f) == image(g)


def same_kernel(f: Endo, g: Endo) -> bool:
    """Equal kernels: the same non-singleton classes as sets of points."""
    return [c for _, c in kernel_classes(f)] == [c for _, c in kernel_classes(g)]


def simplest_in(iv: QInterval) -> Fraction:
    """Simplest rational of an interval: least denominator, then least size."""
    if iv.is_singleton:
        return iv.lo.value
    best = rational_between(iv.lo, iv.hi)
    for end, closed in ((iv.lo, iv.lo_closed), (iv.hi, iv.hi_closed)):
        if closed:
            e = end.value
            if (e.denominator, abs(e)) < (best.denominator, abs(best)):
                best = e
    return best


def _interpolate(knots: list[tuple[Fraction, Fraction]]) -> Endo:
    """Piecewise-affine automorphism through increasing knots, slope 1 outside."""
    (x0, y0) = knots[0]
    pieces = [(make_interval(NEG_INF, rat(x0), False, True), Affine(1, y0 - x0))]
    for (x1, y1), (x2, y2) in zip(knots, knots[1:]):
        a = (y2 - y1) / (x2 - x1)
        pieces.append((make_interval(rat(x1), rat(x2), False, True), Affine(a, y1 - a * x1)))
    xl, yl = knots[-1]
    pieces.append((make_interval(rat(xl), POS_INF), Affine(1, yl - xl)))
    return Endo(pieces)


def is_regular_finite_image(f: Endo) -> Endo:
    """A witness g with f g f = f for f of finite image."""
    X = image(f)
    if not X.is_finite:
        raise InfiniteImage("image has a non-singleton component")
    knots = [(c.lo.value, simplest_in(preimage(f, c.lo.value))) for c in X.components]
    return _interpolate(knots)


def _known_regular(f: Endo) -> bool:
    return image(f).is_finite or is_idempotent(f).value is True


def d_related(f: Endo, g: Endo) -> Tristate:
    """Different image order types rule D out; equal ones decide it only for regular elements."""
    if order_type_signature(image(f)) != order_type_signature(image(g)):
        return FALSE
    if _known_regular(f) and _known_regular(g):
        return TRUE
    return Tristate(None, 0)
