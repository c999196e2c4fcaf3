"""Constructions of endomorphisms with prescribed images and kernels.

Covers retracts of Q (which subsets are images of idempotents, and an
idempotent onto each), how the gaps of an idempotent's image are attributed
to its kernel classes, families of idempotents and of L- and R-class
relatives that differ only in a real parameter, and endomorphisms that are
not regular.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .endo import (Affine, Const, Endo, Identity, PieceMap, apply, canon_iso,
                   compose, image, invert, is_idempotent, kernel_classes,
                   preimage, probe_points)
from .errors import (BadGamma, BadParams, BadSplit, ClosedGap, EmptySet,
                     FiniteImage, MaxElement, NotIdempotent, NotInImage)
from .exact import (NEG_INF, POS_INF, ExtReal, as_ext, compare, midpoint,
                    rat, rational_between, surd)
from .green import same_kernel
from .qset import (QInterval, QSet, complement, is_closed_in_Q, make_interval,
                   point)

__all__ = [
    "Criterion", "retract_image_criterion", "retract_onto", "GapAttribution",
    "analyze_idempotent", "Variant", "idempotent_variant", "r_class_variant",
    "LVariant", "maxima_chain", "l_class_variant", "surjection_onto",
    "NonRegular", "nonregular_endo", "check_certificate", "search_inverse",
    "same_kernel",
]

_LINE = QInterval(NEG_INF, False, POS_INF, False)


def _iv(lo, hi, lo_closed=False, hi_closed=False) -> QInterval | None:
    return make_interval(as_ext(lo), as_ext(hi), lo_closed, hi_closed)


def _endo(pieces) -> Endo:
    return Endo((d, m) for d, m in pieces if d is not None)


# --- retracts -------------------------------------------------------------------

@dataclass(frozen=True)
class Criterion:
    ok: bool
    witness: QInterval | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "OK" if self.ok else f"CLOSED GAP {self.witness}"


def retract_image_criterion(X: QSet) -> Criterion:
    """X is the image of an idempotent iff no gap of X is closed in Q."""
    for gap in complement(X).components:
        if is_closed_in_Q(gap):
            return Criterion(False, gap)
    return Criterion(True)


def _gap_value(gap: QInterval) -> Fraction:
    if gap.lo_closed:
        return gap.hi.value
    if gap.hi_closed:
        return gap.lo.value
    return gap.lo.value if gap.lo.is_rational else gap.hi.value


def retract_onto(X: QSet) -> Endo:
    """An idempotent with image X: identity on X, each gap sent to an endpoint."""
    if not X:
        raise EmptySet("no endomorphism has empty image")
    verdict = retract_image_criterion(X)
    if not verdict:
        raise ClosedGap(verdict.witness)
    pieces = [(c, Identity()) for c in X.components]
    pieces += [(g, Const(_gap_value(g))) for g in complement(X).components]
    return Endo(sorted(pieces, key=_piece_key))


_piece_key = functools.cmp_to_key(
    lambda a, b: compare(a[0].lo, b[0].lo) or (b[0].lo_closed - a[0].lo_closed))


# --- gap attribution ----------------------------------------------------------------

@dataclass(frozen=True)
class GapAttribution:
    x: Fraction
    L: QInterval | None
    L_case: str
    U: QInterval | None
    U_case: str
    m_x: Fraction | None
    n_x: Fraction | None

    def __str__(self) -> str:
        L = "{}" if self.L is None else str(self.L)
        U = "{}" if self.U is None else str(self.U)
        return f"x={self.x}: L={L} ({self.L_case}), U={U} ({self.U_case})"


def _below(X: QSet, x) -> QSet:
    return X.intersect(QSet([_iv(NEG_INF, x)]))


def _above(X: QSet, x) -> QSet:
    return X.intersect(QSet([_iv(x, POS_INF)]))


def analyze_idempotent(f: Endo) -> list[GapAttribution]:
    """For each x whose kernel class is not a singleton, the gaps of the
    image just below (L) and just above (U) that x accounts for."""
    verdict = is_idempotent(f)
    if verdict.value is not True:
        raise NotIdempotent(f"not an idempotent ({verdict})")
    X = image(f)
    out = []
    seen: set[QInterval] = set()
    for x, cls in kernel_classes(f):
        lower, upper = _below(X, x), _above(X, x)
        m_x = lower.max()
        n_x = upper.min()
        inf, sup = cls.lo, cls.hi
        # lower side
        if inf == rat(x):
            L, lc = None, "empty"
        elif inf.is_neg_inf:
            L, lc = _iv(NEG_INF, x), "i"
        elif inf.is_rational and inf.value in X:
            L, lc = _iv(inf, x), "ii"
        elif m_x is not None:
            L, lc = _iv(m_x, x), "iii"
        else:
            L, lc = _iv(inf, x, lo_closed=True), "iv"
        # upper side
        if sup == rat(x):
            U, uc = None, "empty"
        elif sup.is_pos_inf:
            U, uc = _iv(x, POS_INF), "i"
        elif sup.is_rational and sup.value in X:
            U, uc = _iv(x, sup), "ii"
        elif n_x is not None:
            U, uc = _iv(x, n_x), "iii"
        else:
            U, uc = _iv(x, sup, hi_closed=True), "iv"
        # a gap between two consecutive image points is reached from both sides
        if L is not None and L in seen:
            L, lc = None, "shared"
        if U is not None and U in seen:
            U, uc = None, "shared"
        seen.update(s for s in (L, U) if s is not None)
        out.append(GapAttribution(x, L, lc, U, uc, m_x, n_x))
    return out


# --- parameter families ---------------------------------------------------------------

@dataclass(frozen=True)
class Variant:
    case: int
    alpha: ExtReal
    beta: ExtReal
    gamma: ExtReal
    delta: ExtReal | None
    xi: Endo
    eta: Endo
    result: Endo
    kernel: QInterval


def _case1_delta(alpha: ExtReal, beta: ExtReal) -> ExtReal:
    m = midpoint(alpha, beta)
    if m is not None and not m.is_rational:
        return m
    return midpoint(rat(rational_between(alpha, beta)), beta)


def _xi_eta(I: QInterval, gamma: ExtReal):
    """The maps xi, eta (eta then xi is the identity) that stretch the class I
    so that its upper end moves from sup I to gamma."""
    alpha, beta = I.lo, I.hi
    if not gamma.is_finite:
        raise BadGamma("gamma must be a real number")
    if compare(gamma, beta) < 0:
        raise BadGamma(f"gamma {gamma} is below {beta}")
    if not beta.is_rational:
        if gamma.is_rational:
            raise BadGamma("gamma must be irrational when sup of the class is")
        delta = _case1_delta(alpha, beta)
        xi = _endo([
            (_iv(NEG_INF, delta), Identity()),
            (_iv(delta, gamma), canon_iso(_iv(delta, gamma), _iv(delta, beta))),
            (_iv(gamma, POS_INF), canon_iso(_iv(gamma, POS_INF), _iv(beta, POS_INF))),
        ])
        return 1, delta, xi, invert(xi)
    b = beta.value
    if I.hi_closed:
        theta = canon_iso(_iv(gamma, POS_INF), _iv(beta, POS_INF))
        xi = _endo([
            (_iv(NEG_INF, beta, hi_closed=True), Identity()),
            (_iv(beta, gamma, hi_closed=True), Const(b)),
            (_iv(gamma, POS_INF), theta),
        ])
        eta = _endo([
            (_iv(NEG_INF, beta, hi_closed=True), Identity()),
            (_iv(beta, POS_INF), _inverse(theta)),
        ])
        return 2, None, xi, eta
    delta = rat(rational_between(gamma, gamma + 1))
    theta1 = canon_iso(_iv(alpha, gamma), _iv(alpha, beta))
    theta2 = canon_iso(_iv(delta, POS_INF), _iv(beta, POS_INF))
    xi = _endo([
        (_iv(NEG_INF, alpha, hi_closed=True), Identity()),
        (_iv(alpha, gamma), theta1),
        (_iv(gamma, delta, lo_closed=True, hi_closed=True), Const(b)),
        (_iv(delta, POS_INF), theta2),
    ])
    eta = _endo([
        (_iv(NEG_INF, alpha, hi_closed=True), Identity()),
        (_iv(alpha, beta), _inverse(theta1)),
        (point(beta), Const(delta.value)),
        (_iv(beta, POS_INF), _inverse(theta2)),
    ])
    return 3, delta, xi, eta


def _inverse(m: PieceMap) -> PieceMap:
    return m if isinstance(m, Identity) else m.inverse()


def _class_of(f: Endo, q) -> QInterval:
    X = image(f)
    if q not in X:
        raise NotInImage(f"{q} is not an image value")
    if X.max() == Fraction(q):
        raise MaxElement(f"{q} is the maximum of the image")
    return preimage(f, q)


def idempotent_variant(f: Endo, q, gamma) -> Variant:
    """The idempotent g = xi f eta whose class through q runs from inf to gamma."""
    q, gamma = Fraction(q), as_ext(gamma)
    verdict = is_idempotent(f)
    if verdict.value is not True:
        raise NotIdempotent(f"not an idempotent ({verdict})")
    I = _class_of(f, q)
    case, delta, xi, eta = _xi_eta(I, gamma)
    g = compose(compose(xi, f), eta)
    # g sends the stretched class onto the image of q under eta
    J = preimage(g, apply(eta, q))
    return Variant(case, I.lo, I.hi, gamma, delta, xi, eta, g, J)


def r_class_variant(f: Endo, q, gamma) -> Variant:
    """h = xi f, L-related to f (eta h = f) with the class of q stretched to gamma."""
    q, gamma = Fraction(q), as_ext(gamma)
    I = _class_of(f, q)
    case, delta, xi, eta = _xi_eta(I, gamma)
    h = compose(xi, f)
    return Variant(case, I.lo, I.hi, gamma, delta, xi, eta, h, preimage(h, q))


# --- L-class variants -------------------------------------------------------------------

@dataclass(frozen=True)
class LVariant:
    case: str
    xi: Endo
    eta: Endo
    result: Endo


def maxima_chain(X: QSet) -> tuple[list[Fraction], ExtReal]:
    """Points x1 > x2 > ... each the maximum of what is left, and the sup of the rest."""
    comps = list(X.components)
    chain: list[Fraction] = []
    while comps and comps[-1].hi_closed:
        top = comps.pop()
        chain.append(top.hi.value)
        if not top.is_singleton:
            return chain, top.hi
    return chain, comps[-1].hi if comps else NEG_INF


def _move_points(src: Sequence[Fraction], dst: Sequence[Fraction], floor: ExtReal) -> Endo:
    """Automorphism fixing (-inf, floor] and sending src[i] to dst[i] (both
    descending, all above floor)."""
    knots = list(zip(reversed(src), reversed(dst)))
    pieces: list = [(_iv(NEG_INF, floor, hi_closed=True), Identity())]
    x0, y0 = knots[0]
    first = _iv(floor, x0, hi_closed=True)
    if floor.is_rational:
        a = (y0 - floor.value) / (x0 - floor.value)
        pieces.append((first, Affine(a, y0 - a * x0)))
    else:
        pieces.append((first, canon_iso(first, _iv(floor, y0, hi_closed=True))))
    for (x1, y1), (x2, y2) in zip(knots, knots[1:]):
        a = (y2 - y1) / (x2 - x1)
        pieces.append((_iv(x1, x2, hi_closed=True), Affine(a, y1 - a * x1)))
    xl, yl = knots[-1]
    pieces.append((_iv(xl, POS_INF), Affine(1, yl - xl)))
    return _endo(pieces)


def l_class_variant(f: Endo, *, targets: Sequence | None = None,
                    beta=None, gamma=None) -> LVariant:
    """h = f xi, R-related to f but with a different image.

    With ``targets`` (descending rationals) the top isolated maxima of the
    image are moved there by an automorphism. With ``beta`` the part of the
    image below its top maxima is squeezed under beta; ``gamma`` is the
    rational where eta folds the squeezed-out range back.
    """
    X = image(f)
    if X.is_finite:
        raise FiniteImage("image is finite")
    chain, alpha = maxima_chain(X)
    if targets is not None:
        ts = [Fraction(t) for t in targets]
        if not ts or any(a <= b for a, b in zip(ts, ts[1:])):
            raise BadParams("targets must be strictly descending")
        isolated = []
        for c in reversed(X.components):
            if not c.is_singleton:
                break
            isolated.append(c.lo.value)
        if len(ts) > len(isolated):
            raise BadParams("only isolated maxima can be moved")
        moved = isolated[:len(ts)]
        rest = QSet(c for c in X.components if not (c.is_singleton and c.lo.value in moved))
        floor = rest.components[-1].hi
        if compare(rat(ts[-1]), floor) <= 0:
            raise BadParams(f"targets must lie above {floor}")
        xi = _move_points(moved, ts, floor)
        return LVariant("a", xi, invert(xi), compose(f, xi))
    if beta is None:
        raise BadParams("either targets or beta is required")
    beta = as_ext(beta)
    if not alpha.is_finite:
        raise BadParams("image is unbounded above with no maximum")
    if compare(beta, alpha) >= 0 or not beta.is_finite:
        raise BadParams(f"beta must be a real number below {alpha}")
    if gamma is None:
        gamma = chain[-1] if chain else (alpha.value if alpha.is_rational
                                         else rational_between(alpha, alpha + 1))
    gamma = Fraction(gamma)
    if compare(rat(gamma), alpha) < 0 or (chain and gamma > chain[-1]):
        raise BadParams("gamma must lie between alpha and the lowest moved maximum")
    theta = canon_iso(_iv(NEG_INF, alpha), _iv(NEG_INF, beta))
    xi = _endo([(_iv(NEG_INF, alpha), theta),
                (_iv(alpha, POS_INF, lo_closed=True), Identity())])
    eta = _endo([(_iv(NEG_INF, beta), _inverse(theta)),
                 (_iv(beta, gamma, lo_closed=True, hi_closed=True), Const(gamma)),
                 (_iv(gamma, POS_INF), Identity())])
    return LVariant("b", xi, eta, compose(f, xi))


# --- non-regular endomorphisms -------------------------------------------------------------

def surjection_onto(X: QSet) -> Endo:
    """An endomorphism with image exactly X: each component of X is the
    image of a domain interval of the same shape, with constant bridges."""
    if not X:
        raise EmptySet("no endomorphism has empty image")
    comps = X.components
    pieces: list = []
    if comps[0].has_min:
        pieces.append((_iv(NEG_INF, 0), Const(comps[0].lo.value)))
        cur, cl = rat(0), True
    else:
        cur, cl = NEG_INF, False
    for k, c in enumerate(comps):
        last = k + 1 == len(comps)
        if c.is_singleton:
            end = cur
            dom = point(cur)
        else:
            base = cur + 1 if cur.is_finite else rat(0)
            if last and not c.has_max:
                end = POS_INF
            elif not c.has_max and not comps[k + 1].has_min:
                # two open ends meet at an irrational point, leaving no gap
                end = surd(base.value, Fraction(1, 2), 2)
            else:
                end = base
            dom = QInterval(cur, cl, end, c.has_max)
        pieces.append((dom, canon_iso(dom, c)))
        if last:
            if c.has_max:
                pieces.append((_iv(end, POS_INF), Const(c.hi.value)))
            break
        nxt = comps[k + 1]
        if c.has_max and nxt.has_min:
            pieces.append((_iv(end, end + 1), Const(c.hi.value)))
            cur, cl = end + 1, True
        elif c.has_max:
            cur, cl = end, False
        else:
            cur, cl = end, nxt.has_min
    return _endo(pieces)


@dataclass(frozen=True)
class NonRegular:
    f: Endo
    g: Endo
    xi: Endo
    alpha: ExtReal
    delta: Fraction
    certificate: dict = field(compare=False)


def nonregular_endo(X: QSet, alpha) -> NonRegular:
    """f = g xi with g onto X and xi squeezing (-inf, alpha) under delta < alpha.

    alpha must be irrational and lie inside a component of X, so that X
    splits at alpha into two nonempty parts that both reach alpha.
    """
    alpha = as_ext(alpha)
    if not alpha.is_finite or alpha.is_rational:
        raise BadSplit("the split point must be irrational")
    if not any(compare(c.lo, alpha) < 0 < compare(c.hi, alpha) for c in X.components):
        raise BadSplit(f"{alpha} does not split a component of {X}")
    home = next(c for c in X.components if compare(c.lo, alpha) < 0 < compare(c.hi, alpha))
    delta = rational_between(home.lo, alpha)
    g = surjection_onto(X)
    theta = canon_iso(_iv(NEG_INF, alpha), _iv(NEG_INF, delta))
    xi = _endo([(_iv(NEG_INF, alpha), theta), (_iv(alpha, POS_INF), Identity())])
    f = compose(g, xi)
    res = NonRegular(f, g, xi, alpha, delta, {})
    res.certificate.update(check_certificate(res))
    return res


def check_certificate(r: NonRegular) -> dict:
    """Structural reasons why f h f = f has no solution h.

    Image points below alpha accumulate at delta from below without reaching
    it, image points above alpha accumulate at alpha from above, and nothing
    of the image lies in between. Any h would have to send a rational q with
    delta < q < alpha both above and below alpha.
    """
    Y = image(r.f)
    low = _below(Y, r.alpha)
    high = _above(Y, r.alpha)
    between = Y.intersect(QSet([_iv(r.delta, r.alpha)]))
    cert = {
        "delta_below_alpha": r.delta < r.alpha,
        "low_sup_is_delta": bool(low) and low.components[-1].hi == rat(r.delta)
        and not low.components[-1].hi_closed,
        "high_inf_is_alpha": bool(high) and high.components[0].lo == r.alpha,
        "gap_empty": not between,
        "alpha_not_in_image": not r.alpha.is_rational,
    }
    cert["valid"] = all(cert.values())
    return cert


def _canonical_pool(f: Endo, extra: Sequence[Fraction], size: int) -> list[Fraction]:
    pool = set(extra)
    for c in image(f).components:
        pool.update(probe_points(c, 3))
    pool = sorted(pool)
    if len(pool) > size:
        step = len(pool) / size
        pool = sorted({pool[int(i * step)] for i in range(size)} | set(extra))
    return pool


def search_inverse(r: NonRegular, *, min_candidates: int = 10_000, probes: int = 200,
                   max_pieces: int = 4) -> tuple[int, Endo | None]:
    """Try step-shaped and identity-patched h (at most ``max_pieces`` pieces,
    breakpoints and values from a canonical pool) against f h f = f on
    ``probes`` probe points. Returns the number tried and any h that passes."""
    f = r.f
    probe_set: list[Fraction] = []
    for c in image(r.g).components:
        probe_set.extend(probe_points(c, probes))
    probe_set.extend(probe_points(_LINE, probes))
    probe_set = list(dict.fromkeys(probe_set))[:probes]
    fvals = [apply(f, q) for q in probe_set]
    pool = _canonical_pool(f, [r.delta, rational_between(r.delta, r.alpha)], 16)
    tried = 0

    def candidates():
        for n in range(1, max_pieces + 1):
            for cuts in itertools.combinations(pool, n - 1):
                for kinds in itertools.product((0, 1), repeat=n):
                    for vals in itertools.combinations_with_replacement(pool, kinds.count(0)):
                        yield cuts, kinds, vals

    def h_at(cuts, kinds, vals, x):
        k = 0
        while k < len(cuts) and x > cuts[k]:
            k += 1
        if kinds[k] == 1:
            return x
        return vals[sum(1 for t in kinds[:k] if t == 0)]

    for cuts, kinds, vals in candidates():
        # skip non-monotone candidates
        seq = []
        for k in range(len(kinds)):
            lo = cuts[k - 1] if k else None
            hi = cuts[k] if k < len(cuts) else None
            if kinds[k] == 1:
                seq += [v for v in (lo, hi) if v is not None]
            else:
                seq.append(vals[sum(1 for t in kinds[:k] if t == 0)])
        if any(a > b for a, b in zip(seq, seq[1:])):
            continue
        tried += 1
        ok = True
        for q, fq in zip(probe_set, fvals):
            if apply(f, h_at(cuts, kinds, vals, fq)) != fq:
                ok = False
                break
        if ok:
            return tried, _h_endo(cuts, kinds, vals)
        if tried >= min_candidates * 4:
            break
    return tried, None


def _h_endo(cuts, kinds, vals) -> Endo:
    pieces = []
    bounds = [NEG_INF] + [rat(c) for c in cuts] + [POS_INF]
    j = 0
    for k, kind in enumerate(kinds):
        dom = QInterval(bounds[k], False, bounds[k + 1], k < len(cuts))
        if kind == 1:
            pieces.append((dom, Identity()))
        else:
            pieces.append((dom, Const(vals[j])))
            j += 1
    return Endo(pieces)
