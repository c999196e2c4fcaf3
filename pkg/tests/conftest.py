import os
import random
import sys
from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from endoq.endo import Affine, Const, Endo, canon_iso
from endoq.exact import NEG_INF, POS_INF, parse_ext, rat
from endoq.qset import QSet, make_interval, point

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def to_sympy(x):
    """Independent exact value of an ExtReal, for oracle comparisons."""
    if x.is_neg_inf:
        return -sympy.oo
    if x.is_pos_inf:
        return sympy.oo
    if x.is_rational:
        return sympy.Rational(x.value.numerator, x.value.denominator)
    return (sympy.Rational(x.a.numerator, x.a.denominator)
            + sympy.Rational(x.b.numerator, x.b.denominator) * sympy.sqrt(x.d))


def sympy_member(intervals, q):
    """Membership in a raw union of intervals, evaluated with sympy."""
    q = sympy.Rational(q.numerator, q.denominator)
    for iv in intervals:
        lo, hi = to_sympy(iv.lo), to_sympy(iv.hi)
        above = q >= lo if iv.lo_closed else q > lo
        below = q <= hi if iv.hi_closed else q < hi
        if bool(above) and bool(below):
            return True
    return False


small_rationals = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6))

SURD_POOL = ["sqrt(2)", "sqrt(3)", "1/2*sqrt(2)", "-1 + 1*sqrt(2)", "2 - 1*sqrt(3)",
             "1/2 + 1/2*sqrt(2)", "-1/2*sqrt(2)"]


@st.composite
def endpoints(draw):
    if draw(st.booleans()):
        return rat(draw(small_rationals))
    return parse_ext(draw(st.sampled_from(SURD_POOL))) + draw(st.integers(-3, 3))


@st.composite
def qsets(draw, max_components=4):
    parts = []
    for _ in range(draw(st.integers(0, max_components))):
        if draw(st.integers(0, 4)) == 0:
            parts.append(point(draw(small_rationals)))
            continue
        lo = NEG_INF if draw(st.integers(0, 6)) == 0 else draw(endpoints())
        hi = POS_INF if draw(st.integers(0, 6)) == 0 else draw(endpoints())
        if lo > hi:
            lo, hi = hi, lo
        iv = make_interval(lo, hi, draw(st.booleans()), draw(st.booleans()))
        if iv is not None:
            parts.append(iv)
    return QSet(parts)


def monotone_endo(rng: random.Random, max_pieces: int = 5, isos: bool = True) -> Endo:
    """A random order-preserving endo: affine, constant and iso pieces with upward jumps."""
    k = rng.randint(0, max_pieces - 1)
    xs = sorted({Fraction(rng.randint(-20, 20), rng.choice((1, 2, 3))) for _ in range(k)})
    y = Fraction(rng.randint(-10, 10))
    pieces = []
    bounds = [NEG_INF] + [rat(x) for x in xs] + [POS_INF]
    for i in range(len(bounds) - 1):
        lo, hi = bounds[i], bounds[i + 1]
        dom = make_interval(lo, hi, False, hi.is_finite)
        if i > 0:
            y += rng.choice((0, 0, 1, Fraction(1, 2)))
        if not lo.is_finite or not hi.is_finite or rng.random() < 0.5:
            if rng.random() < 0.3 and lo.is_finite and hi.is_finite:
                pieces.append((dom, Const(y)))
                continue
            a = Fraction(rng.randint(1, 6), rng.randint(1, 3))
            anchor = lo.value if lo.is_finite else (hi.value if hi.is_finite else Fraction(0))
            start = y if lo.is_finite else y - a * (hi.value - anchor) if hi.is_finite else y
            pieces.append((dom, Affine(a, start - a * anchor)))
            if hi.is_finite:
                y = start + a * (hi.value - anchor)
            continue
        width = hi.value - lo.value
        end = y + width * Fraction(rng.randint(1, 4), rng.randint(1, 3))
        if isos and rng.random() < 0.5:
            pieces.append((dom, canon_iso(dom, make_interval(rat(y), rat(end), False, True))))
        elif rng.random() < 0.4:
            pieces.append((dom, Const(y)))
            continue
        else:
            a = (end - y) / width
            pieces.append((dom, Affine(a, y - a * lo.value)))
        y = end
    return Endo(pieces)


def automorphism(rng: random.Random, max_pieces: int = 6) -> Endo:
    """A random piecewise-affine order automorphism with at most max_pieces pieces."""
    k = rng.randint(0, max_pieces - 1)
    xs = sorted({Fraction(rng.randint(-12, 12), rng.choice((1, 2))) for _ in range(k)})
    if not xs:
        a = Fraction(rng.randint(1, 4), rng.randint(1, 4))
        return Endo.affine(a, Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
    ys = []
    y = xs[0] + Fraction(rng.randint(-4, 4), rng.randint(1, 2))
    for i, x in enumerate(xs):
        if i:
            y += (x - xs[i - 1]) * Fraction(rng.randint(1, 5), rng.randint(1, 3))
        ys.append(y)
    pieces = []
    s0 = Fraction(rng.randint(1, 3), rng.randint(1, 3))
    pieces.append((make_interval(NEG_INF, rat(xs[0]), False, True), Affine(s0, ys[0] - s0 * xs[0])))
    for (x1, y1), (x2, y2) in zip(zip(xs, ys), zip(xs[1:], ys[1:])):
        a = (y2 - y1) / (x2 - x1)
        pieces.append((make_interval(rat(x1), rat(x2), False, True), Affine(a, y1 - a * x1)))
    s1 = Fraction(rng.randint(1, 3), rng.randint(1, 3))
    pieces.append((make_interval(rat(xs[-1]), POS_INF), Affine(s1, ys[-1] - s1 * xs[-1])))
    return Endo(pieces)


def probe_rationals(rng: random.Random, n: int, spread: int = 25):
    return [Fraction(rng.randint(-spread * 6, spread * 6), rng.randint(1, 6)) for _ in range(n)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance")
    for key, (ok, detail) in results.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}")
