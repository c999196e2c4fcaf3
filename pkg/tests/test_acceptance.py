"""Acceptance gate: criteria 1-8, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly:

    python3 tests/test_acceptance.py
"""
import itertools
import random
import sys
import time
from fractions import Fraction
from math import comb

import pytest

from endoq.constructions import (analyze_idempotent, idempotent_variant,
                                 l_class_variant, nonregular_endo,
                                 retract_image_criterion, retract_onto,
                                 search_inverse)
from endoq.endo import (Endo, apply, compose, equal, image, invert,
                        is_idempotent)
from endoq.errors import ClosedGap, EmptySet
from endoq.exact import (NEG_INF, POS_INF, compare, parse_ext, rat,
                         rational_between)
from endoq.green import expected_counts, green_classify, same_kernel
from endoq.lazyorder import (Contradiction, CxOrder, Obstruction, PartialIso,
                             SubsetOrder, back_and_forth,
                             canonical_enumeration, compare_elems,
                             cx_rigidity_probe, exists_between,
                             mask_enumeration)
from endoq.orbitals import (Sign, check_commuting_preserves,
                            check_conjugation, orbital_partition)
from endoq.qset import (QSet, complement, is_closed_in_Q, make_interval,
                        member, order_type_signature, parse_qset, point)

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from conftest import automorphism, probe_rationals  # noqa: E402

RESULTS: dict[str, tuple[bool, str]] = {}

SQRT2, SQRT3, HALF_SQRT2 = parse_ext("sqrt(2)"), parse_ext("sqrt(3)"), parse_ext("1/2*sqrt(2)")


def report(key, ok, detail):
    RESULTS[key] = (ok, detail)
    line = f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}"
    print(line)
    return ok


# --- 1 ---------------------------------------------------------------------------

def criterion_1():
    problems = []
    t0 = time.perf_counter()
    want_sizes = [1, 3, 10, 35, 126, 462]
    for n in range(1, 7):
        brute = [m for m in itertools.product(range(1, n + 1), repeat=n)
                 if all(a <= b for a, b in zip(m, m[1:]))]
        t = green_classify(n)
        if not (len(brute) == len(t.elements) == want_sizes[n - 1] == comb(2 * n - 1, n - 1)):
            problems.append(f"|O_{n}|")
        if not t.regular.all():
            problems.append(f"non-regular element in O_{n}")
        for i in range(len(t.elements)):
            if t.idempotent[i] and int((t.H == t.H[i]).sum()) != 1:
                problems.append(f"non-trivial H-class in O_{n}")
        if n <= 5:
            N = len(t.elements)
            for i in range(N):
                for j in range(N):
                    if (t.L[i] == t.L[j]) != (t.image(i) == t.image(j)):
                        problems.append(f"L vs image at n={n}")
                    if (t.R[i] == t.R[j]) != (t.kernel(i) == t.kernel(j)):
                        problems.append(f"R vs kernel at n={n}")
            want = expected_counts(n)
            got = {k: len(t.classes(k)) for k in "DLR"}
            if got != {k: want[k] for k in "DLR"}:
                problems.append(f"class counts at n={n}: {got}")
        if n == 5 and time.perf_counter() - t0 > 60:
            problems.append("n<=5 took over 60 s")
    dt = time.perf_counter() - t0
    if dt > 600:
        problems.append("n=6 over 10 min")
    return report("1", not problems, f"O_1..O_6 sizes {want_sizes}, all regular, H trivial, "
                  f"L/R match image/kernel for all pairs n<=5 ({dt:.2f}s)"
                  + (f"; problems: {sorted(set(problems))}" if problems else ""))


# --- 2 ---------------------------------------------------------------------------

def _endpoint(rng):
    k = rng.randrange(5)
    if k == 0:
        return rat(rng.randint(-4, 4))
    if k == 1:
        return rat(Fraction(rng.randint(-9, 9), 2))
    if k == 2:
        return SQRT2 if rng.random() < 0.5 else SQRT3
    return HALF_SQRT2 + Fraction(rng.randint(-8, 8), rng.choice((1, 2)))


def random_set(rng):
    parts = []
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.15:
            parts.append(point(Fraction(rng.randint(-9, 9), 2)))
            continue
        lo = NEG_INF if rng.random() < 0.1 else _endpoint(rng)
        hi = POS_INF if rng.random() < 0.1 else _endpoint(rng)
        if compare(lo, hi) > 0:
            lo, hi = hi, lo
        iv = make_interval(lo, hi, rng.random() < 0.5, rng.random() < 0.5)
        if iv is not None:
            parts.append(iv)
    return QSet(parts)


def criterion_2():
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    bad, built, undecided = [], 0, 0
    for _ in range(1000):
        X = random_set(rng)
        ok = bool(retract_image_criterion(X))
        try:
            f = retract_onto(X)
        except (ClosedGap, EmptySet):
            if ok:
                bad.append(f"criterion OK, build failed: {X}")
            continue
        built += 1
        if not ok:
            bad.append(f"criterion failed, build succeeded: {X}")
        v = is_idempotent(f)
        undecided += v.value is None
        if v.value is not True or image(f) != X:
            bad.append(f"not a retract onto {X}")
            continue
        gaps = [g for row in analyze_idempotent(f) for g in (row.L, row.U) if g is not None]
        union = QSet([])
        for g in gaps:
            G = QSet([g])
            if is_closed_in_Q(g) or union.intersect(G):
                bad.append(f"bad gap {g} for {X}")
            union = union.union(G)
        if union != complement(X):
            bad.append(f"attribution misses gaps of {X}")
    dt = time.perf_counter() - t0
    ok = not bad and undecided == 0 and dt <= 60
    return report("2", ok, f"1000 sets, {built} retracts built, {undecided} undecided, "
                  f"{len(bad)} failures ({dt:.2f}s)" + (f"; first: {bad[0]}" if bad else ""))


# --- 3 ---------------------------------------------------------------------------

VARIANT_SUITE = [
    (1, "retract:(-inf,0] u [sqrt(2),inf)", 0,
     ["sqrt(3)", "1 + 1/2*sqrt(2)", "2*sqrt(2)", "3 + 1*sqrt(2)", "sqrt(5)"]),
    (2, "retract:[0,1]", 0, ["0", "1/3", "1/2", "sqrt(2)", "5"]),
    (3, "retract:(-inf,-1] u [0,inf)", -1, ["0", "1/2", "sqrt(2)", "3", "7/2"]),
]


def _retract(text):
    return retract_onto(parse_qset(text[len("retract:"):]))


def criterion_3():
    bad = []
    for case, ftext, q, gammas in VARIANT_SUITE:
        f = _retract(ftext)
        sig = order_type_signature(image(f))
        kernels = []
        for gtext in gammas:
            gamma = parse_ext(gtext)
            v = idempotent_variant(f, q, gamma)
            tag = f"case {case}, gamma={gtext}"
            if v.case != case:
                bad.append(f"{tag}: got case {v.case}")
            if is_idempotent(v.result).value is not True:
                bad.append(f"{tag}: g not idempotent")
            if equal(compose(v.eta, v.xi), Endo.identity()).value is not True:
                bad.append(f"{tag}: eta xi != id")
            J = v.kernel
            if not (J.lo == v.alpha and J.hi == gamma):
                bad.append(f"{tag}: kernel {J} not between ({v.alpha},{gamma}) and [{v.alpha},{gamma}]")
            if order_type_signature(image(v.result)) != sig:
                bad.append(f"{tag}: signature changed")
            kernels.append(J)
        if len(set(kernels)) != len(kernels):
            bad.append(f"case {case}: repeated kernels {kernels}")
    return report("3", not bad, "3 cases x 5 gammas: idempotent, eta xi = id, kernel bounds, "
                  "signature kept, kernels distinct" + (f"; problems: {bad}" if bad else ""))


# --- 4 ---------------------------------------------------------------------------

def criterion_4():
    bad = []
    f_a = retract_onto(parse_qset("[0,1] u {2}"))
    f_b = retract_onto(parse_qset("[0,1]"))
    runs = [("a", f_a, [dict(targets=[t]) for t in (3, Fraction(5, 2), 4, Fraction(7, 3), 10)]),
            ("b", f_b, [dict(beta=parse_ext(b), gamma=1)
                        for b in ("1/2", "1/3", "0", "-1", "1/2*sqrt(2)")])]
    for case, f, params in runs:
        images = []
        for p in params:
            lv = l_class_variant(f, **p)
            if lv.case != case:
                bad.append(f"case {case}: builder took case {lv.case}")
            if not same_kernel(lv.result, f):
                bad.append(f"case {case} {p}: kernel changed")
            if equal(compose(lv.result, lv.eta), f).value is not True:
                bad.append(f"case {case} {p}: f xi eta != f")
            images.append(image(lv.result))
        if len(set(images)) != len(images):
            bad.append(f"case {case}: images not pairwise distinct")
    return report("4", not bad, "cases (a),(b) x 5 parameters: kernels equal, images distinct, "
                  "f xi eta = f" + (f"; problems: {bad}" if bad else ""))


# --- 5 ---------------------------------------------------------------------------

def criterion_5():
    t0 = time.perf_counter()
    r = nonregular_endo(parse_qset("(0,1)"), HALF_SQRT2)
    tried, h = search_inverse(r, min_candidates=10_000, probes=200, max_pieces=4)
    dt = time.perf_counter() - t0
    e = canonical_enumeration()
    masks = [{0}, {1}, {0, 1}]
    pair_results = [cx_rigidity_probe(mask_enumeration(e, a), mask_enumeration(e, b), 8)
                    for a, b in itertools.combinations(masks, 2)]
    rigid = all(isinstance(p, Contradiction) for p in pair_results)
    ok = tried >= 10_000 and h is None and r.certificate["valid"] and dt <= 120 and rigid
    return report("5", ok, f"{tried} candidates tried, inverse found: {h is not None}, "
                  f"certificate valid: {r.certificate['valid']}, masked pairs {pair_results} ({dt:.1f}s)")


# --- 6 ---------------------------------------------------------------------------

def random_members(iv, rng, n):
    """n random rationals in a non-degenerate interval, some crowding each end."""
    a = rational_between(iv.lo, iv.hi)
    lo = rational_between(iv.lo, a) if iv.lo.is_finite else a - 10 ** 6
    hi = rational_between(a, iv.hi) if iv.hi.is_finite else a + 10 ** 6
    out = []
    for _ in range(n):
        x = lo + (hi - lo) * Fraction(rng.randrange(1, 10 ** 6), 10 ** 6)
        for _ in range(rng.choice((0, 0, 0, 3, 12))):
            x = rational_between(iv.lo, x) if rng.random() < 0.5 else rational_between(x, iv.hi)
        out.append(x)
    return out


def criterion_6():
    rng = random.Random(6)
    violations, checked = [], 0
    for k in range(500):
        f, g = automorphism(rng), automorphism(rng)
        orbs, fixed = orbital_partition(f)
        for o in orbs:
            for q in random_members(o.support, rng, 1000):
                checked += 1
                if (apply(f, q) > q) != (o.sign is Sign.UP):
                    violations.append(f"#{k}: sign fails at {q} in {o}")
        for q in probe_rationals(rng, 20):
            inside = [o for o in orbs if o.support.contains(q)]
            if len(inside) + member(fixed, q) != 1:
                violations.append(f"#{k}: {q} not in exactly one part")
            elif not inside and apply(f, q) != q:
                violations.append(f"#{k}: {q} marked fixed but moves")
        for x in probe_rationals(rng, 2):
            if not check_conjugation(f, g, x):
                violations.append(f"#{k}: conjugation fails at {x}")
        partner = compose(f, f) if k % 2 else invert(f)
        if not check_commuting_preserves(f, partner):
            violations.append(f"#{k}: commuting partner moves an orbital")
    return report("6", not violations, f"500 automorphisms: sign constancy ({checked} members), "
                  "partition, conjugation, "
                  f"commuting invariance, {len(violations)} violations"
                  + (f"; first: {violations[0]}" if violations else ""))


def criterion_6_count():
    rng = random.Random(6)
    over = []
    for k in range(500):
        f = automorphism(rng)
        automorphism(rng)
        orbs, _ = orbital_partition(f)
        if len(orbs) > len(f.pieces):
            over.append(k)
    half = Endo.affine(Fraction(1, 2), 0)
    half_orbs = len(orbital_partition(half)[0])
    ok = not over and half_orbs <= len(half.pieces)
    return report("6/count", ok, f"infinite orbitals <= pieces: {len(over)} of 500 exceed it; "
                  f"x -> x/2 has {len(half.pieces)} piece and {half_orbs} orbitals")


# --- 7 ---------------------------------------------------------------------------

def criterion_7():
    C = CxOrder(canonical_enumeration())
    bad = []
    for n in range(50):
        for i in range(n):
            a, b = (n, i), (n, i + 1)
            if compare_elems(C, a, b) >= 0 or exists_between(C, a, b):
                bad.append(f"({n},{i})")
    e = canonical_enumeration()
    probes = {}
    for A in ({0}, {1}, {0, 1}):
        found = next((cx_rigidity_probe(e, mask_enumeration(e, A), N) for N in range(2, 7)
                      if isinstance(cx_rigidity_probe(e, mask_enumeration(e, A), N), Contradiction)),
                     None)
        probes[str(sorted(A))] = found
        if found is None:
            bad.append(f"mask {sorted(A)} not refuted by depth 6")
    return report("7", not bad, f"covering pairs for n<50 ok, rigidity {probes}"
                  + (f"; problems: {bad[:5]}" if bad else ""))


# --- 8 ---------------------------------------------------------------------------

def criterion_8():
    rng = random.Random(8)
    pool = [random_set(rng) for _ in range(400)]
    pool = [X for X in pool if X]
    by_sig: dict[str, list[QSet]] = {}
    for X in pool:
        by_sig.setdefault(order_type_signature(X), []).append(X)
    groups = [g for g in by_sig.values() if len(g) > 1]
    pairs = []
    while len(pairs) < 250:
        g = rng.choice(groups)
        pairs.append(tuple(rng.sample(g, 2)))
    while len(pairs) < 500:
        pairs.append((rng.choice(pool), rng.choice(pool)))
    disagree, same = [], 0
    t0 = time.perf_counter()
    for X, Y in pairs:
        eq = order_type_signature(X) == order_type_signature(Y)
        same += eq
        r = back_and_forth(SubsetOrder(X), SubsetOrder(Y), 10)
        if (eq and not isinstance(r, PartialIso)) or (not eq and not isinstance(r, Obstruction)):
            disagree.append((str(X), str(Y), type(r).__name__))
    dt = time.perf_counter() - t0
    return report("8", not disagree, f"500 pairs ({same} equal signatures), "
                  f"{len(disagree)} disagreements ({dt:.1f}s)"
                  + (f"; first: {disagree[0]}" if disagree else ""))


# --- pytest entry points -------------------------------------------------------------

def test_criterion_1():
    assert criterion_1()


def test_criterion_2():
    assert criterion_2()


def test_criterion_3():
    assert criterion_3()


def test_criterion_4():
    assert criterion_4()


def test_criterion_5():
    assert criterion_5()


def test_criterion_6():
    assert criterion_6()


@pytest.mark.xfail(strict=True, reason="a single affine piece x -> x/2 already has two "
                   "infinite orbitals; the sharp bound is pieces + 1 (see test_orbitals)")
def test_criterion_6_orbital_count_at_most_pieces():
    assert criterion_6_count()


def test_criterion_7():
    assert criterion_7()


def test_criterion_8():
    assert criterion_8()


if __name__ == "__main__":
    checks = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
              criterion_6, criterion_7, criterion_8]
    passed = all([c() for c in checks])
    criterion_6_count()  # expected to fail, see the xfail test above
    sys.exit(0 if passed else 1)
