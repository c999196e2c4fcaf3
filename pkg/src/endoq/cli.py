"""Command-line interface.

Exit status: 0 on success, 1 for a domain error (for instance a closed gap),
2 for malformed input or usage.
"""
from __future__ import annotations

import argparse
import random
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import constructions as C
from .endo import Endo, equal, image, is_idempotent, parse_endo
from .errors import ClosedGap, EmptySet, EndoQError, ParseError
from .exact import parse_ext
from .green import green_classify
from .lazyorder import (CxOrder, FiniteChain, QOrder, SubsetOrder,
                        back_and_forth, canonical_enumeration, compare_elems,
                        cx_rigidity_probe, exists_between, mask_enumeration)
from .orbitals import orbital_partition
from .qset import order_type_signature, parse_qset, random_qset


def _endo_arg(text: str) -> Endo:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    if text.startswith("retract:"):
        return C.retract_onto(parse_qset(text[len("retract:"):]))
    return parse_endo(text)


def _rational(text: str) -> Fraction:
    x = parse_ext(text)
    if not x.is_rational:
        raise ParseError(f"expected a rational, got {text!r}")
    return x.value


_CODE_RE = re.compile(r"^\(\s*(\d+)\s*,\s*(\d+)\s*\)$")


def _cx_code(text: str) -> tuple[int, int]:
    m = _CODE_RE.match(text.strip())
    if not m:
        raise ParseError(f"bad element code {text!r}, expected (n,i)")
    return int(m.group(1)), int(m.group(2))


def _mask(text: str) -> set[int]:
    text = text.strip()
    if text in ("", "{}"):
        return set()
    try:
        return {int(t) for t in text.strip("{}").split(",")}
    except ValueError as exc:
        raise ParseError(f"bad mask {text!r}") from exc


def _order(text: str):
    t = text.strip()
    if t == "Q":
        return QOrder()
    if t.startswith("chain:"):
        return FiniteChain(int(t[6:]))
    if t == "cx" or t.startswith("cx:"):
        return CxOrder(mask_enumeration(canonical_enumeration(), _mask(t[3:])))
    return SubsetOrder(parse_qset(t))


def _print_endo(f: Endo, out) -> None:
    print(f, file=out)


# --- subcommands -------------------------------------------------------------------

def cmd_check_retract(a, out) -> int:
    verdict = C.retract_image_criterion(parse_qset(a.X))
    print(verdict, file=out)
    return 0 if verdict else 1


def cmd_build_retract(a, out) -> int:
    _print_endo(C.retract_onto(parse_qset(a.X)), out)
    return 0


def cmd_analyze(a, out) -> int:
    for row in C.analyze_idempotent(_endo_arg(a.F)):
        print(row, file=out)
    return 0


def _print_variant(v, out, label: str) -> None:
    print(f"case: {v.case}", file=out)
    print(f"alpha: {v.alpha}  beta: {v.beta}  gamma: {v.gamma}"
          + (f"  delta: {v.delta}" if v.delta is not None else ""), file=out)
    print(f"kernel class: {v.kernel}", file=out)
    print(f"{label}:", file=out)
    _print_endo(v.result, out)


def cmd_variant(a, out) -> int:
    v = C.idempotent_variant(_endo_arg(a.F), _rational(a.q), parse_ext(a.gamma))
    _print_variant(v, out, "g")
    return 0


def cmd_rvariant(a, out) -> int:
    v = C.r_class_variant(_endo_arg(a.F), _rational(a.q), parse_ext(a.gamma))
    _print_variant(v, out, "h")
    return 0


def cmd_lvariant(a, out) -> int:
    f = _endo_arg(a.F)
    if a.targets is not None:
        lv = C.l_class_variant(f, targets=[_rational(t) for t in a.targets.split(",")])
    else:
        lv = C.l_class_variant(f, beta=None if a.beta is None else parse_ext(a.beta),
                               gamma=None if a.gamma is None else _rational(a.gamma))
    print(f"case: {lv.case}", file=out)
    print(f"image: {image(lv.result)}", file=out)
    print("h:", file=out)
    _print_endo(lv.result, out)
    return 0


def cmd_nonregular(a, out) -> int:
    r = C.nonregular_endo(parse_qset(a.X), parse_ext(a.alpha))
    print(f"delta: {r.delta}", file=out)
    print(f"image: {image(r.f)}", file=out)
    print("certificate: " + ("valid" if r.certificate["valid"] else "INVALID"), file=out)
    print("f:", file=out)
    _print_endo(r.f, out)
    if a.search:
        tried, h = C.search_inverse(r)
        print(f"search: {tried} candidates, "
              + ("none satisfies f h f = f" if h is None else f"found h = {h!r}"), file=out)
    return 0


def cmd_green(a, out) -> int:
    print(green_classify(a.chain).render(), file=out)
    return 0


def cmd_orbitals(a, out) -> int:
    orbs, fixed = orbital_partition(_endo_arg(a.F))
    for o in orbs:
        print(o, file=out)
    print(f"fixed: {fixed}", file=out)
    return 0


def cmd_cx(a, out) -> int:
    e = canonical_enumeration()
    if a.action == "rigidity":
        if len(a.args) != 3:
            raise ParseError("usage: cx rigidity MASK1 MASK2 N")
        e1 = mask_enumeration(e, _mask(a.args[0]))
        e2 = mask_enumeration(e, _mask(a.args[1]))
        r = cx_rigidity_probe(e1, e2, int(a.args[2]))
        print(f"Contradiction({r.m},{r.n})" if hasattr(r, "m") else "ForcedMapOk", file=out)
        return 0
    if len(a.args) != 2:
        raise ParseError(f"usage: cx {a.action} (n,i) (m,j)")
    O = CxOrder(e)
    x, y = _cx_code(a.args[0]), _cx_code(a.args[1])
    if a.action == "compare":
        print(compare_elems(O, x, y).name.capitalize(), file=out)
    else:
        print(str(exists_between(O, x, y)).lower(), file=out)
    return 0


def cmd_sig(a, out) -> int:
    print(order_type_signature(parse_qset(a.X)), file=out)
    return 0


def cmd_bnf(a, out) -> int:
    depth = a.depth_pos if a.depth_pos is not None else a.depth
    r = back_and_forth(_order(a.A), _order(a.B), depth)
    name = type(r).__name__
    if name == "PartialIso":
        print(f"PartialIso size {len(r)}", file=out)
    elif name == "Obstruction":
        print(f"Obstruction: no match for {r.element} of {'AB'[r.side]}", file=out)
    else:
        print(f"BudgetExhausted after {r.nodes} nodes", file=out)
    return 0


def cmd_equal(a, out) -> int:
    print(equal(_endo_arg(a.F), _endo_arg(a.G), a.depth), file=out)
    return 0


def cmd_roundtrip(a, out) -> int:
    """Random sets: the criterion agrees with the builder, built maps are retracts onto X."""
    rng = random.Random(a.seed)
    bad = 0
    for _ in range(a.trials):
        X = random_qset(rng)
        ok = bool(C.retract_image_criterion(X))
        try:
            f = C.retract_onto(X)
        except (ClosedGap, EmptySet):
            if ok:
                bad += 1
                print(f"criterion OK but build failed: {X}", file=out)
            continue
        if not ok or is_idempotent(f, a.depth).value is not True or image(f) != X:
            bad += 1
            print(f"mismatch: {X}", file=out)
    print(f"trials: {a.trials}  failures: {bad}", file=out)
    return 0 if bad == 0 else 1


def _formatter(prog: str) -> argparse.HelpFormatter:
    # fixed width: help and usage text must not depend on the terminal
    return argparse.HelpFormatter(prog, width=88)


def build_parser() -> argparse.ArgumentParser:
    def flags(default: bool) -> argparse.ArgumentParser:
        # subcommands suppress defaults so a flag given before the subcommand survives
        f = argparse.ArgumentParser(add_help=False)
        f.add_argument("--depth", type=int, default=10 if default else argparse.SUPPRESS,
                       help="probe / back-and-forth depth")
        f.add_argument("--seed", type=int, default=0 if default else argparse.SUPPRESS,
                       help="seed for randomized subcommands")
        return f

    common = flags(False)
    p = argparse.ArgumentParser(prog="endoq", parents=[flags(True)], formatter_class=_formatter,
                                description="Endomorphisms of the rationals.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        s = sub.add_parser(name, parents=[common], help=help_text, formatter_class=_formatter)
        s.set_defaults(fn=fn)
        return s

    add("check-retract", cmd_check_retract, "is X the image of an idempotent").add_argument("X")
    add("build-retract", cmd_build_retract, "idempotent with image X").add_argument("X")
    add("analyze", cmd_analyze, "gap attribution of an idempotent").add_argument("F")
    for name, fn in (("variant", cmd_variant), ("rvariant", cmd_rvariant)):
        s = add(name, fn, "stretch the kernel class of q up to gamma")
        s.add_argument("F")
        s.add_argument("q")
        s.add_argument("gamma")
    s = add("lvariant", cmd_lvariant, "same kernel, different image")
    s.add_argument("F")
    s.add_argument("--targets", help="comma-separated descending rationals")
    s.add_argument("--beta")
    s.add_argument("--gamma")
    s = add("nonregular", cmd_nonregular, "non-regular map with image like X")
    s.add_argument("X")
    s.add_argument("alpha")
    s.add_argument("--search", action="store_true", help="run the inverse candidate search")
    s = add("green", cmd_green, "Green's relations on a finite chain")
    s.add_argument("--chain", type=int, required=True)
    add("orbitals", cmd_orbitals, "orbitals of an automorphism").add_argument("F")
    s = add("cx", cmd_cx, "queries on the rigid orders C_x")
    s.add_argument("action", choices=("compare", "between", "rigidity"))
    s.add_argument("args", nargs="*")
    add("sig", cmd_sig, "order-type signature of X").add_argument("X")
    s = add("bnf", cmd_bnf, "back-and-forth between two orders")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("depth_pos", nargs="?", type=int, metavar="depth")
    s = add("roundtrip", cmd_roundtrip, "random retract round-trip check")
    s.add_argument("--trials", type=int, default=100)
    s = add("equal", cmd_equal, "pointwise equality of two maps")
    s.add_argument("F")
    s.add_argument("G")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ClosedGap as exc:
        print(f"CLOSED GAP {exc.witness}", file=out)
        return 1
    except EndoQError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
