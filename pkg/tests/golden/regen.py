"""Rewrite the golden files from the current CLI output.

    python3 tests/golden/regen.py

Review the diff before committing: these files are the expected output.
"""
import contextlib
import io
import pathlib
import shlex

from endoq.cli import main

CASES = {
    "check_retract_closed_interval": 'check-retract "[0,1]"',
    "check_retract_open_interval": 'check-retract "(0,1)"',
    "check_retract_line": "check-retract Q",
    "check_retract_surd_gap": 'check-retract "(-inf,sqrt(2)] u [sqrt(3),inf)"',
    "build_retract_clamp": 'build-retract "[0,1]"',
    "build_retract_half_open_gap": 'build-retract "(-inf,0) u [1,inf)"',
    "build_retract_closed_gap": 'build-retract "(0,1)"',
    "build_retract_empty": 'build-retract "{}"',
    "analyze_clamp": 'analyze "retract:[0,1]"',
    "analyze_identity": "analyze id",
    "analyze_surd_gap": 'analyze "retract:(-inf,0] u [sqrt(2),inf)"',
    "variant_case2": 'variant "retract:[0,1]" 0 1/2',
    "variant_case1": 'variant "retract:(-inf,0] u [sqrt(2),inf)" 0 "sqrt(3)"',
    "variant_case3": 'variant "retract:(-inf,-1] u [0,inf)" -1 0',
    "variant_max_element": 'variant "retract:[0,1]" 1 2',
    "rvariant_half": 'rvariant "retract:[0,1]" 0 1/2',
    "rvariant_third": 'rvariant "retract:[0,1]" 0 1/3',
    "rvariant_identity": "rvariant id 0 1",
    "lvariant_beta_half": 'lvariant "retract:[0,1]" --beta 1/2 --gamma 1',
    "lvariant_beta_third": 'lvariant "retract:[0,1]" --beta 1/3 --gamma 1',
    "lvariant_targets": 'lvariant "retract:[0,1] u {2}" --targets 3',
    "nonregular_unit": 'nonregular "(0,1)" "1/2*sqrt(2)"',
    "nonregular_two_parts": 'nonregular "(0,1) u (2,3)" "1/2*sqrt(2)"',
    "nonregular_rational_split": 'nonregular "[0,1]" 1/2',
    "green_chain1": "green --chain 1",
    "green_chain2": "green --chain 2",
    "green_chain3": "green --chain 3",
    "green_too_large": "green --chain 9",
    "orbitals_identity": "orbitals id",
    "orbitals_translation": 'orbitals "affine 1 1"',
    "orbitals_double": 'orbitals "piece on (-inf,0]: id; piece on (0,inf): affine 2 0"',
    "orbitals_three_pieces": 'orbitals "piece on (-inf,0]: id; piece on (0,1]: affine 2 0; piece on (1,inf): affine 1 1"',
    "orbitals_not_bijective": 'orbitals "retract:[0,1]"',
    "cx_compare_same_block": 'cx compare "(1,0)" "(1,1)"',
    "cx_compare_blocks": 'cx compare "(2,0)" "(1,0)"',
    "cx_between_covering": 'cx between "(1,0)" "(1,1)"',
    "cx_between_blocks": 'cx between "(0,0)" "(1,0)"',
    "cx_rigidity_same": "cx rigidity {} {} 10",
    "cx_rigidity_mask1": "cx rigidity {} 1 4",
    "cx_rigidity_mask0": "cx rigidity {} 0 2",
    "sig_line": "sig Q",
    "sig_closed": 'sig "[0,1]"',
    "sig_two_open": 'sig "(0,1) u (2,3)"',
    "sig_two_points": 'sig "{0} u {1}"',
    "bnf_line_interval": 'bnf Q "(0,1)" 10',
    "bnf_chains": "bnf chain:2 chain:3 3",
    "bnf_closed_intervals": 'bnf "[0,1]" "[2,5]" 10',
    "roundtrip_seed1": "roundtrip --trials 40 --seed 1",
    "equal_identity_translation": 'equal id "affine 1 1"',
    "usage_missing_command": "",
    "parse_error": 'sig "(0,1"',
}


def run(cmdline):
    """Exit code, stdout, and stderr with each line prefixed by '! '."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stderr(err):
        code = main(shlex.split(cmdline), out=out)
    errs = "".join(f"! {line}\n" for line in err.getvalue().splitlines())
    return code, out.getvalue() + errs


def render(cmdline, code, text):
    return f"$ endoq {cmdline}".rstrip() + f"\nexit {code}\n{text}"


if __name__ == "__main__":
    here = pathlib.Path(__file__).parent
    for name, cmdline in CASES.items():
        code, text = run(cmdline)
        (here / f"{name}.txt").write_text(render(cmdline, code, text), encoding="utf-8")
