import io
import pathlib
import subprocess
import sys

import pytest

from endoq.cli import main
from endoq.endo import parse_endo
from endoq.qset import parse_qset

sys.path.insert(0, str(pathlib.Path(__file__).parent / "golden"))
from regen import CASES, render, run  # noqa: E402

GOLDEN = pathlib.Path(__file__).parent / "golden"


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    expected = (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")
    code, text = run(CASES[name])
    assert render(CASES[name], code, text) == expected


def test_every_golden_file_has_a_case():
    names = {p.stem for p in GOLDEN.glob("*.txt")}
    assert names == set(CASES)


def test_console_script_matches_in_process():
    args = ["green", "--chain", "3"]
    proc = subprocess.run([sys.executable, "-m", "endoq.cli", *args], capture_output=True, text=True)
    out = io.StringIO()
    assert main(args, out=out) == proc.returncode == 0
    assert proc.stdout == out.getvalue()


def test_output_is_stable_across_runs():
    args = ["nonregular", "(0,1)", "1/2*sqrt(2)"]
    runs = [subprocess.run([sys.executable, "-m", "endoq.cli", *args], capture_output=True).stdout
            for _ in range(2)]
    assert runs[0] == runs[1]


def test_printed_maps_reparse():
    out = io.StringIO()
    assert main(["build-retract", "(-inf,0) u [1,inf)"], out=out) == 0
    f = parse_endo(out.getvalue())
    assert str(f) == out.getvalue().strip()


def test_printed_sets_reparse():
    out = io.StringIO()
    main(["lvariant", "retract:[0,1]", "--beta", "1/2"], out=out)
    line = next(l for l in out.getvalue().splitlines() if l.startswith("image: "))
    X = parse_qset(line[len("image: "):])
    assert str(X) == line[len("image: "):]


def test_endo_from_file(tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("piece on (-inf,0]: id\npiece on (0,inf): affine 2 0\n", encoding="utf-8")
    out = io.StringIO()
    assert main(["orbitals", f"@{path}"], out=out) == 0
    assert out.getvalue() == "(0,inf) up\nfixed: (-inf,0]\n"


def test_depth_flag_before_and_after_subcommand():
    a, b = io.StringIO(), io.StringIO()
    main(["--depth", "4", "bnf", "Q", "(0,1)"], out=a)
    main(["bnf", "Q", "(0,1)", "--depth", "4"], out=b)
    assert a.getvalue() == b.getvalue() == "PartialIso size 8\n"


def test_roundtrip_passes_for_several_seeds():
    outs = []
    for seed in ("1", "2"):
        o = io.StringIO()
        assert main(["roundtrip", "--trials", "30", "--seed", seed], out=o) == 0
        outs.append(o.getvalue())
    assert outs[0] == outs[1] == "trials: 30  failures: 0\n"
