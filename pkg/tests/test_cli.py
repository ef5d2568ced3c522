import csv
import json
import subprocess
import sys

import pytest

from copychains.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_gen_D_snapshot(capsys, tmp_path):
    code, rep = run(capsys, "gen", "D", "--points", "12", "--out", str(tmp_path))
    assert code == 0
    poset = rep["snapshot"]["poset"]
    assert len(poset["elements"]) == 12
    assert all(eval_frac(a) < eval_frac(b) for a, b in poset["lt"])
    assert {p.name for p in tmp_path.iterdir()} == {"structure.json", "hasse.dot", "replay.json"}


def eval_frac(s):
    from fractions import Fraction

    return Fraction(s)


def test_gen_C3_classes(capsys):
    code, rep = run(capsys, "gen", "C_3", "--sample", "6")
    els = rep["snapshot"]["poset"]["elements"]
    lt = {tuple(p) for p in rep["snapshot"]["poset"]["lt"]}
    assert code == 0 and len(els) == 6
    for a in els:
        cls = [b for b in els if (a, b) not in lt and (b, a) not in lt]
        assert len(cls) == 3


def test_gen_A_omega_is_empty_relation(capsys):
    code, rep = run(capsys, "gen", "A_omega", "--sample", "5")
    assert code == 0 and rep["snapshot"]["poset"]["lt"] == []


def test_verify_exit_codes(capsys):
    code, rep = run(capsys, "verify", "D")
    assert code == 0 and rep["status"] == "PASS" and rep["suites"] == {}
    code, rep = run(capsys, "verify", "C_2", "--p3", "--instances", "10")
    assert code == 1 and rep["suites"]["p-axioms"]["axioms"]["P3"]["status"] == "FAIL"
    code, rep = run(capsys, "verify", "D", "--level", "2", "--budget", "50")
    assert code == 3 and rep["status"] == "INCONCLUSIVE"


def test_verify_random_level_two(capsys):
    code, rep = run(capsys, "verify", "D", "--level", "2")
    assert code == 0
    r = rep["suites"]["random"]
    assert r["status"] == "PASS"


def test_chain_reports(capsys, tmp_path):
    code, rep = run(capsys, "chain", "D", "--M", "0:3,inf:2", "--out", str(tmp_path))
    assert code == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"cuts.csv", "embedding.csv", "lumps.json", "probes.json", "report.json"} <= names
    rows = list(csv.DictReader(open(tmp_path / "cuts.csv")))
    assert {r["row"] for r in rows if r["row"]} >= {"1", "2", "4"}
    assert rep["cut_tables"]["potential_insertions"] == []


def test_chain_on_C_omega_and_Q(capsys):
    code, rep = run(capsys, "chain", "C_omega", "--M", "inf:2")
    assert code == 0
    code, rep = run(capsys, "chain", "Q", "--M", "")
    assert code == 0


def test_usage_errors(capsys):
    assert main(["chain", "A_omega", "--M", "inf:2"]) == 2
    assert main(["chain", "D", "--M", "0:2,1:2,2:2", "--modulus", "3"]) == 2
    assert main(["gen", "E_7"]) == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("structure = C_3\nsample = 4\n# comment\n")
    code, rep = run(capsys, "gen", "--config", str(cfg))
    assert code == 0 and len(rep["snapshot"]["poset"]["elements"]) == 4
    code, rep = run(capsys, "gen", "--config", str(cfg), "--sample", "6")
    assert len(rep["snapshot"]["poset"]["elements"]) == 6


def test_reports_are_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        subprocess.run(
            [sys.executable, "-m", "copychains", "verify", "D", "--suites", "copy,uh-oracle", "--uh-max", "4", "--out", str(d)],
            check=True, capture_output=True,
        )
        outs.append((d / "report.json").read_bytes())
    assert outs[0] == outs[1]
