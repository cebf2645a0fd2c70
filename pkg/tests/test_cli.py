import json

import pytest

from spacecover.cli import EXIT_ERROR, EXIT_NO, EXIT_YES, main
from spacecover.fileio import parse_file

TRIANGLE_YES = """SCPM v1
mode primal
n 3 m 3 k 2
edge 0 1
edge 1 2
edge 0 2
pert 0
terminals 2
"""


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_solve_yes_exit_zero(tmp_path, capsys):
    inst = write(tmp_path / "tri.scpm", TRIANGLE_YES)
    assert main(["solve", inst]) == EXIT_YES
    out = capsys.readouterr().out
    assert out.startswith("yes F=")


def test_solve_no_exit_one(tmp_path, capsys):
    inst = write(tmp_path / "tri.scpm", TRIANGLE_YES.replace("k 2", "k 1"))
    assert main(["solve", inst]) == EXIT_NO
    assert capsys.readouterr().out.strip() == "no"


def test_solve_malformed_exit_two(tmp_path, capsys):
    inst = write(tmp_path / "bad.scpm", TRIANGLE_YES.replace("pert 0", "pert x"))
    assert main(["solve", inst]) == EXIT_ERROR
    assert main(["solve", str(tmp_path / "missing.scpm")]) == EXIT_ERROR
    capsys.readouterr()


def test_solve_json_report_checks(tmp_path, capsys):
    inst = write(tmp_path / "tri.scpm", TRIANGLE_YES)
    assert main(["solve", inst, "--json"]) == EXIT_YES
    payload = json.loads(capsys.readouterr().out)
    assert payload["answer"] == "yes"
    assert len(payload["f"]) == 2
    report = write(tmp_path / "tri.report.json", json.dumps(payload))
    assert main(["check", inst, report]) == EXIT_YES
    capsys.readouterr()


def test_check_tampered_witness_exit_one(tmp_path, capsys):
    inst = write(tmp_path / "tri.scpm", TRIANGLE_YES)
    main(["solve", inst, "--json"])
    payload = json.loads(capsys.readouterr().out)
    payload["f"] = payload["f"][:1]
    report = write(tmp_path / "tampered.json", json.dumps(payload))
    assert main(["check", inst, report]) == EXIT_NO
    capsys.readouterr()


def test_check_mode_mismatch_exit_two(tmp_path, capsys):
    inst = write(tmp_path / "tri.scpm", TRIANGLE_YES)
    main(["solve", inst, "--json"])
    payload = json.loads(capsys.readouterr().out)
    payload["mode"] = "dual"
    report = write(tmp_path / "mismatch.json", json.dumps(payload))
    assert main(["check", inst, report]) == EXIT_ERROR
    capsys.readouterr()


def test_check_instance_only(tmp_path, capsys):
    inst = write(tmp_path / "tri.scpm", TRIANGLE_YES)
    assert main(["check", inst]) == EXIT_YES
    assert "ok primal" in capsys.readouterr().out


def test_gen_is_deterministic(tmp_path, capsys):
    a = str(tmp_path / "a.scpm")
    b = str(tmp_path / "b.scpm")
    for out in (a, b):
        assert main(["gen", "random", out, "--seed", "9", "--n", "5",
                     "--m", "7", "--k", "2", "--r", "1"]) == EXIT_YES
    capsys.readouterr()
    assert open(a, "rb").read() == open(b, "rb").read()


def test_gen_random_r_zero_all_zero_p(tmp_path, capsys):
    out = str(tmp_path / "z.scpm")
    assert main(["gen", "random", out, "--seed", "1", "--r", "0"]) == EXIT_YES
    capsys.readouterr()
    inst = parse_file(out)
    assert all(bits == 0 for bits in inst.p.row_bits)


def test_gen_3dm_q1_shape(tmp_path, capsys):
    out = str(tmp_path / "t.scpm")
    assert main(["gen", "3dm", out, "--seed", "2", "--q", "1",
                 "--triples", "1"]) == EXIT_YES
    capsys.readouterr()
    inst = parse_file(out)
    assert len(inst.terminals) == 2
    assert inst.r <= 2
    assert inst.k == 3


def test_gen_mc_solvable_roundtrip(tmp_path, capsys):
    out = str(tmp_path / "mc.scpm")
    assert main(["gen", "mc", out, "--seed", "4", "--parts", "2",
                 "--part-size", "2", "--edge-prob", "1.0"]) == EXIT_YES
    capsys.readouterr()
    assert main(["solve", out, "--oracle"]) == EXIT_YES
    capsys.readouterr()


def test_bench_rows_and_agreement(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for i, seed in enumerate(("11", "12", "13")):
        assert main(["gen", "random", str(corpus / ("i%d.scpm" % i)),
                     "--seed", seed, "--n", "5", "--m", "7", "--k", "2",
                     "--r", "1"]) == EXIT_YES
    capsys.readouterr()
    assert main(["bench", str(corpus)]) == EXIT_YES
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("file,mode,")
    assert len(lines) == 4
    for row in lines[1:]:
        assert ",yes," in row or row.split(",")[8] == "yes"


def test_bench_empty_dir_header_only(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["bench", str(empty)]) == EXIT_YES
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1
