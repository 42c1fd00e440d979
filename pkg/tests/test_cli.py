import json

import pytest

from glblocks import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_partition_core(capsys):
    code, out = run(["partition", "core", "[6,5,5,2,1]", "--d", "3"], capsys)
    assert code == 0 and out.strip() == "[3, 1]"


def test_partition_quotient_json(capsys):
    code, out = run(["partition", "quotient", "[6,5,5,2,1]", "--d", "3",
                     "--output", "json"], capsys)
    assert code == 0
    assert json.loads(out) == {"quotient": [[2], [1], [1, 1]]}


def test_partition_paths(capsys):
    code, out = run(["partition", "paths", "[2,2]", "--d", "2",
                     "--output", "json"], capsys)
    payload = json.loads(out)
    assert payload["count"] == 2 and payload["core"] == []


def test_partition_abacus_empty(capsys):
    code, out = run(["partition", "abacus", "[]", "--d", "2"], capsys)
    assert code == 0
    art = out.splitlines()
    assert any("O" in line for line in art)  # beads all packed at the bottom


def test_partition_parse_error(capsys):
    with pytest.raises(SystemExit) as err:
        run(["partition", "core", "[2,", "--d", "2"], capsys)
    assert "position" in str(err.value)


def test_classes_json_deterministic(capsys):
    code1, out1 = run(["classes", "--n", "3", "--q", "2", "--d", "2",
                       "--output", "json"], capsys)
    code2, out2 = run(["classes", "--n", "3", "--q", "2", "--d", "2",
                       "--output", "json"], capsys)
    assert code1 == code2 == 0 and out1 == out2
    assert len(json.loads(out1)["classes"]) == 6


def test_table_csv(capsys):
    code, out = run(["table", "--n", "2", "--q", "2", "--output", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[0].startswith("nu,")


def test_blocks_command(capsys):
    code, out = run(["blocks", "--n", "3", "--q", "3", "--d", "2",
                     "--output", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "equal"
    assert payload["f_number"] == 3


def test_blocks_d1(capsys):
    code, out = run(["blocks", "--n", "3", "--q", "2", "--d", "1",
                     "--output", "json"], capsys)
    assert code == 0
    assert len(json.loads(out)["computed_blocks"]) == 1


def test_blocks_d_above_n(capsys):
    code, out = run(["blocks", "--n", "3", "--q", "2", "--d", "5",
                     "--output", "json"], capsys)
    assert code == 0
    assert all(len(b) == 1 for b in json.loads(out)["computed_blocks"])


def test_verify_lemma49(capsys):
    code, out = run(["verify", "lemma49", "--k", "6", "--F", "9",
                     "--output", "json"], capsys)
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_verify_thm43(capsys):
    code, out = run(["verify", "thm43", "--n", "3", "--q", "3", "--d", "2",
                     "--output", "json"], capsys)
    assert code == 0 and json.loads(out)["pass"] is True


def test_verify_thm45(capsys):
    code, out = run(["verify", "thm45", "--n", "2", "--q", "3",
                     "--output", "json"], capsys)
    assert code == 0
    details = json.loads(out)["details"]
    assert details["single_unipotent_block"] and details["all_nonzero"]


def test_verify_thm46_and_smt(capsys):
    code, out = run(["verify", "thm46", "--n", "3", "--q", "3", "--d", "2",
                     "--output", "json"], capsys)
    assert code == 0
    assert json.loads(out)["details"]["pair_count"] == 2
    code, out = run(["verify", "smt55", "--n", "3", "--q", "3", "--d", "2",
                     "--output", "json"], capsys)
    assert code == 0


def test_verify_batch_examples(capsys):
    # the documented batch invocations all pass and exit zero
    for argv in [
        ["verify", "lemma49", "--k", "6", "--F", "9"],
        ["verify", "thm43", "--n", "4", "--q", "3", "--d", "2"],
        ["verify", "thm44", "--n", "4", "--q", "3", "--d", "2"],
        ["verify", "smt55", "--n", "4", "--q", "3", "--d", "2"],
    ]:
        code, _ = run(argv + ["--output", "json"], capsys)
        assert code == 0, argv


def test_verify_prop32(capsys):
    code, out = run(["verify", "prop32", "--n", "2", "--q", "2", "--d", "2",
                     "--output", "json"], capsys)
    assert code == 0
    details = json.loads(out)["details"]
    assert set(details) == {"divisible", "exact"}


def test_verify_thm410chain(capsys):
    code, out = run(["verify", "thm410chain", "--n", "4", "--d", "3",
                     "--output", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True


def test_matrix_command(capsys):
    code, out = run(["matrix", "--n", "3", "--q", "3", "--d", "2",
                     "--domain", "d_regular", "--output", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4  # header + one row per partition of 3
    code, out = run(["matrix", "--n", "3", "--q", "3", "--d", "2",
                     "--output", "json"], capsys)
    payload = json.loads(out)
    assert payload["matrix"]["[3]|[1, 1, 1]"] == "3/8"


def test_oracle_command(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("GLBLOCKS_CACHE_DIR", str(tmp_path))
    code, out = run(["oracle", "--n", "2", "--q", "2", "--output", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["order"] == 6
    assert (tmp_path / "oracle_2_2.json").exists()


def test_verify_failure_exits_nonzero(capsys, monkeypatch):
    monkeypatch.setitem(cli.VERIFIERS, "lemma49",
                        lambda args: (False, {"forced": True}))
    code, out = run(["verify", "lemma49", "--output", "json"], capsys)
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_verify_hypothesis_violation_reported(capsys):
    # too few degree-2 polynomials over F_2 for the closed form
    code, out = run(["verify", "thm46", "--n", "3", "--q", "2", "--d", "2",
                     "--output", "json"], capsys)
    assert code == 2
    assert "hypothesis_error" in json.loads(out)


def test_out_path(tmp_path, capsys):
    target = tmp_path / "core.json"
    code, _ = run(["partition", "core", "[4]", "--d", "2",
                   "--output", "json", "--out-path", str(target)], capsys)
    assert code == 0
    assert json.loads(target.read_text()) == {"core": []}
