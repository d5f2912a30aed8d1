import json

import pytest

from tangleweb.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def word_file(tmp_path, text):
    f = tmp_path / "word.tangle"
    f.write_text(text)
    return str(f)


def test_eval_circle(tmp_path, capsys):
    f = word_file(tmp_path, "tangle 0 -> 0 / cup / cap")
    code, out = run(capsys, "eval", "--case", "dim7", f)
    assert code == 0 and out.strip() == "7"
    code, out = run(capsys, "eval", "--case", "kap", f)
    assert code == 0 and out.strip() == "-1"


def test_eval_empty_word(tmp_path, capsys):
    f = word_file(tmp_path, "tangle 0 -> 0")
    code, out = run(capsys, "eval", "--case", "dim3", f)
    assert code == 0 and out.strip() == "1"


def test_eval_parse_error_exit_2(tmp_path, capsys):
    f = word_file(tmp_path, "tangle 2 -> 2 / frobnicate")
    code = main(["eval", "--case", "dim3", f])
    assert code == 2


def test_usage_error_exit_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--case", "dim9", "x"])
    assert exc.value.code == 2


def test_normalize_json(tmp_path, capsys):
    f = word_file(tmp_path, "tangle 1 -> 1 / w / m")
    code, out = run(capsys, "--json", "normalize", "--case", "dim7", f)
    assert code == 0
    obj = json.loads(out)
    assert obj["case"] == "dim7"
    assert len(obj["terms"]) == 1
    assert obj["terms"][0]["coeff"] == "-6"


def test_normalize_trace(tmp_path, capsys):
    f = word_file(tmp_path, "tangle 2 -> 2 / x / x")
    code, out = run(capsys, "--json", "--trace", "normalize", "--case", "dim3", f)
    obj = json.loads(out)
    assert code == 0 and "trace" in obj and obj["trace"]


def test_basis_counts(capsys):
    code, out = run(capsys, "--json", "basis", "--case", "dim3", "3", "3")
    obj = json.loads(out)
    assert code == 0 and obj["count"] == 15
    code, out = run(capsys, "--json", "basis", "--case", "dim7", "2", "2")
    obj = json.loads(out)
    assert code == 0 and obj["count"] == 4


def test_dims_agreement(capsys):
    code, out = run(capsys, "--json", "dims", "--case", "dim3", "6")
    obj = json.loads(out)
    assert code == 0
    assert [r["riordan"] for r in obj["rows"]] == [1, 0, 1, 1, 3, 6, 15]
    assert all(r["invariant_dim"] == r["riordan"] for r in obj["rows"])


def test_budget_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TANGLEWEB_BUDGET", "4")
    code, out = run(capsys, "--json", "basis", "--case", "dim7", "2", "2")
    obj = json.loads(out)
    assert code == 0 and obj["count"] == 4
    monkeypatch.setenv("TANGLEWEB_BUDGET", "3")
    from tangleweb.basis import BudgetError
    with pytest.raises(BudgetError):
        run(capsys, "--json", "basis", "--case", "dim7", "2", "2")


def test_centralizer_table(capsys):
    code, out = run(capsys, "--json", "centralizer", "--case", "kap", "2")
    obj = json.loads(out)
    assert code == 0
    assert obj["basis_size"] == 3
    assert obj["identity_ok"] and obj["associative_ok"]


def test_oracle_command(capsys):
    code, out = run(capsys, "--json", "oracle", "--case", "kap", "4")
    obj = json.loads(out)
    assert code == 0
    assert obj["derivation_dim"] == 5
    assert [r["invariant_dim"] for r in obj["invariants"]] == [1, 0, 1, 1, 3]


@pytest.mark.parametrize("case", ["dim3", "kap", "dim7"])
def test_verify_all_cases(capsys, case):
    code, out = run(capsys, "verify", "--case", case)
    assert code == 0
    assert "FAIL" not in out and "ok" in out
