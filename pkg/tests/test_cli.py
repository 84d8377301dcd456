"""The writ command line: output bytes, exit codes, flag handling."""

import json

import pytest

from writ.cli import main

REC3 = "rec[Nat] 0 (fn n:Nat => fn p:Nat => succ p) 3"
FF2 = "fn f:Nat->Nat => f (f 2)"
FOLD2 = "fold[Nat] 0 (fn n:Nat => fn p:Nat => succ p) [7,7]"


@pytest.fixture
def wt(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text + "\n", encoding="utf-8")
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_output_bytes(wt, capsys):
    code, out, _ = run(capsys, "eval", wt("rec3.wt", REC3))
    assert code == 0
    assert out == '{"value":"3","steps":10}\n'


def test_modulus_output_bytes(wt, capsys):
    code, out, _ = run(capsys, "modulus", wt("ff2.wt", FF2), "--oracle", "identity")
    assert code == 0
    assert out == '{"phi":3,"support":[2,2],"value":2}\n'


def test_check(wt, capsys):
    code, out, _ = run(capsys, "check", wt("ff2.wt", FF2))
    assert code == 0
    assert out == '{"type":"(Nat->Nat)->Nat"}\n'


def test_check_text_mode(wt, capsys):
    code, out, _ = run(capsys, "check", wt("ff2.wt", FF2), "--text")
    assert code == 0
    assert out == "(Nat->Nat)->Nat\n"


def test_eval_with_oracle_logs_queries(wt, capsys):
    path = wt("applied.wt", f"({FF2}) alpha")
    code, out, _ = run(capsys, "eval", path, "--oracle", "identity")
    assert code == 0
    assert out == '{"value":"2","steps":3,"queries":[2,2]}\n'


def test_eval_text_mode(wt, capsys):
    code, out, _ = run(capsys, "eval", wt("rec3.wt", REC3), "--text")
    assert code == 0
    assert out == "value = 3\nsteps = 10\n"


def test_cost(wt, capsys):
    code, out, _ = run(capsys, "cost", wt("rec3.wt", REC3))
    assert code == 0
    assert out == '{"predicted":10,"semantic":3,"mode":"exact"}\n'


def test_bound(wt, capsys):
    code, out, _ = run(capsys, "bound", wt("fold2.wt", FOLD2))
    assert code == 0
    assert out == '{"predicted":7,"semantic":1,"mode":"bound"}\n'


def test_bound_rejects_numeral_recursion(wt, capsys):
    code, out, err = run(capsys, "bound", wt("rec3.wt", REC3))
    assert code == 2
    assert out == ""
    assert "rec[Nat]" in err


def test_majorize(wt, capsys):
    path = wt("grow.wt", "rec[Nat] 1 (fn n:Nat => fn p:Nat => add p p) 3")
    code, out, _ = run(capsys, "majorize", path)
    assert code == 0
    assert out == '{"majorant":8}\n'


def test_translate(wt, capsys):
    code, out, _ = run(capsys, "translate", wt("zero.wt", "0"))
    assert code == 0
    assert json.loads(out) == {"meta_term": "(iota, zero')", "meta_type": "(Eff * Nat)"}


def test_modulus_requires_oracle_flag(wt, capsys):
    code, _, err = run(capsys, "modulus", wt("ff2.wt", FF2))
    assert code == 2
    assert "--oracle" in err


def test_oracle_json_file(wt, capsys, tmp_path):
    oracle = tmp_path / "oracle.json"
    oracle.write_text('{"kind":"table","pairs":[[0,9],[1,3]]}', encoding="utf-8")
    code, out, _ = run(capsys, "modulus", wt("ff2.wt", FF2), "--oracle", str(oracle))
    assert code == 0
    assert out == '{"phi":3,"support":[2,0],"value":9}\n'


def test_oracle_inline_constant(wt, capsys):
    code, out, _ = run(capsys, "modulus", wt("ff2.wt", FF2), "--oracle", "constant:5")
    assert code == 0
    assert out == '{"phi":6,"support":[2,5],"value":5}\n'


def test_verify_single_file(wt, capsys):
    path = wt("rec3.wt", f"-- analyses: cost,majorant\n{REC3}")
    code, out, _ = run(capsys, "verify", path)
    assert code == 0
    obj = json.loads(out)
    assert obj["failures"] == 0
    assert [r["analysis"] for r in obj["reports"]] == ["cost", "majorant"]
    assert all(r["status"] == "pass" for r in obj["reports"])


def test_verify_failing_file_exits_one(wt, capsys):
    path = wt("bad.wt", f"-- analyses: bound\n{REC3}")
    code, out, _ = run(capsys, "verify", path)
    assert code == 1
    obj = json.loads(out)
    assert obj["failures"] == 1


def test_verify_corpus_directory(wt, capsys, tmp_path):
    wt("a.wt", f"-- analyses: cost\n{REC3}")
    wt("b.wt", f"-- analyses: modulus(identity)\n{FF2}")
    code, out, _ = run(
        capsys, "verify", "--corpus", str(tmp_path), "--trials", "10", "--seed", "4"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["failures"] == 0
    assert len(obj["reports"]) == 2
    assert obj["reports"][1]["trials"] == 10
    assert obj["reports"][1]["seed"] == 4


def test_verify_text_mode(wt, capsys):
    path = wt("rec3.wt", f"-- analyses: cost\n{REC3}")
    code, out, _ = run(capsys, "verify", path, "--text")
    assert code == 0
    assert out == "rec3.wt: cost: pass\nfailures = 0\n"


def test_verify_needs_a_target(capsys):
    code, _, err = run(capsys, "verify")
    assert code == 2
    assert "file or --corpus" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "eval", "/nonexistent/term.wt")
    assert code == 2
    assert "no such file" in err


def test_fuel_exhaustion_exit_code(wt, capsys):
    code, _, err = run(capsys, "eval", wt("rec3.wt", REC3), "--fuel", "2")
    assert code == 3
    assert "fuel" in err.lower() or "step" in err.lower()


def test_fuel_must_be_positive(wt, capsys):
    code, _, err = run(capsys, "eval", wt("rec3.wt", REC3), "--fuel", "0")
    assert code == 2


def test_sig_override(wt, capsys):
    # rec3 types fine under the larger signature
    code, out, _ = run(capsys, "check", wt("rec3.wt", REC3), "--sig", "list")
    assert code == 0
    assert out == '{"type":"Nat"}\n'
    # but list arithmetic does not fit the smallest one
    code, _, err = run(capsys, "check", wt("sum.wt", "add 1 2"), "--sig", "t")
    assert code == 2


def test_parse_error_exit_code(wt, capsys):
    code, _, err = run(capsys, "eval", wt("broken.wt", "add 1 ("))
    assert code == 2


def test_type_error_exit_code(wt, capsys):
    code, _, err = run(capsys, "eval", wt("illtyped.wt", "add 1 []"))
    assert code == 2


def test_unknown_command(capsys):
    assert run(capsys, "frobnicate", "x.wt")[0] == 2


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "eval", "--help")[0] == 0


def test_main_entry_raises_system_exit(wt, capsys):
    from writ.cli import main_entry

    import sys

    old = sys.argv
    sys.argv = ["writ", "eval", wt("rec3.wt", REC3)]
    try:
        with pytest.raises(SystemExit) as exc:
            main_entry()
        assert exc.value.code == 0
    finally:
        sys.argv = old
    capsys.readouterr()


def test_eval_handles_results_deeper_than_the_recursion_limit(wt, capsys):
    code, out, _ = run(capsys, "eval", wt("big.wt", "mul 499 499"))
    assert code == 0
    assert out == '{"value":"249001","steps":1}\n'


def test_pathological_nesting_fails_cleanly(wt, capsys):
    code, _, err = run(capsys, "check", wt("deep.wt", "succ 50000"))
    assert code == 2
    assert "deeply nested" in err
