import json
import subprocess
import sys

import pytest

from ufam.cli import main, render_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_tmin_output_is_compact(capsys):
    code, out, _ = run(capsys, "tmin", "schreier", "2")
    assert code == 0
    assert out.strip() == '{"t":[2,3,4]}'


def test_limit_example(capsys):
    doc = run_json(capsys, "limit", "pow(2)", "all", "{3,4}")
    assert {k: doc[k] for k in ("is_limit", "u", "p", "m")} == {"is_limit": True, "u": [], "p": 3, "m": 1}


def test_limit_with_witnesses(capsys):
    doc = run_json(capsys, "limit", "pow(2)", "all", "{3,4}", "--witnesses", "3")
    assert doc["witnesses"] == [[2, 5], [2, 6], [2, 7]]


def test_adequate_false_exits_zero(capsys):
    doc = run_json(capsys, "adequate", "pow(2)", "ap(0,2)")
    assert doc["verdict"] is False
    assert list(doc)[0] == "verdict"


def test_rank_and_member(capsys):
    assert run_json(capsys, "rank", "sum(schreier,pow(1))")["rank"] == "w+1"
    assert run_json(capsys, "member", "schreier", "{3,4,5,6}")["member"] is True
    assert run_json(capsys, "member", "schreier", "{3,4,5,6}", "ap(0,2)")["member"] is False


def test_enum_count_and_restrict(capsys):
    doc = run_json(capsys, "enum", "pow(2)", "--count", "3", "--restrict", "ap(1,2)")
    assert doc["members"] == [[1, 3], [1, 5], [1, 7]]
    assert len(run_json(capsys, "enum", "schreier")["members"]) == 20


def test_lexrank(capsys):
    doc = run_json(capsys, "lexrank", "pow(2)", "{2,5}")
    assert doc["rank"] == "w*2+2"


def test_deriv_and_cbindex(capsys):
    doc = run_json(capsys, "deriv", "pow(3)", "all", "{5,6,7}", "2")
    assert doc["sufficient"] is True and doc["member"] is True
    assert run_json(capsys, "cbindex", "pow(3)", "all")["index"] == 3
    assert run_json(capsys, "cbindex", "schreier", "ap(0,2)")["index"] is None
    assert run_json(capsys, "cbindex", "sum(schreier,pow(1))", "all")["index"] == "w+1"


def test_nwdemo(capsys):
    doc = run_json(capsys, "nwdemo", "pow(2)", "all")
    assert doc["t"] == [2, 4]


def test_etree_with_schema_file(capsys, tmp_path):
    path = tmp_path / "tree.json"
    path.write_text(json.dumps({"nodes": [{"prefix": [], "successors": "all"}], "depth": 3}))
    doc = run_json(capsys, "etree", "sum(diag(n),pow(1))", str(path), "--budget", "2")
    assert doc["valid"] is True
    assert len(doc["contributions"]) == 2
    assert doc["certificate"]["verdict"] is True


def test_dsl_error_exit_code(capsys):
    code, out, err = run(capsys, "rank", "pow(")
    assert code == 2 and out == ""
    assert "^" in err


def test_rejected_ground_set_exit_code(capsys):
    code, _, err = run(capsys, "adequate", "pow(2)", "blocks(1,1,1,1)|ap(0,2)")
    assert code == 3 and "rejected" in err


def test_precondition_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "limit", "pow(2)", "all", "{1,2}")
    assert code == 4 and "min_too_small" in err
    path = tmp_path / "tree.json"
    path.write_text('{"nodes":[{"prefix":[],"successors":"all"}]}')
    assert run(capsys, "etree", "schreier", str(path))[0] == 4


def test_unreadable_schema_file(capsys, tmp_path):
    code, _, err = run(capsys, "etree", "pow(3)", str(tmp_path / "missing.json"))
    assert code == 1 and "cannot read" in err


def test_table_output(capsys):
    code, out, _ = run(capsys, "limit", "pow(2)", "all", "{3,4}", "--table")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split()[0] == "is_limit"
    assert len({line.index(line.split()[1]) for line in lines}) == 1


def test_render_table_aligns_values():
    text = render_table({"a": 1, "long_key": [1, 2]})
    assert text.splitlines() == ["a         1", "long_key  [1,2]"]


@pytest.mark.parametrize(
    "argv",
    [
        ["rank", "iter(schreier,n+1)"],
        ["tmin", "sum(pow(2),pow(1))", "2"],
        ["adequate", "schreier", "blocks(10,3,2,1)"],
        ["cbindex", "pow(4)", "blocks(10,3,2,1)"],
        ["nwdemo", "schreier", "ap(1,3)|ap(2,3)"],
    ],
)
def test_outputs_are_json_with_stable_keys(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    json.loads(first)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ufam.cli", "tmin", "pow(3)", "5"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"t": [5, 6, 7]}
