"""Command-line interface: exit codes, text output, and JSON payloads."""

import json

import pytest
from conftest import EXAMPLES

from operad_workbench.cli import main

MONOID = str(EXAMPLES / "monoid.th")
COMM = str(EXAMPLES / "comm_monoid.th")
POINTED = str(EXAMPLES / "pointed.th")
WEAKCAT = str(EXAMPLES / "indiscrete_monoid_weakcat.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_text(capsys):
    code, out, err = run(capsys, "classify", MONOID)
    assert code == 0 and err == ""
    assert "theory Monoid (plain)" in out
    assert "overall: strongly_regular" in out


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", COMM, "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["overall"] == "linear"
    assert {row["class"] for row in payload["equations"]} \
        == {"strongly_regular", "linear"}


def test_term_info(capsys):
    code, out, _ = run(capsys, "term-info", MONOID, "--arity", "2",
                       "m(x2,m(x1,e))", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["size"] == 5
    assert payload["variables"] == [2, 1]
    assert payload["class"] == "linear"


def test_eval_fp_target(capsys):
    code, out, _ = run(capsys, "eval", COMM, "--target", "comm-monoid-fp",
                       "--arity", "2", "m(x2,m(x1,e))")
    assert code == 0
    assert out.strip() == "[1,1]"


def test_eval_terminal_target_json(capsys):
    code, out, _ = run(capsys, "eval", MONOID, "--target", "terminal-plain",
                       "m(x1,x2)", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["element"] == "2"
    assert payload["arity"] == 2


def test_decide_yes_with_trace(capsys):
    code, out, _ = run(capsys, "decide", MONOID, "m(e,m(x1,e))", "x1")
    assert code == 0
    assert out.startswith("yes:")
    assert "equation" in out


def test_decide_target_mode(capsys):
    code, out, _ = run(capsys, "decide", COMM, "--target", "comm-monoid-fp",
                       "m(x1,x2)", "m(x2,x1)")
    assert code == 0
    assert "both evaluate to" in out


def test_decide_no_on_arity_mismatch(capsys):
    code, out, _ = run(capsys, "decide", MONOID, "m(x1,x2)", "x1")
    assert code == 1
    assert out.startswith("no:")


def test_decide_unknown_when_over_budget(capsys):
    code, out, _ = run(capsys, "decide", MONOID, "--max-size", "1",
                       "m(e,x1)", "x1")
    assert code == 2
    assert out.startswith("unknown:")


def test_decide_json_trace_replays_positions(capsys):
    code, out, _ = run(capsys, "decide", MONOID, "--json",
                       "m(e,m(x1,e))", "x1")
    payload = json.loads(out)
    assert code == 0 and payload["answer"] == "yes"
    assert all(set(step) == {"source", "target", "equation", "forward",
                             "position"} for step in payload["trace"])


def test_classes_text(capsys):
    code, out, _ = run(capsys, "classes", COMM, "--arity", "2",
                       "--target", "comm-monoid-fp")
    assert code == 0
    assert out.startswith("1 classes at arity 2, size <= 6")
    assert "14 objects" in out and "element [1,1]" in out


def test_classes_json(capsys):
    code, out, _ = run(capsys, "classes", POINTED, "--arity", "0", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["count"] == 1
    assert payload["classes"][0]["members"] == ["c"]


def test_strictify_bundled_example(capsys):
    code, out, _ = run(capsys, "strictify", WEAKCAT, "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["ok"] is True
    assert payload["objects"] == 40
    assert payload["strictness"]["failures"] == []
    assert payload["comparison"]["failures"] == []


def test_perm_block_compose(capsys):
    code, out, _ = run(capsys, "perm", "block-compose",
                       "[2,1]", "[1,3,2]", "[2,1]")
    assert code == 0
    assert out.strip() == "[3,5,4,2,1]"


def test_perm_wrong_inner_count(capsys):
    code, _, err = run(capsys, "perm", "block-compose", "[2,1]", "[1]")
    assert code == 3
    assert err.startswith("usage error:")


def test_fp_weakening_is_rejected(capsys, tmp_path):
    theory = tmp_path / "dup.th"
    theory.write_text("theory Dup\nflavor fp\nops:\n  m : 2\neqs:\n"
                      "  @1: m(x1,x1) = x1\n", encoding="utf-8")
    code, _, err = run(capsys, "decide", str(theory), "m(x1,x1)", "x1")
    assert code == 3
    assert "degenerate" in err and "tau_{A,A}" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "decide", "no_such_file.th", "x1", "x1")
    assert code == 3
    assert err.startswith("error:")


def test_unknown_target(capsys):
    code, _, err = run(capsys, "eval", MONOID, "--target", "nope", "x1")
    assert code == 3
    assert "nope" in err
