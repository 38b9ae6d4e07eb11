import csv
import io
import json

import pydot
import pytest

from dkbplan.casegen import appendix_spec
from dkbplan.cli import main
from dkbplan.forward import count_plans, forward_plan
from dkbplan.instantiate import abp_fpi
from dkbplan.parser import dump_kb, load_kb


@pytest.fixture
def fixture_kb(tmp_path):
    path = tmp_path / "appendix.kb"
    path.write_text(dump_kb(appendix_spec()), encoding="utf-8")
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_consistent(capsys, fixture_kb):
    code, out, _ = run(capsys, "check", fixture_kb)
    assert (code, out.strip()) == (0, "consistent")


def test_check_inconsistent(capsys, fixture_kb, tmp_path):
    text = fixture_kb.read_text().replace("[abox]", "[abox]\nManager(e002)")
    bad = tmp_path / "bad.kb"
    bad.write_text(text)
    code, out, _ = run(capsys, "check", bad)
    assert code == 2
    assert out.strip() == "inconsistent: Technician ⊑ ¬Manager at e002"


def test_check_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", tmp_path / "nope.kb")
    assert code == 1 and err.startswith("error:")


def test_check_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.kb"
    bad.write_text("[abox]\nManager(e001\n")
    assert run(capsys, "check", bad)[0] == 1


def test_query_two_technicians(capsys, appendix_kb):
    kb = appendix_kb.parent / "two_technicians.kb"
    code, out, _ = run(capsys, "query", kb, "Manager(?x), canManage(?y,?z)")
    assert code == 0
    assert out.strip().splitlines()[-1] == "2 answer(s)"
    code, out, _ = run(capsys, "query", kb, "Manager(?x), canManage(?y,?z)", "--format", "json")
    assert len(json.loads(out)) == 2


def test_query_ground_and_empty(capsys, fixture_kb):
    code, out, _ = run(capsys, "query", fixture_kb, "Manager(e001)")
    assert code == 0 and out.splitlines() == ["{}", "1 answer(s)"]
    code, out, _ = run(capsys, "query", fixture_kb, "hasStatus(?x,reviewed)")
    assert code == 0 and out.splitlines() == ["0 answer(s)"]


def test_query_inconsistent(capsys, fixture_kb, tmp_path):
    bad = tmp_path / "bad.kb"
    bad.write_text(fixture_kb.read_text().replace("[abox]", "[abox]\nManager(e002)"))
    assert run(capsys, "query", bad, "Manager(?x)")[0] == 2


def test_plan_fp_matches_library(capsys, tmp_path):
    kb = tmp_path / "c.kb"
    assert run(capsys, "export", "1/1/1", "--out", kb)[0] == 0
    out_json = tmp_path / "g.json"
    code, out, _ = run(capsys, "plan", kb, "--format", "json", "--out", out_json)
    assert code == 0
    problem = load_kb(kb).problem("c")
    g, m = forward_plan(problem)
    assert f"|P|={m.edges} |V|={m.visited} Inc={m.inconsistent}" in out
    assert f"plans={count_plans(g)}" in out
    data = json.loads(out_json.read_text())
    assert len(data["edges"]) == m.edges


def test_plan_abp_fpi_writes_abstract(capsys, fixture_kb, tmp_path):
    out_dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "plan", fixture_kb, "--algo", "abp-fpi", "--format", "dot", "--out", out_dot)
    assert code == 0 and "abstract states=7" in out
    abstract = tmp_path / "g.abstract.dot"
    graphs = pydot.graph_from_dot_data(abstract.read_text())
    assert len([n for n in graphs[0].get_nodes() if n.get_name().startswith("S")]) == 7
    assert pydot.graph_from_dot_data(out_dot.read_text())
    _, _, m = abp_fpi(load_kb(fixture_kb).problem("a"))
    assert f"|P|={m.edges} |V|={m.visited} Inc={m.inconsistent}" in out


def test_plan_no_plan(capsys, fixture_kb, tmp_path):
    kb = tmp_path / "sat.kb"
    text = fixture_kb.read_text()
    kb.write_text(text[: text.index("[goal]")] + "[goal]\nManager(?x)\n")
    out_json = tmp_path / "g.json"
    code, _, _ = run(capsys, "plan", kb, "--format", "json", "--out", out_json)
    assert code == 3
    assert json.loads(out_json.read_text())["edges"] == []


def test_plan_stdout_dot(capsys, appendix_kb):
    code, out, err = run(capsys, "plan", appendix_kb.parent / "greeting.kb", "--format", "dot", "--mode", "first")
    assert code == 0 and pydot.graph_from_dot_data(out) and "|P|=" in err


def test_bench_empty_grid(capsys, tmp_path):
    out = tmp_path / "b.csv"
    assert run(capsys, "bench", "--grid", "", "--out", out)[0] == 0
    assert len(out.read_text().splitlines()) == 1


def test_bench_timeout_row(capsys):
    code, out, _ = run(capsys, "bench", "--grid", "mng=2,emp=3,doc=3", "--timeout-s", "0.001")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert rows[0]["algo"] == "FP" and rows[0]["timeout"] == "true"


def test_bench_bad_grid(capsys):
    assert run(capsys, "bench", "--grid", "mng=1")[0] == 1


def test_bench_inclusion(capsys):
    code, _, err = run(capsys, "bench", "--grid", "", "--inclusion", "3")
    assert code == 0 and "inclusion held on 3" in err


def test_export_stdout_and_bad_cell(capsys):
    code, out, _ = run(capsys, "export", "1/2/1")
    assert code == 0 and "Employee(e003)" in out
    assert run(capsys, "export", "1/x/1")[0] == 1
    assert run(capsys, "export", "1/1/0")[0] == 1
