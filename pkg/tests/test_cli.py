import io
import json
import subprocess
import sys

import pytest

from committee_reconfig.cli import run
from committee_reconfig.core import load_instance, serialize_instance
from committee_reconfig.generators import gen_fixture
from committee_reconfig.reductions import format_sat
from committee_reconfig.schemas import validate

from sat_cases import random_cases


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def doc_of(text):
    return json.loads(text)


def test_check_ok_and_violation():
    code, out, _ = call("check", "--instance", "fixture:example1", "--axiom", "jr", "--committee", "0,2,3")
    assert code == 0 and doc_of(out) == {"satisfied": True}
    code, out, _ = call("check", "--instance", "fixture:example1", "--axiom", "jr", "--committee", "2,3,4")
    doc = doc_of(out)
    assert code == 1 and doc["satisfied"] is False
    validate("check", doc)
    assert doc["witness"]["axiom"] == "jr"


def test_check_pretty_and_compact():
    code, out, _ = call("check", "--instance", "fixture:example1", "--axiom", "ejr", "--committee", "1,4,5", "--pretty")
    assert code == 1 and out.startswith("violated: ejr")
    _, out, _ = call("check", "--instance", "fixture:example1", "--axiom", "jr", "--committee", "0,2,3")
    assert " " not in out.strip()


def test_check_alpha_and_mode():
    code, out, _ = call("check", "--instance", "fixture:example1", "--axiom", "jr", "--committee", "2,3,4", "--alpha", "4")
    assert code == 0
    code, _, err = call("check", "--instance", "fixture:example1", "--axiom", "ejr+", "--committee", "0,2,3", "--alpha", "2")
    assert code == 2 and doc_of(err)["error"] == "usage"
    code, _, _ = call("check", "--instance", "fixture:example1", "--axiom", "jr", "--committee", "0,2,3", "--mode", "literal")
    assert code == 0


@pytest.mark.parametrize("rule", ["gjcr", "mes", "pav", "ccav", "seqccav", "greedyejr", "seqphragmen"])
def test_rule(rule):
    code, out, _ = call("rule", "--instance", "fixture:example1", "--rule", rule)
    doc = doc_of(out)
    assert code == 0 and doc["rule"] == rule and len(doc["committee"]) == 3
    validate("rule", doc)


def test_path_methods():
    base = ["path", "--instance", "fixture:example1"]
    code, out, _ = call(*base, "--method", "bfs", "--from", "0,2,3", "--to", "1,4,5")
    doc = doc_of(out)
    assert code == 0 and doc["connected"] and doc["length"] == 3
    code, out, _ = call(*base, "--method", "two-jr", "--from", "0,2,3", "--to", "1,4,5")
    assert code == 0 and doc_of(out)["steps"][-1]["committee"] == [1, 4, 5]
    code, out, _ = call(*base, "--method", "four-ejr", "--from", "0,2,3", "--to", "1,3,5")
    assert code == 0 and doc_of(out)["predicate"] == "4/1-ejr"
    # (1,4,5) is JR but not EJR, so it is rejected as an endpoint
    assert call(*base, "--method", "four-ejr", "--from", "0,2,3", "--to", "1,4,5")[0] == 2
    code, out, _ = call(*base, "--method", "rules", "--rule", "mes", "--rule2", "pav")
    assert code == 0 and all(s["ok"] for s in doc_of(out)["steps"])
    code, _, _ = call(*base, "--method", "rules", "--rule", "mes")
    assert code == 2


def test_path_domains():
    code, out, _ = call("path", "--instance", "fixture:civi_table", "--method", "ci", "--from", "0,1,2", "--to", "2,5,6")
    assert code == 0 and doc_of(out)["predicate"] == "jr"
    code, out, _ = call("path", "--instance", "fixture:vi_table", "--method", "vi", "--from", "0,1", "--to", "2,3")
    assert code == 0
    code, _, err = call("path", "--instance", "fixture:example1", "--method", "ci", "--from", "0,2,3", "--to", "1,4,5")
    assert code in (0, 2)


def test_path_pretty():
    code, out, _ = call("path", "--instance", "fixture:example1", "--method", "bfs", "--from", "0,2,3", "--to", "1,4,5", "--pretty")
    assert code == 0 and out.startswith("bfs path, 3 moves")


def test_path_not_connected(tmp_path):
    case = random_cases(2, seed=3)[0]  # even index: separated pair
    sat = tmp_path / "f.cnf"
    sat.write_text(format_sat(case))
    inst_path = tmp_path / "r.txt"
    code, out, _ = call("reduce", "--sat", str(sat), "--out", str(inst_path))
    doc = doc_of(out)
    assert code == 0
    validate("reduce", doc)
    code, out, _ = call(
        "path", "--instance", str(inst_path), "--method", "bfs",
        "--from", ",".join(map(str, doc["W1"])), "--to", ",".join(map(str, doc["W2"])),
    )
    assert code == 1 and doc_of(out)["connected"] is False


def test_reduce_stdout(tmp_path):
    sat = tmp_path / "f.cnf"
    sat.write_text(format_sat(random_cases(1, seed=5)[0]))
    code, out, _ = call("reduce", "--sat", str(sat))
    assert code == 0 and out.startswith("# committee phi1:")
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 2 1\n1 2 0\n")
    assert call("reduce", "--sat", str(bad))[0] == 2


def test_isolation_plain_and_budget():
    code, out, _ = call("isolation", "--instance", "fixture:example1", "--committee", "0,2,3")
    doc = doc_of(out)
    assert code == 0
    validate("isolation", doc)
    code, _, err = call("isolation", "--instance", "fixture:example1", "--committee", "0,2,3", "--node-budget", "0",
                        "--pred", "ejr+")
    assert code in (0, 3)


def test_isolation_rule():
    code, out, _ = call("isolation", "--instance", "fixture:example1", "--rule", "mes", "--pred", "ejr+")
    doc = doc_of(out)
    assert code == 0 and doc["radius"] == "not isolated" and "neighbor" in doc
    assert call("isolation", "--instance", "fixture:example1", "--rule", "mes")[0] == 2


def test_gen_and_isolation_sidecar(tmp_path):
    out_path = tmp_path / "iso.txt"
    code, out, _ = call("gen", "--family", "isolated", "--params", "k=3", "--out", str(out_path))
    doc = doc_of(out)
    assert code == 0 and doc["sidecar"] == str(out_path) + ".json"
    validate("gen", {k: v for k, v in doc.items() if k not in ("instance", "sidecar")})
    code, out, _ = call(
        "isolation", "--instance", str(out_path), "--committee", "0,1,2", "--sidecar", doc["sidecar"]
    )
    assert code == 0 and doc_of(out)["radius"] == 1


def test_gen_roundtrip(tmp_path):
    out_path = tmp_path / "g.txt"
    side = tmp_path / "side.json"
    code, _, _ = call("gen", "--family", "grid", "--params", "r=3", "--out", str(out_path), "--sidecar", str(side))
    assert code == 0 and side.exists()
    from committee_reconfig.generators import gen_grid
    assert load_instance(str(out_path)) == gen_grid(3)
    assert call("gen", "--family", "grid", "--params", "r3", "--out", str(out_path))[0] == 2
    assert call("gen", "--family", "isolated", "--params", "k=5", "--out", str(out_path))[0] == 3


def test_domain():
    code, out, _ = call("domain", "--instance", "fixture:civi_table", "--recognize", "ci")
    assert code == 0 and len(doc_of(out)["ordering"]) == 7
    code, out, _ = call("domain", "--instance", "fixture:example1", "--recognize", "vi")
    if code == 1:
        assert doc_of(out)["ordering"] == "absent"


def test_graph():
    code, out, _ = call("graph", "--instance", "fixture:example1", "--emit", "dot")
    assert code == 0 and out.startswith('graph "jr" {')
    code, out, _ = call("graph", "--instance", "fixture:example1", "--emit", "json")
    doc = doc_of(out)
    assert code == 0 and [0, 2, 3] in doc["nodes"]
    code, _, err = call("graph", "--instance", "fixture:example1", "--node-budget", "3")
    assert code == 3 and doc_of(err)["error"] == "budget"


def test_usage_errors(tmp_path):
    assert call("frobnicate")[0] == 2
    code, _, err = call("check", "--instance", str(tmp_path / "missing.txt"), "--axiom", "jr", "--committee", "0")
    assert code == 2 and doc_of(err)["error"] == "usage"
    assert call("check", "--instance", "fixture:example1", "--axiom", "jr", "--committee", "0,1")[0] == 2
    assert call("check", "--instance", "fixture:nope", "--axiom", "jr", "--committee", "0")[0] == 2


def test_bfs_budget():
    code, _, err = call("path", "--instance", "fixture:example1", "--method", "bfs", "--from", "0,2,3", "--to",
                        "1,4,5", "--node-budget", "1")
    assert code == 3 and doc_of(err)["error"] == "budget"


def test_instance_file(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text(serialize_instance(gen_fixture("example1").instance))
    assert call("check", "--instance", str(p), "--axiom", "jr", "--committee", "0,2,3")[0] == 0


def test_threads_env(monkeypatch):
    monkeypatch.setenv("COMMITTEE_RECONFIG_THREADS", "zero")
    assert call("rule", "--instance", "fixture:example1", "--rule", "pav")[0] == 2
    monkeypatch.setenv("COMMITTEE_RECONFIG_THREADS", "2")
    code, out, _ = call("rule", "--instance", "fixture:example1", "--rule", "pav")
    assert code == 0


def test_console_entry():
    res = subprocess.run(
        [sys.executable, "-m", "committee_reconfig.cli", "check", "--instance", "fixture:example1",
         "--axiom", "jr", "--committee", "2,3,4"],
        capture_output=True, text=True,
    )
    assert res.returncode == 1 and json.loads(res.stdout)["satisfied"] is False
