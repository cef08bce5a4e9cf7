import io
import json
import pathlib
import subprocess
import sys

import pytest
import yaml

from paralab.cli import dumps_json, run_cli
from paralab.gallery import get_chart, list_charts
from paralab.manifest import dumps_manifest

REPO = pathlib.Path(__file__).resolve().parent.parent
EX51 = REPO / "manifests" / "ex5_1_spacelike.yaml"


def test_list():
    code, out = run_cli(["list"])
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == list_charts()


@pytest.mark.parametrize("name", list_charts())
def test_classify_assert_passes_for_gallery(name):
    code, _ = run_cli(["classify", name, "--assert"], stderr=io.StringIO())
    assert code == 0


def test_classify_json_is_stable_and_complete():
    _, a = run_cli(["classify", "ex5_1_spacelike", "--json"])
    _, b = run_cli(["classify", "ex5_1_spacelike", "--json"])
    assert a == b
    doc = json.loads(a)
    assert list(doc) == ["chart", "epsilon", "samples", "index_histogram", "properties", "identities", "audit"]
    assert doc["samples"]["count"] == 32 and doc["samples"]["seed"] == 42
    assert {p["property"]: p["status"] for p in doc["properties"]}["para_sasakian"] == "holds"


def test_manifest_file_classifies_byte_identically():
    _, a = run_cli(["classify", "ex5_1_spacelike", "--json"])
    _, b = run_cli(["classify", str(EX51), "--json"])
    assert a == b


def test_assert_fails_on_wrong_expectation(tmp_path):
    entry = get_chart("ex5_1_spacelike")
    doc = yaml.safe_load(dumps_manifest(entry.chart, entry.expected))
    doc["expected"]["flat"] = "holds"
    path = tmp_path / "wrong.yaml"
    path.write_text(yaml.safe_dump(doc))
    err = io.StringIO()
    code, _ = run_cli(["classify", str(path), "--assert"], stderr=err)
    assert code == 1
    assert "flat expected holds" in err.getvalue()


def test_curvature_output():
    code, out = run_cli(["curvature", "ex5_1_spacelike", "--at", "0,0,0"])
    assert code == 0
    assert "S(xi,xi) = -2" in out
    assert "K(d1,d2) = 1" in out
    assert "K(d1,d3) = -1" in out
    code, out = run_cli(["curvature", "ex5_1_spacelike", "--at", "0,0,0", "--json"])
    doc = json.loads(out)
    assert doc["ricci_xi_xi"] == pytest.approx(-2.0)
    assert doc["sectional"]["2,3"] == pytest.approx(-1.0)


def test_identities_suite():
    code, out = run_cli(["identities", "hyperbolic_ps", "--suite", "ricci", "--points", "4"])
    assert code == 0 and "s_phi_phi" in out and "lemma3" not in out
    code, out = run_cli(["identities", "ex2_2_g1", "--suite", "lemma5", "--json", "--points", "4"])
    rows = json.loads(out)["identities"]
    assert rows and not any(r["applicable"] for r in rows)


def test_validate(tmp_path):
    assert run_cli(["validate", str(EX51)])[0] == 0
    doc = yaml.safe_load(EX51.read_text())
    doc["metric"] = [["exp(2*z)", "1", "0"], ["2", "exp(-2*z)", "0"], ["0", "0", "1"]]
    broken = tmp_path / "broken.manifest"
    broken.write_text(yaml.safe_dump(doc))
    err = io.StringIO()
    code, _ = run_cli(["validate", str(broken)], stderr=err)
    assert code == 2
    assert "metric[0][1]" in err.getvalue()


@pytest.mark.parametrize(
    "argv",
    [[], ["frobnicate"], ["classify"], ["classify", "no_such_chart"], ["classify", "ex2_1_g1", "--points", "0"],
     ["curvature", "ex2_1_g1", "--at", "1,2"], ["curvature", "ex2_1_g1", "--at", "a,b,c"],
     ["identities", "ex2_1_g1", "--suite", "nope"]],
)
def test_usage_errors_exit_2(argv):
    assert run_cli(argv, stderr=io.StringIO())[0] == 2


def test_degenerate_exit_3(tmp_path):
    doc = yaml.safe_load(EX51.read_text())
    doc["metric"] = [["1"], ["0", "0"], ["0", "0", "1"]]
    path = tmp_path / "dead.yaml"
    path.write_text(yaml.safe_dump(doc))
    assert run_cli(["classify", str(path)], stderr=io.StringIO())[0] == 3
    assert run_cli(["curvature", str(path), "--at", "0,0,0"], stderr=io.StringIO())[0] == 3


def test_json_writer():
    text = dumps_json({"a": 0.1, "b": [1, 2.5], "c": None, "d": {"e": True}, "f": float("inf")})
    assert '"a": 0.10000000000000001' in text
    assert json.loads(text) == {"a": 0.1, "b": [1, 2.5], "c": None, "d": {"e": True}, "f": None}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "paralab", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "hyperbolic_ps" in proc.stdout
