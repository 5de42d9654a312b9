import io
import json
import subprocess
import sys

import pytest

from modeq import qexp
from modeq.audit import serialize_elliptic_db
from modeq.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, cli_main


def run(*argv):
    out = io.StringIO()
    code = cli_main(list(argv), out)
    return code, out.getvalue()


def test_sgc():
    assert run("sgc", "igusa") == (EXIT_OK, "1/6\n")
    code, text = run("sgc", "igusa", "-v")
    assert code == EXIT_OK and "GC" in text
    assert run("sgc", "nonexistent")[0] == EXIT_USAGE


def test_bounds():
    assert run("bounds", "siegel", "2", "--m", "1") == (EXIT_OK, "25\n")
    assert run("bounds", "siegel", "2", "--m", "3") == (EXIT_OK, "50\n")
    code, text = run("bounds", "hilbert", "6,1")
    assert code == EXIT_OK and "140" in text and "no explicit height constant" in text
    code, text = run("bounds", "siegel", "2", "--json")
    doc = json.loads(text)
    assert doc["schema"] == 1 and [b["bound"] for b in doc["degree_bounds"]] == [25, 50, 50]
    assert run("bounds", "elliptic", "4")[0] == EXIT_USAGE
    assert run("bounds", "siegel", "2", "--m", "9")[0] == EXIT_USAGE


def test_constants():
    code, text = run("constants")
    assert code == EXIT_OK and "C_height" in text
    doc = json.loads(run("constants", "--json")[1])
    assert doc["schema"] == 1
    assert {e["name"] for e in doc["entries"]} >= {"C_eval", "C_log", "C_evaldata", "C_height"}


def test_gen_phi_and_audit(tmp_path):
    path = tmp_path / "phi3.txt"
    assert run("gen-phi", "3", "--out", str(path))[0] == EXIT_OK
    assert path.read_text() == serialize_elliptic_db(qexp.phi_elliptic(3))
    code, text = run("audit", str(path), "--family", "elliptic", "--level", "3")
    assert code == EXIT_OK and "PASS" in text
    code, text = run("audit", str(path), "--family", "elliptic", "--level", "3", "--json", "--paranoid")
    doc = json.loads(text)
    assert doc["passed"] and doc["equations"][0]["max_total_degree"] == 4


def test_gen_phi_caps_level():
    assert run("gen-phi", "11")[0] == EXIT_USAGE
    assert run("gen-phi", "4")[0] == EXIT_USAGE


def test_audit_violation_exit_code(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(serialize_elliptic_db(qexp.phi_elliptic(2)) + "[5,0] 1\n")
    assert run("audit", str(path), "--family", "elliptic", "--level", "2")[0] == EXIT_VIOLATION


@pytest.mark.parametrize(
    "content",
    ["[1 0] 2\n", "[1,0] 2\n[0,1] 3\n", "{not json", '{"family": {"kind": "elliptic", "level": 2}}'],
)
def test_audit_bad_input_exit_code(tmp_path, content):
    path = tmp_path / "f.txt"
    path.write_text(content)
    assert run("audit", str(path), "--family", "elliptic", "--level", "2")[0] == EXIT_USAGE


def test_audit_family_mismatch(tmp_path):
    doc = {
        "family": {"kind": "siegel", "level": 2},
        "variables": ["J1", "J2", "J3", "Y1"],
        "equations": [{"m": 1, "terms": [{"y_exps": [15], "num": "1"}]}],
    }
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    assert run("audit", str(path), "--family", "siegel", "--level", "2")[0] == EXIT_OK
    assert run("audit", str(path), "--family", "siegel", "--level", "3")[0] == EXIT_USAGE
    assert run("audit", str(path), "--family", "siegel", "--level", "2", "--json")[0] == EXIT_OK


def test_audit_missing_file():
    assert run("audit", "/nonexistent/file", "--family", "elliptic", "--level", "2")[0] == EXIT_USAGE


def test_reconstruct(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"variables": ["J1", "J2"], "num": "J1 + J2", "den": "J1*J2 - 1"}))
    code, text = run("reconstruct", str(path))
    assert code == EXIT_OK and text.startswith("recovered")
    code, text = run("reconstruct", str(path), "--json")
    doc = json.loads(text)
    assert doc["success"] and doc["tree"]["n"] == 2 and doc["conditions"]["magnitude"] == "waived"
    assert run("reconstruct", str(path), "--n", "3")[0] == EXIT_USAGE
    path.write_text("{}")
    assert run("reconstruct", str(path))[0] == EXIT_USAGE


def test_reconstruct_failure_exit_code(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"variables": ["J1"], "num": "J1^5 + 1", "den": "J1^3 + 2"}))
    # too small a bound to even build the last level
    assert run("reconstruct", str(path), "--M", "3")[0] == EXIT_VIOLATION


def test_no_arguments_is_usage_error():
    assert run()[0] == EXIT_USAGE


def test_module_entry_point_pipes(tmp_path):
    gen = subprocess.run([sys.executable, "-m", "modeq", "gen-phi", "2"], capture_output=True, text=True, check=True)
    res = subprocess.run(
        [sys.executable, "-m", "modeq", "audit", "-", "--family", "elliptic", "--level", "2"],
        input=gen.stdout, capture_output=True, text=True,
    )
    assert res.returncode == EXIT_OK and "PASS" in res.stdout
