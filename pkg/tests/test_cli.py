import csv
import io
import json
import subprocess
import sys
from math import comb

import pytest

from bottchern.cli import RunConfig, UsageError, main, run
from bottchern.exactnum import GaussianRational
from bottchern.modelio import BUILTIN_NAMES, serialize_model

from conftest import exotic_model, solvable_model


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_json_schema(capsys):
    code, out, _ = invoke(capsys, "compute", "-m", "iwasawa", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"model", "n", "dolbeault", "bott_chern", "aeppli", "k", "e2", "de_rham",
                        "h11_real", "g_del", "l_del", "g_delbar", "l_delbar", "identities"}
    assert doc["bott_chern"][1][1] == 4
    assert doc["bott_chern"][2][2] == 8
    assert all("tier" in o and "status" in o for o in doc["identities"])


def test_compute_csv_torus(capsys):
    code, out, _ = invoke(capsys, "compute", "-m", "torus3", "--format", "csv")
    assert code == 0
    rows = [r for r in csv.DictReader(io.StringIO(out)) if r["quantity"] == "bott_chern"]
    assert len(rows) == 16
    for r in rows:
        p, q = int(r["p"]), int(r["q"])
        assert int(r["value"]) == comb(3, p) * comb(3, q)


def test_compute_md_calabi_eckmann(capsys):
    code, out, _ = invoke(capsys, "compute", "-m", "calabi_eckmann")
    assert code == 0
    assert out.startswith("## calabi_eckmann (n = 3)")
    section = out.split("### h^{p,q}_BC (Bott-Chern)")[1].split("###")[0]
    rows = [line for line in section.splitlines() if line.startswith("| p=")]
    assert rows == ["| p=0 | 1 | 0 | 0 | 0 |", "| p=1 | 0 | 2 | 1 | 0 |",
                    "| p=2 | 0 | 1 | 1 | 1 |", "| p=3 | 0 | 0 | 1 | 1 |"]


def test_compute_all_json_is_sorted_list(capsys):
    code, out, _ = invoke(capsys, "compute", "-m", "all", "--format", "json")
    assert code == 0
    assert [d["model"] for d in json.loads(out)] == sorted(BUILTIN_NAMES)


def test_verify_all(capsys):
    code, out, _ = invoke(capsys, "verify", "-m", "all")
    assert code == 0
    assert out.rstrip().endswith("TOTAL: 0 failure(s)")
    assert "[fail]" not in out


def test_verify_iiib_line(capsys):
    code, out, _ = invoke(capsys, "verify", "-m", "iwasawa_iiib")
    assert code == 0
    assert "h^{2,2}_BC predicted 6 = direct 6" in out


@pytest.fixture
def exotic_file(tmp_path):
    path = tmp_path / "exotic.cxm"
    path.write_text(serialize_model(exotic_model()), encoding="utf-8")
    return str(path)


def test_verify_exotic_strict(capsys, exotic_file):
    code, out, _ = invoke(capsys, "verify", "-m", exotic_file, "--strict")
    assert code == 1
    failed = [line for line in out.splitlines() if line.startswith("[fail]")]
    assert failed and all("(builtin-only)" in line for line in failed)


def test_verify_exotic_lenient(capsys, exotic_file):
    code, out, _ = invoke(capsys, "verify", "-m", exotic_file)
    assert code == 0
    assert "(not required for this model)" in out


def test_verify_json(capsys, exotic_file):
    code, out, _ = invoke(capsys, "verify", "-m", exotic_file, "--strict", "--format", "json")
    assert code == 1
    (doc,) = json.loads(out)
    assert doc["failures"] > 0


def test_validate(capsys, tmp_path):
    good = tmp_path / "s.cxm"
    good.write_text(serialize_model(solvable_model(*[GaussianRational(1)] * 4)), encoding="utf-8")
    code, out, _ = invoke(capsys, "validate", "-m", str(good))
    assert code == 0 and "valid" in out

    bad = tmp_path / "bad.cxm"
    bad.write_text("model bad\ndim 3\nd phi1 = phi2^bar3\nd phi2 = 0\nd phi3 = phi1^phi2\n")
    code, out, err = invoke(capsys, "validate", "-m", str(bad))
    assert code == 3 and out == ""
    assert "not integrable" in err

    broken = tmp_path / "broken.cxm"
    broken.write_text("model b\ndim 3\nd phi1 = 0\n")
    code, _, err = invoke(capsys, "compute", "-m", str(broken))
    assert code == 3 and "missing equation" in err


def test_usage_errors(capsys):
    code, _, err = invoke(capsys, "compute", "-m", "no_such_model")
    assert code == 2 and "iwasawa_iiib" in err
    code, _, err = invoke(capsys, "validate", "-m", "all")
    assert code == 2
    code, _, _ = invoke(capsys, "compute")
    assert code == 2
    code, _, _ = invoke(capsys, "compute", "-m", "torus3", "--format", "xml")
    assert code == 2
    with pytest.raises(UsageError):
        run(RunConfig("verify"))


def test_out_file(capsys, tmp_path):
    target = tmp_path / "report.md"
    code, out, _ = invoke(capsys, "compute", "-m", "torus3", "-o", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("## torus3")


def test_list(capsys):
    code, out, _ = invoke(capsys, "list")
    assert code == 0
    assert out.split() == sorted(BUILTIN_NAMES)


def test_deterministic_output():
    a = run(RunConfig("compute", "all", "json"))
    b = run(RunConfig("compute", "all", "json"))
    assert a == b


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bottchern.cli", "list"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "calabi_eckmann" in proc.stdout
