import io
import json
import shutil
import subprocess
from pathlib import Path

import pytest

from sacat import homology
from sacat.cli import run

FIXTURES = Path(__file__).parent / "fixtures"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    return code, json.loads(out) if out else None


def test_group_info():
    code, doc = call_json("group", "info", "Q8")
    assert code == 0
    assert doc["order"] == 8 and doc["center_order"] == 2 and doc["h1"]["factors"] == [2, 2]


def test_group_from_cayley_json():
    code, doc = call_json("group", "info", str(FIXTURES / "valid" / "c2_table.json"))
    assert code == 0 and doc["group"] == "Z2" and doc["order"] == 2


def test_perm_dsl_for_a5():
    code, doc = call_json("group", "info", "perm:(0 1 2 3 4),(0 1 2)")
    assert code == 0 and doc["order"] == 60 and doc["perfect"]


def test_homology():
    code, doc = call_json("homology", "C2xC2")
    assert code == 0 and doc["h2"]["factors"] == [2] and doc["certified"]
    code, doc = call_json("homology", "S3", "--degree", "1")
    assert doc["h1"]["factors"] == [2] and "h2" not in doc


def test_cap_is_enforced_and_restored():
    cap = homology.CERTIFIED_CAP
    code, _, err = call("homology", "D4", "--cap", "4")
    assert code == 1 and "OrderCapExceeded" in err
    assert homology.CERTIFIED_CAP == cap
    assert call("homology", "D4")[0] == 0


def test_uncertified_a5():
    code, doc = call_json("homology", "A5", "--uncertified", "--degree", "2")
    assert code == 0 and doc["h2"]["factors"] == [2] and doc["certified"] is False
    code, _, err = call("homology", "A5")
    assert code == 1


def test_cohomology():
    code, doc = call_json("cohomology", "C2xC2", "--coeff", "C2", "--reps")
    assert code == 0 and doc["h2"]["factors"] == [2, 2, 2] and len(doc["reps"]) == 3


def test_classify():
    code, doc = call_json("centr", "classify", "C2", "--coeff", "C2")
    assert code == 0 and doc["count"] == 2
    assert sorted(c["total_abelian"] for c in doc["classes"]) == [True, True]


def test_baer_sum_of_files():
    v = FIXTURES / "valid"
    code, doc = call_json("centr", "baer", str(v / "c4_over_c2.json"), str(v / "split_c2.json"))
    assert code == 0 and doc["class"] == [1]
    code, doc = call_json("centr", "baer", str(v / "c4_over_c2.json"), str(v / "c4_over_c2.json"))
    assert code == 0 and doc["class"] == [0]


def test_centrality_check():
    code, doc = call_json("centr", "check", str(FIXTURES / "valid" / "c4_over_c2.json"))
    assert code == 0 and doc["huq"] and doc["smith"] and doc["agree"]


def test_exact_sequences():
    v = FIXTURES / "valid"
    assert call_json("exact", "stallings", str(v / "c4_over_c2.json"))[1]["result"] == "PASS"
    assert call_json("exact", "stallings", str(v / "swapped.json"))[1]["result"] == "PASS"
    code, doc = call_json("exact", "hs", str(v / "c4_over_c2.json"), "--coeff", "C4")
    assert code == 0 and doc["result"] == "PASS"
    code, doc = call_json("exact", "uct", "C2xC2", "--coeff", "C2")
    assert code == 0 and doc["orders"] == [1, 4, 8, 2]


def test_uce():
    code, doc = call_json("uce", "C1")
    assert code == 0 and doc["total_order"] == 1
    assert call("uce", "S3")[0] == 1


def test_global_flags_in_either_position():
    a = call("--json", "group", "info", "C3")
    b = call("group", "info", "C3", "--json")
    assert a == b and a[0] == 0


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["group", "info"], ["homology", "C2", "--degree", "3"],
    ["cohomology", "C2"], ["centr", "classify", "C2"], ["centr", "baer", "x.json"],
    ["exact", "uct", "C2"], ["verify", "--suite", "other"], ["group", "info", "C2x"],
    ["group", "info", "Z9"], ["group", "info", "missing.json"],
])
def test_usage_errors_exit_2(argv):
    code, out, err = call(*argv)
    assert code == 2 and "usage error" in err and not out


MALFORMED = sorted((FIXTURES / "malformed").glob("*.json"))


@pytest.mark.parametrize("path", MALFORMED, ids=[p.stem for p in MALFORMED])
@pytest.mark.parametrize("verb", [["exact", "stallings"], ["centr", "check"]])
def test_malformed_inputs_never_crash(path, verb):
    code, out, err = call(*verb, str(path))
    assert code in (1, 2) and err.startswith("sacat: ")


def test_malformed_corpus_expected_codes():
    expected = {"truncated": 2, "list": 2, "mapstr": 2, "gap": 1, "nothom": 1, "badtable": 1,
                "strings": 1, "scalar": 1, "badkernel": 1, "s3bad": 1}
    got = {p.stem: call("exact", "stallings", str(p))[0] for p in MALFORMED}
    assert got == expected


def test_json_output_is_deterministic():
    argv = ("cohomology", "D4", "--coeff", "C2xC2", "--reps", "--json")
    assert call(*argv)[1] == call(*argv)[1]


def test_text_output():
    code, out, _ = call("group", "info", "S3")
    assert code == 0 and "order" in out and "6" in out and not out.startswith("{")


@pytest.mark.skipif(shutil.which("sacat") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["sacat", "exact", "uct", "C2xC2", "--coeff", "C2", "--json"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"] == "PASS"
    proc = subprocess.run(["sacat", "nonsense"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 2
