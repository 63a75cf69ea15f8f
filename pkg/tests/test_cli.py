"""Front-end tests: report shapes, exit codes, and byte determinism."""

import json
import os
import subprocess
import sys

from mapcomb.cli import main

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def spawn(*argv, seed="0"):
    env = dict(os.environ, PYTHONHASHSEED=seed)
    return subprocess.run([sys.executable, "-m", "mapcomb.cli", *argv],
                          capture_output=True, env=env, cwd=REPO)


# --- happy paths ----------------------------------------------------------

def test_count_rows(capsys):
    code, doc = run_json(capsys, "count", "--degrees", "all",
                         "--max-edges", "4")
    assert code == 0
    assert doc["schema"] == "mapcomb/1"
    assert doc["command"] == "count" and doc["degrees"] == "all"
    assert [r["value"] for r in doc["rows"]] == ["2", "9", "54", "378"]
    assert doc["fields"]["value"] == "exact"


def test_count_csv(capsys):
    code, out = run(capsys, "count", "--degrees", "all", "--max-edges", "4",
                    "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,value"
    assert lines[-1] == "4,378"
    assert len(lines) == 5


def test_sing_quadrangulations(capsys):
    code, doc = run_json(capsys, "sing", "--degrees", "4")
    assert code == 0
    assert abs(float(doc["R0"]) - 3 ** -0.5) < 1e-10
    assert abs(float(doc["rho"]) - 0.5 * 3 ** -0.5) < 1e-10
    assert abs(float(doc["residual"])) < 1e-12
    assert doc["fields"]["rho"] == "approx"


def test_sing_general_payload(capsys):
    code, doc = run_json(capsys, "sing", "--degrees", "all")
    assert code == 0
    assert abs(float(doc["rho"]) - 1 / 12) < 1e-10
    assert float(doc["region_margin"]) > 0


def test_moments_quadrangulation_mean(capsys):
    code, doc = run_json(capsys, "moments", "--degrees", "4",
                         "--track", "4", "--max-edges", "6")
    assert code == 0
    assert doc["d"] == 4 and doc["n"] == 6
    assert doc["mean"] == "3" and doc["variance"] == "0"
    assert doc["total"] == "54"


def test_dist_mass_matches_count(capsys):
    code, doc = run_json(capsys, "dist", "--degrees", "all",
                         "--max-edges", "4", "--track", "3")
    assert code == 0
    assert doc["total"] == "378"
    assert sum(int(r["value"]) for r in doc["rows"]) == 378
    keys = [r["counts"] for r in doc["rows"]]
    assert keys == sorted(keys)


def test_clt_report(capsys):
    code, doc = run_json(capsys, "clt", "--degrees", "all",
                         "--track", "3", "--max-edges", "16")
    assert code == 0
    assert [r["n"] for r in doc["rows"]] == [2, 4, 8, 16]
    assert isinstance(doc["skew_improved"], bool)
    assert isinstance(doc["kurtosis_improved"], bool)
    assert all("skewness" in r for r in doc["rows"])


def test_fit_report(capsys):
    code, doc = run_json(capsys, "fit", "--degrees", "all",
                         "--max-edges", "64")
    assert code == 0
    assert abs(float(doc["rho_fit"]) - 1 / 12) < 1e-4
    assert doc["exponent"] == "-5/2" and doc["period"] == 1


def test_oracle_report(capsys):
    code, doc = run_json(capsys, "oracle", "--degrees", "4",
                         "--max-edges", "4")
    assert code == 0
    assert doc["total"] == "9" and doc["genus"] == 0


def test_schemes_report(capsys):
    code, doc = run_json(capsys, "schemes")
    assert code == 0
    assert doc["genus"] == 1 and doc["total"] == 5
    assert sorted(r["automorphisms"] for r in doc["rows"]) == [3, 4, 4, 6, 6]
    for r in doc["rows"]:
        assert sum(r["degrees"]) == 2 * r["edges"]
        assert len(r["colors"]) == r["vertices"]


def test_genus_count_rows(capsys):
    code, doc = run_json(capsys, "genus-count", "--degrees", "even",
                         "--max-edges", "4")
    assert code == 0
    assert [r["value"] for r in doc["rows"]] == ["0", "0", "1", "15"]


# --- failure paths --------------------------------------------------------

def test_unsupported_degree_set(capsys):
    code, doc = run_json(capsys, "count", "--degrees", "1,2")
    assert code == 2
    assert doc["error"]["type"] == "UnsupportedDegreeSet"


def test_missing_degrees(capsys):
    code, doc = run_json(capsys, "count")
    assert code == 2
    assert "--degrees" in doc["error"]["message"]


def test_track_validation(capsys):
    assert run(capsys, "dist", "--degrees", "all", "--max-edges", "3")[0] == 2
    assert run(capsys, "moments", "--degrees", "all", "--max-edges", "3",
               "--track", "3,4,5")[0] == 2
    assert run(capsys, "dist", "--degrees", "all", "--max-edges", "3",
               "--track", "a,b")[0] == 2


def test_unknown_command(capsys):
    assert main(["frobnicate"]) == 2


def test_odd_set_genus1_rejected(capsys):
    code, doc = run_json(capsys, "genus-count", "--degrees", "3,4",
                         "--max-edges", "4")
    assert code == 2
    assert doc["error"]["type"] == "NotBipartite"


def test_unreachable_tolerance_is_numeric_failure(capsys):
    code, doc = run_json(capsys, "sing", "--degrees", "4",
                         "--tol", "1e-300")
    assert code == 3
    assert doc["error"]["type"] == "NumericError"


def test_degenerate_law_is_numeric_failure(capsys):
    # every quadrangulation has exactly n/2 faces of valency 4
    code, doc = run_json(capsys, "clt", "--degrees", "4",
                         "--track", "4", "--max-edges", "16")
    assert code == 3
    assert doc["error"]["type"] == "DegenerateLaw"


# --- determinism ----------------------------------------------------------

def test_byte_identical_across_hash_seeds():
    argv = ("dist", "--degrees", "even", "--max-edges", "6",
            "--track", "2,4")
    a = spawn(*argv, seed="0")
    b = spawn(*argv, seed="4242")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    c = spawn("schemes", seed="0")
    d = spawn("schemes", seed="31337")
    assert c.stdout == d.stdout and c.returncode == 0


def test_entry_point_runs():
    p = spawn("count", "--degrees", "even", "--max-edges", "6")
    assert p.returncode == 0
    doc = json.loads(p.stdout)
    assert [r["value"] for r in doc["rows"]][-1] == "1584"
