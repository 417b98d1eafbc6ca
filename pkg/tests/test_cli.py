"""End-to-end CLI tests, including the appendix table fixtures."""

import json
import os
import socket
import subprocess
import sys
import time

import pytest

CMD = [sys.executable, "-m", "mubkit"]

# dimension-4 arithmetic fixtures: the two structures the construction contrasts
GF4_CSV = """p,2,m,2,N,4,poly,1,1,1
# field_mul
0,0,0,0
0,1,2,3
0,2,3,1
0,3,1,2
# field_add
0,1,2,3
1,0,3,2
2,3,0,1
3,2,1,0
# mod_mul
0,0,0,0
0,1,2,3
0,2,0,2
0,3,2,1
# mod_add
0,1,2,3
1,2,3,0
2,3,0,1
3,0,1,2
"""


def run(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        CMD + list(args), capture_output=True, text=True, timeout=300, env=full_env
    )


def test_field_csv_matches_fixture():
    res = run("field", "--p", "2", "--m", "2", "--format", "csv")
    assert res.returncode == 0
    assert res.stdout == GF4_CSV


def test_field_json_schema():
    res = run("field", "--p", "3", "--m", "2")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["N"] == 9
    assert len(doc["field_mul"]) == 9
    assert all(len(row) == 9 for row in doc["field_add"])


def test_field_rejects_nonprime():
    res = run("field", "--p", "6", "--m", "1")
    assert res.returncode == 2
    assert "prime" in res.stderr


def test_missing_required_flag_is_usage_error():
    res = run("field")
    assert res.returncode == 2


def test_mubs_counts():
    res = run("mubs", "--p", "3", "--m", "2")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert len(doc["bases"]) == 10
    assert doc["phase_k"] == 0


def test_mubs_phase_choice_shifts_labels():
    base = json.loads(run("mubs", "--p", "2", "--m", "2").stdout)
    shifted = json.loads(run("mubs", "--p", "2", "--m", "2", "--phase-k", "1").stdout)
    # same state sets per basis, relabeled
    for b0, b1 in zip(base["bases"][1:], shifted["bases"][1:]):
        set0 = {tuple(s["exponents"]) for s in b0["states"]}
        set1 = {tuple(s["exponents"]) for s in b1["states"]}
        assert set0 == set1
    assert base["bases"][2]["states"][0] != shifted["bases"][2]["states"][0]


def test_byte_identical_reruns():
    first = run("mubs", "--p", "2", "--m", "3").stdout
    second = run("mubs", "--p", "2", "--m", "3").stdout
    assert first == second
    v1 = run("verify", "--p", "3", "--m", "1").stdout
    v2 = run("verify", "--p", "3", "--m", "1").stdout
    assert v1 == v2


def test_verify_pass_and_negative_control():
    res = run("verify", "--p", "2", "--m", "3")
    assert res.returncode == 0
    assert json.loads(res.stdout)["passed"] is True
    bad = run("verify", "--p", "2", "--m", "3", "--inject-phase-error")
    assert bad.returncode == 1
    assert json.loads(bad.stdout)["passed"] is False


def test_verify_odd_characteristic_includes_trace_form_comparison():
    res = run("verify", "--p", "5", "--m", "1")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert any(r["name"] == "wf_equivalence" for r in doc["reports"])


def test_verify_dense_cap_env(tmp_path):
    res = run("verify", "--p", "2", "--m", "2", env={"MUBKIT_DENSE_CAP": "0"})
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    names = [r["name"] for r in doc["reports"]]
    assert not any(n.startswith("basis_covariance") for n in names)


def test_tomo_round_trip_cli():
    res = run("tomo", "--p", "2", "--m", "2", "--seeds", "10")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["passed"] is True and doc["seeds"] == 10


def test_tomo_rho_file(tmp_path):
    rho = {"re": [[0.5, 0.0], [0.0, 0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]}
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(rho))
    res = run("tomo", "--p", "2", "--rho", str(path))
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert abs(doc["probabilities"][1][0] - 0.5) < 1e-12
    bad = run("tomo", "--p", "3", "--rho", str(path))
    assert bad.returncode == 2


def test_tomo_missing_rho_file():
    res = run("tomo", "--p", "2", "--rho", "/nonexistent/rho.json")
    assert res.returncode == 2


def test_ring_cli():
    res = run("ring", "--n", "6")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["class_count"] > 7
    assert doc["unbiasedness"]["best_subset_max_deviation"] > 0.01
    assert run("ring", "--n", "13").returncode == 2
    five = json.loads(run("ring", "--n", "5").stdout)
    assert five["class_count"] == 6


def _free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.mark.slow
def test_server_mode_matches_local_bytes():
    import httpx

    port = _free_port()
    proc = subprocess.Popen(
        CMD + ["serve", "--port", str(port)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    try:
        base = f"http://127.0.0.1:{port}"
        for _ in range(100):
            try:
                if httpx.get(base + "/health", timeout=1.0).status_code == 200:
                    break
            except Exception:
                time.sleep(0.1)
        else:
            raise RuntimeError("service never came up")
        local = run("mubs", "--p", "2", "--m", "2")
        remote = run("mubs", "--p", "2", "--m", "2", "--server", base)
        assert remote.returncode == 0
        assert remote.stdout == local.stdout
        bad = run("field", "--p", "6", "--server", base)
        assert bad.returncode == 2
        inject = run("verify", "--p", "2", "--inject-phase-error", "--server", base)
        assert inject.returncode == 1
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def test_server_unreachable_is_config_error():
    res = run("ring", "--n", "5", "--server", "http://127.0.0.1:1")
    assert res.returncode == 2
