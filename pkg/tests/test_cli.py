"""End-to-end CLI contract: exit codes, determinism, fresh-process verify."""

import json
import subprocess
import sys

import pytest

ALPHA = "1,1,2,2,-1,-1,-2,-2"


def run_cli(*args, timeout=240):
    return subprocess.run(
        [sys.executable, "-m", "sclkit", *args],
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def test_eval_examples():
    r = run_cli("eval", "--qm", "brooks(w=xyXY)", "--word", "xyXY")
    assert r.returncode == 0
    assert r.stdout.strip() == "1"
    r = run_cli("eval", "--qm", "hom(indexsum)", "--braid", "1,2,1")
    assert r.returncode == 0
    assert r.stdout.strip() == "3"
    r = run_cli("eval", "--qm", "brooks(w=xy)", "--word", "")
    assert r.returncode == 0
    assert r.stdout.strip() == "0"


def test_eval_json_shape():
    r = run_cli("eval", "--qm", "hom(indexsum)", "--braid", "1,2,1", "--format", "json")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["value"] == "3"
    assert doc["group"] == "braid:3"
    assert doc["defect_upper"] == "0"


def test_eval_usage_errors():
    assert run_cli("eval", "--qm", "zero", "--word", "a").returncode == 2
    assert run_cli("eval", "--qm", "brooks(w=ab)").returncode == 2
    assert (
        run_cli(
            "eval", "--qm", "brooks(w=ab)", "--word", "a", "--braid", "1"
        ).returncode
        == 2
    )
    r = run_cli("eval", "--qm", "brooks(w=", "--word", "a")
    assert r.returncode == 2
    assert "position" in r.stderr


def test_bad_subcommand_is_usage_error():
    assert run_cli("wibble").returncode == 2


def test_scl_bounds_identity_interval():
    r = run_cli("scl-bounds", "--group", "braid:3/pure", "--braid", "", "--format", "json")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["interval"] == ["0", "0"]
    assert "the identity needs no factors" in json.dumps(doc)


def test_scl_bounds_mixed_flip_family(tmp_path):
    out = tmp_path / "mixed.json"
    args = (
        "scl-bounds",
        "--group",
        "braid:3/pure",
        "--braid",
        ALPHA,
        "--n-max",
        "32",
        "--format",
        "json",
        "--out",
        str(out),
    )
    r = run_cli(*args)
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert doc["interval"] == ["0", "1/64"]
    uppers = [item for item in doc["items"] if item["direction"] == "upper"]
    assert len(uppers) == 32
    assert "1/64" in {u["bound"] for u in uppers}
    assert all(u["witness"]["power"] == 2 * (k + 1) for k, u in enumerate(uppers))
    # byte-identical on a second run with the same config and seed
    out2 = tmp_path / "mixed2.json"
    r2 = run_cli(*args[:-1], str(out2))
    assert r2.returncode == 0
    assert out.read_bytes() == out2.read_bytes()
    # every emitted certificate re-verifies in a fresh process
    v = run_cli("verify", str(out))
    assert v.returncode == 0
    assert "all claims verified" in v.stdout


def test_scl_bounds_ordinary_lower(tmp_path):
    out = tmp_path / "ordinary.json"
    r = run_cli(
        "scl-bounds",
        "--group",
        "braid:3/pure-ordinary",
        "--qm",
        "pullback(homog(brooks(w=xyXY)), pr1)",
        "--braid",
        ALPHA,
        "--radius",
        "2",
        "--cap",
        "1",
        "--format",
        "json",
        "--out",
        str(out),
    )
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    lowers = [item for item in doc["items"] if item["direction"] == "lower"]
    assert len(lowers) == 1
    assert lowers[0]["bound"] == "1/12"
    assert doc["interval"][0] == "1/12"
    v = run_cli("verify", str(out))
    assert v.returncode == 0


def test_scl_bounds_refuses_non_invariant_lower_in_mixed_mode():
    r = run_cli(
        "scl-bounds",
        "--group",
        "braid:3/pure",
        "--qm",
        "pullback(homog(brooks(w=xyXY)), pr1)",
        "--braid",
        ALPHA,
        "--n-max",
        "4",
        "--format",
        "json",
    )
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    notes = " ".join(doc["notes"])
    assert "lower bound refused" in notes
    assert doc["interval"][0] == "0"
    assert not any(item["direction"] == "lower" for item in doc["items"])


def test_verify_exit_codes(tmp_path):
    good = tmp_path / "good.json"
    r = run_cli(
        "scl-bounds",
        "--group",
        "braid:3/pure",
        "--braid",
        ALPHA,
        "--n-max",
        "2",
        "--format",
        "json",
        "--out",
        str(good),
    )
    assert r.returncode == 0

    assert run_cli("verify", str(good)).returncode == 0

    doc = json.loads(good.read_text())
    target = next(i for i in doc["items"] if i["direction"] == "upper")
    target["bound"] = "1/3"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    r = run_cli("verify", str(bad))
    assert r.returncode == 1
    assert "bound arithmetic" in r.stdout + r.stderr

    empty = tmp_path / "empty.json"
    empty.write_text("")
    r = run_cli("verify", str(empty))
    assert r.returncode == 1
    assert "schema" in (r.stdout + r.stderr).lower()

    assert run_cli("verify", str(tmp_path / "missing.json")).returncode == 2


def test_verify_paper_subset_and_bad_key():
    r = run_cli("verify-paper", "--only", "flip-identity")
    assert r.returncode == 0
    assert "PASS" in r.stdout
    r = run_cli("verify-paper", "--only", "2")
    assert r.returncode == 0
    assert run_cli("verify-paper", "--only", "nope").returncode == 2


def test_verify_paper_json_deterministic():
    args = ("verify-paper", "--only", "10", "--format", "json", "--seed", "11")
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert doc["format"] == "verify-report/1"
    assert doc["seed"] == 11
    assert doc["ok"] is True


def test_csv_format_works():
    r = run_cli("verify-paper", "--only", "2", "--format", "csv")
    assert r.returncode == 0
    lines = [l for l in r.stdout.splitlines() if l]
    assert len(lines) >= 2
    assert "," in lines[0]


def test_human_format_scl_bounds_mentions_interval():
    r = run_cli(
        "scl-bounds",
        "--group",
        "braid:3/pure",
        "--braid",
        ALPHA,
        "--n-max",
        "2",
    )
    assert r.returncode == 0
    assert "interval" in r.stdout
