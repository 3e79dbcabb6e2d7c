import json
import os
import subprocess
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(*args, config_text=None, tmp_path=None):
    cmd = [sys.executable, "-m", "zerodiv"]
    if config_text is not None:
        cfg = tmp_path / "run.cfg"
        cfg.write_text(config_text)
        cmd += ["--config", str(cfg)]
    cmd += list(args)
    env = dict(os.environ)
    env["PYTHONPATH"] = os.path.join(ROOT, "src") + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(cmd, capture_output=True, text=True, env=env)


def test_mul_zero_product():
    res = run_cli("--group", "cyclic:3", "mul", "1 - a", "1 + a + a^2")
    assert res.returncode == 0
    assert json.loads(res.stdout) == {"product": "0", "supp": 0}


def test_mul_free_four_terms():
    res = run_cli("--group", "free:2", "mul", "1 + a", "1 + b")
    assert res.returncode == 0
    assert json.loads(res.stdout)["supp"] == 4


def test_parse_error_exit_2_with_column():
    res = run_cli("--group", "free:2", "mul", "1 +", "1")
    assert res.returncode == 2
    assert "column" in res.stderr


def test_annihilate_check():
    assert run_cli("--group", "cyclic:3", "annihilate-check", "1 - a", "1 + a + a^2").returncode == 0
    assert run_cli("--group", "cyclic:3", "annihilate-check", "1 + a", "1 + a").returncode == 3


def test_extract_canonical():
    res = run_cli("--group", "cyclic:3", "extract", "1 + a + a^2", "1 - a")
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert rep["relation_B"] == "X1*X2"
    assert rep["relation_M"] == "X2^-2*X1"
    assert rep["verified"] is True
    assert rep["k_c"] == 1 and rep["k_p"] == 0 and rep["n"] == 2


def test_extract_trace():
    res = run_cli("--group", "cyclic:3", "extract", "--trace", "1 + a + a^2", "1 - a")
    rep = json.loads(res.stdout)
    assert rep["trace_B"]["letters"] == ["g1", "g2"]


def test_extract_exit_codes():
    assert run_cli("--group", "cyclic:3", "extract", "1 + a + a^2", "1 + a").returncode == 3
    # (1+g+g^2)(1+g+g^2+g^3) puts coefficient 3 on every element of C4
    assert run_cli("--group", "cyclic:4", "extract", "1 + a + a^2", "1 + a + a^2 + a^3").returncode == 3
    assert run_cli("--group", "cyclic:3", "extract", "1 + a + a^2", "0").returncode == 4
    assert run_cli("--group", "cyclic:4", "extract", "a + a^2 + a^3", "1 - a").returncode == 4


def test_recover_cycle_case():
    res = run_cli("--group", "cyclic:3", "--field", "GF:3", "recover", "1 + a + a^2", "1 + a + a^2")
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert rep["cycle_case"] is True and rep["h"] == [3, 1, 2]


def test_scan_exit_codes():
    res = run_cli("--group", "free:2", "scan", "1 + a + b", "--n-max", "3")
    assert res.returncode == 0
    lines = [json.loads(l) for l in res.stdout.splitlines()]
    assert [l["n"] for l in lines] == [2, 3]
    assert all(l["feasible_count"] == 0 for l in lines)

    res10 = run_cli("--group", "cyclic:3", "scan", "1 + a + a^2", "--n-max", "2")
    assert res10.returncode == 10
    rep = json.loads(res10.stdout)
    assert rep["feasible_count"] == 1 and rep["witnesses"]
    assert "not torsion-free" in res10.stderr

    empty = run_cli("--group", "free:2", "scan", "1 + a + b", "--n-max", "1")
    assert empty.returncode == 0 and empty.stdout == ""


def test_scan_byte_identical_across_workers_and_reruns():
    args = ("scan", "1 + a + b", "--n-max", "4")
    base = run_cli("--group", "free:2", "--workers", "1", *args)
    rerun = run_cli("--group", "free:2", "--workers", "1", *args)
    many = run_cli("--group", "free:2", "--workers", "8", *args)
    assert base.returncode == 0
    assert base.stdout == rerun.stdout == many.stdout


def test_scan_alphas_list():
    res = run_cli(
        "--group", "cyclic:3", "--alphas", "1,1;2,3",
        "scan", "1 + a + a^2", "--n-max", "2",
    )
    lines = [json.loads(l) for l in res.stdout.splitlines()]
    assert len(lines) == 2
    assert lines[0]["a"] == "1 + a + a^2"
    assert lines[1]["a"] == "1 + 2*a + 3*a^2"
    bad = run_cli("--group", "cyclic:3", "--alphas", "1", "scan", "1 + a + a^2", "--n-max", "2")
    assert bad.returncode == 2


def test_search_direct_cli():
    res = run_cli("--group", "cyclic:3", "search-direct", "1 + a + a^2", "--n-max", "2", "--radius", "1")
    assert res.returncode == 10
    assert json.loads(res.stdout)["found"] is True
    none = run_cli("--group", "free:2", "search-direct", "1 + a + b", "--n-max", "2", "--radius", "1")
    assert none.returncode == 0
    assert json.loads(none.stdout) == {"found": False}


def test_make_instance_deterministic():
    a = run_cli("--group", "sym:3", "--seed", "5", "make-instance")
    b = run_cli("--group", "sym:3", "--seed", "5", "make-instance")
    c = run_cli("--group", "sym:3", "--seed", "6", "make-instance")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout != c.stdout
    rep = json.loads(a.stdout)
    assert rep["group"] == "sym:3" and rep["n"] >= 1
    assert run_cli("--group", "free:2", "make-instance").returncode == 2


def test_enumerate_cli():
    res = run_cli("enumerate", "--n", "3")
    assert res.returncode == 0
    lines = [json.loads(l) for l in res.stdout.splitlines()]
    assert len(lines) == 4
    assert all(l["n"] == 3 and l["f"] == [1, 2, 3] for l in lines)
    full = run_cli("enumerate", "--n", "3", "--full")
    assert len(full.stdout.splitlines()) == 24


def test_config_file(tmp_path):
    res = run_cli(
        "mul", "1 - a", "1 + a + a^2",
        config_text="group = cyclic:3\nfield = Q\n",
        tmp_path=tmp_path,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["product"] == "0"

    bad = run_cli(
        "mul", "1", "1",
        config_text="grp = cyclic:3\n",
        tmp_path=tmp_path,
    )
    assert bad.returncode == 2
    assert "unknown config key" in bad.stderr

    # command-line flags override config values
    over = run_cli(
        "--group", "cyclic:4", "mul", "a^3", "a",
        config_text="group = cyclic:3\n",
        tmp_path=tmp_path,
    )
    assert json.loads(over.stdout)["product"] == "1"


def test_output_text_mode():
    res = run_cli("--output", "text", "--group", "cyclic:3", "mul", "1 - a", "1 + a + a^2")
    assert res.returncode == 0
    assert "supp 0" in res.stdout


def test_selftest_quick():
    res = run_cli("--seed", "1", "selftest", "--cases", "40")
    assert res.returncode == 0
    lines = [json.loads(l) for l in res.stdout.splitlines()]
    assert {l["suite"] for l in lines} == {
        "field-axioms", "group-axioms", "ring-axioms", "parser-roundtrip", "torsion-oracle",
    }
    assert all(l["pass"] for l in lines)


def test_stdout_is_json_lines_only():
    res = run_cli("--group", "cyclic:3", "scan", "1 + a + a^2", "--n-max", "2")
    for line in res.stdout.splitlines():
        json.loads(line)
