import json
import math
import subprocess
import sys

import pytest

from primecycles.cli import main, parse_spec
from primecycles.cycle_classes import CycleClassSpec
from primecycles.errors import InvalidArgumentError
from primecycles.exact_enum import build_table
from primecycles.primes import build_sieve
from primecycles.sampler import Sampler
from primecycles.verify import parse_report


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_parse_spec_forms(sieve_small):
    assert parse_spec("primes", sieve_small).kind == "primes"
    assert parse_spec("all").describe() == "all"
    assert parse_spec("odd").describe() == "mod:2:1"
    assert parse_spec("even").describe() == "mod:2:0"
    assert parse_spec("mod:5:1,4").describe() == "mod:5:1,4"
    assert parse_spec("set:2,3,10").describe() == "set:2,3,10"
    single = parse_spec("set:7")
    assert single.kind == "singleton" and single.contains(7)
    for bad in ("primes",):
        with pytest.raises(InvalidArgumentError):
            parse_spec(bad)  # no sieve table supplied
    for bad in ("bogus", "mod:5", "mod:a:1", "set:x", "mod:1:2"):
        with pytest.raises(InvalidArgumentError):
            parse_spec(bad)


def test_count_exact(capsys):
    rc, out, err = run(capsys, "count", "--n", "5")
    assert rc == 0 and out == "44\n" and err == ""
    rc, out, _ = run(capsys, "count", "--n", "6")
    assert rc == 0 and out == "55\n"
    rc, out, _ = run(capsys, "count", "--spec", "odd", "--n", "6")
    assert rc == 0 and out == "225\n"
    rc, out, _ = run(capsys, "count", "--spec", "all", "--n", "10")
    assert rc == 0 and out == f"{math.factorial(10)}\n"


def test_count_float(capsys):
    rc, out, _ = run(capsys, "count", "--mode", "float", "--n", "5")
    assert rc == 0 and out == "44\n"
    rc, out, _ = run(capsys, "count", "--mode", "float", "--n", "2000",
                     "--fast")
    assert rc == 0
    mant, _, exp = out.strip().partition("e+")
    assert 1.0 <= float(mant) < 10.0 and int(exp) > 300


def test_count_domain_error(capsys):
    rc, out, err = run(capsys, "count", "--n", "3000")
    assert rc == 1 and out == ""
    assert err.startswith("error:")


def test_usage_errors(capsys):
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "count")[0] == 2
    assert run(capsys, "count", "--n", "-3")[0] == 2
    assert run(capsys, "count", "--spec", "bogus", "--n", "5")[0] == 2
    assert run(capsys, "count", "--spec", "mod:a:1", "--n", "5")[0] == 2
    assert run(capsys, "sample", "--n", "0", "--seed", "1")[0] == 2
    assert run(capsys, "sample", "--n", "5", "--seed", "1",
               "--count", "0")[0] == 2
    assert run(capsys)[0] == 2


def test_help(capsys):
    rc, out, _ = run(capsys, "--help")
    assert rc == 0
    assert "count" in out and "verify" in out


def test_constants_json(capsys):
    rc, out, _ = run(capsys, "constants")
    assert rc == 0
    blob = json.loads(out)
    assert set(blob) == {"euler_gamma", "mertens_c", "e_to_c",
                         "method", "tail_bound"}
    assert blob["mertens_c"] == pytest.approx(0.26149721284764278, abs=1e-14)
    assert blob["e_to_c"] == pytest.approx(1.2988733214090304, rel=1e-14)
    assert "prime-zeta" in blob["method"]


def test_constants_direct(capsys):
    rc, out, _ = run(capsys, "constants", "--method", "direct",
                     "--limit", "100000")
    assert rc == 0
    blob = json.loads(out)
    assert blob["mertens_c"] == pytest.approx(0.26149721284764278, abs=2e-5)
    assert blob["tail_bound"] == pytest.approx(1e-5, rel=1e-3)
    assert "direct" in blob["method"]


def test_sum(capsys):
    rc, out, _ = run(capsys, "sum", "--n", "5")
    assert rc == 0 and out == "93/40\n"
    rc, out, _ = run(capsys, "sum", "--n", "5", "--mode", "float")
    assert rc == 0 and out == "2.3250000000000002\n"
    rc, out, _ = run(capsys, "sum", "--spec", "all", "--n", "10")
    assert rc == 0 and out == "11\n"


def test_table_stdout(capsys):
    rc, out, _ = run(capsys, "table", "--n-max", "6")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "n,P_n,a_n,T_n"
    assert lines[1] == "0,1,1,1"
    assert lines[6] == "5,44,0.36666666666666664,2.3250000000000002"


def test_table_file(tmp_path, capsys):
    dest = tmp_path / "t.csv"
    rc, out, _ = run(capsys, "table", "--n-max", "6", "--mode", "float",
                     "--out", str(dest))
    assert rc == 0 and out == ""
    lines = dest.read_text().splitlines()
    assert lines[0] == "n,a_n,T_n"
    assert len(lines) == 8


def test_sample_deterministic(capsys):
    rc, out1, _ = run(capsys, "sample", "--n", "5", "--seed", "42",
                      "--count", "3")
    assert rc == 0
    rc, out2, _ = run(capsys, "sample", "--n", "5", "--seed", "42",
                      "--count", "3")
    assert out1 == out2
    lines = out1.splitlines()
    assert len(lines) == 3
    sieve = build_sieve(1000)
    for line in lines:
        ks = [int(v) for v in line.split(",")]
        assert sum(ks) == 5
        assert all(sieve.is_prime(k) for k in ks)


def test_sample_matches_library(capsys):
    rc, out, _ = run(capsys, "sample", "--n", "50", "--seed", "7",
                     "--count", "2")
    assert rc == 0
    spec = CycleClassSpec.primes(build_sieve(1000))
    sam = Sampler(build_table(spec, 50, mode="exact"), 7)
    expect = [",".join(str(k) for k in sam.sample(50).lengths)
              for _ in range(2)]
    assert out.splitlines() == expect


def test_phi_outputs(capsys):
    rc, out, _ = run(capsys, "phi", "--z", "0.5")
    assert rc == 0 and out == "0.17408707176097937\n"
    rc, out, _ = run(capsys, "phi", "--z", "0.5", "--f")
    assert rc == 0 and float(out) == pytest.approx(1.190159190565471, rel=1e-13)
    rc, out, _ = run(capsys, "phi", "--z", "0.5", "--order", "2")
    assert rc == 0 and float(out) == pytest.approx(2.713526991405582, rel=1e-13)
    rc, out, _ = run(capsys, "phi", "--split", "--t", "0.001")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "t,cutoff,phi1,phi2,phi3"
    t, cutoff, p1, p2, p3 = (float(v) for v in lines[1].split(","))
    assert t == 0.001 and p1 > 0 > p2 and p3 > 0
    from primecycles.analytic import phi_eval
    assert p1 + p2 + p3 == pytest.approx(phi_eval(math.exp(-0.001)), abs=1e-9)


def test_phi_errors(capsys):
    rc, _, err = run(capsys, "phi", "--z", "1.0")
    assert rc == 1 and err.startswith("error:")
    assert run(capsys, "phi")[0] == 2
    assert run(capsys, "phi", "--split")[0] == 2
    rc, _, err = run(capsys, "phi", "--split", "--t", "0.5")
    assert rc == 1 and err.startswith("error:")


def test_verify_ok_paths(capsys):
    rc, out, err = run(capsys, "verify", "--which", "partial-sum",
                       "--n-grid", "100,1000")
    assert rc == 0 and err == ""
    assert out == "partial-sum: ok\n"
    rc, out, _ = run(capsys, "verify", "--which", "slowvar")
    assert rc == 0 and out == "slowvar: ok\n"
    rc, out, _ = run(capsys, "verify", "--which", "phi",
                     "--t-grid", "0.001,0.0001")
    assert rc == 0 and out == "phi: ok\n"
    rc, out, _ = run(capsys, "verify", "--which", "pnt")
    assert rc == 0 and out == "pnt: ok\n"


def test_verify_detects_departure(capsys):
    # at n = 4 and 6 the partial sum is nowhere near its n -> inf model
    rc, out, err = run(capsys, "verify", "--which", "hlk",
                       "--n-grid", "4,6")
    assert rc == 1
    assert "hlk: FAIL" in out
    assert "failed checks: hlk" in err


def test_verify_emits_reports(tmp_path, capsys):
    prefix = tmp_path / "rep"
    rc, _, _ = run(capsys, "verify", "--which", "partial-sum",
                   "--n-grid", "100,1000", "--format", "json",
                   "--out", str(prefix))
    assert rc == 0
    rows = parse_report(str(prefix) + "-partial-sum.json", "json")
    assert [r.x for r in rows] == [100.0, 1000.0]


def test_verify_bad_grid(capsys):
    rc, _, err = run(capsys, "verify", "--which", "partial-sum",
                     "--n-grid", "1,10")
    assert rc == 1 and err.startswith("error:")


def test_sieve_env_var(capsys, monkeypatch):
    monkeypatch.setenv("PRIMECYCLES_SIEVE_LIMIT", "50")
    rc, _, err = run(capsys, "count", "--n", "100")
    assert rc == 1 and err.startswith("error:")
    # explicit flag wins over the environment
    rc, out, _ = run(capsys, "count", "--n", "100", "--sieve-limit", "200")
    assert rc == 0 and int(out) > 0
    monkeypatch.setenv("PRIMECYCLES_SIEVE_LIMIT", "abc")
    rc, _, err = run(capsys, "count", "--n", "100")
    assert rc == 1 and err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "primecycles.cli", "count", "--n", "5"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "44\n"
