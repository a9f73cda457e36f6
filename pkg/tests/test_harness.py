import csv
import io
import json
import shutil
import subprocess
from fractions import Fraction

import pytest

from asai_verifier.errors import ConfigInvalid, IoFailure, UnknownSuite
from asai_verifier.harness import (
    SUITES,
    SuiteSpec,
    VerificationReport,
    all_passed,
    emit_report,
    list_suites,
    load_reports,
    run_suite,
)
from asai_verifier.harness.cli import main
from asai_verifier.harness.suites import SuiteDef, _desc, compare, worker_count

SMALL_RND = {"rnd": {"n_max": 40, "ram_n_max": 12, "ram_y_max": 30}}
SMALL_COMPA = {"compa": {"max_norm": 12, "t_values": [0.5], "mu_indices": [1]}}

ALL_SUITES = {"bijection", "zagier", "rnd", "euler", "compa", "hecke", "bessel", "sears",
              "plancherel", "a0", "an", "dcard", "ddivn"}


def sample_reports():
    return [
        VerificationReport("x", {"n": "2", "D": "5"}, Fraction(1, 3), Fraction(1, 3), 0.0, 0.0, True, 3, "exact"),
        VerificationReport("x", {"n": "10", "D": "5"}, complex(0.1, -2.5), complex(0.1, -2.5000000001),
                           1e-10, 4e-11, True, 0, "float"),
        VerificationReport("x", {"n": "11", "D": "5"}, None, None, None, None, False, 1, "error: Boom: x"),
    ]


def test_suite_registry():
    assert set(SUITES) == ALL_SUITES
    assert [n for n, _ in list_suites()] == list(SUITES)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite(SuiteSpec("nope"))


@pytest.mark.parametrize("kwargs", [
    {"field_D": 4},
    {"field_D": 79},
    {"seed": "x"},
    {"format": "xml"},
    {"parallel": 0},
    {"ranges": {"rnd": {"bogus": 3}}},
    {"ranges": {"rnd": {"n_max": -1}}},
    {"tolerances": {"rnd": -1.0}},
])
def test_config_invalid(kwargs):
    with pytest.raises(ConfigInvalid):
        SuiteSpec("rnd", **kwargs).validate()


def test_zagier_needs_D_1_mod_4():
    with pytest.raises(ConfigInvalid):
        SuiteSpec("zagier", field_D=3).validate()
    SuiteSpec("zagier", field_D=13).validate()


def test_empty_list_bound_rejected():
    with pytest.raises(ConfigInvalid):
        SuiteSpec("compa", ranges={"compa": {"t_values": []}}).validate()


def test_tolerance_forms():
    spec = SuiteSpec("sears", tolerances={"sears": 0.5})
    assert set(spec.tolerance().values()) == {0.5}
    spec = SuiteSpec("sears", tolerances={"sears": {"theorem": 0.2}})
    assert spec.tolerance()["theorem"] == 0.2 and spec.tolerance()["inversion"] == 1e-2
    with pytest.raises(ConfigInvalid):
        SuiteSpec("sears", tolerances={"sears": {"nope": 1.0}}).tolerance()


def test_compare_modes():
    assert compare(Fraction(1, 3), Fraction(1, 3), None, "exact", "p").passed
    assert not compare(3, Fraction(1, 3), None, "exact", "p").passed
    out = compare(1.0 + 1e-12, 1.0, 1e-9, "abs", "p")
    assert out.passed and out.abs_error == pytest.approx(1e-12, rel=1e-3)
    out = compare(2.0, 1.0, 0.5, "rel", "p", scale=4.0)
    assert out.passed and out.rel_error == 0.25


def test_json_round_trip(tmp_path):
    reps = sample_reports()
    path = tmp_path / "r.json"
    emit_report(reps, "json", path)
    back = load_reports(path)
    assert back == reps
    assert isinstance(back[0].lhs, Fraction)
    obj = json.loads(path.read_text())[0]
    assert set(obj) == {"suite_name", "instance", "lhs", "rhs", "abs_error", "rel_error", "pass",
                        "runtime_ms", "provenance"}


def test_empty_outputs():
    assert json.loads(emit_report([], "json")) == []
    rows = list(csv.reader(io.StringIO(emit_report([], "csv"))))
    assert rows == [["suite_name", "instance", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_error",
                     "rel_error", "pass", "runtime_ms", "provenance"]]


def test_csv_seventeen_digits():
    text = emit_report(sample_reports(), "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0]["lhs_re"] == "0.33333333333333331"
    assert rows[0]["instance"] == "D=5;n=2"
    assert float(rows[1]["rhs_im"]) == -2.5000000001
    assert rows[2]["lhs_re"] == "" and rows[2]["pass"] == "false"


def test_non_finite_errors_become_null():
    rep = VerificationReport("x", {}, 1.0, 0.0, float("inf"), float("nan"), False, 0, "p")
    obj = json.loads(emit_report([rep], "json"))[0]
    assert obj["abs_error"] is None and obj["rel_error"] is None


def test_io_failure(tmp_path):
    with pytest.raises(IoFailure):
        emit_report([], "json", tmp_path / "missing" / "r.json")
    with pytest.raises(IoFailure):
        load_reports(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ConfigInvalid):
        load_reports(bad)


def test_canonical_order_and_determinism():
    spec = SuiteSpec("rnd", ranges=SMALL_RND)
    a = [r.without_timing() for r in run_suite(spec)]
    b = [r.without_timing() for r in run_suite(spec)]
    assert a == b
    ns = [int(r["instance"]["n"]) for r in a if r["instance"].get("check") == "sum"]
    assert ns == sorted(ns)


def test_seeded_suites_reproducible():
    spec = SuiteSpec("euler", ranges={"euler": {"samples": 3}}, seed=11)
    assert [r.without_timing() for r in run_suite(spec)] == [r.without_timing() for r in run_suite(spec)]
    other = SuiteSpec("euler", ranges={"euler": {"samples": 3}}, seed=12)
    assert [r.lhs for r in run_suite(spec)] != [r.lhs for r in run_suite(other)]


def test_parallel_matches_serial():
    spec = SuiteSpec("euler", ranges={"euler": {"samples": 4}})
    serial = [r.without_timing() for r in run_suite(spec)]
    spec.parallel = 2
    assert [r.without_timing() for r in run_suite(spec)] == serial


def test_threads_env(monkeypatch):
    monkeypatch.setenv("ASAI_VERIFIER_THREADS", "3")
    assert worker_count(1) == 3
    monkeypatch.setenv("ASAI_VERIFIER_THREADS", "zero")
    with pytest.raises(ConfigInvalid):
        worker_count(1)
    monkeypatch.delenv("ASAI_VERIFIER_THREADS")
    assert worker_count(2) == 2


def _explode_instances(spec, b):
    return [(_desc(i=i), (i,)) for i in range(4)]


def _explode_eval(D, b, tol, args):
    if args[0] == 2:
        raise ZeroDivisionError("boom")
    return [({}, compare(Fraction(args[0]), Fraction(args[0]), None, "exact", "p"))]


def test_failure_does_not_abort_sweep(monkeypatch):
    monkeypatch.setitem(SUITES, "explode", SuiteDef("explode", "test", {}, {}, None,
                                                    _explode_instances, _explode_eval))
    reps = run_suite(SuiteSpec("explode"))
    assert [r.instance["i"] for r in reps] == ["0", "1", "2", "3"]
    assert [r.passed for r in reps] == [True, True, False, True]
    assert reps[2].provenance.startswith("error: ZeroDivisionError")
    assert not all_passed(reps)


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "rnd.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"ranges": SMALL_RND, "seed": 1}))
    assert main(["verify", "rnd", "--config", str(cfg), "--out", str(out)]) == 0
    assert all_passed(load_reports(out))
    cfg.write_text(json.dumps({"ranges": SMALL_COMPA}))
    assert main(["verify", "compa", "--config", str(cfg), "--format", "csv"]) == 1
    assert "suite_name,instance" in capsys.readouterr().out
    assert main(["verify", "nope"]) == 2
    assert main(["verify", "rnd", "--D", "4"]) == 2
    assert main(["verify", "zagier", "--D", "3"]) == 2
    assert main(["verify", "rnd", "--parallel", "0"]) == 2
    assert main(["verify", "--frobnicate"]) == 2
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert main(["verify", "rnd", "--config", str(cfg)]) == 2
    assert main(["verify", "rnd", "--config", str(tmp_path / "none.json")]) == 2


def test_cli_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suite_name": "rnd", "field_D": 13, "ranges": SMALL_RND, "format": "csv"}))
    assert main(["verify", "--config", str(cfg), "--D", "5", "--format", "json", "--max-norm", "20"]) == 0
    reps = json.loads(capsys.readouterr().out)
    assert {r["instance"]["D"] for r in reps} == {"5"}
    assert max(int(r["instance"]["n"]) for r in reps if r["instance"].get("check") == "sum") == 20


def test_cli_suite_flag_wins(capsys):
    assert main(["verify", "compa", "--suite", "rnd", "--max-norm", "5"]) == 0
    reps = json.loads(capsys.readouterr().out)
    assert {r["suite_name"] for r in reps} == {"rnd"}


def test_cli_tol_flag(capsys):
    # a generous tolerance lets the literal compa identities pass
    args = ["verify", "compa", "--max-norm", "12", "--tol", "1e6"]
    assert main(args) == 0
    capsys.readouterr()


def test_cli_report_command(tmp_path, capsys):
    path = tmp_path / "r.json"
    emit_report(sample_reports(), "json", path)
    assert main(["report", str(path), "--format", "csv"]) == 1
    text = capsys.readouterr().out
    assert text.splitlines()[0].startswith("suite_name,instance,lhs_re")
    assert main(["report", str(tmp_path / "absent.json")]) == 2
    good = tmp_path / "g.json"
    emit_report(sample_reports()[:2], "json", good)
    assert main(["report", str(good), "--out", str(tmp_path / "g.csv"), "--format", "csv"]) == 0
    assert (tmp_path / "g.csv").read_text().count("\n") == 3


def test_cli_list_suites(capsys):
    assert main(["list-suites"]) == 0
    names = {line.split()[0] for line in capsys.readouterr().out.splitlines()}
    assert names == ALL_SUITES


@pytest.mark.skipif(shutil.which("asai-verifier") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["asai-verifier", "verify", "rnd", "--max-norm", "10"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["suite_name"] == "rnd"
    proc = subprocess.run(["asai-verifier", "verify", "rnd", "--D", "9"], capture_output=True, text=True)
    assert proc.returncode == 2 and "config error" in proc.stderr
