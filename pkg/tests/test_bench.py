import pytest

from funcsp.bench import (BACKENDS, CSV_HEADER, ConfigError, RunRecord,
                          agreement_failures, coloring_instance,
                          coloring_instance_from_graph, default_config,
                          emit_csv, emit_series, queens_instance, run_instance,
                          run_suite, trend_flags)
from funcsp.problems import make_graph


def make_record(**kw):
    base = dict(problem="queens", param=4, arcs=None, backend="fd",
                heuristic="ffc", status="sat", time_ms=3, backtracks=2,
                choices=7, solutions_found=1, seed=0)
    base.update(kw)
    return RunRecord(**base)


def test_all_backends_sat_on_queens4():
    inst = queens_instance(4)
    records = []
    for backend in BACKENDS:
        rec, interps = run_instance(inst, backend, mode="first", timeout_s=30)
        assert rec.status == "sat", backend
        assert rec.solutions_found == 1
        assert len(interps) == 1
        records.append(rec)
    assert agreement_failures(records) == []


def test_k5_coloring_unsat_everywhere():
    k5 = make_graph(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    inst = coloring_instance_from_graph(k5, 4)
    for backend in ("fd", "asp", "mf", "bt"):
        rec, interps = run_instance(inst, backend, mode="first", timeout_s=30)
        assert rec.status == "unsat", backend
        assert interps == []


def test_queens2_unsat():
    inst = queens_instance(2)
    for backend in BACKENDS:
        rec, _ = run_instance(inst, backend, mode="first", timeout_s=30)
        assert rec.status == "unsat", backend


def test_timeout_status_drops_solutions():
    inst = queens_instance(12)
    rec, interps = run_instance(inst, "asp", mode="all", timeout_s=0.0)
    assert rec.status == "timeout"
    assert rec.solutions_found == 0
    assert interps == []


def test_run_instance_mode_all_counts():
    inst = queens_instance(4)
    rec, interps = run_instance(inst, "fd", mode="all", timeout_s=30)
    assert rec.solutions_found == 2
    assert rec.status == "sat"


def test_coloring_instance_records_arcs():
    inst = coloring_instance(10, 0.2, 4, seed=1)
    rec, _ = run_instance(inst, "fd", mode="first", timeout_s=30)
    assert inst.arcs is not None
    assert rec.arcs == inst.arcs
    assert rec.seed == 1


def test_agreement_failures_detects_mismatch():
    records = [make_record(backend="fd", status="sat"),
               make_record(backend="asp", status="unsat"),
               make_record(backend="mf", status="timeout")]
    failures = agreement_failures(records)
    assert len(failures) == 1
    assert "queens param=4" in failures[0]
    # timeouts never participate
    records = [make_record(backend="fd", status="sat"),
               make_record(backend="asp", status="timeout")]
    assert agreement_failures(records) == []


def test_trend_flags_on_inversion():
    records = [make_record(backend="fd", backtracks=50),
               make_record(backend="asp", backtracks=3)]
    flags = trend_flags(records)
    assert len(flags) == 1 and "n=4" in flags[0]
    records = [make_record(backend="fd", backtracks=2),
               make_record(backend="asp", backtracks=400)]
    assert trend_flags(records) == []


def test_emit_csv_golden(tmp_path):
    path = tmp_path / "out.csv"
    emit_csv([make_record()], str(path))
    assert path.read_text() == (
        CSV_HEADER + "\n"
        "queens,4,,fd,ffc,sat,3,2,7,1,0\n")


def test_emit_csv_sorted_and_refuses_empty(tmp_path):
    recs = [make_record(param=8), make_record(param=4, backend="gt", heuristic="lex"),
            make_record(param=4)]
    path = tmp_path / "out.csv"
    emit_csv(recs, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert [l.split(",")[1] for l in lines[1:]] == ["4", "4", "8"]
    with pytest.raises(ValueError):
        emit_csv([], str(path))


def test_emit_series(tmp_path):
    recs = [make_record(param=8, time_ms=9, backtracks=5),
            make_record(param=4, time_ms=1, backtracks=2),
            make_record(param=6, time_ms=4, backtracks=3)]
    written = emit_series(recs, str(tmp_path))
    assert written == [str(tmp_path / "queens_fd.dat")]
    assert (tmp_path / "queens_fd.dat").read_text() == "4 1 2\n6 4 3\n8 9 5\n"
    with pytest.raises(ValueError):
        emit_series([], str(tmp_path))


def small_config():
    return {
        "timeout_s": 30.0,
        "mode": "first",
        "heuristic": "ffc",
        "queens": [{"backends": ["fd", "asp", "bt", "gt"], "ns": [4, 5]}],
        "coloring": [{"backends": ["fd", "mf"], "vertices": [6],
                      "edge_prob": 0.3, "colors": 4, "seed": 2}],
    }


def test_run_suite_small_sweep():
    result = run_suite(small_config())
    assert len(result.records) == 10
    assert result.disagreements == []
    assert all(r.status == "sat" for r in result.records)
    # records come back sorted by (problem, param, backend)
    keys = [(r.problem, r.param, r.backend) for r in result.records]
    assert keys == sorted(keys)


def test_run_suite_deterministic_modulo_time():
    def strip(records):
        return [(r.problem, r.param, r.arcs, r.backend, r.heuristic, r.status,
                 r.backtracks, r.choices, r.solutions_found, r.seed)
                for r in records]
    a = run_suite(small_config())
    b = run_suite(small_config())
    assert strip(a.records) == strip(b.records)


def test_config_validation():
    with pytest.raises(ConfigError, match="unknown backend"):
        run_suite({"queens": [{"backends": ["magic"], "ns": [4]}]})
    with pytest.raises(ConfigError, match="unknown config key"):
        run_suite({"bogus": 1})
    with pytest.raises(ConfigError, match="bad mode"):
        run_suite({"mode": "sometimes"})
    with pytest.raises(ConfigError, match="without ns"):
        run_suite({"queens": [{"backends": ["fd"]}]})


def test_default_config_shape():
    cfg = default_config()
    assert cfg["timeout_s"] == 60.0
    sweeps = {tuple(job["backends"]): job["ns"] for job in cfg["queens"]}
    assert sweeps[("fd", "abduce")] == list(range(4, 21, 2))
    assert sweeps[("asp", "mf", "bt")] == list(range(4, 13))
    assert sweeps[("gt",)] == [4, 5, 6, 7]
    assert cfg["coloring"][0]["vertices"] == [10, 20, 30, 40, 50, 60]
    assert cfg["coloring"][0]["edge_prob"] == 0.2
