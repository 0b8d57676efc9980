import json
import math
import os

import pytest

import zenocat.metrics as metrics
from zenocat.cli import main
from zenocat.config import REQUIRED_KEYS, dump_config, load_config, parse_config
from zenocat.protocols import ConfigError
from zenocat.tables import OutputTable, format_number, write_atomic

BASE = {"alpha_sq": 4, "m_cycles": 10, "epsilon": 0.0, "g_mhz": 7.8, "gamma_mhz": 3.0,
        "kappa_r_mhz": 2.3, "kappa_t_mhz": 0.0, "delta_mhz": 0.0, "mode": "multi"}


def write_config(tmp_path, **overrides):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({**BASE, **overrides}))
    return str(path)


def test_round_trip():
    cfg = parse_config({**BASE, "epsilon": 0.0391, "delta_mhz": -0.25, "trace": True})
    assert parse_config(json.loads(dump_config(cfg))) == cfg


@pytest.mark.parametrize("key", REQUIRED_KEYS)
def test_missing_key_named(key):
    data = dict(BASE)
    del data[key]
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.field == key


@pytest.mark.parametrize("data,field", [
    ({**BASE, "gama_mhz": 3.0}, "gama_mhz"),
    ({**BASE, "epsilon": 1.5}, "epsilon"),
    ({**BASE, "alpha_sq": 0}, "alpha_sq"),
    ({**BASE, "m_cycles": 2.5}, "m_cycles"),
    ({**BASE, "mode": "both"}, "mode"),
    ({**BASE, "trace": "yes"}, "trace"),
    ({**BASE, "kappa_r_mhz": 0.0}, "kappa_r_mhz"),
    ({**BASE, "g_mhz": True}, "g_mhz"),
])
def test_bad_values_named(data, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.field == field


def test_load_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)


@pytest.mark.parametrize("value,text", [
    (1.0, "1.00000000000e+00"),
    (-0.0, "0.00000000000e+00"),
    (3, "3"),
    (True, "1"),
    (1 / 3, "3.33333333333e-01"),
])
def test_format_number(value, text):
    assert format_number(value) == text


def test_complex_columns_split():
    table = OutputTable.from_records(["x", "z"], [[1.0, 1 + 2j]])
    assert table.header == ["x", "z_re", "z_im"]
    assert table.to_csv().splitlines()[1] == "1.00000000000e+00,1.00000000000e+00,2.00000000000e+00"


def test_write_atomic_leaves_no_temp(tmp_path):
    target = tmp_path / "out.csv"
    write_atomic(target, "a\n")
    write_atomic(target, "b\n")
    assert target.read_bytes() == b"b\n"
    assert os.listdir(tmp_path) == ["out.csv"]


def test_simulate_ideal(tmp_path, capsys):
    assert main(["simulate", "--config", write_config(tmp_path, gamma_mhz=0.0)]) == 0
    out = capsys.readouterr().out
    assert "F = 1.000000000000" in out
    c_a = float(out.split("C_a = ")[1].split()[0])
    assert c_a == pytest.approx(4.0, abs=1e-6)


def test_simulate_reference_row(tmp_path, capsys):
    assert main(["simulate", "--config", write_config(tmp_path, alpha_sq=3, m_cycles=6,
                                                       epsilon=3.91e-2)]) == 0
    lines = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
    assert float(lines["F_ef"]) == pytest.approx(0.70, abs=0.005)
    assert float(lines["alpha_ef_sq"]) == pytest.approx(2.36, abs=0.005)


def test_simulate_trace(tmp_path):
    trace = tmp_path / "trace.csv"
    assert main(["simulate", "--config", write_config(tmp_path, m_cycles=3), "--trace", str(trace)]) == 0
    lines = trace.read_text().splitlines()
    assert lines[0] == "cycle,branch,zone,re,im"
    assert len(lines) == 1 + 2 * 4 * 2


def test_simulate_bad_epsilon(tmp_path, capsys):
    assert main(["simulate", "--config", write_config(tmp_path, epsilon=1.5)]) == 1
    assert "epsilon" in capsys.readouterr().err


def test_simulate_unknown_key(tmp_path, capsys):
    assert main(["simulate", "--config", write_config(tmp_path, gama_mhz=1.0)]) == 1
    assert "gama_mhz" in capsys.readouterr().err


def test_simulate_missing_file(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.json")]) == 1


def test_simulate_numeric_diagnostic(tmp_path, capsys):
    path = write_config(tmp_path, m_cycles=20, epsilon=0.1)
    assert main(["simulate", "--config", path]) == 3
    assert "negative cattiness" in capsys.readouterr().err


def test_bad_arguments_exit_1():
    assert main(["frobnicate"]) == 1
    assert main(["sweep", "--axis", "gamma"]) == 1


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--config", write_config(tmp_path), "--axis", "gamma", "--min", "0",
                 "--max", "1", "--count", "101", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "axis_value,F,F_ef,C_a,alpha_ef_sq,v_max"
    assert len(lines) == 102


def test_sweep_single_point_matches_simulate(tmp_path, capsys):
    cfg = write_config(tmp_path, epsilon=1e-3)
    out = tmp_path / "one.csv"
    assert main(["sweep", "--config", cfg, "--axis", "epsilon", "--min", "1e-3", "--max", "1e-3",
                 "--count", "1", "--out", str(out)]) == 0
    capsys.readouterr()
    main(["simulate", "--config", cfg])
    sim = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
    row = dict(zip(*[line.split(",") for line in out.read_text().splitlines()]))
    for name in ("F", "F_ef", "C_a", "alpha_ef_sq", "v_max"):
        assert float(row[name]) == pytest.approx(float(sim[name]), abs=1e-11)


def test_sweep_log_grid(tmp_path):
    out = tmp_path / "eps.csv"
    assert main(["sweep", "--config", write_config(tmp_path), "--axis", "epsilon", "--min", "1e-6",
                 "--max", "1e-1", "--count", "6", "--log", "--out", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    for row in rows:
        eps, ef = float(row[0]), float(row[4])
        assert ef == pytest.approx(4 * (1 - eps) ** 10, rel=1e-10)


@pytest.mark.parametrize("extra", [
    ["--min", "0", "--max", "1", "--count", "0"],
    ["--min", "1", "--max", "0", "--count", "3"],
    ["--min", "0", "--max", "1", "--count", "3", "--log"],
])
def test_sweep_bad_grid_leaves_no_file(tmp_path, extra):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--config", write_config(tmp_path), "--axis", "epsilon", *extra,
                 "--out", str(out)]) == 1
    assert not out.exists()


def test_table_command(tmp_path):
    rows = tmp_path / "rows.csv"
    rows.write_text("alpha_sq,m_cycles,threshold\n4,50,0.95\n4,10,1.01\n")
    out = tmp_path / "tol.csv"
    assert main(["table", "--metric", "fef", "--rows", str(rows), "--out", str(out)]) == 0
    lines = [line.split(",") for line in out.read_text().splitlines()]
    assert lines[0][-1] == "feasible"
    assert float(lines[1][3]) == pytest.approx(3.05e-4, rel=0.05)
    assert lines[2][-1] == "0"


def test_table_cattiness(tmp_path):
    rows = tmp_path / "rows.csv"
    rows.write_text("alpha_sq,m_cycles,threshold\n8,50,6.4\n")
    out = tmp_path / "tol.csv"
    assert main(["table", "--metric", "cattiness", "--rows", str(rows), "--out", str(out)]) == 0
    assert float(out.read_text().splitlines()[1].split(",")[3]) == pytest.approx(4.12e-5, rel=0.05)


@pytest.mark.parametrize("text", [
    "alpha,m,t\n4,50,0.9\n",
    "alpha_sq,m_cycles,threshold\n4,five,0.9\n",
    "alpha_sq,m_cycles,threshold\n4,2.5,0.9\n",
    "alpha_sq,m_cycles,threshold\n",
])
def test_table_malformed_rows(tmp_path, text):
    rows = tmp_path / "rows.csv"
    rows.write_text(text)
    out = tmp_path / "tol.csv"
    assert main(["table", "--metric", "fef", "--rows", str(rows), "--out", str(out)]) == 1
    assert not out.exists()


def test_chain_command(capsys):
    assert main(["chain", "--stages", "20", "--object", "pass"]) == 0
    assert "zone1 = 1.000000000000" in capsys.readouterr().out


def test_geometry_command(capsys):
    assert main(["geometry", "--tp", "2.3"]) == 0
    assert "l_min = 344.770000 m" in capsys.readouterr().out
    assert main(["geometry", "--tp", "-1"]) == 1


def test_validate_twice_identical(capsys):
    first_code = main(["validate"])
    first = capsys.readouterr().out
    second_code = main(["validate"])
    assert capsys.readouterr().out == first
    assert first_code == second_code


def test_validate_fault_injection(monkeypatch, capsys):
    original = metrics.coherent_overlap
    monkeypatch.setattr(metrics, "coherent_overlap", lambda a, b: original(a, b) * (1 + 1e-3))
    assert main(["validate"]) == 2
    out = capsys.readouterr().out
    assert "[FAIL] 10 Fock oracle equivalence" in out


def test_validate_fresh_build_exit_0(capsys):
    code = main(["validate"])
    out = capsys.readouterr().out
    assert code == 0, out
