import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from eomech.cli import fmt, main
from eomech.config import RunConfig, dump_config, load_config
from eomech.errors import ConfigurationError
from eomech.system import DriveConfig, SystemParams, build_drift
from eomech.sweep import PRESET_NAMES


def write(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj, indent=2) if not isinstance(obj, str) else obj)
    return str(path)


def couplings(g_minus, g_plus_ratio, **kw):
    c = {"g_minus": g_minus, "g_plus_ratio": g_plus_ratio}
    c.update(kw)
    return {"drives": {"couplings": c}}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


class TestConfig:
    def test_roundtrip(self, tmp_path):
        cfg = {
            "system": {"f_m_hz": 1e7, "kappa_a_over_omega_m": 0.08, "gamma_m_rad_s": 1000.0,
                       "temperature_k": 0.1},
            "drives": {"couplings": {"g_minus": 0.2, "g_plus_ratio": 1.15, "g_c_ratio": 0.4}},
            "sweep": {"axes": [{"name": "g_plus_ratio", "min": 0.0, "max": 1.0, "count": 7},
                               {"name": "temperature_K", "values": [0.01, 0.1]}],
                      "observables": ["st_ba"]},
            "output": {"format": "csv", "precision": 6},
        }
        a = load_config(write(tmp_path, cfg))
        b = RunConfig.from_dict(json.loads(dump_config(a)))
        assert a == b
        assert b.sweep.axes[0].values == a.sweep.axes[0].values

    def test_roundtrip_powers(self, tmp_path):
        cfg = {"drives": {"powers": {"p_minus_w": 1e-3, "p_plus_w": 5e-4, "p_c_w": 0.02},
                          "geometry": {"mass_kg": 1e-12, "cavity_length_m": 1e-3,
                                       "gap_m": 1e-7, "epsilon": 0.5}}}
        a = load_config(write(tmp_path, cfg))
        assert RunConfig.from_dict(json.loads(dump_config(a))) == a
        d = a.drive_settings().to_config(a.params())
        assert d.g_minus > d.g_plus > 0

    def test_system_units(self, tmp_path):
        cfg = {"system": {"f_m_hz": 2e6, "kappa_c_rad_s": 77.0, "q_factor": 1e3},
               **couplings(1.0, 0.5, g_c=0.1)}
        p = load_config(write(tmp_path, cfg)).params()
        assert p.omega_m == pytest.approx(2 * math.pi * 2e6)
        assert p.kappa_c == 77.0
        assert p.gamma_m == pytest.approx(p.omega_m / 1e3)
        assert p.kappa_a == pytest.approx(0.08 * p.omega_m)

    def test_unknown_key_names_key_and_line(self, tmp_path):
        text = '{\n  "drives": {\n    "couplings": {"g_minus": 1.0, "g_plus_ratio": 0.7,\n      "gc": 0.6}\n  }\n}\n'
        with pytest.raises(ConfigurationError, match=r"'gc'.*line 4"):
            load_config(write(tmp_path, text))

    def test_bad_value_names_key(self, tmp_path):
        text = '{\n  "system": {"temperature_k": -1},\n  "drives": {"couplings": {"g_minus": 1, "g_plus": 0, "g_c": 0}}\n}'
        with pytest.raises(ConfigurationError, match=r"temperature_k.*line 2"):
            load_config(write(tmp_path, text))

    def test_invalid_json_reports_line(self, tmp_path):
        with pytest.raises(ConfigurationError, match="line 3"):
            load_config(write(tmp_path, '{\n "drives": {}\n,,}'))

    @pytest.mark.parametrize("drives", [
        {"couplings": {"g_minus": 1.0, "g_plus": 0.5, "g_plus_ratio": 0.5, "g_c": 0.1}},
        {"couplings": {"g_minus": 1.0, "g_c": 0.1}},
        {"powers": {"p_minus_w": 1e-3, "p_plus_w": 0.0, "p_c_w": 0.0}},
        {},
    ])
    def test_drive_block_exclusivity(self, tmp_path, drives):
        with pytest.raises(ConfigurationError):
            load_config(write(tmp_path, {"drives": drives}))

    def test_exclusive_system_keys(self, tmp_path):
        cfg = {"system": {"q_factor": 1e4, "gamma_m_rad_s": 10.0}, **couplings(1.0, 0.5, g_c=0.1)}
        with pytest.raises(ConfigurationError, match="mutually exclusive"):
            load_config(write(tmp_path, cfg))

    def test_axis_needs_range_or_values(self, tmp_path):
        cfg = {**couplings(1.0, 0.5, g_c=0.1), "sweep": {"axes": [{"name": "g_plus_ratio", "min": 0}]}}
        with pytest.raises(ConfigurationError):
            load_config(write(tmp_path, cfg))


class TestSolve:
    def test_zero_drives(self, tmp_path, capsys):
        cfg = write(tmp_path, {"system": {"temperature_k": 0.0}, **couplings(0.0, 0.0, g_c=0.0)})
        code, out, _ = run(["solve", "--config", cfg], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["stable"] is True
        assert all(v == 0.0 for v in rep["squeezing_db"].values())

    def test_optimum_json(self, tmp_path, capsys):
        cfg = write(tmp_path, couplings(1.0, 0.78, g_c=0.6))
        code, out, _ = run(["solve", "--config", cfg], capsys)
        assert code == 0
        rep = json.loads(out)
        assert abs(rep["s_c"] - 4.61) <= 0.3 and abs(rep["s_b"] - 4.56) <= 0.3
        assert list(rep) == sorted(rep)

    def test_unstable_exit_code(self, tmp_path, capsys):
        p = SystemParams.reference_device()
        # eigenvalue scan oracle: this point has a growing mode
        assert np.max(np.linalg.eigvals(build_drift(p, DriveConfig.in_units_of_kappa(p, 0.2, 0.4, 0.08))).real) > 0
        cfg = write(tmp_path, couplings(0.2, 2.0, g_c_ratio=0.4))
        code, out, _ = run(["solve", "--config", cfg], capsys)
        assert code == 2
        rep = json.loads(out)
        assert rep["stable"] is False and rep["covariance"] is None

    def test_csv_output_to_file(self, tmp_path, capsys):
        cfg = write(tmp_path, couplings(1.0, 0.78, g_c=0.6))
        out_path = tmp_path / "r.csv"
        code, out, _ = run(["solve", "--config", cfg, "--format", "csv", "--out", str(out_path)], capsys)
        assert code == 0 and out == ""
        rows = parse_csv(out_path.read_text())
        assert rows[0] == ["quantity", "value"]
        assert dict(rows[1:])["stable"] == "1"

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(["solve", "--config", str(tmp_path / "nope.json")], capsys)
        assert code == 1 and "error" in err

    def test_malformed_config(self, tmp_path, capsys):
        cfg = write(tmp_path, {"drives": {"couplings": {"g_minus": "one"}}})
        code, _, err = run(["solve", "--config", cfg], capsys)
        assert code == 1 and "g_minus" in err


class TestSweep:
    def test_fig7_csv(self, capsys):
        code, out, _ = run(["sweep", "--figure", "fig7", "--resolution", "6"], capsys)
        assert code == 0
        rows = parse_csv(out)
        assert rows[0] == ["g_plus_ratio", "temperature_K", "st_ab", "st_ba", "stable"]
        assert len(rows) == 1 + 36
        for row in rows[1:]:
            [float(x) for x in row]

    def test_fig3b_four_series(self, capsys):
        code, out, _ = run(["sweep", "--figure", "fig3b", "--resolution", "11"], capsys)
        rows = parse_csv(out)
        assert sorted({float(r[0]) for r in rows[1:]}) == [0.4, 0.6, 0.8, 1.0]

    def test_single_point_matches_solve(self, tmp_path, capsys):
        base = couplings(1.0, 0.78, g_c=0.6)
        cfg = write(tmp_path, {**base, "sweep": {"axes": [{"name": "g_plus_ratio", "values": [0.78]}],
                                                "observables": ["s_b", "s_c", "en_ab", "st_ba"]},
                               "output": {"format": "csv"}})
        _, out, _ = run(["sweep", "--config", cfg], capsys)
        rows = parse_csv(out)
        _, rep_text, _ = run(["solve", "--config", write(tmp_path, base, "b.json")], capsys)
        rep = json.loads(rep_text)
        header, values = rows[0], rows[1]
        for name in ("s_b", "s_c", "en_ab", "st_ba"):
            assert values[header.index(name)] == fmt(rep[name])

    def test_byte_reproducible(self, tmp_path, capsys):
        outs = []
        for fmt_ in ("json", "json", "csv", "csv"):
            path = tmp_path / f"o.{fmt_}"
            run(["sweep", "--figure", "fig6a", "--resolution", "21", "--format", fmt_, "--out", str(path)], capsys)
            outs.append(path.read_bytes())
        assert outs[0] == outs[1] and outs[2] == outs[3]
        data = json.loads(outs[0])
        assert data["axes"][0]["name"] == "g_plus_ratio"
        assert None in data["observables"]["st_ba"]

    def test_threads_flag_and_env(self, capsys, monkeypatch):
        _, a, _ = run(["sweep", "--figure", "fig6b", "--resolution", "8"], capsys)
        _, b, _ = run(["sweep", "--figure", "fig6b", "--resolution", "8", "--threads", "2"], capsys)
        monkeypatch.setenv("EOMECH_THREADS", "2")
        _, c, _ = run(["sweep", "--figure", "fig6b", "--resolution", "8"], capsys)
        assert a == b == c

    def test_unknown_preset_lists_names(self, capsys):
        code, _, err = run(["sweep", "--figure", "fig99"], capsys)
        assert code == 1
        for name in PRESET_NAMES:
            assert name in err

    def test_needs_exactly_one_source(self, capsys):
        code, _, _ = run(["sweep"], capsys)
        assert code == 1

    def test_config_without_sweep_block(self, tmp_path, capsys):
        code, _, err = run(["sweep", "--config", write(tmp_path, couplings(1.0, 0.5, g_c=0.1))], capsys)
        assert code == 1 and "sweep" in err


class TestWigner:
    def wigner(self, tmp_path, capsys, cfg, *extra):
        code, out, err = run(["wigner", "--config", write(tmp_path, cfg), *extra], capsys)
        if code:
            return code, None
        rows = parse_csv(out)
        assert rows[0] == ["X", "Y", "W"]
        arr = np.array(rows[1:], dtype=float)
        return code, arr

    def test_vacuum_peak_and_integral(self, tmp_path, capsys):
        cfg = {"system": {"temperature_k": 0.0}, **couplings(0.0, 0.0, g_c=0.0)}
        code, arr = self.wigner(tmp_path, capsys, cfg)
        assert code == 0
        assert len(arr) == 201 * 201
        k = np.argmax(arr[:, 2])
        assert arr[k, 0] == 0 and arr[k, 1] == 0
        assert arr[k, 2] == pytest.approx(1 / math.pi, rel=1e-8)
        dx = 8 / 200
        assert arr[:, 2].sum() * dx * dx == pytest.approx(1.0, abs=1e-3)

    def test_mechanical_mode_squeezed_along_x(self, tmp_path, capsys):
        cfg = couplings(1.0, 0.78, g_c_ratio=0.8)
        code, arr = self.wigner(tmp_path, capsys, cfg, "--mode", "b", "--grid=-2:2:41")
        assert code == 0
        W = {(round(x, 6), round(y, 6)): w for x, y, w in arr}
        assert W[(0.5, 0.0)] < W[(0.0, 0.5)]
        code, arr = self.wigner(tmp_path, capsys, cfg, "--mode", "c", "--grid=-2:2:41")
        W = {(round(x, 6), round(y, 6)): w for x, y, w in arr}
        assert W[(0.0, 0.5)] < W[(0.5, 0.0)]

    def test_unstable_exit(self, tmp_path, capsys):
        code, _ = self.wigner(tmp_path, capsys, couplings(0.2, 2.0, g_c_ratio=0.4))
        assert code == 2

    def test_bad_grid(self, tmp_path, capsys):
        code, _ = self.wigner(tmp_path, capsys, couplings(1.0, 0.5, g_c=0.1), "--grid=4:-4:10")
        assert code == 1


def test_module_entry_point(tmp_path):
    cfg = write(tmp_path, couplings(1.0, 0.78, g_c=0.6))
    proc = subprocess.run([sys.executable, "-m", "eomech", "solve", "--config", cfg, "--format", "csv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("quantity,value\n")


def test_fmt_is_plain_decimal():
    assert fmt(1234567.891234) == "1234567.89"
    assert fmt(-0.0) == "0"
    assert fmt(float("nan")) == "nan"
    assert fmt(True) == "1"
