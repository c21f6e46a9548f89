import json
import subprocess
import sys

import numpy as np
import pytest

from mfrelay.cli import main


def run_cli(args):
    return main(args)


def read_table(path):
    meta, header, rows = [], None, []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            meta.append(line)
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    return meta, header, np.array(rows)


def columns(header, rows):
    return {name: rows[:, i] for i, name in enumerate(header)}


class TestFig2:
    def test_table_properties(self, tmp_path):
        out = tmp_path / "fig2.csv"
        assert run_cli(["fig2", "--out", str(out), "--axis-points", "17"]) == 0
        meta, header, rows = read_table(out)
        assert header == ["pd", "rs_mf", "rs_af", "upper_bound", "gap"]
        col = columns(header, rows)
        assert np.all(col["gap"] <= 0.5 + 1e-12)
        assert np.all(col["rs_mf"] <= col["upper_bound"] + 1e-12)
        # beyond pd = 100 the MF rate strictly climbs
        grow = col["pd"] >= 100.0
        assert np.all(np.diff(col["rs_mf"][grow]) > 0)
        # AF pins at ~1/2 bit for the largest jamming power
        assert 0.45 <= col["rs_af"][-1] <= 0.55


class TestFig3:
    def test_closed_form_columns(self, tmp_path):
        out = tmp_path / "fig3.csv"
        assert run_cli(["fig3", "--out", str(out), "--axis-points", "13"]) == 0
        _, header, rows = read_table(out)
        col = columns(header, rows)
        assert np.array_equal(col["sd_mf"], col["sd_upper"])
        peak = col["rho"][np.argmax(col["sd_af"])]
        assert peak == pytest.approx(1.0, abs=1e-9)
        assert np.max(np.abs(col["sd_mf_numeric"] - col["sd_mf"])) <= 0.05
        assert np.max(np.abs(col["sd_af_numeric"] - col["sd_af"])) <= 0.05


class TestFig4:
    def test_orderings_and_mc_agreement(self, tmp_path):
        out = tmp_path / "fig4.csv"
        assert run_cli(["fig4", "--out", str(out), "--axis-points", "8",
                        "--mc-samples", "200000", "--seed", "9"]) == 0
        _, header, rows = read_table(out)
        col = columns(header, rows)
        assert col["p_secrecy"][0] == 1.0  # rd = rs = 1/2
        assert np.all(col["p_conn_af"] >= col["p_conn_mf"] - 1e-12)
        assert np.all(np.diff(col["p_secrecy"]) <= 0)
        assert np.all(np.diff(col["p_conn_mf"]) >= 0)
        for name in ("p_conn_mf", "p_conn_af", "p_secrecy"):
            diff = np.abs(col[name] - col[name + "_mc"])
            se = col["se_" + name.removeprefix("p_") + "_mc"]
            # rule-of-three allowance covers rows where p_hat in {0, 1}
            assert np.all(diff <= 3 * se + 3.0 / 200000)

    def test_mc_columns_absent_when_disabled(self, tmp_path):
        out = tmp_path / "fig4.csv"
        assert run_cli(["fig4", "--out", str(out), "--axis-points", "4",
                        "--mc-samples", "0"]) == 0
        _, header, _ = read_table(out)
        assert "p_conn_mf_mc" not in header


class TestFig5:
    def test_closed_form_columns(self, tmp_path):
        out = tmp_path / "fig5.csv"
        assert run_cli(["fig5", "--out", str(out), "--axis-points", "13"]) == 0
        _, header, rows = read_table(out)
        col = columns(header, rows)
        assert np.all(col["dg_mf"][col["rho"] > 2.0] == 1.0)
        k = np.argmax(col["dg_af"])
        assert col["rho"][k] == pytest.approx(1.5, abs=1e-9)
        assert col["dg_af"][k] == 0.5
        assert np.max(np.abs(col["dg_mf_numeric"] - col["dg_mf"])) <= 0.1
        assert np.max(np.abs(col["dg_af_numeric"] - col["dg_af"])) <= 0.1


class TestSweep:
    def test_outage_columns_with_mc(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run_cli(["sweep", "--out", str(out), "--axis", "ps",
                        "--axis-min", "5", "--axis-max", "50",
                        "--axis-points", "5", "--axis-scale", "log",
                        "--mc-samples", "50000", "--seed", "3"]) == 0
        _, header, rows = read_table(out)
        col = columns(header, rows)
        assert np.all(col["p_conn_cutset"] <= col["p_conn_mf"] + 1e-12)
        assert np.all(col["p_total_lower"] <= col["p_total_upper"] + 1e-12)
        assert np.all(col["p_total_upper"] <= 2 * col["p_total_lower"] + 1e-12)
        mc_lower = np.maximum(col["p_conn_mf_mc"], col["p_secrecy_mc"])
        assert np.all(mc_lower <= col["p_total_mf_mc"] + 1e-12)

    def test_rho_locked_pd(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run_cli(["sweep", "--out", str(out), "--axis", "ps",
                        "--axis-min", "100", "--axis-max", "10000",
                        "--axis-points", "3", "--axis-scale", "log",
                        "--rho", "2.0"]) == 0
        _, header, rows = read_table(out)
        col = columns(header, rows)
        # pd = snr^rho tracks the axis, so secrecy outage falls like 1/snr
        assert col["p_secrecy"][-1] < col["p_secrecy"][0] / 10


class TestChain:
    def test_grid_report(self, tmp_path):
        out = tmp_path / "chain.csv"
        assert run_cli(["chain", "--out", str(out), "--mc-samples", "150000"]) == 0
        _, header, rows = read_table(out)
        col = columns(header, rows)
        assert rows.shape[0] == 9  # 3 gain pairs x 3 jamming powers
        rel = np.abs(col["residual_var"] - col["analytic_sigma_e2"]) / col["analytic_sigma_e2"]
        assert np.all(rel < 0.02)
        assert np.all(np.abs(col["relay_power"] - col["ps"]) / col["ps"] < 0.01)
        assert np.all(col["uniformity_pvalue"] > 1e-3)


class TestPlumbing:
    def test_byte_identical_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["fig4", "--axis-points", "5", "--mc-samples", "20000", "--seed", "77"]
        assert run_cli(args + ["--out", str(a)]) == 0
        assert run_cli(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_metadata_lines(self, tmp_path):
        out = tmp_path / "t.csv"
        assert run_cli(["fig2", "--out", str(out), "--axis-points", "3"]) == 0
        meta, _, _ = read_table(out)
        assert meta[0].startswith("# mfrelay ")
        assert meta[1] == "# experiment: fig2"
        assert any(line.startswith("# seed:") for line in meta)
        assert any(line.startswith("# config:") for line in meta)

    def test_config_file_and_flag_override(self, tmp_path):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({
            "experiment": "sweep", "axis": "rd", "axis_min": 0.5, "axis_max": 2.0,
            "axis_points": 4, "axis_scale": "linear", "ps": 10.0, "pd": 10.0,
            "seed": 5,
        }))
        out = tmp_path / "s.csv"
        assert run_cli(["sweep", "--config", str(cfgfile), "--out", str(out),
                        "--axis-points", "6"]) == 0
        _, _, rows = read_table(out)
        assert rows.shape[0] == 6  # flag overrides the file's 4

    def test_stdout_output(self, capsys):
        assert run_cli(["fig2", "--axis-points", "3"]) == 0
        captured = capsys.readouterr()
        assert "rs_mf" in captured.out

    def test_invalid_config_exits_2(self, tmp_path, capsys):
        assert run_cli(["sweep", "--ps", "-3"]) == 2
        assert run_cli(["sweep", "--axis-scale", "log", "--axis-min", "0",
                        "--axis-max", "10", "--axis-points", "3"]) == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run_cli(["fig2", "--config", str(bad)]) == 2
        wrong = tmp_path / "wrong.json"
        wrong.write_text(json.dumps({"experiment": "fig3"}))
        assert run_cli(["fig2", "--config", str(wrong)]) == 2
        unknown = tmp_path / "unk.json"
        unknown.write_text(json.dumps({"no_such_key": 1}))
        assert run_cli(["fig2", "--config", str(unknown)]) == 2

    def test_io_failure_exits_3(self, tmp_path):
        missing_dir = tmp_path / "no" / "such" / "dir" / "t.csv"
        assert run_cli(["fig2", "--axis-points", "3", "--out", str(missing_dir)]) == 3

    def test_bad_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["frobnicate"])
        assert exc.value.code == 2

    def test_console_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "mfrelay", "fig2", "--axis-points", "3"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "rs_mf" in proc.stdout
