"""Command-line front end: outputs, manifests, reruns, exit codes."""

import json

import numpy as np
import pytest

from slope_lab import cli


def run(argv):
    return cli.main(argv)


def read_csv(path):
    # read_bytes: universal-newline translation would hide the CRLFs
    lines = path.read_bytes().decode().split("\r\n")
    assert lines[0].startswith("#schema=")
    header = lines[1].split(",")
    rows = [ln.split(",") for ln in lines[2:] if ln]
    return lines[0], header, rows


class TestTable1:
    def test_writes_table_and_manifest(self, tmp_path):
        out = tmp_path / "t1.csv"
        assert run(["table1", "--n-max", "7", "--out", str(out)]) == cli.EXIT_OK
        schema, header, rows = read_csv(out)
        assert schema == "#schema=slope_lab.table1.v1"
        assert header[0] == "n"
        assert [r[0] for r in rows] == ["1", "3", "5", "7"]
        man = json.loads((tmp_path / "t1.csv.manifest.json").read_text())
        assert man["command"] == "table1"
        assert str(out) in man["outputs"]

    def test_known_row(self, tmp_path):
        out = tmp_path / "t1.csv"
        run(["table1", "--n-max", "15", "--out", str(out)])
        _, header, rows = read_csv(out)
        row15 = dict(zip(header, rows[-1]))
        assert float(row15["lambda_median"]) == pytest.approx(4.88286, abs=1e-3)
        assert float(row15["lambda_full_score"]) == pytest.approx(7.5, abs=1e-9)
        assert row15["variance_diverges"] == "0"
        assert dict(zip(header, rows[0]))["variance_diverges"] == "1"

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(["table1", "--n-max", "5", "--out", str(a)])
        run(["table1", "--n-max", "5", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestBernoulliEff:
    def test_output_shape(self, tmp_path):
        out = tmp_path / "eff.csv"
        assert run(["bernoulli-eff", "--n", "10", "--grid", "25", "--out", str(out)]) == cli.EXIT_OK
        schema, header, rows = read_csv(out)
        assert schema == "#schema=slope_lab.bernoulli_eff.v1"
        assert header == ["p", "eff_y", "eff_y_times_ym1", "eff_y_squared"]
        assert len(rows) == 25
        effs = np.array([[float(v) for v in r[1:]] for r in rows])
        assert np.allclose(effs[:, 0], 1.0, atol=1e-9)
        assert np.all(effs <= 1.0 + 1e-9)


class TestCurves:
    def test_columns_per_outcome(self, tmp_path):
        out = tmp_path / "curves.csv"
        assert run(["curves", "--n", "5", "--grid", "11", "--out", str(out)]) == cli.EXIT_OK
        _, header, rows = read_csv(out)
        assert header == ["p"] + [f"shat_y{y}" for y in range(6)]
        assert len(rows) == 11

    def test_standardized_rows_have_unit_norm(self, tmp_path):
        # at each theta the standardized score has mean 0, variance 1
        out = tmp_path / "curves.csv"
        run(["curves", "--n", "5", "--grid", "7", "--out", str(out)])
        _, _, rows = read_csv(out)
        from scipy.stats import binom

        for r in rows:
            p = float(r[0])
            vals = np.array([float(v) for v in r[1:]])
            w = binom.pmf(np.arange(6), 5, p)
            assert np.dot(w, vals) == pytest.approx(0.0, abs=1e-9)
            assert np.dot(w, vals**2) == pytest.approx(1.0, abs=1e-9)

    def test_unsupported_family(self, tmp_path):
        code = run(["curves", "--family", "cauchy", "--out", str(tmp_path / "x.csv")])
        assert code == cli.EXIT_USAGE


class TestCauchySim:
    def test_outputs_and_manifest(self, tmp_path):
        prefix = tmp_path / "sim"
        code = run(
            ["cauchy-sim", "--reps", "600", "--seed", "5", "--bins", "4",
             "--out-prefix", str(prefix)]
        )
        assert code == cli.EXIT_OK
        for sfx in ("_summary.csv", "_bins.csv", "_qq.csv", "_replicates.csv"):
            assert (tmp_path / f"sim{sfx}").exists()
        man = json.loads((tmp_path / "sim_manifest.json").read_text())
        assert man["seed"] == 5
        assert len(man["outputs"]) == 4

    def test_summary_rows(self, tmp_path):
        prefix = tmp_path / "sim"
        run(["cauchy-sim", "--reps", "600", "--raw", "--out-prefix", str(prefix)])
        schema, header, rows = read_csv(tmp_path / "sim_summary.csv")
        assert schema == "#schema=slope_lab.sim_summary.v1"
        assert [r[0] for r in rows] == ["wald_expected", "wald_observed", "lrt"]
        for r in rows:
            assert 0.0 < float(r[1]) < 0.2

    def test_rerun_byte_identical(self, tmp_path):
        for name in ("a", "b"):
            run(["cauchy-sim", "--reps", "500", "--seed", "2", "--out-prefix",
                 str(tmp_path / name)])
        for sfx in ("_summary.csv", "_bins.csv", "_qq.csv", "_replicates.csv"):
            assert (tmp_path / f"a{sfx}").read_bytes() == (tmp_path / f"b{sfx}").read_bytes()

    def test_adjusted_flag_changes_output(self, tmp_path):
        run(["cauchy-sim", "--reps", "500", "--adjusted", "--out-prefix", str(tmp_path / "adj")])
        run(["cauchy-sim", "--reps", "500", "--raw", "--out-prefix", str(tmp_path / "raw")])
        a = (tmp_path / "adj_summary.csv").read_bytes()
        r = (tmp_path / "raw_summary.csv").read_bytes()
        assert a != r


class TestCheck:
    def test_passes_and_prints(self, tmp_path, capsys):
        out = tmp_path / "check.csv"
        assert run(["check", "--grid", "11", "--out", str(out)]) == cli.EXIT_OK
        text = capsys.readouterr().out
        assert "PASS identity_score" in text
        assert "FAIL" not in text
        _, header, rows = read_csv(out)
        assert header == ["property", "worst", "tol", "ok"]
        assert all(r[-1] == "1" for r in rows)

    def test_works_without_out(self):
        assert run(["check", "--grid", "5"]) == cli.EXIT_OK

    def test_unsupported_family(self):
        assert run(["check", "--family", "normal"]) == cli.EXIT_USAGE


class TestConfigAndUsage:
    def test_config_file_merging(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("# comment\nn_max=5\nout=" + str(tmp_path / "from_cfg.csv") + "\n")
        assert run(["table1", "--config", str(cfgfile)]) == cli.EXIT_OK
        assert (tmp_path / "from_cfg.csv").exists()

    def test_explicit_flag_wins(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("n_max=9\n")
        out = tmp_path / "t.csv"
        run(["table1", "--config", str(cfgfile), "--n-max", "3", "--out", str(out)])
        _, _, rows = read_csv(out)
        assert [r[0] for r in rows] == ["1", "3"]

    def test_missing_config(self):
        assert run(["table1", "--config", "/nonexistent.cfg", "--out", "x.csv"]) == cli.EXIT_USAGE

    def test_unknown_command(self):
        assert run(["frobnicate"]) == cli.EXIT_USAGE

    def test_missing_required_flag(self):
        assert run(["table1"]) == cli.EXIT_USAGE
