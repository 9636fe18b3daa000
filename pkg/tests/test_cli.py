import io
import json

import numpy as np
import pytest

from genrel.cli import run_cli
from genrel.data import Dataset
from genrel.io import write_table


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def self_table(tmp_path, rng):
    x = rng.standard_normal((80, 4))
    y = x[:, 0] + rng.standard_normal(80)
    path = str(tmp_path / "self.csv")
    write_table(Dataset.from_arrays(x, y, y.copy()), path)
    return path


@pytest.fixture
def pair_table(tmp_path, rng):
    x = rng.standard_normal((120, 4))
    y = x[:, 0] + rng.standard_normal(120)
    z = np.where(rng.random(120) < 0.3, np.nan, x[:, 0] - x[:, 1] + rng.standard_normal(120))
    path = str(tmp_path / "pair.csv")
    write_table(Dataset.from_arrays(x, y, z), path)
    return path


class TestEstimate:
    def test_self_correlation(self, self_table):
        code, out, _ = _run("estimate", "--data", self_table, "--target", "correlation")
        assert code == 0
        assert float(out.split()[0]) == 1.0

    def test_report_written(self, pair_table, tmp_path):
        rep = tmp_path / "r.json"
        code, out, _ = _run("estimate", "--data", pair_table, "--learner-h", "ridge",
                            "--alpha", "0.1", "--seed", "4", "--out", str(rep))
        assert code == 0 and "±" in out and "[" in out
        body = json.loads(rep.read_text())
        assert body["alpha"] == 0.1 and body["seed"] == 4
        assert body["metadata"]["learner_h"]["kind"] == "ridge"
        assert len(body["metadata"]["data"]["sha256"]) == 64

    def test_config_file(self, pair_table, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text(f"[data]\npath = {pair_table}\n[learner_m]\nkind = ridge\nlambda = 0.5\n"
                       "[learner_h]\nkind = ridge\n[run]\nseed = 2\n")
        code, out, _ = _run("estimate", "--config", str(cfg))
        assert code == 0
        code2, out2, _ = _run("estimate", "--config", str(cfg), "--seed", "2")
        assert out == out2

    def test_naive_method(self, pair_table):
        code, out, _ = _run("estimate", "--data", pair_table, "--method", "naive",
                            "--learner-m", "ridge", "--learner-h", "ridge")
        assert code == 0 and np.isfinite(float(out))

    def test_data_error_exit_two(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x1,y,z\n1,abc,2\n")
        code, _, err = _run("estimate", "--data", str(bad))
        assert code == 2 and "NonNumericCell" in err

    def test_estimation_error_exit_two(self, tmp_path):
        small = tmp_path / "s.csv"
        small.write_text("x1,y,z\n1,2,3\n2,3,4\n3,4,5\n")
        code, _, err = _run("estimate", "--data", str(small))
        assert code == 2 and "TooFewObservations" in err


class TestUsage:
    def test_unknown_flag(self):
        code, _, err = _run("estimate", "--bogus")
        assert code == 1 and "usage" in err

    def test_no_subcommand(self):
        assert _run()[0] == 1

    def test_bad_alpha(self, self_table):
        assert _run("estimate", "--data", self_table, "--alpha", "2")[0] == 1

    def test_missing_data(self):
        code, _, err = _run("estimate")
        assert code == 1 and "--data" in err

    def test_unknown_config(self):
        assert _run("simulate", "--config", "no_such_preset")[0] == 1

    def test_help(self):
        assert _run("--help")[0] == 0


class TestSimulateAndOracle:
    def test_simulate_small(self, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text("[data]\nexample = ex1_linear_cov\nn_y = 60\nn_z = 60\np = 8\ns1 = 2\n"
                       "[learner_m]\nkind = ridge\n[learner_h]\nkind = ridge\n[run]\nreps = 4\n")
        out_json = tmp_path / "t.json"
        code, out, _ = _run("simulate", "--config", str(cfg), "--out", str(out_json))
        assert code == 0
        header, row = out.strip().split("\n")[:2]
        assert "CP" in header.split(",")
        body = json.loads(out_json.read_text())
        assert body["reps"] == 4 and body["summary"]["truth"] == pytest.approx(0.3285)

    def test_simulate_preset_with_reps(self):
        code, out, _ = _run("simulate", "--config", "ex1_desk", "--reps", "2",
                            "--learner-m", "ridge", "--learner-h", "ridge")
        assert code == 0 and out.startswith("example,")

    def test_oracle(self):
        code, out, _ = _run("oracle", "--config", "ex4_desk", "--draws", "100000")
        assert code == 0
        value, se = float(out.split("±")[0]), float(out.split("±")[1])
        from genrel.simulation import closed_form_truth, get_preset
        assert abs(value - closed_form_truth(get_preset("ex4_desk")[0])) <= 4 * se
