import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from ptframe.cli import main

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    assert code == 0, err
    return json.loads(out)


class TestCommands:
    def test_info(self, capsys):
        data = run_json(capsys, "info", "--prior", DATA / "info_prior.json", "--truths", DATA / "info_truth.json")
        assert data["logical_probability"] == [0.35]
        assert data["point_info"][0][1] == pytest.approx(math.log2(0.8 / 0.35), abs=1e-10)
        assert data["point_info"][0][2] == "-inf"

    def test_info_nats(self, capsys):
        data = run_json(capsys, "--log-base", "nats", "info", "--prior", DATA / "info_prior.json", "--truths", DATA / "info_truth.json")
        assert data["units"] == "nats"
        assert data["point_info"][0][1] == pytest.approx(math.log(0.8 / 0.35), abs=1e-10)

    def test_confirm_flags_and_csv(self, capsys, tmp_path):
        a = run_json(capsys, "confirm", "--a", 6, "--b", 2, "--c", 1, "--d", 11)
        assert a["c1_star"] == pytest.approx(5 / 6) and a["CR1"] == pytest.approx(6 / 7)
        csv_path = tmp_path / "k.csv"
        csv_path.write_text(",h1,h0\ne1,6,1\ne0,2,11\n")
        assert run_json(capsys, "confirm", "--counts", csv_path) == a

    def test_confirm_strict_fails_on_undefined(self, capsys):
        code, _, err = run(capsys, "confirm", "--a", 0, "--b", 3, "--c", 0, "--d", 3, "--strict")
        assert code == 2 and "0/0" in err
        data = run_json(capsys, "confirm", "--a", 0, "--b", 3, "--c", 0, "--d", 3)
        assert data["c1_star"] is None

    def test_raven(self, capsys):
        data = run_json(capsys, "raven", "--a", 20, "--b", 10, "--c", 10, "--d", 20)
        rows = {r["measure"]: r for r in data["sensitivity"]}
        assert rows["c*"]["delta_d_is_zero"] and not rows["F"]["delta_d_is_zero"]

    def test_rate(self, capsys):
        data = run_json(capsys, "rate", "--prior", DATA / "hamming_prior.json", "--distortion", DATA / "hamming_distortion.json", "--s", "0,-1,-2")
        assert [p["s"] for p in data["curve"]] == [0.0, -1.0, -2.0]
        for p in data["curve"]:
            assert p["R_theta"] == pytest.approx(p["R"], abs=1e-9)

    def test_rate_csv_distortion(self, capsys, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n0,1\n1,0\n")
        data = run_json(capsys, "rate", "--prior", DATA / "hamming_prior.json", "--distortion", path, "--s", "0,-1")
        assert data["curve"][1]["D"] == pytest.approx(1 / (1 + math.e), abs=1e-10)

    def test_thermo(self, capsys):
        data = run_json(capsys, "thermo", "--system", DATA / "thermo_system.json")
        assert data["residual"] < 1e-9 and data["within_tolerance"]

    def test_reason(self, capsys):
        data = run_json(capsys, "reason", "--spec", DATA / "reason_channel.json")
        assert data["consequence"]["mass"][0] == pytest.approx(1 / 3, abs=1e-11)
        data = run_json(capsys, "reason", "--spec", DATA / "reason_prediction.json")
        assert data["consequence"]["mass"] == pytest.approx([6 / 7, 1 / 7], abs=1e-11)

    def test_fuzzy(self, capsys):
        data = run_json(capsys, "fuzzy", "--atomics", DATA / "age_atomics.json", "--expr", "child")
        assert data["expression"] == "NOT (u OR a)"
        assert data["values"][0] > 0.9 and data["values"][-1] < 1e-6

    def test_learn(self, capsys, tmp_path):
        table = tmp_path / "truths.tsv"
        data = run_json(capsys, "learn", "--sample", DATA / "elder_sample.csv", "--labels", "elder", "--table", table)
        (fit,) = data["fits"]
        assert fit["params"]["slope"] == pytest.approx(0.5, rel=0.02)
        assert fit["params"]["threshold"] == pytest.approx(65.0, rel=0.02)
        assert table.read_text().startswith("x_id")

    def test_learn_tabulated(self, capsys):
        data = run_json(capsys, "learn", "--sample", DATA / "elder_sample.csv", "--family", "tabulated")
        assert data["fits"]

    def test_paper_fixtures(self, capsys):
        code, out, _ = run(capsys, "--paper-fixtures", "--format", "tsv")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 11 and all(line.endswith("pass") for line in lines[1:])


class TestFormats:
    def test_tsv_and_table(self, capsys):
        code, tsv, _ = run(capsys, "--format", "tsv", "confirm", "--a", 6, "--b", 2, "--c", 1, "--d", 11)
        assert code == 0 and "\t" in tsv
        code, table, _ = run(capsys, "--format", "table", "confirm", "--a", 6, "--b", 2, "--c", 1, "--d", 11)
        assert code == 0 and "c1_star" in table and "\t" not in table

    def test_deterministic(self, capsys):
        argv = ("learn", "--sample", DATA / "elder_sample.csv", "--labels", "elder")
        first = run(capsys, "--format", "json", *argv)[1]
        second = run(capsys, "--format", "json", *argv)[1]
        assert first == second

    def test_config_file_and_env(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"log_base": "nats", "output_format": "json"}))
        argv = ("info", "--prior", DATA / "info_prior.json", "--truths", DATA / "info_truth.json")
        code, out, _ = run(capsys, "--config", cfg, *argv)
        assert code == 0 and json.loads(out)["units"] == "nats"
        monkeypatch.setenv("PTFRAME_CONFIG", str(cfg))
        code, out, _ = run(capsys, "--log-base", "bits", *argv)
        assert json.loads(out)["units"] == "bits"

    def test_bad_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"colour": "red"}))
        assert run(capsys, "--config", cfg, "confirm", "--a", 1, "--b", 1, "--c", 1, "--d", 1)[0] == 2


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "thermo", "--system", tmp_path / "none.json")
        assert code == 2 and "input error" in err

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(capsys, "thermo", "--system", path)[0] == 2

    def test_missing_field(self, capsys, tmp_path):
        path = tmp_path / "sys.json"
        path.write_text(json.dumps({"energies": [0, 1]}))
        assert run(capsys, "thermo", "--system", path)[0] == 2

    def test_negative_counts(self, capsys):
        assert run(capsys, "confirm", "--a", -1, "--b", 1, "--c", 1, "--d", 1)[0] == 2

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 2

    def test_tolerance_failure_exits_3(self, capsys):
        code, out, _ = run(capsys, "--tolerance", "1e-300", "--format", "json", "thermo", "--system", DATA / "thermo_system.json")
        data = json.loads(out)
        assert data["residual"] > 1e-300
        assert code == 3 and not data["within_tolerance"]

    def test_unsorted_slopes(self, capsys):
        argv = ("rate", "--prior", DATA / "hamming_prior.json", "--distortion", DATA / "hamming_distortion.json", "--s=-1,0")
        assert run(capsys, *argv)[0] == 2


class TestFigures:
    def test_figures_written(self, capsys, tmp_path):
        pytest.importorskip("matplotlib")
        rate_png = tmp_path / "rd.png"
        code, _, _ = run(
            capsys, "rate", "--prior", DATA / "hamming_prior.json", "--distortion", DATA / "hamming_distortion.json", "--figure", rate_png
        )
        assert code == 0 and rate_png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
        fuzzy_png = tmp_path / "fz.png"
        assert run(capsys, "fuzzy", "--atomics", DATA / "age_atomics.json", "--expr", "middle-age", "--figure", fuzzy_png)[0] == 0
        assert fuzzy_png.stat().st_size > 1000
        learn_png = tmp_path / "fit.png"
        assert run(capsys, "learn", "--sample", DATA / "elder_sample.csv", "--labels", "elder", "--figure", learn_png)[0] == 0
        assert learn_png.exists()


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "ptframe.cli", "--format", "json", "confirm", "--a", "6", "--b", "2", "--c", "1", "--d", "11"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(out.stdout)["c1_star"] == pytest.approx(5 / 6)
