import json
import subprocess
import sys

import numpy as np
import pytest

from retromaser import pom as pom_module
from retromaser.cli import main, parse_theta
from retromaser.figures import FIGURES


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    lines = text.splitlines()
    assert lines[0] == "n,value"
    return {int(n): float(v) for n, v in (line.split(",") for line in lines[1:])}


def test_parse_theta():
    assert parse_theta("pi") == np.pi
    assert parse_theta("0.5pi") == 0.5 * np.pi
    assert parse_theta("2*pi") == 2 * np.pi
    assert parse_theta("1.25") == 1.25
    with pytest.raises(ValueError):
        parse_theta("tau")


class TestPom:
    def test_single_excited(self, capsys):
        code, out, _ = run(capsys, "pom", "--sequence", "e", "--theta", "pi")
        assert code == 0
        rows = csv_rows(out)
        assert rows[0] == 1.0
        assert len(rows) == 26

    def test_three_grounds(self, capsys):
        _, out, _ = run(capsys, "pom", "--sequence", "ggg", "--theta", "pi")
        rows = csv_rows(out)
        assert [rows[n] for n in range(4)] == [0.0] * 4

    def test_empty_sequence(self, capsys):
        _, out, _ = run(capsys, "pom", "--sequence", "")
        assert set(csv_rows(out).values()) == {1.0}

    def test_json_metadata(self, capsys):
        _, out, _ = run(capsys, "pom", "-s", "ge", "-t", "1.0", "-N", "5", "--format", "json")
        doc = json.loads(out)
        assert doc["params"] == {"theta": 1.0, "n_max": 5}
        assert doc["sequence"] == "ge"
        assert [r[0] for r in doc["rows"]] == list(range(6))

    def test_bad_sequence_is_usage_error(self, capsys):
        code, _, err = run(capsys, "pom", "--sequence", "egz")
        assert code == 1
        assert "invalid detection" in err

    def test_bad_theta(self, capsys):
        assert run(capsys, "pom", "--theta", "-1")[0] == 1
        assert run(capsys, "pom", "--theta", "abc")[0] == 1

    def test_unknown_command(self, capsys):
        assert run(capsys, "nonsense")[0] == 1


class TestRetrodict:
    def test_fig3(self, capsys):
        code, out, err = run(capsys, "retrodict", "--sequence", "gg", "--prior", "cap:3", "--theta", "pi")
        assert code == 0
        rows = csv_rows(out)
        assert rows[1] == 1.0
        assert all(v == 0.0 for n, v in rows.items() if n != 1)
        assert "min_n=1" in err

    def test_uniform(self, capsys):
        _, out, _ = run(capsys, "retrodict", "--sequence", "")
        values = np.array(list(csv_rows(out).values()))
        np.testing.assert_allclose(values, 1 / 26, atol=1e-15)

    def test_empty_posterior_exit_code(self, capsys):
        code, out, err = run(capsys, "retrodict", "-s", "ggg", "-p", "cap:3")
        assert code == 2
        assert out == ""
        assert "'ggg'" in err and "cap:3" in err

    def test_prior_file_roundtrip(self, capsys, tmp_path):
        path = tmp_path / "prior.csv"
        run(capsys, "retrodict", "-s", "e", "-N", "10", "-o", str(path))
        code, out, _ = run(capsys, "retrodict", "-s", "g", "-N", "10", "-p", str(path))
        assert code == 0
        assert abs(sum(csv_rows(out).values()) - 1) <= 1e-12

    def test_json_support(self, capsys):
        _, out, _ = run(capsys, "retrodict", "-s", "gggggg", "--format", "json")
        doc = json.loads(out)
        assert doc["support"]["min_n"] == 9
        assert doc["support"]["implied_final_min"] == 15
        assert doc["prior"] == "uniform"


class TestPredict:
    def test_likelihood_rows(self, capsys):
        code, out, err = run(capsys, "predict", "-s", "gg", "-N", "5")
        assert code == 0
        assert csv_rows(out)[1] == pytest.approx(0.51683458030135345573, abs=1e-14)
        assert "P(sequence)" in err

    def test_json_evidence(self, capsys):
        _, out, _ = run(capsys, "predict", "-s", "e", "-N", "3", "-p", "cap:0", "--format", "json")
        assert json.loads(out)["evidence"] == pytest.approx(1.0, abs=1e-15)


class TestFigure:
    def test_mapping_table(self):
        assert {k: (v.sequence, v.prior, v.theta) for k, v in FIGURES.items()} == {
            "1a": ("e", "uniform", np.pi),
            "1b": ("eeeee", "uniform", np.pi),
            "2a": ("g", "uniform", np.pi),
            "2b": ("ggg", "uniform", np.pi),
            "2c": ("gggggg", "uniform", np.pi),
            "3": ("gg", "cap:3", np.pi),
            "4a": ("gegege", "uniform", np.pi),
            "4b": ("egegeg", "uniform", np.pi),
        }

    def test_2c_first_nonzero(self, capsys):
        _, out, _ = run(capsys, "figure", "2c")
        rows = csv_rows(out)
        assert min(n for n, v in rows.items() if v > 0) == 9

    def test_1a_maxima(self, capsys):
        rows = csv_rows(run(capsys, "figure", "1a")[1])
        top = max(rows.values())
        for n in (0, 3, 8, 15):
            assert rows[n] == pytest.approx(top, rel=1e-12)

    def test_3_single_row(self, capsys):
        rows = csv_rows(run(capsys, "figure", "3")[1])
        assert sum(v > 0 for v in rows.values()) == 1

    def test_unknown(self, capsys):
        assert run(capsys, "figure", "5")[0] == 1

    def test_json_and_csv_agree(self, capsys):
        for fig in FIGURES:
            csv_vals = csv_rows(run(capsys, "figure", fig)[1])
            doc = json.loads(run(capsys, "figure", fig, "--format", "json")[1])
            assert {n: v for n, v in doc["rows"]} == csv_vals
            assert doc["figure"] == fig


class TestTable1:
    @pytest.mark.parametrize("theta", ["pi", "1.0"])
    def test_deviations(self, capsys, theta):
        _, out, _ = run(capsys, "table1", "--theta", theta, "-N", "40")
        lines = out.splitlines()
        assert lines[0] == "row,max_deviation"
        assert [line.split(",")[0] for line in lines[1:]] == ["ee", "gg", "eg", "ge"]
        assert all(float(line.split(",")[1]) <= 1e-14 for line in lines[1:])


class TestVerify:
    def test_default_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0
        assert out.count("[PASS]") == 4
        assert "trapping-states" in out

    def test_sign_flip_mutation_fails_completeness(self, capsys, monkeypatch):
        real = pom_module.s_factor
        monkeypatch.setattr(pom_module, "s_factor", lambda n, m, p: -real(n, m, p))
        code, out, err = run(capsys, "verify")
        assert code == 3
        assert "[FAIL] completeness" in out
        assert "completeness" in err


def test_module_entry_point_lf_output(tmp_path):
    target = tmp_path / "fig.csv"
    proc = subprocess.run([sys.executable, "-m", "retromaser", "figure", "2b", "-o", str(target)],
                          capture_output=True)
    assert proc.returncode == 0
    data = target.read_bytes()
    assert b"\r" not in data and data.startswith(b"n,value\n")
