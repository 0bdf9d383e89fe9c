import json
import subprocess
import sys

import numpy as np
import pytest

from lmfd.cli import main


@pytest.fixture()
def artificial_csv(tmp_path):
    path = tmp_path / "artificial.csv"
    assert main(["synth", "--out", str(path), "--n", "1000", "--seed", "42"]) == 0
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSynth:
    def test_writes_requested_rows(self, tmp_path, capsys):
        path = tmp_path / "ten.csv"
        code, _, _ = run_cli(capsys, "synth", "--out", str(path), "--n", "10")
        assert code == 0
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "s1,s2"
        assert len(lines) == 11

    def test_default_size_is_1000(self, tmp_path, capsys):
        path = tmp_path / "full.csv"
        code, _, _ = run_cli(capsys, "synth", "--out", str(path))
        assert code == 0
        assert len(path.read_text().strip().splitlines()) == 1001

    def test_same_seed_identical_files(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(capsys, "synth", "--out", str(a), "--seed", "5")
        run_cli(capsys, "synth", "--out", str(b), "--seed", "5")
        assert a.read_bytes() == b.read_bytes()


class TestGrammar:
    def test_count(self, capsys):
        code, out, _ = run_cli(capsys, "grammar", "--count")
        assert code == 0
        assert out.strip() == "55"

    def test_listing(self, capsys):
        code, out, _ = run_cli(capsys, "grammar")
        lines = out.strip().splitlines()
        assert code == 0
        assert len(lines) == 55
        assert lines[0] == "0\ts1"
        assert lines[1] == "1\ts1 + c1*s2"


class TestDiscover:
    def test_report_to_stdout_by_default(self, artificial_csv, capsys):
        code, out, _ = run_cli(
            capsys,
            "discover", "--input", str(artificial_csv),
            "--budget", "40", "--seed", "42", "--jobs", "1",
        )
        assert code == 0
        report = json.loads(out)
        assert report["counts"]["pairs"] == 1
        assert report["counts"]["candidates"] == 110
        assert len(report["results"]) == 5

    def test_report_written_to_file(self, artificial_csv, tmp_path, capsys):
        out_path = tmp_path / "report.json"
        code, out, _ = run_cli(
            capsys,
            "discover", "--input", str(artificial_csv),
            "--budget", "40", "--jobs", "1", "--output", str(out_path),
        )
        assert code == 0
        assert out == ""
        report = json.loads(out_path.read_text())
        assert report["config"]["seed"] == 42
        assert report["config"]["max_evaluations"] == 40

    def test_empty_result_exit_code_names_threshold(self, tmp_path, capsys):
        path = tmp_path / "mono.csv"
        path.write_text("a,b\n" + "".join(f"{i},{2*i}\n" for i in range(30)))
        code, _, err = run_cli(
            capsys, "discover", "--input", str(path), "--threshold", "0.3", "--jobs", "1"
        )
        assert code == 2
        assert "0.3" in err

    def test_missing_input_is_io_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "discover", "--input", str(tmp_path / "no.csv"))
        assert code == 1
        assert "error" in err

    def test_emit_series_writes_one_csv_per_result(self, artificial_csv, tmp_path, capsys):
        series_dir = tmp_path / "series"
        code, out, _ = run_cli(
            capsys,
            "discover", "--input", str(artificial_csv),
            "--budget", "30", "--jobs", "1", "--top-k", "3",
            "--emit-series", str(series_dir),
        )
        assert code == 0
        files = sorted(p.name for p in series_dir.iterdir())
        assert files == ["result_01.csv", "result_02.csv", "result_03.csv"]
        header = (series_dir / "result_01.csv").read_text().splitlines()[0]
        assert header == "index,proxy,s1,s2"

    def test_jobs_do_not_change_output(self, artificial_csv, tmp_path, capsys):
        reports = {}
        for jobs in ("1", "4"):
            out_path = tmp_path / f"report_{jobs}.json"
            run_cli(
                capsys,
                "discover", "--input", str(artificial_csv),
                "--budget", "30", "--jobs", jobs, "--output", str(out_path),
            )
            payload = json.loads(out_path.read_text())
            payload.pop("wall_time_seconds")
            reports[jobs] = json.dumps(payload, sort_keys=True)
        assert reports["1"] == reports["4"]


class TestEval:
    def test_monotonic_bare_sensor_scores_one(self, tmp_path, capsys):
        path = tmp_path / "mono.csv"
        path.write_text("a,b\n" + "".join(f"{i},{((-1) ** i)}\n" for i in range(20)))
        code, out, _ = run_cli(capsys, "eval", "--input", str(path), "--equation", "a")
        assert code == 0
        assert float(out.strip()) == 1.0

    def test_matches_discover_report(self, artificial_csv, capsys):
        code, out, _ = run_cli(
            capsys,
            "discover", "--input", str(artificial_csv), "--budget", "60", "--jobs", "1",
        )
        report = json.loads(out)
        top = report["results"][0]
        code, out, _ = run_cli(
            capsys, "eval", "--input", str(artificial_csv), "--equation", top["equation"]
        )
        assert code == 0
        assert float(out.strip()) == pytest.approx(top["abs_rho"], abs=1e-9)

    def test_published_equation_close_to_fitted_optimum(self, artificial_csv, capsys):
        code, out, _ = run_cli(
            capsys,
            "discover", "--input", str(artificial_csv), "--budget", "200",
            "--seed", "42", "--jobs", "1",
        )
        top = json.loads(out)["results"][0]["abs_rho"]
        code, out, _ = run_cli(
            capsys,
            "eval", "--input", str(artificial_csv),
            "--equation", "s2 + 0.642*exp(-0.982*s1)",
        )
        assert code == 0
        assert float(out.strip()) == pytest.approx(top, abs=0.02)

    def test_nested_functor_rejected(self, artificial_csv, capsys):
        code, _, err = run_cli(
            capsys, "eval", "--input", str(artificial_csv), "--equation", "sigmoid(sigmoid(s1))"
        )
        assert code == 1
        assert "canonical" in err

    def test_unknown_sensor(self, artificial_csv, capsys):
        code, _, err = run_cli(
            capsys, "eval", "--input", str(artificial_csv), "--equation", "s9 + 0.5*s1"
        )
        assert code == 1
        assert "s9" in err

    def test_unassigned_constant_rejected(self, artificial_csv, capsys):
        code, _, err = run_cli(
            capsys, "eval", "--input", str(artificial_csv), "--equation", "s1 + c1*s2"
        )
        assert code == 1
        assert "c1" in err

    def test_emit_series(self, artificial_csv, tmp_path, capsys):
        out_path = tmp_path / "proxy.csv"
        code, _, _ = run_cli(
            capsys,
            "eval", "--input", str(artificial_csv),
            "--equation", "s2 + 0.642*exp(-0.982*s1)",
            "--emit-series", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "index,proxy,s1,s2"
        assert len(lines) == 1001


class TestRank:
    def test_artificial_ranking(self, artificial_csv, capsys):
        code, out, _ = run_cli(capsys, "rank", "--input", str(artificial_csv))
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "name,abs_rho"
        rows = [line.split(",") for line in lines[1:]]
        assert [r[0] for r in rows] == ["s2", "s1"]
        assert float(rows[0][1]) == pytest.approx(0.7288, abs=0.05)
        assert float(rows[1][1]) <= 0.15

    def test_constant_column_warns_and_is_excluded(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        path.write_text("a,b\n1,5\n2,5\n0,5\n")
        with pytest.warns(UserWarning, match="'b'"):
            code = main(["rank", "--input", str(path)])
        out = capsys.readouterr().out
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert len(rows) == 1
        assert rows[0].startswith("a,")

    def test_single_column(self, tmp_path, capsys):
        path = tmp_path / "one.csv"
        path.write_text("only\n3\n1\n2\n")
        code, out, _ = run_cli(capsys, "rank", "--input", str(path))
        assert code == 0
        assert len(out.strip().splitlines()) == 2


class TestSubprocess:
    def test_module_entry_point(self):
        result = subprocess.run(
            [sys.executable, "-m", "lmfd", "grammar", "--count"],
            capture_output=True,
            text=True,
            check=True,
        )
        assert result.stdout.strip() == "55"

    def test_unknown_flag_rejected(self):
        result = subprocess.run(
            [sys.executable, "-m", "lmfd", "grammar", "--bogus"],
            capture_output=True,
            text=True,
        )
        assert result.returncode != 0
