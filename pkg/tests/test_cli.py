"""End-to-end CLI behavior: files written, stdout lines, exit codes."""

from __future__ import annotations

import json

import pytest

import locmetrics as lm
from locmetrics import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_trace(tmp_path, name, ids):
    path = tmp_path / name
    path.write_text("".join(f"{e}\n" for e in ids))
    return path


class TestGenerate:
    def test_gen_writes_the_exact_trace(self, tmp_path, capsys):
        code, out, err = run(
            capsys, "gen", "cyclic", "3", "2", "--out", str(tmp_path)
        )
        assert code == 0
        assert err == ""
        path = tmp_path / "cyclic_3_2.txt"
        assert f"wrote {path}" in out
        assert path.read_text() == "1\n2\n3\n1\n2\n3\n"

    def test_gen_rejects_unknown_kinds(self, tmp_path, capsys):
        code, out, err = run(
            capsys, "gen", "spiral", "3", "2", "--out", str(tmp_path)
        )
        assert code == 1
        assert "invalid choice" in err


class TestAnalyze:
    def test_full_report_on_a_cycle(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "report"
        code, out, err = run(
            capsys, "analyze", str(trace), "--out", str(out_dir)
        )
        assert code == 0
        for name in (
            "stats.csv",
            "hist_rt.csv",
            "hist_rd.csv",
            "footprint.csv",
            "steady_state.csv",
            "mrc_fp_diff.csv",
            "mrc_rt_conversion.csv",
            "cache_times.csv",
            "analysis.json",
        ):
            assert (out_dir / name).is_file()
        assert (out_dir / "stats.csv").read_text() == (
            "name,value\nn,6\nm,3\nhotness,2\nsealed,true\n"
        )
        assert (out_dir / "mrc_fp_diff.csv").read_text() == (
            "cache_size,miss_ratio,provenance\n"
            "0,1,fp_diff\n1,1,fp_diff\n2,1,fp_diff\n3,0,fp_diff\n"
        )
        assert (out_dir / "hist_rt.csv").read_text() == (
            "#kind=rt\n#n=6\n#m=3\nvalue,count\n3,3\ninf,3\n"
        )
        payload = json.loads((out_dir / "analysis.json").read_text())
        assert payload["n"] == 6
        assert payload["m"] == 3
        assert payload["invariants"]["ok"] is True
        assert payload["invariants"]["finite_reuse_count"] == 3
        assert payload["mrc_rt_conversion"]["points"] == [
            ["0", "1"],
            ["1", "1"],
            ["2", "1"],
            ["3", "1/2"],
        ]

    def test_oracle_mode_reports_equality_and_the_simulator_gap(
        self, tmp_path, capsys
    ):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "report"
        code, out, err = run(
            capsys, "analyze", str(trace), "--out", str(out_dir), "--oracle"
        )
        assert code == 0
        for method in ("incremental", "additive", "absence"):
            assert f"oracle footprint {method}: EQUAL" in out
        assert "oracle reuse-distance: EQUAL" in out
        assert "oracle reuse-time mrc: max deviation 0 from simulation" in out
        assert (out_dir / "mrc_simulator.csv").is_file()
        payload = json.loads((out_dir / "analysis.json").read_text())
        assert payload["mrc_simulator"]["points"][-1] == ["3", "1/2"]

    def test_binned_histograms_are_optional(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "report"
        code, out, err = run(
            capsys,
            "analyze",
            str(trace),
            "--out",
            str(out_dir),
            "--bins",
            "loglinear:2",
        )
        assert code == 0
        assert (out_dir / "hist_rt_binned.csv").is_file()
        assert (out_dir / "hist_rd_binned.csv").is_file()

    def test_identical_runs_write_identical_bytes(self, tmp_path, capsys):
        trace = write_trace(
            tmp_path, "t.txt", (1, 2, 1, 3, 2, 1, 3, 3, 2, 1)
        )
        dir_a = tmp_path / "a"
        dir_b = tmp_path / "b"
        assert run(capsys, "analyze", str(trace), "--out", str(dir_a))[0] == 0
        assert run(capsys, "analyze", str(trace), "--out", str(dir_b))[0] == 0
        files_a = sorted(p.name for p in dir_a.iterdir())
        files_b = sorted(p.name for p in dir_b.iterdir())
        assert files_a == files_b
        for name in files_a:
            assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()

    def test_doctored_footprint_oracle_exits_with_mismatch(
        self, tmp_path, capsys, monkeypatch
    ):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 1, 2, 2, 1))
        fake = lm.FootprintCurve(6, 2, (0, 6, 10, 8, 6, 4, 2))
        monkeypatch.setattr(cli, "fp_bruteforce", lambda t: fake)
        code, out, err = run(
            capsys,
            "analyze",
            str(trace),
            "--out",
            str(tmp_path / "r"),
            "--oracle",
        )
        assert code == 3
        assert "oracle comparison failed for:" in err
        assert "oracle footprint incremental: MISMATCH" in out


class TestHist:
    def test_json_histograms(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 1, 2, 2, 1))
        out_dir = tmp_path / "h"
        code, out, err = run(
            capsys,
            "hist",
            str(trace),
            "--format",
            "json",
            "--bins",
            "loglinear:2",
            "--out",
            str(out_dir),
        )
        assert code == 0
        rt = json.loads((out_dir / "hist_rt.json").read_text())
        assert rt["counts"] == {"1": 1, "2": 2, "3": 1}
        assert rt["infinite"] == 2
        assert (out_dir / "hist_rt_binned.json").is_file()
        assert (out_dir / "hist_rd_binned.json").is_file()

    def test_bad_bin_scheme_is_a_usage_error(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2))
        code, out, err = run(
            capsys, "hist", str(trace), "--bins", "linear", "--out", str(tmp_path)
        )
        assert code == 1
        assert "loglinear" in err


class TestFootprint:
    def test_methods_and_oracle_agree(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 2, 1, 1, 2, 3))
        for method in lm.FOOTPRINT_METHODS:
            out_dir = tmp_path / method
            code, out, err = run(
                capsys,
                "footprint",
                str(trace),
                "--method",
                method,
                "--oracle",
                "--out",
                str(out_dir),
            )
            assert code == 0
            assert f"oracle footprint {method}: EQUAL" in out

    def test_wmax_truncates_the_rows(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "f"
        code, out, err = run(
            capsys,
            "footprint",
            str(trace),
            "--wmax",
            "3",
            "--out",
            str(out_dir),
        )
        assert code == 0
        lines = (out_dir / "footprint.csv").read_text().splitlines()
        assert lines[0] == "x,window_count,total_wss,fp,fp_float"
        assert len(lines) == 5
        assert lines[-1].startswith("3,4,12,3,")

    def test_doctored_oracle_mismatch_exits_3(self, tmp_path, capsys, monkeypatch):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 1, 2, 2, 1))
        fake = lm.FootprintCurve(6, 2, (0, 6, 10, 8, 6, 4, 2))
        monkeypatch.setattr(cli, "fp_bruteforce", lambda t: fake)
        code, out, err = run(
            capsys,
            "footprint",
            str(trace),
            "--oracle",
            "--out",
            str(tmp_path / "f"),
        )
        assert code == 3
        assert "disagrees with enumeration" in err

    def test_json_payload(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 1, 2, 2, 1))
        out_dir = tmp_path / "f"
        code, out, err = run(
            capsys,
            "footprint",
            str(trace),
            "--format",
            "json",
            "--out",
            str(out_dir),
        )
        assert code == 0
        payload = json.loads((out_dir / "footprint.json").read_text())
        assert payload["total_wss"] == [0, 6, 9, 8, 6, 4, 2]
        assert payload["fp"] == ["0", "1", "9/5", "2", "2", "2", "2"]


class TestMrcAndFill:
    def test_both_curves_are_written(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "m"
        code, out, err = run(capsys, "mrc", str(trace), "--out", str(out_dir))
        assert code == 0
        assert (out_dir / "mrc_fp_diff.csv").is_file()
        conv = (out_dir / "mrc_rt_conversion.csv").read_text()
        assert "3,1/2,rt_conversion" in conv

    def test_single_fill_time_goes_to_stdout(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        code, out, err = run(
            capsys, "fill", str(trace), "--size", "2", "--out", str(tmp_path)
        )
        assert code == 0
        assert "size,fill_time,fill_time_float\n2,2,2.0\n" in out

    def test_rational_cache_sizes_are_accepted(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 1, 2, 2))
        code, out, err = run(
            capsys,
            "fill",
            str(trace),
            "--size",
            "4/3",
            "--method",
            "brute",
            "--out",
            str(tmp_path),
        )
        assert code == 0
        assert "4/3,2,2.0" in out

    def test_oversized_cache_is_invalid_input(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        code, out, err = run(
            capsys, "fill", str(trace), "--size", "3", "--out", str(tmp_path)
        )
        assert code == 2
        assert "no finite fill time" in err

    def test_cache_time_table_without_a_size(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "fill"
        code, out, err = run(capsys, "fill", str(trace), "--out", str(out_dir))
        assert code == 0
        lines = (out_dir / "cache_times.csv").read_text().splitlines()
        assert lines[0] == "size,fill_time,fill_estimate,inter_miss,residence"
        assert lines[1] == "0,0,0,1,0"
        assert lines[2] == "1,1,1,1,1"
        assert lines[3] == "2,2,2,1,2"


class TestReconstruct:
    def test_sequence_round_trip(self, tmp_path, capsys):
        t = lm.Trace.from_ids((1, 2, 1, 3, 2, 1, 3, 3, 2, 1))
        seq_file = tmp_path / "seq.txt"
        seq_file.write_text(
            lm.format_reuse_sequence(lm.reuse_time_sequence(t))
        )
        out_dir = tmp_path / "r"
        code, out, err = run(
            capsys,
            "reconstruct",
            str(seq_file),
            "--verify",
            "--out",
            str(out_dir),
        )
        assert code == 0
        rebuilt = lm.parse_trace((out_dir / "reconstructed.txt").read_text())
        assert rebuilt.accesses == t.accesses

    def test_profile_round_trip(self, tmp_path, capsys):
        t = lm.Trace.from_ids((1, 2, 3, 2, 1))
        prof_file = tmp_path / "prof.txt"
        prof_file.write_text(
            lm.format_profiles(
                lm.per_datum(lm.reuse_distance_sequence(t), t)
            )
        )
        out_dir = tmp_path / "r"
        code, out, err = run(
            capsys,
            "reconstruct",
            str(prof_file),
            "--verify",
            "--out",
            str(out_dir),
        )
        assert code == 0
        rebuilt = lm.parse_trace((out_dir / "reconstructed.txt").read_text())
        assert rebuilt.accesses == t.accesses

    def test_histograms_are_refused_with_an_explanation(self, tmp_path, capsys):
        hist_file = tmp_path / "hist.csv"
        hist_file.write_text(
            "#kind=rt\n#n=6\n#m=2\nvalue,count\n1,1\n2,2\n3,1\ninf,2\n"
        )
        code, out, err = run(
            capsys, "reconstruct", str(hist_file), "--out", str(tmp_path)
        )
        assert code == 2
        assert "histograms are not invertible" in err

    def test_missing_kind_header_is_invalid_input(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("inf\n1\n")
        code, out, err = run(
            capsys, "reconstruct", str(bad), "--out", str(tmp_path)
        )
        assert code == 2
        assert "#kind" in err

    def test_inconsistent_profiles_are_invalid_input(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("#kind=rt\n1 1\n2 3\n")
        code, out, err = run(
            capsys, "reconstruct", str(bad), "--out", str(tmp_path)
        )
        assert code == 2
        assert "time 2" in err


class TestSimulate:
    def test_csv_curve(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "s"
        code, out, err = run(
            capsys, "simulate", str(trace), "--out", str(out_dir)
        )
        assert code == 0
        assert (out_dir / "mrc_simulator.csv").read_text() == (
            "cache_size,miss_ratio,provenance\n"
            "0,1,simulator\n1,1,simulator\n2,1,simulator\n3,1/2,simulator\n"
        )

    def test_json_curve_includes_first_miss_times(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "s"
        code, out, err = run(
            capsys,
            "simulate",
            str(trace),
            "--format",
            "json",
            "--out",
            str(out_dir),
        )
        assert code == 0
        payload = json.loads((out_dir / "mrc_simulator.json").read_text())
        assert payload["first_miss_times"] == [0, 1, 2, 3]

    def test_exclude_policy_drops_cold_misses(self, tmp_path, capsys):
        trace = write_trace(tmp_path, "t.txt", (1, 2, 3, 1, 2, 3))
        out_dir = tmp_path / "s"
        code, out, err = run(
            capsys,
            "simulate",
            str(trace),
            "--cold",
            "exclude",
            "--out",
            str(out_dir),
        )
        assert code == 0
        text = (out_dir / "mrc_simulator.csv").read_text()
        assert "3,0,simulator" in text


class TestExitCodes:
    def test_missing_subcommand_is_a_usage_error(self, capsys):
        code, out, err = run(capsys)
        assert code == 1

    def test_unknown_subcommand_is_a_usage_error(self, capsys):
        code, out, err = run(capsys, "frobnicate")
        assert code == 1
        assert "error:" in err

    def test_unknown_flag_is_a_usage_error(self, tmp_path, capsys):
        code, out, err = run(capsys, "simulate", "t.txt", "--frob")
        assert code == 1

    def test_missing_trace_file_is_invalid_input(self, tmp_path, capsys):
        code, out, err = run(
            capsys, "hist", str(tmp_path / "nope.txt"), "--out", str(tmp_path)
        )
        assert code == 2
        assert "cannot read" in err

    def test_malformed_trace_is_invalid_input(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("1\n2 3\n")
        code, out, err = run(
            capsys, "hist", str(bad), "--out", str(tmp_path)
        )
        assert code == 2
        assert "line 2" in err
