"""Tests for the command-line front end."""

import json

import pytest

from cyclotome.cli import EXIT_USAGE, build_parser, main


def _run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = main([*argv, "--out", str(out), "--threads", "1"])
    return code, out.read_bytes()


class TestParser:
    """Test cases for argument parsing."""

    def test_missing_command(self):
        """Test that a missing subcommand exits with the usage code."""
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == EXIT_USAGE

    def test_missing_required(self):
        """Test that a missing required option exits with the usage code."""
        with pytest.raises(SystemExit) as excinfo:
            main(["verify-a", "-p", "2"])
        assert excinfo.value.code == EXIT_USAGE

    def test_bad_check(self):
        """Test that an unknown verifier is rejected."""
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args(
                ["verify-classes", "-p", "2", "-f", "4", "-N", "15"]
                + ["--indices", "0", "--check", "x"]
            )
        assert excinfo.value.code == EXIT_USAGE

    def test_defaults(self):
        """Test the default exponents."""
        args = build_parser().parse_args(["verify-b", "-p", "3", "--p1", "11"])
        assert args.m == 1
        assert not args.conditions_only


class TestCommands:
    """Test cases for each subcommand."""

    def test_verify_a(self, tmp_path):
        """Test a verified two-prime run."""
        code, data = _run(tmp_path, "verify-a", "-p", "2", "--p1", "5", "--p2", "3")
        report = json.loads(data)
        assert code == 0
        assert report["status"] == "verified"
        assert report["certificate"]["k"] == 1

    def test_verify_a_conditions_only(self, tmp_path):
        """Test the conditions-only exit code."""
        code, data = _run(
            tmp_path, "verify-a", "-p", "2", "--p1", "5", "--p2", "3", "--conditions-only"
        )
        assert code == 0
        assert json.loads(data)["status"] == "conditions_hold"

    def test_verify_a_conditions_fail(self, tmp_path):
        """Test the failing-conditions exit code."""
        code, data = _run(tmp_path, "verify-a", "-p", "2", "--p1", "5", "--p2", "7")
        assert code == 2
        assert json.loads(data)["status"] == "conditions_failed"

    def test_verify_classes(self, tmp_path):
        """Test a Paley type check from the command line."""
        code, data = _run(
            tmp_path,
            "verify-classes",
            "-p", "13", "-f", "1", "-N", "2", "--indices", "0", "--check", "paley_pds",
        )  # fmt: skip
        assert code == 0
        assert json.loads(data)["certificate"]["kind"] == "paley_pds"

    def test_verify_classes_bad_order(self, tmp_path):
        """Test that N not dividing q - 1 exits with the usage code."""
        code, _ = _run(
            tmp_path, "verify-classes", "-p", "2", "-f", "4", "-N", "7", "--indices", "0"
        )
        assert code == EXIT_USAGE

    def test_verify_classes_failed(self, tmp_path):
        """Test that a set that is not an SRG exits with code 1."""
        indices = [str(i) for i in range(15)]
        code, data = _run(
            tmp_path, "verify-classes", "-p", "2", "-f", "4", "-N", "15", "--indices", *indices
        )
        assert code == 1
        assert json.loads(data)["valid"] is False

    def test_scan_json(self, tmp_path):
        """Test the two-prime scan as JSON."""
        code, data = _run(tmp_path, "scan", "A", "--bound", "100", "--json")
        rows = json.loads(data)
        assert code == 0
        assert [(row["p"], row["p1"], row["p2"]) for row in rows] == [
            (2, 5, 3),
            (3, 5, 7),
            (3, 17, 19),
        ]

    def test_scan_text(self, tmp_path):
        """Test the one-prime scan as a text table."""
        code, data = _run(tmp_path, "scan", "B", "--bound", "20")
        lines = data.decode().splitlines()
        assert code == 0
        assert lines[0].split() == ["p", "p1", "h", "m"]
        assert lines[1].split() == ["3", "11", "1", "1"]

    def test_export_edges(self, tmp_path):
        """Test the edge list export of a class union."""
        code, data = _run(
            tmp_path,
            "export", "classes",
            "-p", "2", "-f", "4", "-N", "15", "--indices", "0", "--format", "edges",
        )  # fmt: skip
        assert code == 0
        assert data.decode().splitlines()[0] == "0 1"

    def test_export_graph6_header(self, tmp_path):
        """Test the graph6 export with its header."""
        code, data = _run(
            tmp_path,
            "export", "a",
            "-p", "2", "--p1", "5", "--p2", "3", "--format", "graph6", "--header",
        )  # fmt: skip
        assert code == 0
        assert data.startswith(b">>graph6<<")

    def test_export_without_instance(self, tmp_path):
        """Test that exporting a run stopped by conditions writes nothing."""
        out = tmp_path / "out.g6"
        code = main(["export", "a", "-p", "2", "--p1", "5", "--p2", "7", "--out", str(out)])
        assert code == 2
        assert not out.exists()

    def test_gauss_json(self, tmp_path):
        """Test the Gauss comparison as JSON."""
        code, data = _run(tmp_path, "gauss", "-p", "2", "--p1", "5", "--p2", "3", "--json")
        report = json.loads(data)
        assert code == 0
        assert report["construction"] == "gauss-A"
        assert len(report["certificate"]["rows"]) == 14

    def test_gauss_text(self, tmp_path):
        """Test the Gauss comparison as a text table."""
        code, data = _run(tmp_path, "gauss", "-p", "2", "--p1", "5", "--p2", "3")
        text = data.decode()
        assert code == 0
        assert "clause" in text.splitlines()[0]
        assert "q = 16, N = 15" in text

    def test_scheme(self, tmp_path):
        """Test the scheme command."""
        code, data = _run(tmp_path, "scheme", "-p", "2", "--p1", "5", "--p2", "3")
        assert code == 0
        assert json.loads(data)["certificate"]["class_count"] == 15

    def test_tables_json(self, tmp_path):
        """Test the catalog as JSON."""
        code, data = _run(tmp_path, "tables", "--json")
        assert code == 0
        assert len(json.loads(data)) == 27

    def test_no_timings(self, tmp_path):
        """Test that --no-timings drops the timings block."""
        code, data = _run(
            tmp_path, "verify-a", "-p", "2", "--p1", "5", "--p2", "3", "--no-timings"
        )
        assert code == 0
        assert json.loads(data)["timings"] is None

    def test_repeated_runs_identical(self, tmp_path):
        """Test that repeated runs without timings write the same bytes."""
        argv = ("verify-a", "-p", "2", "--p1", "5", "--p2", "3", "-n", "2", "--no-timings")
        first = _run(tmp_path, *argv)
        second = _run(tmp_path, *argv)
        assert first[0] == 0
        assert first == second

    def test_repeated_exports_identical(self, tmp_path):
        """Test that the graph6 export is the same on every run."""
        argv = ("export", "a", "-p", "2", "--p1", "5", "--p2", "3", "--format", "graph6")
        first = _run(tmp_path, *argv)
        second = _run(tmp_path, *argv)
        assert first[0] == 0
        assert first == second

    def test_cache_dir(self, tmp_path):
        """Test that --cache-dir receives the field table."""
        cache = tmp_path / "cache"
        code, _ = _run(
            tmp_path, "verify-a", "-p", "2", "--p1", "5", "--p2", "3", "--cache-dir", str(cache)
        )
        assert code == 0
        assert list(cache.iterdir())

    def test_stdout(self, capsysbinary):
        """Test that output goes to stdout without --out."""
        code = main(["tables", "--json", "--threads", "1"])
        assert code == 0
        assert json.loads(capsysbinary.readouterr().out)[0]["v"] == "2^4"
