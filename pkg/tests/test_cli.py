"""Tests for the robustness CLI.

This module drives the Click commands end to end through CliRunner: report
output, config precedence and the exit-code contract (0 success, 1 data
error, 2 usage error, 3 theorem assertion failure).
"""

from __future__ import annotations

import json
import time
from collections.abc import Callable
from pathlib import Path
from unittest.mock import patch

import pytest
from click.testing import CliRunner
from conftest import THREE_DOMAIN_SCORES

from robustness_metrics import __version__
from robustness_metrics.cli.robustness import cli
from robustness_metrics.models import TheoremSweepReport


@pytest.fixture
def cli_runner():
    """Provide a Click CLI test runner."""
    return CliRunner()


@pytest.fixture
def corpora_dir(tmp_path: Path) -> Path:
    """Corpora for the three domains of the results fixture."""
    texts = {
        "books": ["novel author chapter plot", "author novel reading"],
        "dvd": ["movie actor plot scene", "actor director movie"],
        "kitchen": ["knife pan blender", "pan blender kettle knife"],
    }
    root = tmp_path / "corpora"
    for domain, documents in texts.items():
        folder = root / domain
        folder.mkdir(parents=True)
        for i, text in enumerate(documents):
            (folder / f"{i}.txt").write_text(text, encoding="utf-8")
    return root


@pytest.fixture
def atoms_file(tmp_path: Path) -> Callable[[str], Path]:
    """Write an atom CSV with the given body rows."""

    def _write(body: str) -> Path:
        path = tmp_path / "atoms.csv"
        path.write_text("ss,tt,st,prob\n" + body, encoding="utf-8")
        return path

    return _write


class TestCliGroup:
    """Tests for the command group."""

    def test_help(self, cli_runner: CliRunner):
        """Test that every command is listed."""
        result = cli_runner.invoke(cli, ["--help"])

        assert result.exit_code == 0
        for command in ("analyze", "characterize", "divergence", "verify-theorem", "config"):
            assert command in result.output

    def test_version(self, cli_runner: CliRunner):
        """Test the version option."""
        result = cli_runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_unknown_command(self, cli_runner: CliRunner):
        """Test that an unknown command is a usage error."""
        assert cli_runner.invoke(cli, ["plot"]).exit_code == 2

    def test_log_file(self, cli_runner: CliRunner, results_file: Path, tmp_path: Path):
        """Test that --log-file records the run."""
        log_file = tmp_path / "run.log"
        result = cli_runner.invoke(
            cli, ["--log-file", str(log_file), "analyze", "--results", str(results_file)]
        )
        assert result.exit_code == 0
        assert "Parsed 18 records" in log_file.read_text(encoding="utf-8")


class TestAnalyzeCommand:
    """Tests for the analyze command."""

    def test_summary_output(self, cli_runner: CliRunner, results_file: Path):
        """Test the printed summary of both models."""
        result = cli_runner.invoke(cli, ["analyze", "--results", str(results_file)])

        assert result.exit_code == 0
        assert "sa/bert: shifts=6 avg_ss=85.00" in result.output
        assert "worst_sd=20.00 (books->kitchen)" in result.output
        assert "sa/t5:" in result.output

    def test_json_report(self, cli_runner: CliRunner, results_file: Path, tmp_path: Path):
        """Test the JSON report contents."""
        out = tmp_path / "report.json"
        result = cli_runner.invoke(
            cli, ["analyze", "-r", str(results_file), "-o", str(out), "--epsilon", "0.5"]
        )

        assert result.exit_code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["command"] == "analyze"
        assert report["tool_version"] == __version__
        assert report["generated_at"] is not None
        assert report["config"]["analysis"]["epsilon"] == 0.5
        assert [s["model"] for s in report["summaries"]] == ["bert", "t5"]

    def test_deterministic_reports_identical(
        self, cli_runner: CliRunner, results_file: Path, tmp_path: Path
    ):
        """Test that two deterministic runs write byte-identical reports."""
        outputs = [tmp_path / "first.json", tmp_path / "second.json"]
        for out in outputs:
            result = cli_runner.invoke(
                cli, ["analyze", "-r", str(results_file), "-o", str(out), "--deterministic"]
            )
            assert result.exit_code == 0

        first, second = (out.read_bytes() for out in outputs)
        assert first == second
        assert json.loads(first)["generated_at"] is None

    def test_markdown_report(self, cli_runner: CliRunner, results_file: Path, tmp_path: Path):
        """Test the Markdown format."""
        out = tmp_path / "report.md"
        result = cli_runner.invoke(
            cli, ["analyze", "-r", str(results_file), "-o", str(out), "--format", "md"]
        )
        assert result.exit_code == 0
        assert "| bert | 85.00 | 73.67 | 11.33 | 20.00 | 25.00 |" in out.read_text(
            encoding="utf-8"
        )

    def test_missing_results_option(self, cli_runner: CliRunner):
        """Test that --results is required."""
        result = cli_runner.invoke(cli, ["analyze"])
        assert result.exit_code == 2
        assert "--results" in result.output

    def test_missing_results_file(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that a missing file is a data error."""
        result = cli_runner.invoke(cli, ["analyze", "-r", str(tmp_path / "nope.csv")])
        assert result.exit_code == 1

    def test_malformed_results(
        self, cli_runner: CliRunner, write_results: Callable[..., Path]
    ):
        """Test that a malformed row is a data error."""
        path = write_results([("sa", "bert", "a", "a", 90.0)])
        with path.open("a", encoding="utf-8") as f:
            f.write("sa,bert,a,b,not-a-score\n")

        result = cli_runner.invoke(cli, ["analyze", "-r", str(path)])
        assert result.exit_code == 1

    def test_out_of_range_flag(self, cli_runner: CliRunner, write_results: Callable[..., Path]):
        """Test that --allow-out-of-range accepts scores above 100."""
        path = write_results(
            [("sa", "bert", "a", "a", 120.0), ("sa", "bert", "b", "b", 90.0),
             ("sa", "bert", "a", "b", 80.0)]
        )
        assert cli_runner.invoke(cli, ["analyze", "-r", str(path)]).exit_code == 1
        result = cli_runner.invoke(cli, ["analyze", "-r", str(path), "--allow-out-of-range"])
        assert result.exit_code == 0

    def test_unit_scale(self, cli_runner: CliRunner, write_results: Callable[..., Path]):
        """Test reading 0-1 scores."""
        path = write_results(
            [("sa", "bert", "a", "a", 0.9), ("sa", "bert", "b", "b", 0.8),
             ("sa", "bert", "a", "b", 0.7)]
        )
        result = cli_runner.invoke(cli, ["analyze", "-r", str(path), "--score-scale", "unit"])
        assert result.exit_code == 0
        assert "avg_ss=90.00" in result.output

    def test_csv_without_section(
        self, cli_runner: CliRunner, results_file: Path, tmp_path: Path
    ):
        """Test that asking for an absent CSV section is a data error."""
        result = cli_runner.invoke(
            cli,
            [
                "analyze", "-r", str(results_file), "-o", str(tmp_path / "r.csv"),
                "--format", "csv", "--section", "divergence",
            ],
        )
        assert result.exit_code == 1

    def test_throughput(
        self, cli_runner: CliRunner, write_results: Callable[..., Path], tmp_path: Path
    ):
        """Test 14,000 records end to end, report included."""
        domains = [f"d{i:02d}" for i in range(20)]
        rows = [
            ("sa", f"model{m:02d}", s, t, 50.0 + (i * 7 + j * 3 + m) % 40)
            for m in range(35)
            for i, s in enumerate(domains)
            for j, t in enumerate(domains)
        ]
        path = write_results(rows)
        out = tmp_path / "report.json"

        start = time.perf_counter()
        result = cli_runner.invoke(cli, ["analyze", "-r", str(path), "-o", str(out)])
        elapsed = time.perf_counter() - start

        assert len(rows) == 14_000
        assert result.exit_code == 0
        assert len(json.loads(out.read_text(encoding="utf-8"))["summaries"]) == 35
        assert elapsed < 5.0


class TestCharacterizeCommand:
    """Tests for the characterize command."""

    def test_report_sections(self, cli_runner: CliRunner, results_file: Path, tmp_path: Path):
        """Test that characterization, tests and curves are reported."""
        out = tmp_path / "report.json"
        result = cli_runner.invoke(
            cli, ["characterize", "-r", str(results_file), "-o", str(out), "--ks", "1,3,6"]
        )

        assert result.exit_code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        (row,) = report["characterization"]
        assert (row["task"], row["model_group"], row["n_shifts"]) == ("sa", "*", 12)
        assert len(report["scenario_tests"]) == 1
        assert [p["k"] for p in report["challenge_curves"][0]["points"]] == [1, 3, 6]

    def test_model_pooling(self, cli_runner: CliRunner, results_file: Path):
        """Test one row per model."""
        result = cli_runner.invoke(
            cli, ["characterize", "-r", str(results_file), "--pooling", "model"]
        )
        assert result.exit_code == 0
        assert "sa/bert: shifts=6" in result.output
        assert "sa/t5: shifts=6" in result.output

    def test_group_pooling(self, cli_runner: CliRunner, results_file: Path):
        """Test grouping models by label."""
        result = cli_runner.invoke(
            cli,
            [
                "characterize", "-r", str(results_file), "--pooling", "group",
                "--model-group", "bert=encoders", "--model-group", "t5=encoders",
            ],
        )
        assert result.exit_code == 0
        assert "sa/encoders: shifts=12" in result.output

    def test_bad_model_group(self, cli_runner: CliRunner, results_file: Path):
        """Test that group labels need MODEL=GROUP."""
        result = cli_runner.invoke(
            cli, ["characterize", "-r", str(results_file), "--model-group", "bert"]
        )
        assert result.exit_code == 2

    def test_bad_ks(self, cli_runner: CliRunner, results_file: Path):
        """Test that --ks needs integers."""
        result = cli_runner.invoke(cli, ["characterize", "-r", str(results_file), "--ks", "1,x"])
        assert result.exit_code == 2

    def test_k_too_large(self, cli_runner: CliRunner, results_file: Path, tmp_path: Path):
        """Test that a size beyond the shift count is a data error after the report."""
        out = tmp_path / "report.json"
        result = cli_runner.invoke(
            cli, ["characterize", "-r", str(results_file), "--ks", "1,5,100", "-o", str(out)]
        )

        assert result.exit_code == 1
        report = json.loads(out.read_text(encoding="utf-8"))
        assert len(report["characterization"]) == 1
        assert report["challenge_curves"] == []
        assert "k=100" in report["diagnostics"]["messages"][0]

    def test_k_too_large_for_one_group(
        self, cli_runner: CliRunner, write_results: Callable[..., Path], tmp_path: Path
    ):
        """Test that a small group loses only its own curve."""
        domains = ["a", "b", "c", "d"]
        big = [
            ("sa", "big", s, t, 90.0 + i if s == t else 60.0 + 2 * i + 3 * j)
            for i, s in enumerate(domains)
            for j, t in enumerate(domains)
        ]
        small = [("sa", "small", s, t, v) for (s, t), v in THREE_DOMAIN_SCORES.items()]
        path = write_results(big + small)
        out = tmp_path / "report.json"

        result = cli_runner.invoke(
            cli,
            ["characterize", "-r", str(path), "--pooling", "model", "--ks", "1,10", "-o", str(out)],
        )

        assert result.exit_code == 1
        report = json.loads(out.read_text(encoding="utf-8"))
        assert [row["model_group"] for row in report["characterization"]] == ["big", "small"]
        (curve,) = report["challenge_curves"]
        assert curve["model_group"] == "big"
        assert [p["k"] for p in curve["points"]] == [1, 10]
        assert any(m.startswith("sa/small: k=10") for m in report["diagnostics"]["messages"])

    def test_too_few_shifts(self, cli_runner: CliRunner, write_results: Callable[..., Path]):
        """Test that a 2-domain matrix cannot be characterized."""
        path = write_results(
            [("sa", "bert", "a", "a", 90.0), ("sa", "bert", "b", "b", 80.0),
             ("sa", "bert", "a", "b", 70.0), ("sa", "bert", "b", "a", 60.0)]
        )
        result = cli_runner.invoke(cli, ["characterize", "-r", str(path)])
        assert result.exit_code == 1

    def test_characterization_csv(
        self, cli_runner: CliRunner, results_file: Path, tmp_path: Path
    ):
        """Test the characterization CSV section."""
        out = tmp_path / "chars.csv"
        result = cli_runner.invoke(
            cli,
            [
                "characterize", "-r", str(results_file), "-o", str(out),
                "--format", "csv", "--section", "characterization",
            ],
        )
        assert result.exit_code == 0
        assert out.read_text(encoding="utf-8").startswith("task,model_group,n_shifts,")


class TestDivergenceCommand:
    """Tests for the divergence command."""

    def test_matrix(self, cli_runner: CliRunner, corpora_dir: Path, tmp_path: Path):
        """Test that all three pairs are computed."""
        out = tmp_path / "div.json"
        result = cli_runner.invoke(cli, ["divergence", "-c", str(corpora_dir), "-o", str(out)])

        assert result.exit_code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        pairs = [r["pair"] for r in report["divergence"]["results"]]
        assert pairs == [["books", "dvd"], ["books", "kitchen"], ["dvd", "kitchen"]]
        assert report["predictor_correlations"] is None

    def test_top_k_one(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that --top-k 1 keeps one word per pair."""
        path = tmp_path / "corpora.jsonl"
        lines = [
            {"domain": "a", "text": "apple apple plum"},
            {"domain": "b", "text": "apple apple kiwi"},
        ]
        path.write_text("\n".join(json.dumps(line) for line in lines), encoding="utf-8")
        out = tmp_path / "div.json"

        result = cli_runner.invoke(
            cli, ["divergence", "-c", str(path), "--top-k", "1", "-o", str(out)]
        )
        assert result.exit_code == 0
        (entry,) = json.loads(out.read_text(encoding="utf-8"))["divergence"]["results"]
        assert entry["vocab_size_used"] == 1
        assert entry["jsd"] == 0.0

    def test_with_results(
        self, cli_runner: CliRunner, corpora_dir: Path, results_file: Path, tmp_path: Path
    ):
        """Test that --results adds per-model and averaged correlations."""
        out = tmp_path / "div.json"
        result = cli_runner.invoke(
            cli, ["divergence", "-c", str(corpora_dir), "-r", str(results_file), "-o", str(out)]
        )

        assert result.exit_code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        groups = [row["model_group"] for row in report["predictor_correlations"]]
        assert groups == ["bert", "t5", "*"]

    def test_failed_pair_exits_one(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that a failing pair is reported and exits 1."""
        path = tmp_path / "corpora.jsonl"
        lines = [
            {"domain": "a", "text": "apple banana"},
            {"domain": "b", "text": "apple cherry"},
            {"domain": "c", "text": "the of and"},
        ]
        path.write_text("\n".join(json.dumps(line) for line in lines), encoding="utf-8")
        out = tmp_path / "div.json"

        result = cli_runner.invoke(cli, ["divergence", "-c", str(path), "-o", str(out)])
        assert result.exit_code == 1
        report = json.loads(out.read_text(encoding="utf-8"))
        assert len(report["divergence"]["results"]) == 1
        assert len(report["diagnostics"]["messages"]) == 2

    def test_failed_pair_with_results(
        self, cli_runner: CliRunner, write_results: Callable[..., Path], tmp_path: Path
    ):
        """Test that a failed pair still writes the report when results are given."""
        path = tmp_path / "corpora.jsonl"
        lines = [
            {"domain": "books", "text": "novel author plot"},
            {"domain": "dvd", "text": "movie actor plot"},
            {"domain": "kitchen", "text": "the of and"},
        ]
        path.write_text("\n".join(json.dumps(line) for line in lines), encoding="utf-8")
        results = write_results(
            [("sa", "bert", s, t, v) for (s, t), v in THREE_DOMAIN_SCORES.items()]
        )
        out = tmp_path / "div.json"

        result = cli_runner.invoke(
            cli, ["divergence", "-c", str(path), "-r", str(results), "-o", str(out)]
        )

        assert result.exit_code == 1
        report = json.loads(out.read_text(encoding="utf-8"))
        assert len(report["divergence"]["results"]) == 1
        assert len(report["divergence"]["failures"]) == 2
        assert report["predictor_correlations"] is None
        assert report["summaries"][0]["n_shifts"] == 6
        assert any("sa/bert: No divergence" in m for m in report["diagnostics"]["messages"])

    def test_no_stopwords(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that --no-stopwords keeps function words."""
        path = tmp_path / "corpora.jsonl"
        lines = [{"domain": "a", "text": "the of"}, {"domain": "b", "text": "the and"}]
        path.write_text("\n".join(json.dumps(line) for line in lines), encoding="utf-8")

        result = cli_runner.invoke(cli, ["divergence", "-c", str(path), "--no-stopwords"])
        assert result.exit_code == 0

    def test_missing_corpora(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that a missing corpus path is a data error."""
        result = cli_runner.invoke(cli, ["divergence", "-c", str(tmp_path / "nope")])
        assert result.exit_code == 1


class TestVerifyTheoremCommand:
    """Tests for the verify-theorem command."""

    def test_point_mass(self, cli_runner: CliRunner, atoms_file: Callable[[str], Path]):
        """Test that a point mass passes."""
        path = atoms_file("80,80,70,1\n")
        result = cli_runner.invoke(cli, ["verify-theorem", "--atoms", str(path)])
        assert result.exit_code == 0
        assert "hypotheses hold: True" in result.output

    def test_invalid_probabilities(
        self, cli_runner: CliRunner, atoms_file: Callable[[str], Path]
    ):
        """Test that probabilities not summing to 1 are a data error."""
        path = atoms_file("1,1,1,0.5\n2,2,2,0.2\n")
        result = cli_runner.invoke(cli, ["verify-theorem", "--atoms", str(path)])
        assert result.exit_code == 1

    def test_sweep(self, cli_runner: CliRunner, tmp_path: Path):
        """Test the 1000-seed randomized suite."""
        out = tmp_path / "sweep.json"
        result = cli_runner.invoke(
            cli, ["verify-theorem", "--seeds", "1000", "-o", str(out), "--deterministic"]
        )

        assert result.exit_code == 0
        sweep = json.loads(out.read_text(encoding="utf-8"))["theorem_sweep"]
        assert sweep["checked"] == 1000
        assert sweep["failures"] == []

    def test_sweep_failure_exits_three(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that a failed asserted check exits 3 after writing the report."""
        failed = TheoremSweepReport(
            checked=1,
            asserted=1,
            failures=[0],
            min_margin=1.0,
            max_margin=1.0,
            max_identity_residual=0.0,
        )
        out = tmp_path / "sweep.json"
        with patch("robustness_metrics.cli.robustness.sweep", return_value=failed):
            result = cli_runner.invoke(cli, ["verify-theorem", "--seeds", "1", "-o", str(out)])

        assert result.exit_code == 3
        assert json.loads(out.read_text(encoding="utf-8"))["theorem_sweep"]["failures"] == [0]

    def test_simulation(self, cli_runner: CliRunner, tmp_path: Path):
        """Test a seeded simulation run with a trace file."""
        trace = tmp_path / "trace.csv"
        result = cli_runner.invoke(
            cli,
            ["verify-theorem", "--trials", "2000", "--seed", "4", "--trace", str(trace)],
        )

        assert result.exit_code == 0
        assert "Simulation of 2000 trials, seed 4" in result.output
        assert len(trace.read_text(encoding="utf-8").splitlines()) == 2001

    def test_simulation_deterministic(self, cli_runner: CliRunner, tmp_path: Path):
        """Test byte-identical simulation reports for one seed."""
        outputs = [tmp_path / "a.json", tmp_path / "b.json"]
        for out, workers in zip(outputs, ("1", "4")):
            result = cli_runner.invoke(
                cli,
                [
                    "verify-theorem", "--trials", "5000", "--seed", "8",
                    "--workers", workers, "-o", str(out), "--deterministic",
                ],
            )
            assert result.exit_code == 0

        first, second = (json.loads(out.read_text(encoding="utf-8")) for out in outputs)
        assert first["simulation"] == second["simulation"]

    def test_atoms_and_seeds_exclusive(
        self, cli_runner: CliRunner, atoms_file: Callable[[str], Path]
    ):
        """Test that --atoms and --seeds cannot be combined."""
        path = atoms_file("80,80,70,1\n")
        result = cli_runner.invoke(
            cli, ["verify-theorem", "--atoms", str(path), "--seeds", "3"]
        )
        assert result.exit_code == 2

    def test_invalid_simulation(self, cli_runner: CliRunner):
        """Test that unusable simulation parameters are a data error."""
        result = cli_runner.invoke(cli, ["verify-theorem", "--trials", "1"])
        assert result.exit_code == 1


class TestConfigCommand:
    """Tests for the config command and config files."""

    def test_defaults(self, cli_runner: CliRunner):
        """Test that all four sections are shown."""
        result = cli_runner.invoke(cli, ["config"])

        assert result.exit_code == 0
        for section in ("[analysis]", "[divergence]", "[simulation]", "[report]"):
            assert section in result.output
        assert '"top_k": 10000' in result.output

    def test_file_values(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that file values are shown."""
        path = tmp_path / "robustness.toml"
        path.write_text("[divergence]\ntop_k = 25\n", encoding="utf-8")

        result = cli_runner.invoke(cli, ["--config", str(path), "config"])
        assert result.exit_code == 0
        assert '"top_k": 25' in result.output

    def test_cli_beats_file(
        self, cli_runner: CliRunner, results_file: Path, tmp_path: Path
    ):
        """Test that flags override the file and the file overrides defaults."""
        path = tmp_path / "robustness.toml"
        path.write_text(
            "[analysis]\nepsilon = 0.5\n\n[report]\ndeterministic = true\n", encoding="utf-8"
        )
        out = tmp_path / "report.json"

        result = cli_runner.invoke(
            cli,
            ["--config", str(path), "analyze", "-r", str(results_file), "-o", str(out),
             "--epsilon", "0.25"],
        )
        assert result.exit_code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["config"]["analysis"]["epsilon"] == 0.25
        assert report["generated_at"] is None

    def test_missing_config_file(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that a missing config file is a usage error."""
        result = cli_runner.invoke(cli, ["--config", str(tmp_path / "nope.toml"), "config"])
        assert result.exit_code == 2

    def test_invalid_config_value(self, cli_runner: CliRunner, tmp_path: Path):
        """Test that an invalid value in the file is a usage error."""
        path = tmp_path / "robustness.toml"
        path.write_text("[analysis]\nalpha = 3.0\n", encoding="utf-8")
        result = cli_runner.invoke(cli, ["--config", str(path), "config"])
        assert result.exit_code == 2
