"""Report export to JSON, Markdown and CSV."""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from robustness_metrics.config.report_config import ReportConfig, ReportFormat
from robustness_metrics.core.errors import (
    SchemaError,
    UnpopulatedSectionError,
    WriteFailureError,
)
from robustness_metrics.models.performance import Scenario
from robustness_metrics.models.report import Report

logger = logging.getLogger(__name__)

CSV_SECTIONS = ("summary", "characterization", "divergence")

SUMMARY_COLUMNS = (
    "task",
    "model",
    "n_shifts",
    "avg_ss",
    "avg_tt",
    "avg_st",
    "avg_drop",
    "worst_sd",
    "worst_sd_source",
    "worst_sd_target",
    "worst_td",
    "worst_td_source",
    "worst_td_target",
    "mean_sd",
    "mean_td",
    "var_sd",
    "var_td",
    "std_sd",
    "std_td",
    "avg_worst_sd_per_source",
    "avg_worst_td_per_source",
    "positive_sd_share",
    "positive_td_share",
    "boundary_count",
    "degenerate_count",
    "is_full_cross_product",
    "skipped_shifts",
)

CHARACTERIZATION_COLUMNS = (
    "task",
    "model_group",
    "n_shifts",
    "mean_sd",
    "mean_td",
    "var_sd",
    "var_td",
    "std_sd",
    "std_td",
    "worst_sd",
    "worst_td",
    "corr_st_ss_pearson",
    "corr_st_tt_pearson",
    "corr_st_ss_spearman",
    "corr_st_tt_spearman",
    "r2_idd_sd",
    "r2_idd_td",
    "mad_st_ss",
    "mad_st_td",
    "positive_sd_share",
    "positive_td_share",
    "variance_gap_sign",
    "mad_gap_sign",
    "gap_signs_agree",
)

DIVERGENCE_COLUMNS = ("domain_a", "domain_b", "jsd", "vocab_size_used", "log_base")

SCENARIO_COLUMNS = (
    Scenario.CLASSIC,
    Scenario.OBSERVED,
    Scenario.UNOBSERVED,
    Scenario.NO_CHALLENGE,
)


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ReportExporter:
    """Renders and writes analysis reports.

    Attributes:
        config: Report configuration settings
    """

    def __init__(self, config: Optional[ReportConfig] = None):  # noqa: UP045
        """Initialize the report exporter.

        Args:
            config: Report configuration (uses defaults if not provided)
        """
        self.config = config or ReportConfig()

    def render(
        self,
        report: Report,
        report_format: Optional[ReportFormat] = None,  # noqa: UP045
        section: str = "summary",
    ) -> str:
        """Render a report as text.

        Args:
            report: Report to render
            report_format: Output format (config format if None)
            section: Section emitted by the CSV format

        Raises:
            UnpopulatedSectionError: CSV section missing from the report
        """
        fmt = ReportFormat(report_format or self.config.format)
        if fmt is ReportFormat.JSON:
            return report.model_dump_json(indent=2) + "\n"
        if fmt is ReportFormat.MARKDOWN:
            return self._markdown(report)
        return self._csv(report, section)

    def export(
        self,
        report: Report,
        output_path: Union[str, Path],
        report_format: Optional[ReportFormat] = None,  # noqa: UP045
        section: str = "summary",
    ) -> Path:
        """Write a report to a file.

        Returns:
            Path to the written file

        Raises:
            UnpopulatedSectionError: CSV section missing from the report
            WriteFailureError: File cannot be written
        """
        text = self.render(report, report_format, section)
        path = Path(output_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", newline="", encoding=self.config.encoding) as f:
                f.write(text)
        except OSError as e:
            raise WriteFailureError(f"Failed to write report {path}: {e}") from e
        logger.info(f"Wrote report to {path}")
        return path

    def _fmt(self, value: Optional[float]) -> str:  # noqa: UP045
        if value is None:
            return "n/a"
        return f"{value:.{self.config.decimals}f}"

    def _markdown(self, report: Report) -> str:
        lines = [
            "# Domain robustness report",
            "",
            f"Command: `{report.command}` (version {report.tool_version})",
            "",
        ]

        tasks = sorted({s.task for s in report.summaries})
        for task in tasks:
            lines += [
                f"## Task: {task}",
                "",
                "| model | AVG SS | AVG ST | Δ̄ | W_SD | W_TD |",
                "|---|---|---|---|---|---|",
            ]
            for s in (s for s in report.summaries if s.task == task):
                lines.append(
                    f"| {s.model} | {self._fmt(s.avg_ss)} | {self._fmt(s.avg_st)} | "
                    f"{self._fmt(s.avg_drop)} | {self._fmt(s.worst_sd)} | {self._fmt(s.worst_td)} |"
                )
            lines.append("")

        if report.characterization:
            lines += [
                "## Characterization",
                "",
                "| task | group | n | Var SD | Var TD | ρ(ST,SS) | ρ(ST,TT) | "
                "R²(IDD,SD) | R²(IDD,TD) | MAD(ST,SS) | MAD(ST,TT) |",
                "|---|---|---|---|---|---|---|---|---|---|---|",
            ]
            for row in report.characterization:
                lines.append(
                    f"| {row.task} | {row.model_group} | {row.n_shifts} | "
                    f"{self._fmt(row.var_sd)} | {self._fmt(row.var_td)} | "
                    f"{self._fmt(row.corr_st_ss_spearman)} | "
                    f"{self._fmt(row.corr_st_tt_spearman)} | "
                    f"{self._fmt(row.r2_idd_sd)} | {self._fmt(row.r2_idd_td)} | "
                    f"{self._fmt(row.mad_st_ss)} | {self._fmt(row.mad_st_td)} |"
                )
            lines.append("")

        if report.scenario_tests:
            lines += [
                "## Scenario tests",
                "",
                "| task | group | χ² | p | α/m | reject | Classic | Observed | Unobserved | "
                "No challenge | Boundary |",
                "|---|---|---|---|---|---|---|---|---|---|---|",
            ]
            for test in report.scenario_tests:
                shares = [self._fmt(test.scenario_proportions.get(s)) for s in SCENARIO_COLUMNS]
                lines.append(
                    f"| {test.task} | {test.model_group} | {self._fmt(test.chi.statistic)} | "
                    f"{test.chi.p_value:.4g} | {test.chi.alpha_adjusted:.4g} | "
                    f"{test.chi.reject} | {' | '.join(shares)} | {test.boundary_count} |"
                )
            lines.append("")

        if report.challenge_curves:
            lines += ["## Challenge curves", ""]
            for curve in report.challenge_curves:
                lines += [
                    f"### {curve.task} / {curve.model_group} (by {curve.ranking_key.value})",
                    "",
                    "| k | avg SD | avg TD |",
                    "|---|---|---|",
                ]
                for point in curve.points:
                    lines.append(
                        f"| {point.k} | {self._fmt(point.avg_sd_over_top_k)} | "
                        f"{self._fmt(point.avg_td_over_top_k)} |"
                    )
                lines.append("")

        if report.divergence is not None:
            lines += ["## Divergence", "", "| pair | JSD | vocab |", "|---|---|---|"]
            for result in report.divergence.results:
                lines.append(
                    f"| {result.pair[0]} / {result.pair[1]} | {result.jsd:.4f} | "
                    f"{result.vocab_size_used} |"
                )
            for failure in report.divergence.failures:
                lines.append(
                    f"| {failure.pair[0]} / {failure.pair[1]} | failed | {failure.error} |"
                )
            lines.append("")

        if report.predictor_correlations:
            lines += [
                "## Drop predictors (Spearman)",
                "",
                "| task | group | JS~SD | JS~TD | IDD~SD | IDD~TD |",
                "|---|---|---|---|---|---|",
            ]
            for row in report.predictor_correlations:
                lines.append(
                    f"| {row.task} | {row.model_group} | {self._fmt(row.js_sd)} | "
                    f"{self._fmt(row.js_td)} | {self._fmt(row.idd_sd)} | {self._fmt(row.idd_td)} |"
                )
            lines.append("")

        if report.theorem_check is not None:
            eq = report.theorem_check.equivalence
            lines += [
                "## Theorem check",
                "",
                f"- hypotheses hold: {report.theorem_check.hypotheses.all_hold}",
                f"- identities pass: {report.theorem_check.identities.passed}",
                f"- signs c1..c4: {eq.c1}, {eq.c2}, {eq.c3}, {eq.c4_sq} (E[|.|]: {eq.c4_abs})",
                f"- margin |y|: {eq.margin:.3e}, asserted: {eq.asserted}",
                "",
            ]

        if report.theorem_sweep is not None:
            sweep = report.theorem_sweep
            lines += [
                "## Theorem sweep",
                "",
                f"- checked: {sweep.checked}, asserted: {sweep.asserted}",
                f"- failures: {len(sweep.failures)}, E[|.|] disagreements: "
                f"{len(sweep.abs_disagreements)}",
                f"- margin range: [{sweep.min_margin:.3e}, {sweep.max_margin:.3e}]",
                f"- max identity residual: {sweep.max_identity_residual:.3e}",
                "",
            ]

        if report.simulation is not None:
            trace = report.simulation.trace
            lines += [
                "## Simulation",
                "",
                f"- trials: {trace.trials} in {trace.blocks} block(s)",
                f"- max |z| against exact moments: {trace.max_abs_z:.2f}",
                f"- condition signs match exact: {trace.signs_match_exact}",
                "",
            ]

        diagnostics = report.diagnostics
        lines += [
            "## Diagnostics",
            "",
            f"- skipped shifts: {diagnostics.skipped_shifts}",
            f"- boundary shifts: {diagnostics.boundary_count}",
            f"- degenerate orderings: {diagnostics.degenerate_count}",
        ]
        if diagnostics.partial_matrices:
            lines.append(f"- partial matrices: {', '.join(diagnostics.partial_matrices)}")
        lines += [f"- {message}" for message in diagnostics.messages]
        return "\n".join(lines) + "\n"

    def _csv(self, report: Report, section: str) -> str:
        if section not in CSV_SECTIONS:
            raise ValueError(f"unknown CSV section {section!r}; choose from {CSV_SECTIONS}")

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if section == "summary":
            if not report.summaries:
                raise UnpopulatedSectionError("report has no summaries")
            writer.writerow(SUMMARY_COLUMNS)
            for s in report.summaries:
                values = s.model_dump()
                values.update(
                    worst_sd_source=s.worst_sd_shift[0],
                    worst_sd_target=s.worst_sd_shift[1],
                    worst_td_source=s.worst_td_shift[0],
                    worst_td_target=s.worst_td_shift[1],
                    skipped_shifts=len(s.skipped_shifts),
                )
                writer.writerow([_cell(values[c]) for c in SUMMARY_COLUMNS])
        elif section == "characterization":
            if not report.characterization:
                raise UnpopulatedSectionError("report has no characterization section")
            writer.writerow(CHARACTERIZATION_COLUMNS)
            for row in report.characterization:
                values = row.model_dump()
                writer.writerow([_cell(values[c]) for c in CHARACTERIZATION_COLUMNS])
        else:
            if report.divergence is None:
                raise UnpopulatedSectionError("report has no divergence section")
            writer.writerow(DIVERGENCE_COLUMNS)
            for result in report.divergence.results:
                writer.writerow(
                    [
                        result.pair[0],
                        result.pair[1],
                        _cell(result.jsd),
                        result.vocab_size_used,
                        result.log_base,
                    ]
                )
        return buffer.getvalue()


def emit_report(
    report: Report,
    output_path: Union[str, Path],
    report_format: Optional[ReportFormat] = None,  # noqa: UP045
    config: Optional[ReportConfig] = None,  # noqa: UP045
    section: str = "summary",
) -> Path:
    """Convenience function to write a report.

    Raises:
        UnpopulatedSectionError: CSV section missing from the report
        WriteFailureError: File cannot be written
    """
    exporter = ReportExporter(config=config)
    return exporter.export(report, output_path, report_format, section)


def load_report(path: Union[str, Path]) -> Report:
    """Parse a JSON report back into a Report.

    Raises:
        FileNotFoundError: File does not exist
        SchemaError: File is not a valid report
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Report not found: {file_path}")
    try:
        return Report.model_validate_json(file_path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise SchemaError(0, f"invalid report {file_path}: {e}") from e
