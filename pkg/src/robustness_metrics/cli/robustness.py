"""CLI commands for cross-domain robustness analysis.

This module provides Click-based command-line interface for:
- Summarizing Source and Target drops per (task, model)
- Characterizing shifts with scenario tests and challenge curves
- Computing corpus divergences and drop-predictor correlations
- Verifying the drop-equivalence theorem exactly or by simulation

Exit codes: 0 success, 1 data error, 2 usage error, 3 theorem assertion failure.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Optional

import click

from robustness_metrics import __version__
from robustness_metrics.config import (
    AnalysisConfig,
    DivergenceConfig,
    ReportConfig,
    SimConfig,
    build_config,
    load_config_file,
)
from robustness_metrics.core.analysis import (
    average_predictor_correlations,
    build_challenge_curve,
    characterize,
    pool_shifts,
    predictor_correlations,
    scenario_test,
)
from robustness_metrics.core.corpus_loader import load_corpora
from robustness_metrics.core.divergence import divergence_matrix
from robustness_metrics.core.errors import (
    AllDegenerateError,
    ConfigFileError,
    DataError,
    KTooLargeError,
    MissingDivergenceError,
    TheoremAssertionError,
    TooFewShiftsError,
)
from robustness_metrics.core.metrics import build_matrix, compute_shifts, task_summary
from robustness_metrics.core.report_exporter import CSV_SECTIONS, emit_report
from robustness_metrics.core.results_parser import ResultsParser
from robustness_metrics.core.simulation import simulate
from robustness_metrics.core.theorem import (
    EXACT_TOLERANCE,
    MARGIN_THRESHOLD,
    check_joint,
    load_joint_csv,
    sweep,
    verify_identities,
)
from robustness_metrics.models.performance import PerformanceMatrix, TaskSummary
from robustness_metrics.models.report import Diagnostics, Report
from robustness_metrics.utils.logging_config import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_DATA_ERROR = 1
EXIT_ASSERTION_FAILURE = 3


@contextmanager
def _exit_on_error() -> Iterator[None]:
    """Map library errors to the CLI exit codes."""
    try:
        yield
    except click.ClickException:
        raise
    except ConfigFileError as e:
        raise click.UsageError(str(e)) from e
    except TheoremAssertionError as e:
        logger.error(f"Theorem assertion failed: {e}")
        sys.exit(EXIT_ASSERTION_FAILURE)
    except (DataError, FileNotFoundError) as e:
        logger.error(str(e))
        sys.exit(EXIT_DATA_ERROR)
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        logger.debug("Full traceback:", exc_info=True)
        sys.exit(EXIT_DATA_ERROR)


def _output_options(command: Callable[..., Any]) -> Callable[..., Any]:
    """Attach the report output flags shared by every analysis command."""
    options = (
        click.option(
            "--out",
            "-o",
            type=click.Path(dir_okay=False, path_type=Path),  # type: ignore[type-var]
            help="Write the report to this file",
        ),
        click.option(
            "--format",
            "report_format",
            type=click.Choice(["json", "md", "csv"]),
            help="Report format (default: json)",
        ),
        click.option(
            "--section",
            type=click.Choice(list(CSV_SECTIONS)),
            default="summary",
            show_default=True,
            help="Section written by the csv format",
        ),
        click.option(
            "--deterministic",
            is_flag=True,
            help="Omit the timestamp so reports are byte-identical across runs",
        ),
    )
    for option in reversed(options):
        command = option(command)
    return command


def _results_options(command: Callable[..., Any]) -> Callable[..., Any]:
    """Attach the results-file flags shared by analyze and characterize."""
    options = (
        click.option(
            "--results",
            "-r",
            type=click.Path(dir_okay=False, path_type=Path),  # type: ignore[type-var]
            help="Results file (CSV or JSONL)",
        ),
        click.option("--epsilon", type=float, help="Tie tolerance (default: 1e-9)"),
        click.option(
            "--score-scale",
            type=click.Choice(["percent", "unit"]),
            help="Score scale of the results file (default: percent)",
        ),
        click.option(
            "--allow-out-of-range",
            is_flag=True,
            help="Accept scores outside [0, 100]",
        ),
    )
    for option in reversed(options):
        command = option(command)
    return command


def _require_results(results: Optional[Path]) -> Path:  # noqa: UP045
    if results is None:
        raise click.UsageError("Missing option '--results'.")
    return results


def _parse_ks(
    ctx: click.Context, param: click.Parameter, value: Optional[str]  # noqa: UP045
) -> Optional[list[int]]:  # noqa: UP045
    if value is None:
        return None
    try:
        ks = [int(part) for part in value.split(",") if part.strip()]
    except ValueError as e:
        raise click.BadParameter("expected a comma-separated list of integers") from e
    if not ks:
        raise click.BadParameter("expected at least one size")
    return ks


def _parse_groups(
    ctx: click.Context, param: click.Parameter, value: Sequence[str]
) -> Optional[dict[str, str]]:  # noqa: UP045
    if not value:
        return None
    groups = {}
    for item in value:
        model, sep, group = item.partition("=")
        if not sep or not model.strip() or not group.strip():
            raise click.BadParameter(f"expected MODEL=GROUP, got {item!r}")
        groups[model.strip()] = group.strip()
    return groups


def _analysis_config(ctx: click.Context, **overrides: Any) -> AnalysisConfig:
    return build_config(AnalysisConfig, ctx.obj["sections"], "analysis", overrides)


def _report_config(
    ctx: click.Context,
    report_format: Optional[str],  # noqa: UP045
    deterministic: bool,
) -> ReportConfig:
    return build_config(
        ReportConfig,
        ctx.obj["sections"],
        "report",
        {"format": report_format, "deterministic": deterministic or None},
    )


def _load_matrices(results: Path, config: AnalysisConfig) -> list[PerformanceMatrix]:
    parser = ResultsParser(
        score_scale=config.score_scale, allow_out_of_range=config.allow_out_of_range
    )
    return build_matrix(parser.parse(results))


def _diagnostics(summaries: Sequence[TaskSummary], messages: Sequence[str] = ()) -> Diagnostics:
    return Diagnostics(
        skipped_shifts=sum(len(s.skipped_shifts) for s in summaries),
        boundary_count=sum(s.boundary_count for s in summaries),
        degenerate_count=sum(s.degenerate_count for s in summaries),
        partial_matrices=[f"{s.task}/{s.model}" for s in summaries if not s.is_full_cross_product],
        messages=list(messages),
    )


def _finish(
    command: str,
    report_config: ReportConfig,
    config: dict[str, Any],
    out: Optional[Path],  # noqa: UP045
    section: str,
    **fields: Any,
) -> Report:
    """Assemble the report and write it when --out was given."""
    report = Report(
        generated_at=None if report_config.deterministic else datetime.now(timezone.utc),
        tool_version=__version__,
        command=command,
        config={**config, "report": report_config.model_dump(mode="json")},
        **fields,
    )
    if out is not None:
        emit_report(report, out, config=report_config, section=section)
        click.echo(f"Report: {out}")
    return report


def _echo_summaries(summaries: Sequence[TaskSummary]) -> None:
    click.echo("=" * 70)
    click.echo("Source/Target drop summary")
    click.echo("=" * 70)
    for s in summaries:
        click.echo(
            f"{s.task}/{s.model}: shifts={s.n_shifts} avg_ss={s.avg_ss:.2f} "
            f"avg_st={s.avg_st:.2f} drop={s.avg_drop:.2f} "
            f"worst_sd={s.worst_sd:.2f} ({s.worst_sd_shift[0]}->{s.worst_sd_shift[1]}) "
            f"worst_td={s.worst_td:.2f} ({s.worst_td_shift[0]}->{s.worst_td_shift[1]})"
        )


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging (DEBUG level)")
@click.option(
    "--log-file",
    type=click.Path(path_type=Path),  # type: ignore[type-var]
    help="Log to file for debugging",
)
@click.option(
    "--config",
    "config_file",
    type=click.Path(dir_okay=False, path_type=Path),  # type: ignore[type-var]
    help="TOML file with [analysis], [divergence], [simulation] and [report] sections",
)
@click.version_option(version=__version__, prog_name="robustness")
@click.pass_context
def cli(
    ctx: click.Context,
    verbose: bool,
    log_file: Optional[Path],  # noqa: UP045
    config_file: Optional[Path],  # noqa: UP045
) -> None:
    """Domain robustness metrics - Source and Target drops across domain shifts.

    Reads (task, model, source, target, score) results and reports how much
    performance degrades when a model trained on one domain meets another.
    """
    level = "DEBUG" if verbose else "INFO"
    setup_logging(level=level, log_file=log_file, enable_colors=sys.stderr.isatty())
    ctx.ensure_object(dict)
    try:
        ctx.obj["sections"] = load_config_file(config_file)
    except ConfigFileError as e:
        raise click.UsageError(str(e)) from e


@cli.command()
@_results_options
@_output_options
@click.pass_context
def analyze(
    ctx: click.Context,
    results: Optional[Path],  # noqa: UP045
    epsilon: Optional[float],  # noqa: UP045
    score_scale: Optional[str],  # noqa: UP045
    allow_out_of_range: bool,
    out: Optional[Path],  # noqa: UP045
    report_format: Optional[str],  # noqa: UP045
    section: str,
    deterministic: bool,
) -> None:
    """Summarize Source and Target drops for every (task, model)."""
    results = _require_results(results)
    with _exit_on_error():
        config = _analysis_config(
            ctx,
            epsilon=epsilon,
            score_scale=score_scale,
            allow_out_of_range=allow_out_of_range or None,
        )
        report_config = _report_config(ctx, report_format, deterministic)
        matrices = _load_matrices(results, config)
        summaries = [task_summary(matrix, config.epsilon) for matrix in matrices]

        _echo_summaries(summaries)
        _finish(
            "analyze",
            report_config,
            {"results": str(results), "analysis": config.model_dump(mode="json")},
            out,
            section,
            summaries=summaries,
            diagnostics=_diagnostics(summaries),
        )


@cli.command(name="characterize")
@_results_options
@click.option(
    "--pooling",
    type=click.Choice(["model", "task", "group", "pooled"]),
    help="How shifts are grouped (default: task)",
)
@click.option(
    "--model-group",
    "model_groups",
    multiple=True,
    callback=_parse_groups,
    help="MODEL=GROUP label used with --pooling group (repeatable)",
)
@click.option(
    "--ranking",
    type=click.Choice(["sd", "td", "idd"]),
    help="Challenge curve ranking key (default: sd)",
)
@click.option("--ks", callback=_parse_ks, help="Challenge curve sizes, e.g. 1,5,10")
@click.option("--alpha", type=float, help="Family-wise significance level (default: 0.05)")
@click.option(
    "--comparisons", "-m", type=int, help="Bonferroni comparison count (default: 1)"
)
@click.option(
    "--grouped",
    is_flag=True,
    help="Also test the four scenarios against (2, 2, 1, 1)/6",
)
@_output_options
@click.pass_context
def characterize_command(
    ctx: click.Context,
    results: Optional[Path],  # noqa: UP045
    epsilon: Optional[float],  # noqa: UP045
    score_scale: Optional[str],  # noqa: UP045
    allow_out_of_range: bool,
    pooling: Optional[str],  # noqa: UP045
    model_groups: Optional[dict[str, str]],  # noqa: UP045
    ranking: Optional[str],  # noqa: UP045
    ks: Optional[list[int]],  # noqa: UP045
    alpha: Optional[float],  # noqa: UP045
    comparisons: Optional[int],  # noqa: UP045
    grouped: bool,
    out: Optional[Path],  # noqa: UP045
    report_format: Optional[str],  # noqa: UP045
    section: str,
    deterministic: bool,
) -> None:
    """Characterize shifts: correlations, scenario tests and challenge curves."""
    results = _require_results(results)
    with _exit_on_error():
        config = _analysis_config(
            ctx,
            epsilon=epsilon,
            score_scale=score_scale,
            allow_out_of_range=allow_out_of_range or None,
            pooling=pooling,
            model_groups=model_groups,
            ranking=ranking,
            ks=ks,
            alpha=alpha,
            comparisons=comparisons,
            grouped_scenario_test=grouped or None,
        )
        report_config = _report_config(ctx, report_format, deterministic)
        matrices = _load_matrices(results, config)
        summaries = [task_summary(matrix, config.epsilon) for matrix in matrices]
        groups = pool_shifts(matrices, config.pooling, config.model_groups, config.epsilon)

        rows, tests, curves, messages = [], [], [], []
        skipped_curves = 0
        for (task, group), shifts in groups.items():
            label = f"{task}/{group}"
            try:
                rows.append(characterize(shifts, task, group, config.epsilon))
            except TooFewShiftsError as e:
                logger.warning(f"Skipping characterization of {label}: {e}")
                messages.append(f"{label}: {e}")
                continue
            try:
                tests.append(
                    scenario_test(
                        shifts,
                        config.alpha,
                        config.comparisons,
                        config.grouped_scenario_test,
                        task,
                        group,
                    )
                )
            except AllDegenerateError as e:
                logger.warning(f"Skipping scenario test of {label}: {e}")
                messages.append(f"{label}: {e}")
            try:
                curves.append(
                    build_challenge_curve(shifts, task, group, config.ranking, config.ks)
                )
            except KTooLargeError as e:
                logger.error(f"Skipping challenge curve of {label}: {e}")
                messages.append(f"{label}: {e}")
                skipped_curves += 1
        if not rows:
            raise TooFewShiftsError("no pooling group has at least 3 shifts")

        click.echo("=" * 70)
        click.echo(f"Characterization (pooling: {config.pooling.value})")
        click.echo("=" * 70)
        for row in rows:
            click.echo(
                f"{row.task}/{row.model_group}: shifts={row.n_shifts} "
                f"mean_sd={row.mean_sd:.2f} mean_td={row.mean_td:.2f} "
                f"var_sd={row.var_sd:.2f} var_td={row.var_td:.2f}"
            )
        for test in tests:
            click.echo(
                f"{test.task}/{test.model_group}: chi2={test.chi.statistic:.3f} "
                f"p={test.chi.p_value:.4g} reject={test.chi.reject}"
            )

        _finish(
            "characterize",
            report_config,
            {"results": str(results), "analysis": config.model_dump(mode="json")},
            out,
            section,
            summaries=summaries,
            characterization=rows,
            scenario_tests=tests,
            challenge_curves=curves,
            diagnostics=_diagnostics(summaries, messages),
        )
        if skipped_curves:
            sys.exit(EXIT_DATA_ERROR)


@cli.command()
@click.option(
    "--corpora",
    "-c",
    required=True,
    type=click.Path(path_type=Path),  # type: ignore[type-var]
    help="Directory with one sub-directory per domain, or a JSONL file",
)
@click.option(
    "--results",
    "-r",
    type=click.Path(dir_okay=False, path_type=Path),  # type: ignore[type-var]
    help="Results file; adds drop-predictor correlations",
)
@click.option("--top-k", type=int, help="Vocabulary size per pair (default: 10000)")
@click.option(
    "--stopwords",
    type=click.Path(dir_okay=False, path_type=Path),  # type: ignore[type-var]
    help="Stopword list replacing the bundled English list",
)
@click.option("--no-stopwords", is_flag=True, help="Keep stopwords in the vocabulary")
@click.option("--min-token-length", type=int, help="Shortest token kept (default: 1)")
@click.option("--base", type=click.Choice(["2", "e"]), help="Logarithm base (default: 2)")
@click.option("--epsilon", type=float, help="Tie tolerance (default: 1e-9)")
@click.option(
    "--score-scale",
    type=click.Choice(["percent", "unit"]),
    help="Score scale of the results file (default: percent)",
)
@_output_options
@click.pass_context
def divergence(
    ctx: click.Context,
    corpora: Path,
    results: Optional[Path],  # noqa: UP045
    top_k: Optional[int],  # noqa: UP045
    stopwords: Optional[Path],  # noqa: UP045
    no_stopwords: bool,
    min_token_length: Optional[int],  # noqa: UP045
    base: Optional[str],  # noqa: UP045
    epsilon: Optional[float],  # noqa: UP045
    score_scale: Optional[str],  # noqa: UP045
    out: Optional[Path],  # noqa: UP045
    report_format: Optional[str],  # noqa: UP045
    section: str,
    deterministic: bool,
) -> None:
    """Jensen-Shannon divergence between domain corpora.

    With --results, also correlates divergence and IDD with the drops.
    """
    with _exit_on_error():
        config = build_config(
            DivergenceConfig,
            ctx.obj["sections"],
            "divergence",
            {
                "top_k": top_k,
                "stopwords_path": stopwords,
                "use_stopwords": False if no_stopwords else None,
                "min_token_length": min_token_length,
                "log_base": base,
            },
        )
        report_config = _report_config(ctx, report_format, deterministic)
        matrix = divergence_matrix(load_corpora(corpora), config)

        run_config: dict[str, Any] = {
            "corpora": str(corpora),
            "divergence": config.model_dump(mode="json"),
        }
        summaries: list[TaskSummary] = []
        correlations = None
        missing_pairs = False
        messages = [f"{f.pair[0]}/{f.pair[1]}: {f.error}" for f in matrix.failures]
        if results is not None:
            analysis = _analysis_config(ctx, epsilon=epsilon, score_scale=score_scale)
            run_config["results"] = str(results)
            run_config["analysis"] = analysis.model_dump(mode="json")
            matrices = _load_matrices(results, analysis)
            summaries = [task_summary(m, analysis.epsilon) for m in matrices]
            divergences = matrix.as_mapping()
            per_model = []
            for m in matrices:
                shifts, _ = compute_shifts(m, analysis.epsilon)
                try:
                    per_model.append(
                        predictor_correlations(shifts, divergences, m.task, m.model)
                    )
                except MissingDivergenceError as e:
                    logger.error(f"{m.task}/{m.model}: {e}")
                    messages.append(f"{m.task}/{m.model}: {e}")
                    missing_pairs = True
                except TooFewShiftsError as e:
                    logger.warning(f"{m.task}/{m.model}: {e}")
                    messages.append(f"{m.task}/{m.model}: {e}")
            correlations = (per_model + average_predictor_correlations(per_model)) or None

        click.echo("=" * 70)
        click.echo(f"Jensen-Shannon divergence (log base {config.log_base})")
        click.echo("=" * 70)
        for result in matrix.results:
            click.echo(
                f"{result.pair[0]} / {result.pair[1]}: {result.jsd:.6f} "
                f"({result.vocab_size_used} words)"
            )
        for failure in matrix.failures:
            click.echo(f"{failure.pair[0]} / {failure.pair[1]}: FAILED ({failure.error})")

        _finish(
            "divergence",
            report_config,
            run_config,
            out,
            section,
            summaries=summaries,
            divergence=matrix,
            predictor_correlations=correlations,
            diagnostics=_diagnostics(summaries, messages),
        )
        if matrix.failures:
            logger.error(f"{len(matrix.failures)} divergence pair(s) failed")
        if matrix.failures or missing_pairs:
            sys.exit(EXIT_DATA_ERROR)


@cli.command(name="verify-theorem")
@click.option(
    "--atoms",
    type=click.Path(dir_okay=False, path_type=Path),  # type: ignore[type-var]
    help="CSV of joint atoms (ss,tt,st,prob) checked exactly",
)
@click.option("--seeds", type=click.IntRange(min=1), help="Run the randomized sweep on N seeds")
@click.option("--trials", type=int, help="Simulation trials (default: 100000)")
@click.option("--seed", type=int, help="Simulation root seed (default: 0)")
@click.option("--workers", type=int, help="Simulation worker threads (default: 1)")
@click.option("--n-domains", type=int, help="Domains in the simulated space (default: 6)")
@click.option("--noise", type=float, help="Noise sigma on cross-domain scores (default: 0)")
@click.option(
    "--pair-mode",
    type=click.Choice(["independent", "distinct"]),
    help="Pair sampling (default: independent)",
)
@click.option(
    "--trace",
    type=click.Path(dir_okay=False, path_type=Path),  # type: ignore[type-var]
    help="Write every simulated trial to this CSV",
)
@click.option("--tol", type=float, default=EXACT_TOLERANCE, show_default=True)
@click.option("--margin", type=float, default=MARGIN_THRESHOLD, show_default=True)
@_output_options
@click.pass_context
def verify_theorem(
    ctx: click.Context,
    atoms: Optional[Path],  # noqa: UP045
    seeds: Optional[int],  # noqa: UP045
    trials: Optional[int],  # noqa: UP045
    seed: Optional[int],  # noqa: UP045
    workers: Optional[int],  # noqa: UP045
    n_domains: Optional[int],  # noqa: UP045
    noise: Optional[float],  # noqa: UP045
    pair_mode: Optional[str],  # noqa: UP045
    trace: Optional[Path],  # noqa: UP045
    tol: float,
    margin: float,
    out: Optional[Path],  # noqa: UP045
    report_format: Optional[str],  # noqa: UP045
    section: str,
    deterministic: bool,
) -> None:
    """Check that SD and TD variance orderings agree under the theorem's hypotheses.

    Runs exact checks with --atoms, a randomized sweep with --seeds and a
    seeded simulation otherwise. Exits 3 when an asserted check fails.
    """
    if atoms is not None and seeds is not None:
        raise click.UsageError("--atoms and --seeds are mutually exclusive")
    with _exit_on_error():
        report_config = _report_config(ctx, report_format, deterministic)
        run_config: dict[str, Any] = {"tol": tol, "margin": margin}
        click.echo("=" * 70)

        if atoms is not None:
            check = check_joint(load_joint_csv(atoms), tol, margin)
            run_config["atoms"] = str(atoms)
            eq = check.equivalence
            click.echo(f"Exact check of {atoms}")
            click.echo("=" * 70)
            click.echo(f"hypotheses hold: {check.hypotheses.all_hold}")
            for identity in check.identities.checks:
                status = "skipped" if identity.skipped else ("ok" if identity.passed else "FAIL")
                click.echo(f"  {identity.name}: {status}")
            click.echo(
                f"signs c1={eq.c1} c2={eq.c2} c3={eq.c3} c4={eq.c4_sq} "
                f"(|.| variant {eq.c4_abs}) margin={eq.margin:.3e} asserted={eq.asserted}"
            )
            _finish("verify-theorem", report_config, run_config, out, section, theorem_check=check)
            if not check.passed:
                raise TheoremAssertionError(f"exact checks of {atoms} failed")
            return

        if seeds is not None:
            result = sweep(range(seeds), tol, margin)
            run_config["seeds"] = seeds
            click.echo(f"Randomized sweep over {seeds} seed(s)")
            click.echo("=" * 70)
            click.echo(
                f"checked={result.checked} asserted={result.asserted} "
                f"failures={len(result.failures)} "
                f"abs_disagreements={len(result.abs_disagreements)}"
            )
            click.echo(
                f"margin range [{result.min_margin:.3e}, {result.max_margin:.3e}], "
                f"max identity residual {result.max_identity_residual:.3e}"
            )
            _finish(
                "verify-theorem", report_config, run_config, out, section, theorem_sweep=result
            )
            if not result.passed:
                raise TheoremAssertionError(f"sweep failed for seeds {result.failures}")
            return

        sim_config = build_config(
            SimConfig,
            ctx.obj["sections"],
            "simulation",
            {
                "trials": trials,
                "seed": seed,
                "workers": workers,
                "n_domains": n_domains,
                "noise_sigma": noise,
                "pair_mode": pair_mode,
                "trace_path": trace,
            },
        )
        run_config["simulation"] = sim_config.model_dump(mode="json")
        simulation = simulate(sim_config, tol=tol, margin_threshold=margin)
        exact_eq = simulation.exact_equivalence
        click.echo(f"Simulation of {sim_config.trials} trials, seed {sim_config.seed}")
        click.echo("=" * 70)
        click.echo(
            f"max |z|={simulation.trace.max_abs_z:.2f} "
            f"signs match exact: {simulation.trace.signs_match_exact}"
        )
        click.echo(
            f"exact signs c1={exact_eq.c1} c2={exact_eq.c2} c3={exact_eq.c3} "
            f"c4={exact_eq.c4_sq} asserted={exact_eq.asserted}"
        )
        _finish("verify-theorem", report_config, run_config, out, section, simulation=simulation)
        if exact_eq.violated or not verify_identities(simulation.exact, tol).passed:
            raise TheoremAssertionError("exact checks of the simulated domain space failed")


@cli.command()
@click.pass_context
def config(ctx: click.Context) -> None:
    """Display the effective configuration."""
    with _exit_on_error():
        sections = ctx.obj["sections"]
        effective = {
            "analysis": build_config(AnalysisConfig, sections, "analysis"),
            "divergence": build_config(DivergenceConfig, sections, "divergence"),
            "simulation": build_config(SimConfig, sections, "simulation"),
            "report": build_config(ReportConfig, sections, "report"),
        }
        click.echo("=" * 70)
        click.echo("Effective configuration")
        click.echo("=" * 70)
        for name, settings in effective.items():
            click.echo(f"[{name}]")
            click.echo(json.dumps(settings.model_dump(mode="json"), indent=2, sort_keys=True))


if __name__ == "__main__":
    cli()
