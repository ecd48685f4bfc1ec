"""
CLI Application for travelling-wave computations

Minimal speed, wave classification and profile reconstruction for
(d(u)|u'|^(p-2)u')' + (c g(u) - f(u)) u' + rho(u) = 0, driven by a TOML
configuration file.

Exit codes: 0 success, 1 mathematical or verification failure, 2 usage or
configuration error.
"""
import json
import math
import uuid
from pathlib import Path
from typing import Any, Optional

import typer
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from client.config_file import ConfigError, RunConfig, load_config
from engine.classification.classifier import classify
from engine.coefficients.limits import endpoint_limits
from engine.coefficients.model import CoefficientSet, LimitValue
from engine.coefficients.validation import validate_hypotheses
from engine.errors import InadmissibleSpeed, WavefrontError
from engine.monitoring.logging import log_error, setup_logging
from engine.profile.reconstruct import reconstruct
from engine.profile.verify import verify_profile
from engine.tools.exporters import export_profile_csv, export_report_json, export_solution_csv
from engine.tools.sweep import agreement_summary, sweep_power_law, sweep_speeds
from engine.wavespeed.estimates import sign_at_one, sign_at_zero, stima_test
from engine.wavespeed.shooting import cstar, solution_at
from shared.config import settings

# Initialize
app = typer.Typer(
    name="wavefront",
    help="Travelling waves of doubly degenerate reaction-diffusion-convection equations",
    add_completion=False,
)
console = Console()

EXIT_FAILURE = 1
EXIT_USAGE = 2

ConfigArgument = typer.Argument(..., help="TOML run configuration")
JsonOption = typer.Option(False, "--json", help="Print the report as JSON")
OutOption = typer.Option(None, "--out", "-o", help="Directory for CSV/JSON output")
TolOption = typer.Option(None, "--tol", help="Width of the final c* bracket")
GridOption = typer.Option(None, "--grid", min=16, help="Grid size for hypothesis checks and running means")


@app.callback()
def main(
    log_level: str = typer.Option(settings.log_level, "--log-level", help="Logging level"),
    json_logs: bool = typer.Option(settings.json_logs, "--json-logs", help="Emit JSON formatted logs"),
):
    """Travelling-wave engine"""
    setup_logging(log_level, json_logs, run_id=uuid.uuid4().hex[:12])


def _fail(message: str, code: int = EXIT_FAILURE) -> typer.Exit:
    console.print(f"[red]❌ Error: {message}[/red]")
    return typer.Exit(code)


def _load(path: Path) -> tuple[RunConfig, CoefficientSet]:
    try:
        config = load_config(path)
        return config, config.coefficients()
    except ConfigError as exc:
        raise _fail(str(exc), EXIT_USAGE) from exc


def _speed(option: float | None, *fallbacks: float | None) -> float | None:
    for value in (option, *fallbacks):
        if value is not None:
            return value
    return None


def _parse_window(text: str | None, default: tuple[float, float]) -> tuple[float, float]:
    if text is None:
        return default
    try:
        low, high = (float(part) for part in text.split(","))
    except ValueError as exc:
        raise _fail(f"--t-window expects 'tmin,tmax', got '{text}'", EXIT_USAGE) from exc
    if not (low <= 0.0 <= high and low < high):
        raise _fail(f"time window [{low:g}, {high:g}] must contain the anchor t = 0", EXIT_USAGE)
    return low, high


def _limit_text(limit: LimitValue) -> str:
    if not limit.known:
        return "unknown"
    return "inf" if math.isinf(limit.value) else f"{limit.value:.6g}"


def _emit(report: dict[str, Any], as_json: bool, out: Path | None, name: str) -> None:
    if as_json:
        console.print_json(json.dumps(report, default=str))
    if out is not None:
        path = export_report_json(report, filename=name, out_dir=out)
        console.print(f"[green]✓[/green] Report saved to {path}")


def _run(task: str, fn, *args, **kwargs):
    """Run one engine call behind a spinner, mapping engine errors to exit 1."""
    with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console, transient=True) as progress:
        progress.add_task(description=task, total=None)
        try:
            return fn(*args, **kwargs)
        except InadmissibleSpeed as exc:
            raise _fail(str(exc), EXIT_USAGE) from exc
        except WavefrontError as exc:
            log_error(exc, {"task": task})
            raise _fail(str(exc)) from exc


@app.command()
def check(
    config_path: Path = ConfigArgument,
    grid: Optional[int] = GridOption,
    as_json: bool = JsonOption,
    out: Optional[Path] = OutOption,
):
    """
    Check the standing hypotheses and report the endpoint limits

    Examples:
        wavefront check fisher.toml
        wavefront check fisher.toml --json
    """
    _, cs = _load(config_path)
    validation = _run("Checking hypotheses...", validate_hypotheses, cs, grid)
    limits = _run("Estimating endpoint limits...", endpoint_limits, cs, False)

    named = {
        "ell0": limits.ell0, "ell1": limits.ell1, "h0": limits.h0, "h1": limits.h1,
        "d(0)": limits.d_at_0, "d(1)": limits.d_at_1, "d'(0)": limits.ddot_0, "d'(1)": limits.ddot_1,
    }
    report = {"hypotheses": validation.model_dump(mode="json"), "limits": {k: _limit_text(v) for k, v in named.items()}}

    if not as_json:
        table = Table(title="Hypotheses", box=box.ROUNDED)
        table.add_column("Check", style="cyan")
        table.add_column("Result")
        table.add_column("First violation")
        table.add_column("Detail")
        for item in validation.checks:
            mark = "[green]pass[/green]" if item.passed else "[red]fail[/red]"
            where = "" if item.first_violation is None else f"{item.first_violation:.6g}"
            table.add_row(item.name, mark, where, item.detail)
        console.print(table)

        limit_table = Table(title="Endpoint limits", box=box.ROUNDED)
        limit_table.add_column("Limit", style="cyan")
        limit_table.add_column("Value")
        limit_table.add_column("Confidence")
        for key, value in named.items():
            limit_table.add_row(key, _limit_text(value), value.confidence.value)
        console.print(limit_table)
    _emit(report, as_json, out, "check")

    if not validation.all_passed:
        raise _fail("standing hypotheses fail")
    if not limits.ell0.known:
        raise _fail("limit of h/u^(1/(p-1)) at 0 could not be determined")
    if limits.ell0.is_infinite:
        raise _fail("h/u^(1/(p-1)) is unbounded at 0: no travelling wave for any speed")


@app.command("cstar")
def cstar_command(
    config_path: Path = ConfigArgument,
    tol: Optional[float] = TolOption,
    k: Optional[list[float]] = typer.Option(None, "--k", help="Trial speeds for the sign test (repeatable)"),
    as_json: bool = JsonOption,
    out: Optional[Path] = OutOption,
    save_solution: bool = typer.Option(False, "--save-solution", help="Write the critical reduced solution as CSV"),
):
    """
    Compute the minimal speed c*

    Examples:
        wavefront cstar fisher.toml
        wavefront cstar degenerate.toml --k 0.3 --k 1.0
    """
    config, cs = _load(config_path)
    tol = _speed(tol, config.solver.tol)
    limits = _run("Estimating endpoint limits...", endpoint_limits, cs)
    estimate = _run("Shooting for c*...", cstar, cs, tol, limits)
    trial = list(dict.fromkeys([*config.solver.stima_k, *(k or [])]))
    verdicts = {f"{value:g}": stima_test(cs, value).value for value in trial}
    signs = {
        "at_0": sign_at_zero(cs, estimate, limits).value,
        "at_1": sign_at_one(cs, estimate).value,
    }
    report = {**estimate.report(), "sign_test": verdicts, "drift_signs": signs}

    if not as_json:
        console.print(Panel.fit(
            f"c* = [bold]{estimate.cstar:.8g}[/bold] ± {estimate.half_width:.2g}\n"
            f"Analytic bracket: [{estimate.analytic.lower:.6g}, {estimate.analytic.upper:.6g}] | "
            f"Shots: {estimate.shots}\n"
            f"Slope z'(0+) at c*: {estimate.slope_at_zero} | "
            f"Sign of c* g - f: {signs['at_0']} at 0, {signs['at_1']} at 1",
            title="Minimal speed",
            border_style="green",
        ))
        if verdicts:
            table = Table(title="Sign test", box=box.ROUNDED)
            table.add_column("k", style="cyan")
            table.add_column("Verdict")
            for key, verdict in verdicts.items():
                table.add_row(key, verdict)
            console.print(table)
    _emit(report, as_json, out, f"{config.output.prefix}_cstar")
    if save_solution and estimate.critical is not None:
        path = export_solution_csv(estimate.critical, cs, filename=f"{config.output.prefix}_reduced", out_dir=out or config.output.directory)
        console.print(f"[green]✓[/green] Reduced solution saved to {path}")


@app.command("classify")
def classify_command(
    config_path: Path = ConfigArgument,
    c: Optional[float] = typer.Option(None, "--c", help="Wave speed (default c*)"),
    tol: Optional[float] = TolOption,
    as_json: bool = JsonOption,
    out: Optional[Path] = OutOption,
):
    """
    Classify the travelling wave of speed c

    Examples:
        wavefront classify degenerate.toml
        wavefront classify fisher.toml --c 3
    """
    config, cs = _load(config_path)
    limits = _run("Estimating endpoint limits...", endpoint_limits, cs)
    estimate = _run("Shooting for c*...", cstar, cs, _speed(tol, config.solver.tol), limits)
    speed = _speed(c, config.c, estimate.cstar)
    solution = _run("Integrating the reduced equation...", solution_at, speed, estimate, cs, limits)
    result = _run("Classifying...", classify, speed, estimate, cs, limits, solution)
    report = result.report()

    if not as_json:
        table = Table(title=f"Wave at c = {speed:.6g} (c* = {estimate.cstar:.6g})", box=box.ROUNDED)
        table.add_column("Field", style="cyan")
        table.add_column("Verdict")
        table.add_column("Provenance")
        table.add_column("Criterion")
        table.add_row("type", result.wave_type.value, "", "")
        table.add_row("alpha", result.alpha_finite.value, result.provenance["alpha_finite"].value, result.traces["alpha_finite"].criterion)
        table.add_row("beta", result.beta_finite.value, result.provenance["beta_finite"].value, result.traces["beta_finite"].criterion)
        table.add_row("u'(alpha)", result.slope_at_1.kind.value, "analytic-criterion", result.slope_at_1.criterion)
        table.add_row("u'(beta)", result.slope_at_0.kind.value, "analytic-criterion", result.slope_at_0.criterion)
        console.print(table)
        console.print(f"Quadrature: alpha = {result.alpha}, beta = {result.beta}")
    _emit(report, as_json, out, f"{config.output.prefix}_classify")

    if result.has_conflict:
        raise _fail("analytic and numeric verdicts conflict")


@app.command()
def profile(
    config_path: Path = ConfigArgument,
    c: Optional[float] = typer.Option(None, "--c", help="Wave speed (default c*)"),
    tol: Optional[float] = TolOption,
    t_window: Optional[str] = typer.Option(None, "--t-window", help="Time window 'tmin,tmax' containing 0"),
    as_json: bool = JsonOption,
    out: Optional[Path] = OutOption,
):
    """
    Reconstruct and verify the wave profile u(t)

    Examples:
        wavefront profile fisher.toml --t-window=-20,20
        wavefront profile degenerate.toml --out results/
    """
    config, cs = _load(config_path)
    window = _parse_window(t_window, config.profile.t_window)
    limits = _run("Estimating endpoint limits...", endpoint_limits, cs)
    estimate = _run("Shooting for c*...", cstar, cs, _speed(tol, config.solver.tol), limits)
    speed = _speed(c, config.profile.c, config.c, estimate.cstar)
    if speed < estimate.lower - max(estimate.half_width, settings.default_tol):
        raise _fail(f"no travelling wave below c* = {estimate.cstar:.6g}", EXIT_USAGE)
    solution = _run("Integrating the reduced equation...", solution_at, speed, estimate, cs, limits)
    wave = _run("Reconstructing the profile...", reconstruct, solution, cs, window, limits)
    verification = verify_profile(wave, cs, speed)

    directory = out or config.output.directory
    csv_path = export_profile_csv(wave, filename=f"{config.output.prefix}_profile", out_dir=directory)
    report = {"profile": wave.summary(), "csv": str(csv_path), "verification": verification.model_dump(mode="json")}

    if not as_json:
        console.print(Panel.fit(
            f"Samples: {wave.t.size} on [{wave.t[0]:.4g}, {wave.t[-1]:.4g}]\n"
            f"alpha = {report['profile']['alpha']} | beta = {report['profile']['beta']}\n"
            f"u'(beta-) = {wave.slope_at_beta} | u'(alpha+) = {wave.slope_at_alpha}",
            title=f"Profile at c = {speed:.6g}",
            border_style="green" if verification.all_passed else "red",
        ))
        table = Table(title="Verification", box=box.ROUNDED)
        table.add_column("Check", style="cyan")
        table.add_column("Result")
        table.add_column("Value")
        table.add_column("Threshold")
        for item in verification.checks:
            mark = "[green]pass[/green]" if item.passed else "[red]fail[/red]"
            value = "" if item.value is None else f"{item.value:.3g}"
            limit = "" if item.threshold is None else f"{item.threshold:.3g}"
            table.add_row(item.name, mark, value, limit)
        console.print(table)
        console.print(f"\n[green]✓[/green] Profile saved to {csv_path}")
    _emit(report, as_json, directory if out else None, f"{config.output.prefix}_profile")

    if not verification.all_passed:
        raise _fail("profile verification failed")


@app.command()
def sweep(
    config_path: Path = ConfigArgument,
    mode: Optional[str] = typer.Option(None, "--mode", help="power-law or speed"),
    numeric: bool = typer.Option(False, "--numeric", help="Also shoot and use quadrature in power-law sweeps"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", help="Worker processes"),
    as_json: bool = JsonOption,
    out: Optional[Path] = OutOption,
):
    """
    Classify over a (p, delta, r) grid or over speeds above c*

    Examples:
        wavefront sweep grid.toml
        wavefront sweep degenerate.toml --mode speed
    """
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        raise _fail(str(exc), EXIT_USAGE) from exc
    plan = config.sweep
    mode = mode or plan.mode
    workers = workers or plan.workers

    if mode == "power-law":
        rows = _run(
            "Sweeping power-law exponents...", sweep_power_law,
            plan.p, plan.delta, plan.r, numeric or plan.numeric, workers,
        )
        if not rows:
            raise _fail("no admissible (p, delta, r) point in the grid", EXIT_USAGE)
        summary = agreement_summary(rows)
        report = {"mode": mode, "summary": summary, "rows": [row.model_dump(mode="json") for row in rows]}
        if not as_json:
            table = Table(title="Power-law sweep", box=box.ROUNDED)
            for column in ("p", "delta", "r", "c", "beta", "alpha", "u'(beta)", "u'(alpha)", "agreement"):
                table.add_column(column)
            for row in rows:
                table.add_row(
                    f"{row.p:g}", f"{row.delta:g}", f"{row.r:g}", "c*" if row.at_threshold else "> c*",
                    row.beta_oracle.value, row.alpha_oracle.value, row.slope_0_oracle.value,
                    row.slope_1_oracle.value, row.agreement.value,
                )
            console.print(table)
            console.print(f"Agreement: {summary}")
    elif mode == "speed":
        try:
            cs = config.coefficients()
        except ConfigError as exc:
            raise _fail(str(exc), EXIT_USAGE) from exc
        rows = _run("Sweeping speeds...", sweep_speeds, cs, plan.c_offsets, None, workers)
        report = {"mode": mode, "rows": [row.model_dump(mode="json") for row in rows]}
        if not as_json:
            table = Table(title="Speed sweep", box=box.ROUNDED)
            for column in ("c", "type", "alpha", "beta", "u'(alpha)", "u'(beta)", "conflict"):
                table.add_column(column)
            for row in rows:
                table.add_row(
                    f"{row.c:.6g}", row.wave_type, row.alpha_finite.value, row.beta_finite.value,
                    row.slope_at_1.value, row.slope_at_0.value, "yes" if row.conflict else "",
                )
            console.print(table)
    else:
        raise _fail(f"unknown sweep mode '{mode}'", EXIT_USAGE)
    _emit(report, as_json, out, f"{config.output.prefix}_sweep_{mode}")


if __name__ == "__main__":
    app()
