# cli.py
"""
Command-line front end for the Weyl Tail Lab.

Every subcommand validates its options into a RunConfig, runs one operation,
writes CSV artifacts and a JSON run manifest, and exits with 0 on success,
2 on invalid parameters and 1 on numerical failure.
"""

import logging
import math
import sys
import time
from pathlib import Path
from typing import Dict, Any, Callable, List, Optional, Tuple

import click
import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, model_validator
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from config import ActiveConfig, Config
from errors import WeylLabError, recovery_engine
from export_utils import ExportManager, FileManager, PerformanceMonitor

logger = logging.getLogger(__name__)
console = Console()

SUBCOMMANDS = ("constants", "sample", "histogram", "tails", "fluctuation", "equidist", "verify")


class RunConfig(BaseModel):
    """Validated options of one run"""
    subcommand: str = Field(description="One of the CLI subcommands")
    seed: int = Field(default=Config.DEFAULT_SEED, ge=0, lt=2 ** 64, description="Seed for every RNG stream")
    threads: int = Field(default=Config.DEFAULT_THREADS, ge=1, description="Worker threads")
    samples: int = Field(default=Config.get_sample_size("ci"), ge=0, description="Monte Carlo sample count M")
    N: int = Field(default=1000, ge=1, description="Weyl sum length")
    b: float = Field(default=1.0, ge=1.0, description="Second sum length ratio")
    c: Optional[float] = Field(default=None, description="Linear phase coefficient")
    alpha: Optional[float] = Field(default=None, description="Shift; defaults to 0 (rational) or sqrt 2 (irrational)")
    eta: float = Field(default=1.5, gt=1.0, le=2.0, description="Decay exponent")
    eps: float = Field(default=0.5, gt=0.0, le=1.0, description="Error-term epsilon")
    case: str = Field(default="rational", pattern="^(rational|irrational)$")
    preset: str = Field(default=Config.DEFAULT_TRUNCATION, pattern="^(default|paper-repro)$")
    output_dir: str = Field(default=Config.OUTPUT_DIR, description="Directory for artifacts")
    d_irr: Optional[float] = Field(default=None, gt=0.0, description="Known D_irr(b); skips the quadrature")
    full: bool = Field(default=False, description="verify at acceptance scale")
    source: str = Field(default="weyl", pattern="^(weyl|limit)$", description="tails: direct sums or limit law")

    @model_validator(mode="after")
    def _check_subcommand(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        return self

    def weyl_params(self) -> Tuple[float, float]:
        c = 0.0 if self.c is None else self.c
        if self.alpha is not None:
            return c, self.alpha
        return c, (math.sqrt(2.0) if self.case == "irrational" else 0.0)

    def manifest_view(self) -> Dict[str, Any]:
        data = self.model_dump()
        data["truncation"] = Config.get_truncation_preset(self.preset)
        return data


# Handlers return {artifact suffix: frame}

def _rng(config: RunConfig):
    from measures import RngStream
    return RngStream(config.seed)


def _trunc(config: RunConfig):
    from theta import TruncationPolicy
    return TruncationPolicy.from_preset(config.preset)


def _run_constants(config: RunConfig) -> Dict[str, pd.DataFrame]:
    from constants import constants_table, inequality_chain_report

    table = constants_table([config.b], [config.eta], [config.eps], config.d_irr)
    checks = pd.DataFrame([c.to_dict() for c in inequality_chain_report(config.b, config.eta, config.eps)])
    _print_constants(table.iloc[0].to_dict())
    return {"table.csv": table, "inequalities.csv": checks}


def _run_sample(config: RunConfig) -> Dict[str, pd.DataFrame]:
    from measures import sample_batch

    batch = sample_batch(config.case, config.samples, _rng(config), config.threads)
    return {"points.csv": batch.to_frame()}


def _run_histogram(config: RunConfig) -> Dict[str, pd.DataFrame]:
    from experiments import run_weyl_histogram, weyl_tail_checks

    c, alpha = config.weyl_params()
    hist = run_weyl_histogram(config.N, config.samples, c, alpha, rng=_rng(config), threads=config.threads)
    checks = weyl_tail_checks(hist, Config.TAIL_GRIDS[config.case], config.case)
    return {"histogram.csv": hist.to_frame(), "tail_checks.csv": pd.DataFrame([t.to_dict() for t in checks])}


def _run_tails(config: RunConfig) -> Dict[str, pd.DataFrame]:
    from experiments import run_limit_law_sampling, run_weyl_histogram, tail_curve_from_values

    fluct = Config.get_fluctuation_config(config.case)
    grid = np.linspace(fluct["R_min"], fluct["R_max"], 61)
    if config.source == "weyl":
        c, alpha = config.weyl_params()
        hist = run_weyl_histogram(config.N, config.samples, c, alpha, rng=_rng(config), threads=config.threads)
        curve = tail_curve_from_values(hist.values, config.case, grid, fluct["p_exponent"], power=1.0)
    else:
        sample = run_limit_law_sampling(config.case, M=config.samples, trunc=_trunc(config),
                                        rng=_rng(config), threads=config.threads)
        curve = tail_curve_from_values(sample.values, config.case, grid, fluct["p_exponent"], power=2.0)
    return {"curve.csv": curve.to_frame()}


def _run_fluctuation(config: RunConfig) -> Dict[str, pd.DataFrame]:
    from experiments import run_fluctuation_curve

    curve = run_fluctuation_curve(config.case, config.samples, rng=_rng(config), threads=config.threads,
                                  trunc=_trunc(config))
    return {"curve.csv": curve.to_frame()}


def _run_equidist(config: RunConfig) -> Dict[str, pd.DataFrame]:
    from experiments import run_equidistribution_check

    report = run_equidistribution_check(None, config.samples, config.case, _rng(config),
                                        c=config.c, alpha=config.alpha, threads=config.threads)
    return {"report.csv": report.to_frame()}


HANDLERS: Dict[str, Callable[[RunConfig], Dict[str, pd.DataFrame]]] = {
    "constants": _run_constants,
    "sample": _run_sample,
    "histogram": _run_histogram,
    "tails": _run_tails,
    "fluctuation": _run_fluctuation,
    "equidist": _run_equidist,
}


def _print_constants(row: Dict[str, Any]):
    if not ActiveConfig.is_feature_enabled("rich_console"):
        return
    table = Table(title=f"Explicit constants (b = {row['b']:g})")
    table.add_column("name")
    table.add_column("value", justify="right")
    for key, value in row.items():
        table.add_row(key, f"{value:.10g}" if isinstance(value, float) else str(value))
    console.print(table)


def dispatch(config: RunConfig) -> Tuple[int, Dict[str, str]]:
    """Run one subcommand; returns the exit status and {artifact path: sha256}"""
    recovery_engine.reset()
    if config.subcommand == "verify":
        from test_integration import IntegrationTester

        results = IntegrationTester(quick=not config.full, seed=config.seed,
                                    report_dir=str(Path(config.output_dir) / Config.REPORTS_DIR)).run_all_tests()
        return (0 if results["overall_status"] == "SUCCESS" else 1), {}

    monitor = PerformanceMonitor()
    start = time.perf_counter()
    frames = HANDLERS[config.subcommand](config)
    monitor.track(config.subcommand, start)

    out_dir = FileManager.ensure_output_dir(config.output_dir)
    artifacts: Dict[str, str] = {}
    for suffix, frame in frames.items():
        path = FileManager.artifact_path(out_dir, config.subcommand, suffix)
        artifacts[str(path)] = ExportManager.write_csv(frame, path)
    manifest_path = FileManager.artifact_path(out_dir, config.subcommand, "manifest.json")
    ExportManager.write_manifest(manifest_path, config.manifest_view(), artifacts, monitor.timings(),
                                 recovery_engine.get_error_summary())

    if ActiveConfig.is_feature_enabled("rich_console"):
        lines = [f"{path}" for path in artifacts] + [f"manifest: {manifest_path}"]
        console.print(Panel("\n".join(lines), title=f"{config.subcommand} done in "
                                                     f"{monitor.timings()[config.subcommand]:.2f}s"))
    return 0, artifacts


def _execute(subcommand: str, **options) -> int:
    """Validate, dispatch and map failures to exit codes"""
    verbose = options.pop("verbose", False)
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    cleaned = {k: v for k, v in options.items() if v is not None}
    try:
        config = RunConfig(subcommand=subcommand, **cleaned)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "config"
        click.echo(f"error: invalid {where}: {first['msg']}", err=True)
        return 2
    try:
        status, _ = dispatch(config)
        return status
    except WeylLabError as e:
        click.echo(f"error: {e.diagnostic()}", err=True)
        return e.exit_code


def common_options(func):
    """Options shared by every subcommand"""
    options = [
        click.option("--seed", type=int, default=None, help="Seed for every random stream"),
        click.option("--threads", type=int, default=None, help="Worker threads"),
        click.option("--samples", type=int, default=None, help="Monte Carlo sample count"),
        click.option("--N", "N", type=int, default=None, help="Weyl sum length"),
        click.option("--b", type=float, default=None, help="Length ratio b >= 1"),
        click.option("--c", type=float, default=None, help="Linear phase coefficient"),
        click.option("--alpha", type=float, default=None, help="Phase shift"),
        click.option("--eta", type=float, default=None, help="Decay exponent in (1, 2]"),
        click.option("--eps", type=float, default=None, help="Epsilon in (0, 1]"),
        click.option("--case", type=str, default=None, help="rational or irrational"),
        click.option("--preset", type=str, default=None, help="Truncation preset: default or paper-repro"),
        click.option("--output-dir", "output_dir", type=str, default=None,
                     help="Artifact directory (overrides WEYL_LAB_OUTPUT_DIR)"),
        click.option("--verbose", is_flag=True, default=False, help="DEBUG logging"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.version_option(Config.APP_VERSION, prog_name=Config.APP_NAME)
def cli():
    """Weyl Tail Lab: tail laws of quadratic Weyl sums"""


@cli.command()
@common_options
@click.option("--d-irr", "d_irr", type=float, default=None, help="Known D_irr(b); skips the 2-D quadrature")
@click.pass_context
def constants(ctx, **options):
    """Explicit constants for (b, eta, eps)"""
    ctx.exit(_execute("constants", **options))


@cli.command()
@common_options
@click.pass_context
def sample(ctx, **options):
    """Dump samples of the invariant measure"""
    ctx.exit(_execute("sample", **options))


@cli.command()
@common_options
@click.pass_context
def histogram(ctx, **options):
    """Histogram of |S_N| / sqrt(N)"""
    ctx.exit(_execute("histogram", **options))


@cli.command()
@common_options
@click.option("--source", type=str, default=None, help="weyl (direct sums, default) or limit")
@click.pass_context
def tails(ctx, **options):
    """Empirical tail curve against the leading-order law"""
    ctx.exit(_execute("tails", **options))


@cli.command()
@common_options
@click.pass_context
def fluctuation(ctx, **options):
    """Fluctuation statistic of the limiting tail"""
    ctx.exit(_execute("fluctuation", **options))


@cli.command()
@common_options
@click.pass_context
def equidist(ctx, **options):
    """Equidistribution of reduced horocycle lifts"""
    ctx.exit(_execute("equidist", **options))


@cli.command()
@common_options
@click.option("--quick", "mode", flag_value="quick", default=True, help="CI-scale sample sizes")
@click.option("--full", "mode", flag_value="full", help="Acceptance-scale sample sizes")
@click.pass_context
def verify(ctx, mode: str, **options):
    """Run the acceptance suite"""
    ctx.exit(_execute("verify", full=(mode == "full"), **options))


def main(argv: Optional[List[str]] = None):
    cli.main(args=argv, prog_name="weyl-lab")


if __name__ == "__main__":
    main(sys.argv[1:])
