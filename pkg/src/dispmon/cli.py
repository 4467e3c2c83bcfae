"""Command line entry points: signal generation, the monitor service, and
the validation harness."""

from __future__ import annotations

import sys

import click

from .recon import ReconstructionConfig
from .service import ServiceConfig
from .signals import PRESETS, LinkModel, generate, simulate_sensor
from .store import Store
from .validate import ErrorReport, format_table, run_validation


@click.group()
def main():
    """Reference-free displacement monitoring toolkit."""


@main.group()
def signal():
    """Test signal generation."""


@signal.command("gen")
@click.option("--preset", type=click.Choice(sorted(PRESETS)), required=True)
@click.option("--duration", type=float, default=None, help="override duration in seconds")
@click.option("--seed", type=int, default=0)
@click.option("--drop", type=float, default=0.0, help="simulated link drop probability")
@click.option("--out", type=click.Path(dir_okay=False), default="-")
def signal_gen(preset, duration, seed, drop, out):
    """Emit a preset excitation as CSV sensor frames."""
    spec = PRESETS[preset]
    if duration is not None:
        spec = type(spec)(**{**spec.__dict__, "duration_s": duration})
    accel, _ = generate(spec, seed=seed)
    link = LinkModel(drop_probability=drop, seed=seed)
    fh = sys.stdout if out == "-" else open(out, "w", encoding="ascii")
    try:
        for sample in simulate_sensor(accel, link):
            fh.write(sample.to_frame() + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


@main.command()
@click.option("--bind", default="127.0.0.1:8000", help="host:port to listen on")
@click.option("--poll-interval", type=float, default=0.5)
@click.option("--window-n", type=int, default=601)
@click.option("--source", default="sim:s1", help="default acquisition source")
@click.option("--data-dir", type=click.Path(file_okay=False), default="./dispmon-data")
def serve(bind, poll_interval, window_n, source, data_dir):
    """Run the monitoring service."""
    import uvicorn

    from .api import create_app

    config = ServiceConfig(
        poll_interval_s=poll_interval,
        reconstruction=ReconstructionConfig(window_len=window_n),
        bind=bind,
        source=source,
    )
    store = Store(data_dir)
    host, _, port = bind.partition(":")
    uvicorn.run(create_app(store, config), host=host, port=int(port or 8000))


@main.group()
def validate():
    """Validation harness: pipeline vs analytic oracles."""


@validate.command("run")
@click.option("--case", "cases", type=click.Choice(sorted(PRESETS)), multiple=True,
              help="repeatable; defaults to all cases")
@click.option("--mode", type=click.Choice(["direct", "pipeline"]), default="direct")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="write the report as CSV")
def validate_run(cases, mode, seed, out):
    """Run validation cases and print the error tables."""
    cases = cases or tuple(sorted(PRESETS))
    reports = [run_validation(c, mode=mode, seed=seed) for c in cases]
    click.echo(format_table(reports))
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(ErrorReport.CSV_HEADER + "\n")
            for r in reports:
                fh.write(r.to_csv_row() + "\n")


if __name__ == "__main__":
    main()
