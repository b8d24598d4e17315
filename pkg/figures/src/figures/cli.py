"""Command-line entry point: ``figures render --spec FILE.json``."""

from __future__ import annotations

from pathlib import Path

import click

from .errors import FigureError
from .render import render
from .spec import load_spec


@click.group()
def main() -> None:
    """Render figures from MCMC chain and likelihood-slice CSV artifacts."""


@main.command("render")
@click.option(
    "--spec", "spec_path", required=True, type=click.Path(exists=True),
    help="JSON figure spec; see the package README for the schema.",
)
def render_cmd(spec_path: str) -> None:
    """Render one figure described by a JSON spec file."""
    try:
        out = render(load_spec(Path(spec_path)))
    except FigureError as exc:
        for line in str(exc).splitlines():
            click.echo(f"error: {line}", err=True)
        raise SystemExit(2)
    click.echo(f"wrote {out}")
