"""Command-line front end: run, validate, slice, summarize, list-experiments."""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from clfmh.cli import presets
from clfmh.cli.config import (
    ExperimentConfig,
    load_config,
    validate_config,
)
from clfmh.cli.runner import run_experiment
from clfmh.cli.slicing import parse_grid, run_slice, write_slice

OUT_ROOT_ENV = "CLFMH_OUT_ROOT"


def _load(config_path: str, sets, seed) -> dict:
    try:
        return load_config(config_path, overrides=sets, seed=seed)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc


def _validated(raw: dict) -> ExperimentConfig:
    errors = validate_config(raw)
    if errors:
        for err in errors:
            click.echo(f"error: {err}", err=True)
        raise SystemExit(2)
    return ExperimentConfig.from_dict(raw)


def _default_out(cfg: ExperimentConfig) -> Path:
    root = os.environ.get(OUT_ROOT_ENV)
    if not root:
        raise click.ClickException(
            f"no --out given and {OUT_ROOT_ENV} is not set; choose an output directory"
        )
    return Path(root) / f"{cfg.id}_{cfg.scale}_seed{cfg.seed}"


@click.group()
def main() -> None:
    """Classifier-based likelihood-free inference experiments."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--set", "sets", multiple=True, metavar="KEY=VAL",
              help="Override a config key, e.g. --set sampler.T=100")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
def validate(config_path, sets, seed) -> None:
    """Check a config against every cross-field constraint."""
    _validated(_load(config_path, sets, seed))
    click.echo("ok")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help=f"Output directory (default: ${OUT_ROOT_ENV}/<experiment>_<scale>_seed<seed>)")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Concurrent chain jobs; artifacts are identical regardless.")
@click.option("--set", "sets", multiple=True, metavar="KEY=VAL")
def run(config_path, out_dir, seed, jobs, sets) -> None:
    """Run every configured algorithm; write chains, summaries, manifest."""
    cfg = _validated(_load(config_path, sets, seed))
    out = Path(out_dir) if out_dir else _default_out(cfg)
    manifest = run_experiment(cfg, out, jobs=max(1, jobs))
    n_artifacts = len(manifest["artifacts"])
    if manifest["complete"]:
        click.echo(f"complete: {n_artifacts} artifacts in {out}")
        return
    for failure in manifest["errors"]:
        click.echo(
            f"error: {failure['algorithm']} chain {failure['chain']}: {failure['error']}",
            err=True,
        )
    click.echo(f"incomplete: {n_artifacts} artifacts retained in {out}", err=True)
    raise SystemExit(1)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--param", "param_expr", required=True,
              help="Parameter name, or two comma-separated names for a 2-D grid.")
@click.option("--grid", "grid_expr", required=True,
              help="start:stop:steps, or two comma-separated ranges for a 2-D grid.")
@click.option("--out", "out_csv", required=True, type=click.Path())
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--set", "sets", multiple=True, metavar="KEY=VAL")
@click.option("--force-half-d", is_flag=True,
              help="Ablation: replace the discriminator with the constant 1/2.")
def slice(config_path, param_expr, grid_expr, out_csv, seed, sets, force_half_d) -> None:
    """Tabulate eta (and the oracle log-likelihood) on a parameter grid."""
    cfg = _validated(_load(config_path, sets, seed))
    params = [p.strip() for p in param_expr.split(",")]
    grid_parts = [g.strip() for g in grid_expr.split(",")]
    if len(grid_parts) != len(params):
        raise click.ClickException(
            f"{len(params)} parameter(s) but {len(grid_parts)} grid range(s)"
        )
    try:
        grids = [parse_grid(g) for g in grid_parts]
        frame = run_slice(cfg, params, grids, force_half_d=force_half_d)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    path = write_slice(frame, out_csv)
    click.echo(f"wrote {len(frame)} grid points to {path}")


@main.command()
@click.option("--chain", "chain_path", required=True, type=click.Path(exists=True))
@click.option("--burn-in", type=int, default=0, show_default=True)
@click.option("--level", type=float, default=0.95, show_default=True)
@click.option("--out", "out_csv", type=click.Path(), default=None,
              help="Also write the summary CSV here.")
def summarize(chain_path, burn_in, level, out_csv) -> None:
    """Re-summarize an existing chain CSV."""
    from clfmh.diagnostics import summarize as summarize_chain
    from clfmh.samplers import Chain

    try:
        chain = Chain.from_csv(chain_path)
        summary = summarize_chain(chain, burn_in=burn_in, level=level)
    except (KeyError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    text = summary.to_frame().to_csv(index=False)
    click.echo(text, nl=False)
    if out_csv:
        Path(out_csv).write_text(text)


@main.command("list-experiments")
def list_experiments() -> None:
    """Show the shipped experiment presets."""
    for path in presets.preset_paths():
        raw = load_config(path)
        exp = raw["experiment"]
        click.echo(
            f"{exp['id']:<15} {exp['scale']:<6} algorithms={','.join(exp['algorithms'])}"
            f"  ({path.name})"
        )


if __name__ == "__main__":
    main()
