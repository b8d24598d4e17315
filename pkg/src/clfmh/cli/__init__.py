"""Config-driven experiment runner with reproducible on-disk artifacts."""

from clfmh.cli.config import (
    ALGORITHMS,
    EXPERIMENTS,
    ExperimentConfig,
    apply_overrides,
    config_sha256,
    load_config,
    resolve_defaults,
    validate_config,
)
from clfmh.cli.main import main
from clfmh.cli.presets import preset_dir, preset_path, preset_paths
from clfmh.cli.runner import run_experiment
from clfmh.cli.slicing import parse_grid, run_slice, write_slice

__all__ = [
    "ALGORITHMS",
    "EXPERIMENTS",
    "ExperimentConfig",
    "apply_overrides",
    "config_sha256",
    "load_config",
    "main",
    "preset_dir",
    "preset_path",
    "preset_paths",
    "resolve_defaults",
    "run_experiment",
    "run_slice",
    "parse_grid",
    "validate_config",
    "write_slice",
]
