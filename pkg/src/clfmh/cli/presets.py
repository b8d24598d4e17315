"""Locate the experiment preset files shipped inside the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def preset_dir() -> Path:
    return Path(resources.files("clfmh") / "presets")


def preset_paths() -> list[Path]:
    """Every shipped preset, sorted by file name."""
    return sorted(preset_dir().glob("*.toml"))


def preset_path(name: str) -> Path:
    """A preset by file stem, e.g. 'cir_desk'."""
    path = preset_dir() / f"{name}.toml"
    if not path.exists():
        known = ", ".join(p.stem for p in preset_paths())
        raise FileNotFoundError(f"no preset {name!r} (shipped: {known})")
    return path
