"""Figure-spec documents: a small JSON format naming what to draw from where.

A spec is a single JSON object::

    {
      "kind": "density_overlay",
      "inputs": ["exact_mh_chain0.csv", {"path": "mhc_debias_chain0.csv",
                                         "label": "de-biased"}],
      "params": ["mu", "sigma2"],
      "truth": {"mu": 0.0, "sigma2": 1.0},
      "burn_in": 100,
      "output": "densities.png"
    }

Relative input/output paths are resolved against the directory containing
the spec file.  Validation collects every problem before failing so a bad
document is fixable in one pass.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import SpecError

KINDS = ("trace", "density_overlay", "histogram_ci", "slice_curve", "slice_heatmap")
CHAIN_KINDS = ("trace", "density_overlay", "histogram_ci")
SLICE_KINDS = ("slice_curve", "slice_heatmap")

#: kinds that accept exactly one input CSV
SINGLE_INPUT_KINDS = ("histogram_ci", "slice_curve", "slice_heatmap")

_ALLOWED_KEYS = ("kind", "inputs", "params", "output", "truth", "burn_in", "title")
_ALLOWED_INPUT_KEYS = ("path", "label")
_OUTPUT_SUFFIXES = (".png", ".svg")


@dataclass(frozen=True)
class InputSpec:
    """One input CSV and the legend label it is drawn under."""

    path: Path
    label: str


@dataclass(frozen=True)
class FigureSpec:
    """A validated figure request; see the module docstring for the format."""

    kind: str
    inputs: tuple[InputSpec, ...]
    params: tuple[str, ...]
    output: Path
    truth: Mapping[str, float] = field(default_factory=dict)
    burn_in: int = 0
    title: str | None = None


def _is_real(value: Any) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _resolve(raw_path: str, base_dir: Path) -> Path:
    path = Path(raw_path)
    return path if path.is_absolute() else base_dir / path


def _parse_inputs(
    data: Mapping[str, Any], base_dir: Path, errors: list[str]
) -> tuple[InputSpec, ...]:
    raw = data.get("inputs")
    if raw is None:
        errors.append("'inputs' is required")
        return ()
    if not isinstance(raw, list) or not raw:
        errors.append("'inputs' must be a non-empty list")
        return ()
    parsed: list[InputSpec] = []
    for i, item in enumerate(raw):
        if isinstance(item, str):
            raw_path, label = item, None
        elif isinstance(item, dict):
            unknown = sorted(set(item) - set(_ALLOWED_INPUT_KEYS))
            if unknown:
                errors.append(f"inputs[{i}]: unknown keys {unknown}")
            raw_path = item.get("path")
            label = item.get("label")
            if not isinstance(raw_path, str):
                errors.append(f"inputs[{i}]: 'path' must be a string")
                continue
            if label is not None and not isinstance(label, str):
                errors.append(f"inputs[{i}]: 'label' must be a string")
                continue
        else:
            errors.append(f"inputs[{i}]: expected a string or a path/label object")
            continue
        path = _resolve(raw_path, base_dir)
        if not path.is_file():
            errors.append(f"inputs[{i}]: no such file: {path}")
            continue
        parsed.append(InputSpec(path=path, label=label if label else path.stem))
    return tuple(parsed)


def _parse_params(data: Mapping[str, Any], kind: str, errors: list[str]) -> tuple[str, ...]:
    raw = data.get("params")
    if raw is None:
        errors.append("'params' is required")
        return ()
    if (
        not isinstance(raw, list)
        or not raw
        or not all(isinstance(p, str) for p in raw)
    ):
        errors.append("'params' must be a non-empty list of column names")
        return ()
    params = tuple(raw)
    if len(set(params)) != len(params):
        errors.append("'params' contains duplicates")
    if kind == "slice_curve" and len(params) != 1:
        errors.append("slice_curve takes exactly one param (the grid axis)")
    if kind == "slice_heatmap" and len(params) != 2:
        errors.append("slice_heatmap takes exactly two params (x axis, y axis)")
    return params


def _parse_truth(data: Mapping[str, Any], errors: list[str]) -> dict[str, float]:
    raw = data.get("truth")
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        errors.append("'truth' must map param names to numbers")
        return {}
    truth: dict[str, float] = {}
    for key, value in raw.items():
        if not _is_real(value):
            errors.append(f"truth[{key!r}] must be a number, got {value!r}")
            continue
        truth[str(key)] = float(value)
    return truth


def spec_from_dict(data: Any, base_dir: Path | str = ".") -> FigureSpec:
    """Validate a decoded JSON object and build the :class:`FigureSpec`.

    Raises :class:`SpecError` listing every problem found.
    """
    base = Path(base_dir)
    errors: list[str] = []
    if not isinstance(data, dict):
        raise SpecError(["figure spec must be a JSON object"])

    unknown = sorted(set(data) - set(_ALLOWED_KEYS))
    if unknown:
        errors.append(f"unknown keys {unknown}; allowed: {list(_ALLOWED_KEYS)}")

    kind = data.get("kind")
    kind_ok = isinstance(kind, str) and kind in KINDS
    if not kind_ok:
        errors.append(f"'kind' must be one of {list(KINDS)}, got {kind!r}")

    inputs = _parse_inputs(data, base, errors)
    if kind_ok and kind in SINGLE_INPUT_KINDS and len(inputs) != 1:
        errors.append(f"{kind} takes exactly one input, got {len(inputs)}")

    params = _parse_params(data, kind if kind_ok else "", errors)

    raw_output = data.get("output")
    output = Path()
    if not isinstance(raw_output, str) or not raw_output:
        errors.append("'output' is required and must be a path string")
    else:
        output = _resolve(raw_output, base)
        if output.suffix not in _OUTPUT_SUFFIXES:
            errors.append(
                f"'output' must end in one of {list(_OUTPUT_SUFFIXES)}, "
                f"got {output.suffix!r}"
            )

    truth = _parse_truth(data, errors)

    burn_in = data.get("burn_in", 0)
    if not isinstance(burn_in, int) or isinstance(burn_in, bool) or burn_in < 0:
        errors.append(f"'burn_in' must be a non-negative integer, got {burn_in!r}")
        burn_in = 0
    if "burn_in" in data and kind_ok and kind in SLICE_KINDS:
        errors.append("'burn_in' does not apply to slice figures")

    title = data.get("title")
    if title is not None and not isinstance(title, str):
        errors.append(f"'title' must be a string, got {title!r}")
        title = None

    if errors:
        raise SpecError(errors)
    return FigureSpec(
        kind=kind,
        inputs=inputs,
        params=params,
        output=output,
        truth=truth,
        burn_in=burn_in,
        title=title,
    )


def load_spec(path: Path | str) -> FigureSpec:
    """Read and validate a JSON spec file; paths resolve against its directory."""
    spec_path = Path(path)
    try:
        data = json.loads(spec_path.read_text())
    except json.JSONDecodeError as exc:
        raise SpecError([f"{spec_path}: not valid JSON: {exc}"]) from exc
    return spec_from_dict(data, base_dir=spec_path.parent)
