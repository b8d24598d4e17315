"""Spec-document parsing: field validation, path resolution, error collection."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from figures import FigureSpec, SpecError, load_spec, spec_from_dict

from _synthetic import make_chain_csv, make_slice1d_csv


def base_spec(tmp_path: Path) -> dict:
    make_chain_csv(tmp_path / "chain0.csv")
    return {
        "kind": "trace",
        "inputs": ["chain0.csv"],
        "params": ["mu"],
        "output": "fig.png",
    }


def errors_of(data: dict, base: Path) -> list[str]:
    with pytest.raises(SpecError) as excinfo:
        spec_from_dict(data, base_dir=base)
    return excinfo.value.errors


class TestHappyPath:
    def test_minimal_spec_fills_defaults(self, tmp_path):
        spec = spec_from_dict(base_spec(tmp_path), base_dir=tmp_path)
        assert isinstance(spec, FigureSpec)
        assert spec.kind == "trace"
        assert spec.burn_in == 0
        assert spec.truth == {}
        assert spec.title is None
        assert spec.output == tmp_path / "fig.png"

    def test_inputs_accept_strings_and_labeled_objects(self, tmp_path):
        make_chain_csv(tmp_path / "a.csv")
        make_chain_csv(tmp_path / "b.csv")
        data = base_spec(tmp_path) | {
            "kind": "density_overlay",
            "inputs": ["a.csv", {"path": "b.csv", "label": "de-biased"}],
        }
        spec = spec_from_dict(data, base_dir=tmp_path)
        assert [inp.label for inp in spec.inputs] == ["a", "de-biased"]
        assert all(inp.path.is_absolute() == (tmp_path / "x").is_absolute()
                   for inp in spec.inputs)
        assert spec.inputs[0].path == tmp_path / "a.csv"

    def test_full_spec_round_trips_through_json_file(self, tmp_path):
        make_slice1d_csv(tmp_path / "slice.csv")
        data = {
            "kind": "slice_curve",
            "inputs": ["slice.csv"],
            "params": ["mu"],
            "truth": {"mu": 0.0},
            "title": "likelihood slice",
            "output": "slice.svg",
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(data))
        spec = load_spec(spec_path)
        assert spec.inputs[0].path == tmp_path / "slice.csv"
        assert spec.truth == {"mu": 0.0}
        assert spec.title == "likelihood slice"

    def test_absolute_paths_left_alone(self, tmp_path):
        chain = make_chain_csv(tmp_path / "c.csv")
        data = base_spec(tmp_path) | {
            "inputs": [str(chain)],
            "output": str(tmp_path / "out" / "fig.png"),
        }
        spec = spec_from_dict(data, base_dir=Path("/nonexistent"))
        assert spec.inputs[0].path == chain
        assert spec.output == tmp_path / "out" / "fig.png"


class TestValidationErrors:
    def test_unknown_kind(self, tmp_path):
        errs = errors_of(base_spec(tmp_path) | {"kind": "scatter"}, tmp_path)
        assert any("'kind'" in e and "scatter" in e for e in errs)

    def test_missing_required_fields(self, tmp_path):
        errs = errors_of({}, tmp_path)
        joined = "\n".join(errs)
        for needle in ("'kind'", "'inputs'", "'params'", "'output'"):
            assert needle in joined

    def test_nonexistent_input_file(self, tmp_path):
        errs = errors_of(base_spec(tmp_path) | {"inputs": ["ghost.csv"]}, tmp_path)
        assert any("no such file" in e and "ghost.csv" in e for e in errs)

    @pytest.mark.parametrize("kind", ["histogram_ci", "slice_curve", "slice_heatmap"])
    def test_single_input_kinds_reject_two_inputs(self, tmp_path, kind):
        make_chain_csv(tmp_path / "b.csv")
        params = {"slice_heatmap": ["a", "b"]}.get(kind, ["mu"])
        data = base_spec(tmp_path) | {
            "kind": kind,
            "inputs": ["chain0.csv", "b.csv"],
            "params": params,
        }
        errs = errors_of(data, tmp_path)
        assert any("exactly one input" in e for e in errs)

    def test_slice_curve_requires_one_param(self, tmp_path):
        data = base_spec(tmp_path) | {"kind": "slice_curve", "params": ["a", "b"]}
        assert any("exactly one param" in e for e in errors_of(data, tmp_path))

    def test_heatmap_requires_two_params(self, tmp_path):
        data = base_spec(tmp_path) | {"kind": "slice_heatmap", "params": ["a"]}
        assert any("exactly two params" in e for e in errors_of(data, tmp_path))

    def test_duplicate_params(self, tmp_path):
        data = base_spec(tmp_path) | {"params": ["mu", "mu"]}
        assert any("duplicates" in e for e in errors_of(data, tmp_path))

    def test_output_suffix_must_be_png_or_svg(self, tmp_path):
        data = base_spec(tmp_path) | {"output": "fig.pdf"}
        assert any(".png" in e and ".svg" in e for e in errors_of(data, tmp_path))

    @pytest.mark.parametrize("bad", [-1, 1.5, True, "10"])
    def test_burn_in_must_be_nonnegative_int(self, tmp_path, bad):
        data = base_spec(tmp_path) | {"burn_in": bad}
        assert any("'burn_in'" in e for e in errors_of(data, tmp_path))

    def test_burn_in_rejected_on_slice_kinds(self, tmp_path):
        make_slice1d_csv(tmp_path / "slice.csv")
        data = {
            "kind": "slice_curve",
            "inputs": ["slice.csv"],
            "params": ["mu"],
            "burn_in": 100,
            "output": "fig.png",
        }
        errs = errors_of(data, tmp_path)
        assert any("does not apply to slice figures" in e for e in errs)

    def test_unknown_top_level_key(self, tmp_path):
        data = base_spec(tmp_path) | {"colour": "red"}
        assert any("unknown keys" in e and "colour" in e for e in errors_of(data, tmp_path))

    def test_truth_values_must_be_numbers(self, tmp_path):
        data = base_spec(tmp_path) | {"truth": {"mu": "zero"}}
        assert any("truth['mu']" in e for e in errors_of(data, tmp_path))

    def test_errors_accumulate(self, tmp_path):
        data = base_spec(tmp_path) | {
            "kind": "scatter",
            "output": "fig.pdf",
            "burn_in": -3,
        }
        assert len(errors_of(data, tmp_path)) >= 3

    def test_top_level_must_be_object(self, tmp_path):
        with pytest.raises(SpecError, match="JSON object"):
            spec_from_dict(["not", "a", "dict"], base_dir=tmp_path)

    def test_invalid_json_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(SpecError, match="not valid JSON"):
            load_spec(bad)
