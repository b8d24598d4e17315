"""Rendering: every kind draws, re-renders byte-stably, and never mutates inputs."""

from __future__ import annotations

import numpy as np
import pandas as pd
import pytest

from figures import (
    SchemaError,
    argmax_cell,
    build_figure,
    pivot_slice,
    render,
    spec_from_dict,
)

from _synthetic import (
    make_chain_csv,
    make_slice1d_csv,
    make_slice2d_csv,
    sha256,
)

KIND_DEFAULTS = {
    "trace": {"inputs": ["chain0.csv"], "params": ["mu", "sigma2"],
              "truth": {"mu": 0.0, "sigma2": 1.0}},
    "density_overlay": {"inputs": ["chain0.csv", "chain1.csv"], "params": ["mu"],
                        "truth": {"mu": 0.0}},
    "histogram_ci": {"inputs": ["chain0.csv"], "params": ["mu"],
                     "truth": {"mu": 0.0}},
    "slice_curve": {"inputs": ["slice_mu.csv"], "params": ["mu"],
                    "truth": {"mu": 0.05}},
    "slice_heatmap": {"inputs": ["slice_ab.csv"], "params": ["a", "b"],
                      "truth": {"a": 0.01, "b": 0.01}},
}


@pytest.fixture
def artifacts(tmp_path):
    make_chain_csv(tmp_path / "chain0.csv", seed=0)
    make_chain_csv(tmp_path / "chain1.csv", seed=1)
    make_slice1d_csv(tmp_path / "slice_mu.csv")
    make_slice2d_csv(tmp_path / "slice_ab.csv")
    return tmp_path


def spec_for(kind: str, base, /, suffix=".png", **overrides):
    data = {"kind": kind, "output": f"{kind}{suffix}", **KIND_DEFAULTS[kind]}
    data.update(overrides)
    return spec_from_dict(data, base_dir=base)


class TestEveryKindRenders:
    @pytest.mark.parametrize("kind", sorted(KIND_DEFAULTS))
    def test_png_written_with_magic_bytes(self, artifacts, kind):
        out = render(spec_for(kind, artifacts))
        assert out == artifacts / f"{kind}.png"
        payload = out.read_bytes()
        assert payload.startswith(b"\x89PNG\r\n")
        assert len(payload) > 1000

    @pytest.mark.parametrize("kind", sorted(KIND_DEFAULTS))
    def test_svg_written(self, artifacts, kind):
        out = render(spec_for(kind, artifacts, suffix=".svg"))
        assert out.read_bytes().startswith(b"<?xml")

    def test_output_parent_directory_created(self, artifacts):
        out = render(spec_for("trace", artifacts, output="sub/dir/fig.png"))
        assert out == artifacts / "sub" / "dir" / "fig.png"
        assert out.is_file()


class TestDeterminism:
    @pytest.mark.parametrize("kind", sorted(KIND_DEFAULTS))
    def test_rerender_is_byte_stable_png(self, artifacts, kind):
        spec = spec_for(kind, artifacts)
        first = sha256(render(spec))
        assert sha256(render(spec)) == first

    def test_rerender_is_byte_stable_svg(self, artifacts):
        spec = spec_for("density_overlay", artifacts, suffix=".svg")
        first = sha256(render(spec))
        assert sha256(render(spec)) == first

    @pytest.mark.parametrize("kind", sorted(KIND_DEFAULTS))
    def test_render_never_mutates_inputs(self, artifacts, kind):
        spec = spec_for(kind, artifacts)
        before = {inp.path: sha256(inp.path) for inp in spec.inputs}
        render(spec)
        assert {inp.path: sha256(inp.path) for inp in spec.inputs} == before


class TestChainFigureLayout:
    def test_density_overlay_two_curves_one_truth_line_per_panel(self, artifacts):
        spec = spec_for("density_overlay", artifacts, params=["mu", "sigma2"],
                        truth={"mu": 0.0, "sigma2": 1.0})
        fig = build_figure(spec)
        assert len(fig.axes) == 2
        for ax in fig.axes:
            assert len(ax.lines) == 3  # two kde curves + one truth marker

    def test_trace_one_line_per_chain_plus_truth(self, artifacts):
        spec = spec_for("trace", artifacts, inputs=["chain0.csv", "chain1.csv"],
                        params=["mu"], truth={"mu": 0.0})
        fig = build_figure(spec)
        assert len(fig.axes) == 1
        assert len(fig.axes[0].lines) == 3

    def test_histogram_has_interval_and_truth_lines(self, artifacts):
        fig = build_figure(spec_for("histogram_ci", artifacts))
        (ax,) = fig.axes
        assert len(ax.patches) >= 10  # histogram bars
        assert len(ax.lines) == 3  # two quantile lines + truth

    def test_burn_in_drops_leading_draws(self, artifacts):
        spec = spec_for("trace", artifacts, params=["mu"], truth={}, burn_in=150)
        fig = build_figure(spec)
        (line,) = fig.axes[0].lines
        assert len(line.get_xdata()) == 400 - 150
        assert line.get_xdata()[0] == 151

    def test_burn_in_beyond_chain_length_fails(self, artifacts):
        spec = spec_for("trace", artifacts, burn_in=400)
        with pytest.raises(SchemaError, match="leaves no rows"):
            build_figure(spec)

    def test_title_lands_on_figure(self, artifacts):
        fig = build_figure(spec_for("trace", artifacts, title="mixing check"))
        assert fig.get_suptitle() == "mixing check"


class TestDegenerateInputs:
    def test_constant_chain_trace_is_flat_line(self, tmp_path):
        make_chain_csv(tmp_path / "const.csv",
                       params={"mu": np.full(100, 0.25)})
        spec = spec_from_dict(
            {"kind": "trace", "inputs": ["const.csv"], "params": ["mu"],
             "output": "t.png"},
            base_dir=tmp_path,
        )
        fig = build_figure(spec)
        (line,) = fig.axes[0].lines
        assert np.ptp(line.get_ydata()) == 0
        assert render(spec).is_file()

    def test_constant_chain_density_draws_point_mass(self, tmp_path):
        make_chain_csv(tmp_path / "const.csv", params={"mu": np.full(100, 0.25)})
        make_chain_csv(tmp_path / "moving.csv", seed=3)
        spec = spec_from_dict(
            {"kind": "density_overlay", "inputs": ["const.csv", "moving.csv"],
             "params": ["mu"], "output": "d.png"},
            base_dir=tmp_path,
        )
        fig = build_figure(spec)
        assert len(fig.axes[0].lines) == 2  # vertical point mass + kde curve
        assert render(spec).is_file()


class TestSliceFigures:
    def test_curve_shifts_both_lines_to_zero_max(self, artifacts):
        fig = build_figure(spec_for("slice_curve", artifacts))
        lines = fig.axes[0].lines
        assert len(lines) == 3  # estimate, exact overlay, truth line
        for line in lines[:2]:
            assert np.nanmax(line.get_ydata()) == pytest.approx(0.0)

    def test_curve_without_finite_oracle_draws_single_curve(self, tmp_path):
        path = make_slice1d_csv(tmp_path / "s.csv")
        frame = pd.read_csv(path)
        frame["oracle_log_lik"] = np.nan
        frame.to_csv(path, index=False)
        spec = spec_from_dict(
            {"kind": "slice_curve", "inputs": ["s.csv"], "params": ["mu"],
             "output": "c.png"},
            base_dir=tmp_path,
        )
        assert len(build_figure(spec).axes[0].lines) == 1

    def test_heatmap_marks_truth_and_max_cell(self, artifacts):
        fig = build_figure(spec_for("slice_heatmap", artifacts))
        ax = fig.axes[0]
        assert len(ax.lines) == 1  # truth marker
        assert any(type(p).__name__ == "Rectangle" for p in ax.patches)

    def test_heatmap_tolerates_minus_inf_cells(self, tmp_path):
        path = make_slice2d_csv(tmp_path / "s.csv")
        frame = pd.read_csv(path)
        frame.loc[0, "eta"] = -np.inf
        frame.to_csv(path, index=False)
        spec = spec_from_dict(
            {"kind": "slice_heatmap", "inputs": ["s.csv"], "params": ["a", "b"],
             "output": "h.png"},
            base_dir=tmp_path,
        )
        assert render(spec).is_file()


class TestGridHelpers:
    def test_pivot_orientation(self):
        frame = pd.DataFrame(
            {
                "a": [1.0, 2.0, 3.0, 1.0, 2.0, 3.0],
                "b": [10.0, 10.0, 10.0, 20.0, 20.0, 20.0],
                "eta": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
                "oracle_log_lik": np.nan,
            }
        )
        xs, ys, Z = pivot_slice(frame, "a", "b")
        assert xs.tolist() == [1.0, 2.0, 3.0]
        assert ys.tolist() == [10.0, 20.0]
        assert Z.shape == (2, 3)
        assert Z[1, 2] == 6.0  # eta at (a=3, b=20)

    def test_pivot_row_order_does_not_matter(self, slice2d_csv):
        frame = pd.read_csv(slice2d_csv)
        shuffled = frame.sample(frac=1.0, random_state=7)
        assert np.array_equal(
            pivot_slice(frame, "a", "b")[2], pivot_slice(shuffled, "a", "b")[2]
        )

    def test_argmax_cell_finds_planted_peak(self, slice2d_csv):
        frame = pd.read_csv(slice2d_csv)
        xs, ys, Z = pivot_slice(frame, "a", "b")
        assert argmax_cell(xs, ys, Z) == (0.01, 0.01)

    def test_incomplete_grid_rejected(self, tmp_path):
        path = make_slice2d_csv(tmp_path / "s.csv", drop_rows=1)
        frame = pd.read_csv(path)
        with pytest.raises(SchemaError, match="incomplete grid"):
            pivot_slice(frame, "a", "b")

    def test_duplicate_grid_points_rejected(self, slice2d_csv):
        frame = pd.read_csv(slice2d_csv)
        doubled = pd.concat([frame, frame.iloc[[0]]], ignore_index=True)
        with pytest.raises(SchemaError, match="duplicate grid points"):
            pivot_slice(doubled, "a", "b")
