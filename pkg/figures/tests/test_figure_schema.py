"""CSV schema checks: required columns, column diffs, numeric params."""

from __future__ import annotations

import pandas as pd
import pytest

from figures import SchemaError, load_chain, load_slice

from _synthetic import make_chain_csv, make_slice1d_csv


class TestChainSchema:
    def test_valid_chain_loads_with_requested_params(self, chain_csv):
        frame = load_chain(chain_csv, ("mu", "sigma2"))
        assert list(frame.columns) == [
            "iter", "mu", "sigma2", "log_lik_est", "log_prior", "accepted",
        ]
        assert len(frame) == 400

    def test_missing_fixed_column_reported_in_diff(self, tmp_path, chain_csv):
        frame = pd.read_csv(chain_csv).drop(columns=["accepted"])
        broken = tmp_path / "broken.csv"
        frame.to_csv(broken, index=False)
        with pytest.raises(SchemaError) as excinfo:
            load_chain(broken, ("mu",))
        message = str(excinfo.value)
        assert "chain schema mismatch" in message
        assert "missing columns:  accepted" in message
        assert "found columns:" in message and "mu" in message

    def test_slice_file_rejected_as_chain(self, tmp_path):
        slice_csv = make_slice1d_csv(tmp_path / "slice.csv")
        with pytest.raises(SchemaError) as excinfo:
            load_chain(slice_csv, ("mu",))
        message = str(excinfo.value)
        for column in ("iter", "log_lik_est", "log_prior", "accepted"):
            assert column in message

    def test_unknown_param_reported(self, chain_csv):
        with pytest.raises(SchemaError, match="missing columns:  tau"):
            load_chain(chain_csv, ("tau",))

    def test_non_numeric_param_rejected(self, tmp_path, chain_csv):
        frame = pd.read_csv(chain_csv)
        frame["mu"] = "not-a-number"
        broken = tmp_path / "text.csv"
        frame.to_csv(broken, index=False)
        with pytest.raises(SchemaError, match="non-numeric"):
            load_chain(broken, ("mu",))

    def test_empty_file_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        with pytest.raises(SchemaError, match="not a readable CSV"):
            load_chain(empty, ("mu",))


class TestSliceSchema:
    def test_valid_slice_loads(self, slice1d_csv):
        frame = load_slice(slice1d_csv, ("mu",))
        assert {"mu", "eta", "oracle_log_lik"} <= set(frame.columns)

    def test_chain_file_rejected_as_slice(self, chain_csv):
        with pytest.raises(SchemaError) as excinfo:
            load_slice(chain_csv, ("mu",))
        message = str(excinfo.value)
        assert "slice schema mismatch" in message
        assert "eta" in message and "oracle_log_lik" in message

    def test_unknown_axis_reported(self, slice2d_csv):
        with pytest.raises(SchemaError, match="missing columns:  c"):
            load_slice(slice2d_csv, ("a", "c"))
