import math

import pandas as pd
import pytest

from pcombine.models.methods import GeneralizedMean, Simes, bonferroni, parse_method
from pcombine.models.queries import MonteCarlo
from pcombine.tables import (
    TABLE_COLUMNS,
    generate_log_ratio_table,
    generate_table,
    to_wide,
)


def cell(frame, method, kind, K):
    row = frame[(frame["method"] == method) & (frame["kind"] == kind) & (frame["K"] == K)]
    assert len(row) == 1
    return row.iloc[0]


class TestGenerateTable:
    """Test suite for price-for-validity tables."""

    def test_columns_and_order(self):
        """Test the long layout: methods, then VI before VC, then K."""
        frame = generate_table(0.01, [50, 100], [bonferroni(), Simes()])
        assert list(frame.columns) == TABLE_COLUMNS
        assert list(frame["method"]) == ["bonferroni"] * 4 + ["simes"] * 4
        assert list(frame["kind"][:4]) == ["VI", "VI", "VC", "VC"]
        assert list(frame["K"][:4]) == [50, 100, 50, 100]

    def test_known_values(self):
        """Test Bonferroni, Simes and geometric cells at K = 50."""
        methods = [bonferroni(), Simes(), GeneralizedMean(r=0.0)]
        frame = generate_table(0.01, [50], methods)
        assert cell(frame, "bonferroni", "VI", 50)["value"] == pytest.approx(1.005, abs=1e-3)
        assert cell(frame, "bonferroni", "VC", 50)["value"] == pytest.approx(50.0)
        assert cell(frame, "simes", "VI", 50)["value"] == pytest.approx(4.499, abs=1e-3)
        assert cell(frame, "simes", "VC", 50)["value"] == pytest.approx(4.499, abs=1e-3)
        assert cell(frame, "geometric", "VI", 50)["value"] == pytest.approx(69.903, abs=2e-3)
        assert cell(frame, "geometric", "VC", 50)["value"] == pytest.approx(2.718, abs=1e-3)

    def test_default_methods(self):
        """Test that the six table methods are used by default."""
        frame = generate_table(0.05, [50])
        assert list(dict.fromkeys(frame["method"])) == [
            "bonferroni",
            "negative-quartic",
            "simes",
            "cauchy",
            "harmonic",
            "geometric",
        ]
        assert frame["value"].notna().all()
        assert cell(frame, "simes", "VI", 50)["value"] == pytest.approx(4.499, abs=1e-3)

    def test_mode_tags(self):
        """Test that the mode used for each VI cell is recorded."""
        harmonic = [GeneralizedMean(r=-1.0)]
        assert cell(generate_table(0.01, [50], harmonic), "harmonic", "VI", 50)["mode"] == "large-k"
        assert cell(generate_table(1e-4, [50], harmonic), "harmonic", "VI", 50)["mode"] == "small-eps"
        assert cell(generate_table(0.01, [50], harmonic), "harmonic", "VC", 50)["mode"] == "exact"

    def test_small_epsilon_harmonic(self):
        """Test b/a = c/a for the harmonic mean at K = 400 and eps = 1e-4."""
        frame = generate_table(1e-4, [400], [GeneralizedMean(r=-1.0)])
        assert cell(frame, "harmonic", "VI", 400)["value"] == pytest.approx(9.071, abs=2e-3)

    def test_failed_cell(self):
        """Test that an unsupported cell keeps a missing value and the error text."""
        frame = generate_table(0.01, [50], [GeneralizedMean(r=-2.0), Simes()])
        failed = cell(frame, "mean(r=-2)", "VI", 50)
        assert pd.isna(failed["value"])
        assert "not implemented" in failed["diagnostics"]
        assert cell(frame, "simes", "VI", 50)["value"] == pytest.approx(4.499, abs=1e-3)

    def test_mode_policy(self):
        """Test that an explicit mode applies to the VI cells only."""
        mode = MonteCarlo(replications=20_000, seed=4)
        frame = generate_table(0.05, [10], [Simes()], mode)
        assert cell(frame, "simes", "VI", 10)["mode"] == mode.tag
        assert "se=" in cell(frame, "simes", "VI", 10)["diagnostics"]
        assert cell(frame, "simes", "VC", 10)["mode"] == "exact"

    def test_residual_recorded(self):
        """Test that root residuals reach the diagnostics column."""
        frame = generate_table(0.01, [50], [parse_method("cauchy")])
        assert "residual=" in cell(frame, "cauchy", "VC", 50)["diagnostics"]


class TestLogRatioTable:
    """Test suite for (1 / log K) b/a."""

    def test_simes_row(self):
        """Test the Simes row at eps = 0.01."""
        K_list = [10, 20, 50, 100, 200, 500]
        frame = generate_log_ratio_table([0.01], K_list, [Simes()])
        values = list(frame["value"])
        assert values[0] == pytest.approx(1.272035, abs=1e-6)
        assert values[-1] == pytest.approx(1.093041, abs=1e-6)
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_default_methods(self):
        """Test the default rows and their layout."""
        frame = generate_log_ratio_table([0.05, 0.01], [10, 20])
        assert list(dict.fromkeys(frame["method"])) == ["simes", "cauchy", "harmonic"]
        assert len(frame) == 3 * 2 * 2
        harmonic = frame[frame["method"] == "harmonic"]["value"]
        assert (harmonic > 0).all()

    def test_scaled_by_log_K(self):
        """Test that the value is the price divided by log K."""
        frame = generate_log_ratio_table([0.01], [50], [Simes()])
        plain = generate_table(0.01, [50], [Simes()])
        expected = cell(plain, "simes", "VI", 50)["value"] / math.log(50)
        assert frame["value"].iloc[0] == pytest.approx(expected, rel=1e-12)


class TestWideLayout:
    """Test suite for the one-column-per-K layout."""

    def test_pivot(self):
        """Test that each K becomes a column."""
        frame = generate_table(0.01, [50, 100], [bonferroni(), Simes()])
        wide = to_wide(frame)
        assert list(wide.columns) == ["method", "kind", "epsilon", "K=50", "K=100"]
        assert list(wide["method"]) == ["bonferroni", "bonferroni", "simes", "simes"]
        row = wide[(wide["method"] == "bonferroni") & (wide["kind"] == "VC")].iloc[0]
        assert row["K=100"] == pytest.approx(100.0)
