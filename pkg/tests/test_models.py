import math

import pytest
from pydantic import ValidationError

from pcombine.models.methods import (
    CauchyCombination,
    GeneralizedMean,
    OrderStatistics,
    Simes,
    bonferroni,
    canonical_method,
    parse_method,
)
from pcombine.models.pvalues import PValueVector
from pcombine.models.queries import (
    Assumption,
    Exact,
    MonteCarlo,
    ThresholdKind,
    ThresholdQuery,
)
from pcombine.models.simulation import (
    ExperimentConfig,
    ICMixture,
    OneFactorGaussian,
    RPEstimate,
)


class TestPValueVector:
    """Test suite for PValueVector."""

    def test_valid_vector(self):
        """Test creating a vector and reading K."""
        p = PValueVector.of([0.2, 0.0, 1.0])
        assert p.K == 3
        assert p.values == (0.2, 0.0, 1.0)

    def test_out_of_range_rejected(self):
        """Test that values outside [0, 1] name their index."""
        with pytest.raises(ValidationError, match="index 1"):
            PValueVector.of([0.2, 1.5])

    def test_empty_rejected(self):
        """Test that K >= 1 is required."""
        with pytest.raises(ValidationError):
            PValueVector.of([])

    def test_nan_rejected(self):
        """Test that NaN is not a p-value."""
        with pytest.raises(ValidationError):
            PValueVector.of([0.1, math.nan])

    def test_without_smallest_drops_one_tie(self):
        """Test that only one copy of a tied minimum is removed."""
        p = PValueVector.of([0.3, 0.1, 0.1, 0.5])
        assert p.without_smallest().values == (0.3, 0.1, 0.5)

    def test_frozen(self):
        """Test that vectors are immutable."""
        p = PValueVector.of([0.1])
        with pytest.raises(ValidationError):
            p.values = (0.2,)


class TestMethods:
    """Test suite for merging method models."""

    def test_named_methods(self):
        """Test parsing the named methods."""
        assert parse_method("bonferroni") == bonferroni()
        assert parse_method("Harmonic") == GeneralizedMean(r=-1.0)
        assert parse_method("cauchy") == CauchyCombination()
        assert parse_method("simes") == Simes()

    def test_mean_spec(self):
        """Test parsing mean:<r>."""
        assert parse_method("mean:-2").r == -2.0
        assert parse_method("mean:-inf") == bonferroni()

    def test_order_spec_is_canonicalised(self):
        """Test that order:1/3,2/3,1 weights become Simes."""
        method = parse_method("order:0.3333333333333333,0.6666666666666666,1")
        assert method == Simes()

    def test_unknown_method(self):
        """Test that unknown names raise ValueError listing the options."""
        with pytest.raises(ValueError, match="bonferroni"):
            parse_method("fisher")

    def test_weights_running_max(self):
        """Test that order-statistic weights are made nondecreasing."""
        method = OrderStatistics(alpha=(0.5, 0.2, 1.0))
        assert method.alpha == (0.5, 0.5, 1.0)
        assert not method.is_simes

    def test_weights_need_positive_entry(self):
        """Test that all-zero weights are rejected."""
        with pytest.raises(ValidationError):
            OrderStatistics(alpha=(0.0, 0.0))

    def test_canonical_simes(self):
        """Test that i/K weights map onto Simes."""
        assert canonical_method(OrderStatistics(alpha=Simes.weights(4))) == Simes()

    def test_names(self):
        """Test display names of the means."""
        assert GeneralizedMean(r=0.0).name == "geometric"
        assert GeneralizedMean(r=-2.0).name == "mean(r=-2)"
        assert not CauchyCombination().homogeneous

    def test_nan_power_rejected(self):
        """Test that r must not be NaN."""
        with pytest.raises(ValidationError):
            GeneralizedMean(r=math.nan)


class TestQueries:
    """Test suite for threshold queries."""

    def test_defaults_to_exact(self):
        """Test that the default mode is exact."""
        query = ThresholdQuery(method=Simes(), kind=ThresholdKind.VAD, epsilon=0.05, K=10)
        assert query.mode == Exact()

    @pytest.mark.parametrize("epsilon", [0.0, 1.0, -0.1])
    def test_epsilon_range(self, epsilon):
        """Test that epsilon must be in (0, 1)."""
        with pytest.raises(ValidationError):
            ThresholdQuery(method=Simes(), kind=ThresholdKind.VI, epsilon=epsilon, K=10)

    def test_mode_from_dict(self):
        """Test that modes are discriminated by name."""
        query = ThresholdQuery.model_validate(
            {
                "method": {"family": "mean", "r": -1.0},
                "kind": "VI",
                "epsilon": 0.01,
                "K": 50,
                "mode": {"name": "monte-carlo", "replications": 100, "seed": 3},
            }
        )
        assert query.mode == MonteCarlo(replications=100, seed=3)
        assert query.mode.tag == "monte-carlo(N=100,seed=3)"

    def test_assumption_kind(self):
        """Test the threshold kind of each assumption."""
        assert Assumption.INDEPENDENCE.kind == ThresholdKind.VI
        assert Assumption.COMONOTONICITY.kind == ThresholdKind.VC


class TestSimulationModels:
    """Test suite for simulation configuration models."""

    def test_gaussian_K(self):
        """Test that K is the length of mu."""
        assert OneFactorGaussian(rho=0.5, mu=(0.0,) * 7).K == 7

    def test_rho_range(self):
        """Test that rho must lie in [0, 1]."""
        with pytest.raises(ValidationError):
            OneFactorGaussian(rho=1.5, mu=(0.0,))

    def test_model_discriminator(self):
        """Test that the experiment model is chosen by family."""
        config = ExperimentConfig.model_validate(
            {
                "model": {"family": "ic-mixture", "lam": 0.5, "K": 4},
                "arms": [{"method": {"family": "simes"}, "kind": "VI"}],
                "epsilon": 0.05,
                "replications": 100,
                "master_seed": 1,
            }
        )
        assert isinstance(config.model, ICMixture)
        assert config.block_size == 1000

    def test_rp_from_count(self):
        """Test the binomial standard error of an RP estimate."""
        estimate = RPEstimate.from_count("simes", ThresholdKind.VI, 0.01, 25, 100)
        assert estimate.rp == 0.25
        assert estimate.std_error == pytest.approx(math.sqrt(0.25 * 0.75 / 100))
