from pcombine.models.methods import (
    CauchyCombination,
    GeneralizedMean,
    MergingMethod,
    OrderStatistics,
    Simes,
    bonferroni,
    canonical_method,
    parse_method,
)
from pcombine.models.pvalues import PValueVector
from pcombine.models.queries import (
    Assumption,
    ComputationMode,
    Exact,
    LargeKAsymptotic,
    MonteCarlo,
    PriceResult,
    SmallEpsAsymptotic,
    TableCell,
    ThresholdDiagnostics,
    ThresholdKind,
    ThresholdQuery,
    ThresholdResult,
)
from pcombine.models.sequential import SequentialReport, SequentialStep
from pcombine.models.simulation import (
    Arm,
    DependenceModel,
    ExperimentConfig,
    ICBalanceResult,
    ICMixture,
    OneFactorGaussian,
    RPEstimate,
    SignalCase,
)

__all__ = [
    "Arm",
    "Assumption",
    "CauchyCombination",
    "ComputationMode",
    "DependenceModel",
    "Exact",
    "ExperimentConfig",
    "GeneralizedMean",
    "ICBalanceResult",
    "ICMixture",
    "LargeKAsymptotic",
    "MergingMethod",
    "MonteCarlo",
    "OneFactorGaussian",
    "OrderStatistics",
    "PValueVector",
    "PriceResult",
    "RPEstimate",
    "SequentialReport",
    "SequentialStep",
    "SignalCase",
    "Simes",
    "SmallEpsAsymptotic",
    "TableCell",
    "ThresholdDiagnostics",
    "ThresholdKind",
    "ThresholdQuery",
    "ThresholdResult",
    "bonferroni",
    "canonical_method",
    "parse_method",
]
