import math
from enum import StrEnum
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from pcombine.models.methods import MergingMethod
from pcombine.models.queries import ComputationMode, ThresholdKind


class OneFactorGaussian(BaseModel):
    """p_i = Phi(rho Z + sqrt(1 - rho^2) Z_i - mu_i)."""

    model_config = ConfigDict(frozen=True)

    family: Literal["gaussian"] = "gaussian"
    rho: float = Field(ge=0.0, le=1.0, description="Loading on the common factor")
    mu: tuple[Annotated[float, Field(ge=0.0)], ...] = Field(
        min_length=1, description="Signal mean of each test"
    )

    @property
    def K(self) -> int:
        return len(self.mu)


class ICMixture(BaseModel):
    """With probability lam independent uniforms, otherwise K copies of one uniform."""

    model_config = ConfigDict(frozen=True)

    family: Literal["ic-mixture"] = "ic-mixture"
    lam: float = Field(ge=0.0, le=1.0, description="Weight of the independence copula")
    K: int = Field(ge=1)


DependenceModel = Annotated[
    Union[OneFactorGaussian, ICMixture], Field(discriminator="family")
]


class SignalCase(StrEnum):
    NO_SIGNAL = "no-signal"
    NEEDLE = "needle"
    SPARSE = "sparse"
    DENSE = "dense"


class Arm(BaseModel):
    """One (method, threshold kind) curve of an experiment."""

    model_config = ConfigDict(frozen=True)

    method: MergingMethod
    kind: ThresholdKind
    mode: Optional[ComputationMode] = Field(
        None, description="Threshold mode; None applies the default mode policy"
    )


class ExperimentConfig(BaseModel):
    model: DependenceModel
    arms: list[Arm] = Field(min_length=1)
    epsilon: float = Field(gt=0.0, lt=1.0)
    replications: int = Field(ge=1, description="N")
    master_seed: int = Field(ge=0)
    block_size: int = Field(1000, ge=1, description="Replications per RNG stream")


class RPEstimate(BaseModel):
    method: str
    kind: ThresholdKind
    threshold: float
    rp: float = Field(ge=0.0, le=1.0)
    std_error: float = Field(ge=0.0)
    N: int = Field(ge=1)

    @classmethod
    def from_count(
        cls, method: str, kind: ThresholdKind, threshold: float, rejections: int, N: int
    ) -> "RPEstimate":
        rp = rejections / N
        return cls(
            method=method,
            kind=kind,
            threshold=threshold,
            rp=rp,
            std_error=math.sqrt(rp * (1.0 - rp) / N),
            N=N,
        )


class ICBalanceResult(BaseModel):
    method: str
    K: int
    N: int
    lam: float = Field(1.0, description="Weight of the independence copula in the mixed sample")
    statistic: float = Field(description="Two-sample Kolmogorov-Smirnov distance")
    critical_value: float
    pvalue: float
    level: float
    balanced: bool
