from enum import StrEnum
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from pcombine.models.methods import MergingMethod


class ThresholdKind(StrEnum):
    VAD = "VAD"  # valid under arbitrary dependence
    VI = "VI"  # valid under independence
    VC = "VC"  # valid under comonotonicity


class Assumption(StrEnum):
    INDEPENDENCE = "independence"
    COMONOTONICITY = "comonotonicity"

    @property
    def kind(self) -> ThresholdKind:
        return ThresholdKind.VI if self is Assumption.INDEPENDENCE else ThresholdKind.VC


class Exact(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: Literal["exact"] = "exact"

    @property
    def tag(self) -> str:
        return self.name


class SmallEpsAsymptotic(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: Literal["small-eps"] = "small-eps"

    @property
    def tag(self) -> str:
        return self.name


class LargeKAsymptotic(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: Literal["large-k"] = "large-k"

    @property
    def tag(self) -> str:
        return self.name


class MonteCarlo(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: Literal["monte-carlo"] = "monte-carlo"
    replications: int = Field(1_000_000, ge=1, description="Number of simulated vectors N")
    seed: int = Field(0, ge=0, description="Master seed of the block streams")
    workers: Optional[int] = Field(
        None, ge=1, description="Worker threads for the blocks; the settings value when unset"
    )

    @property
    def tag(self) -> str:
        return f"{self.name}(N={self.replications},seed={self.seed})"


ComputationMode = Annotated[
    Union[Exact, SmallEpsAsymptotic, LargeKAsymptotic, MonteCarlo],
    Field(discriminator="name"),
]


class ThresholdQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: MergingMethod
    kind: ThresholdKind
    epsilon: float = Field(gt=0.0, lt=1.0, description="Significance level")
    K: int = Field(ge=1, description="Number of p-values merged")
    mode: ComputationMode = Field(default_factory=Exact)


class ThresholdDiagnostics(BaseModel):
    root_value: Optional[float] = Field(None, description="c_K, y_K or x_K when a root was solved")
    residual: Optional[float] = Field(None, description="Back-substitution residual of the root")
    mc_standard_error: Optional[float] = Field(None, description="Standard error of a simulated quantile")
    note: Optional[str] = None


class ThresholdResult(BaseModel):
    value: float = Field(ge=0.0)
    mode_used: ComputationMode
    diagnostics: ThresholdDiagnostics = Field(default_factory=ThresholdDiagnostics)


class PriceResult(BaseModel):
    method: str
    epsilon: float
    K: int
    assumption: Assumption
    ratio: float
    vad: ThresholdResult
    vsd: ThresholdResult


class TableCell(BaseModel):
    """One cell of a price-for-validity table; value is None when the cell failed."""

    method: str
    K: int
    epsilon: float
    kind: ThresholdKind
    value: Optional[float] = None
    mode: str = ""
    diagnostics: str = ""
