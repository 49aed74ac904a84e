from pydantic import BaseModel, Field


class SequentialStep(BaseModel):
    n_removed: int = Field(ge=0)
    K_remaining: int = Field(ge=1)
    combined: float = Field(ge=0.0)
    adjusted: float = Field(ge=0.0, le=1.0, description="g^{-1}(combined), capped at 1")
    significant: bool


class SequentialReport(BaseModel):
    method: str
    kind: str
    epsilon: float
    steps: list[SequentialStep]
    stop_index: int = Field(ge=0, description="First non-significant step, or K when none")
