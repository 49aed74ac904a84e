from typing import Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class PValueVector(BaseModel):
    """Validated, immutable vector of K >= 1 p-values in [0, 1]."""

    model_config = ConfigDict(frozen=True)

    values: tuple[float, ...] = Field(min_length=1, description="p-values in input order")

    @field_validator("values")
    @classmethod
    def check_range(cls, values: tuple[float, ...]) -> tuple[float, ...]:
        for index, value in enumerate(values):
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"p-value at index {index} is {value!r}, not in [0, 1]")
        return values

    @classmethod
    def of(cls, values: Iterable[float]) -> "PValueVector":
        return cls(values=tuple(float(v) for v in values))

    @property
    def K(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def without_smallest(self) -> "PValueVector":
        """Drop exactly one occurrence of the minimum, keeping the order of the rest."""
        index = int(np.argmin(self.array))
        return PValueVector(values=self.values[:index] + self.values[index + 1 :])
