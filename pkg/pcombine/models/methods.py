import math
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

_MEAN_NAMES = {
    -math.inf: "bonferroni",
    -4.0: "negative-quartic",
    -1.0: "harmonic",
    0.0: "geometric",
    1.0: "arithmetic",
    math.inf: "maximum",
}


class GeneralizedMean(BaseModel):
    """M_{r,K}; r = -inf is the Bonferroni method (minimum), r = +inf the maximum."""

    model_config = ConfigDict(frozen=True)

    family: Literal["mean"] = "mean"
    r: float = Field(description="Power of the mean, extended real in [-inf, +inf]")

    @field_validator("r")
    @classmethod
    def check_not_nan(cls, r: float) -> float:
        if math.isnan(r):
            raise ValueError("r must be an extended real, got nan")
        return r

    @property
    def name(self) -> str:
        return _MEAN_NAMES.get(self.r, f"mean(r={self.r:g})")

    @property
    def homogeneous(self) -> bool:
        return True


class CauchyCombination(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Literal["cauchy"] = "cauchy"

    @property
    def name(self) -> str:
        return "cauchy"

    @property
    def homogeneous(self) -> bool:
        return False


class OrderStatistics(BaseModel):
    """S_{alpha,K}(p) = min_i p_(i) / alpha_i.

    Weights are replaced by their running maximum on construction, which leaves
    the function unchanged and makes them nondecreasing.
    """

    model_config = ConfigDict(frozen=True)

    family: Literal["order"] = "order"
    alpha: tuple[float, ...] = Field(min_length=1, description="Weights alpha_1..alpha_K")

    @field_validator("alpha")
    @classmethod
    def normalise_weights(cls, alpha: tuple[float, ...]) -> tuple[float, ...]:
        weights = np.asarray(alpha, dtype=float)
        if np.any(~np.isfinite(weights)) or np.any(weights < 0):
            raise ValueError("order-statistic weights must be finite and nonnegative")
        if not np.any(weights > 0):
            raise ValueError("order-statistic weights need at least one positive entry")
        return tuple(float(w) for w in np.maximum.accumulate(weights))

    @property
    def K(self) -> int:
        return len(self.alpha)

    @property
    def is_simes(self) -> bool:
        K = self.K
        return all(math.isclose(a, (i + 1) / K, rel_tol=1e-12) for i, a in enumerate(self.alpha))

    @property
    def name(self) -> str:
        return "simes" if self.is_simes else "order-statistics"

    @property
    def homogeneous(self) -> bool:
        return True


class Simes(BaseModel):
    """The Simes function min_i K p_(i) / i, defined for every K."""

    model_config = ConfigDict(frozen=True)

    family: Literal["simes"] = "simes"

    @property
    def name(self) -> str:
        return "simes"

    @property
    def homogeneous(self) -> bool:
        return True

    @staticmethod
    def weights(K: int) -> tuple[float, ...]:
        return tuple((i + 1) / K for i in range(K))


MergingMethod = Annotated[
    Union[GeneralizedMean, CauchyCombination, OrderStatistics, Simes],
    Field(discriminator="family"),
]


def bonferroni() -> GeneralizedMean:
    return GeneralizedMean(r=-math.inf)


def canonical_method(method: MergingMethod) -> MergingMethod:
    """Map OrderStatistics with alpha_i = i/K onto Simes; everything else is already canonical."""
    if isinstance(method, OrderStatistics) and method.is_simes:
        return Simes()
    return method


NAMED_METHODS: dict[str, MergingMethod] = {
    "bonferroni": bonferroni(),
    "negative-quartic": GeneralizedMean(r=-4.0),
    "harmonic": GeneralizedMean(r=-1.0),
    "geometric": GeneralizedMean(r=0.0),
    "arithmetic": GeneralizedMean(r=1.0),
    "maximum": GeneralizedMean(r=math.inf),
    "cauchy": CauchyCombination(),
    "simes": Simes(),
}

# Row order of the price-for-validity tables.
TABLE_METHODS: tuple[str, ...] = (
    "bonferroni",
    "negative-quartic",
    "simes",
    "cauchy",
    "harmonic",
    "geometric",
)


def parse_method(spec: str) -> MergingMethod:
    """Parse a method name, ``mean:<r>`` or ``order:<a1>,<a2>,...``."""
    key = spec.strip().lower()
    if key in NAMED_METHODS:
        return NAMED_METHODS[key]
    if key.startswith("mean:"):
        return GeneralizedMean(r=float(key.split(":", 1)[1]))
    if key.startswith("order:"):
        weights = tuple(float(w) for w in key.split(":", 1)[1].split(","))
        return canonical_method(OrderStatistics(alpha=weights))
    raise ValueError(
        f"unknown method {spec!r}; expected one of {', '.join(NAMED_METHODS)}, "
        "mean:<r> or order:<a1>,...,<aK>"
    )
