import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

DEFAULTS_PATH = Path(__file__).parent / "config" / "defaults.yaml"

SEED_ENV_VAR = "PCOMBINE_SEED"
WORKERS_ENV_VAR = "PCOMBINE_WORKERS"


class MonteCarloSettings(BaseModel):
    replications: int = Field(1_000_000, ge=1)
    block_size: int = Field(10_000, ge=1)
    workers: int = Field(1, ge=1)


class SignalSetting(BaseModel):
    fraction: float = Field(ge=0.0, le=1.0)
    strength: float = Field(ge=0.0)


class SimulationSettings(BaseModel):
    replications: int = Field(15_000, ge=1)
    rho_grid: list[float]
    signals: dict[str, SignalSetting]


class TableSettings(BaseModel):
    k_values: list[int]
    log_ratio_k_values: list[int]
    small_epsilon_cutoff: float = Field(gt=0.0, lt=1.0)


class RootFindingSettings(BaseModel):
    xtol: float = Field(1e-12, gt=0.0)
    max_iterations: int = Field(200, ge=1)
    scan_points: int = Field(2000, ge=2)


class QuadratureSettings(BaseModel):
    tolerance: float = Field(1e-10, gt=0.0)
    limit: int = Field(200, ge=1)


class ICBalanceSettings(BaseModel):
    level: float = Field(0.01, gt=0.0, lt=1.0)
    lambdas: list[float] = Field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])

    @field_validator("lambdas")
    @classmethod
    def check_lambdas(cls, lambdas: list[float]) -> list[float]:
        if not lambdas or any(not 0.0 < lam <= 1.0 for lam in lambdas):
            raise ValueError(f"IC-mixture weights must lie in (0, 1], got {lambdas}")
        return lambdas


class OutputSettings(BaseModel):
    significant_digits: int = Field(6, ge=1, le=17)


class Settings(BaseModel):
    """Validated view of config/defaults.yaml plus environment overrides."""

    seed: int = Field(ge=0)
    monte_carlo: MonteCarloSettings
    simulation: SimulationSettings
    tables: TableSettings
    root_finding: RootFindingSettings
    quadrature: QuadratureSettings
    ic_balance: ICBalanceSettings
    output: OutputSettings
    source: Optional[str] = Field(None, description="Path the defaults were read from")


def load_settings(path: Path = DEFAULTS_PATH) -> Settings:
    with open(path, "r") as f:
        raw = yaml.safe_load(f)

    load_dotenv()
    seed = os.getenv(SEED_ENV_VAR)
    if seed:
        raw["seed"] = int(seed)
    workers = os.getenv(WORKERS_ENV_VAR)
    if workers:
        raw["monte_carlo"]["workers"] = int(workers)

    return Settings(**raw, source=str(path))


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
