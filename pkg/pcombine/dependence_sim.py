"""Dependent p-value generators, rejection-probability estimates and IC-balance checks."""

import logging
import math
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import special, stats

from pcombine.combiners import combine_rows
from pcombine.errors import ConfigurationError, DomainError
from pcombine.models.methods import MergingMethod, canonical_method
from pcombine.models.pvalues import PValueVector
from pcombine.models.simulation import (
    DependenceModel,
    ExperimentConfig,
    ICBalanceResult,
    ICMixture,
    OneFactorGaussian,
    RPEstimate,
    SignalCase,
)
from pcombine.settings import get_settings
from pcombine.streams import block_generator, map_blocks, uniforms
from pcombine.thresholds import resolve_query, threshold

logger = logging.getLogger(__name__)

CURVE_COLUMNS = [
    "case",
    "K",
    "epsilon",
    "rho",
    "method",
    "threshold_kind",
    "rp",
    "std_error",
    "N",
    "seed",
]


def sample_rows(model: DependenceModel, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw an (n, K) array of p-values from the model."""
    match model:
        case OneFactorGaussian(rho=rho, mu=mu):
            K = len(mu)
            # normals by inversion so every method sees the same monotone coupling
            normals = special.ndtri(uniforms(rng, (n, K + 1)))
            common, own = normals[:, :1], normals[:, 1:]
            X = rho * common + math.sqrt(1.0 - rho * rho) * own - np.asarray(mu)
            return special.ndtr(X)
        case ICMixture(lam=lam, K=K):
            independent = rng.random(n) < lam
            spread = uniforms(rng, (n, K))
            common = np.repeat(uniforms(rng, (n, 1)), K, axis=1)
            return np.where(independent[:, None], spread, common)
    raise ConfigurationError(f"unknown dependence model {model!r}")


def sample_pvalues(model: DependenceModel, seed: int) -> PValueVector:
    return PValueVector.of(sample_rows(model, block_generator(seed, 0), 1)[0])


def arm_thresholds(config: ExperimentConfig) -> list[float]:
    K = config.model.K
    return [
        threshold(resolve_query(arm.method, arm.kind, config.epsilon, K, arm.mode)).value
        for arm in config.arms
    ]


def estimate_rp(
    config: ExperimentConfig,
    workers: Optional[int] = None,
    thresholds: Optional[list[float]] = None,
) -> list[RPEstimate]:
    """RP = #{F_i < g(eps)} / N for every arm, on shared sampled vectors.

    Blocks of ``config.block_size`` replications use their own Philox stream,
    so the estimate does not depend on ``workers``.
    """
    thresholds = arm_thresholds(config) if thresholds is None else thresholds
    methods = [canonical_method(arm.method) for arm in config.arms]

    def count_block(rng: np.random.Generator, n: int) -> np.ndarray:
        P = sample_rows(config.model, rng, n)
        counts = np.zeros(len(methods), dtype=np.int64)
        for i, (method, g) in enumerate(zip(methods, thresholds)):
            try:
                counts[i] = int(np.count_nonzero(combine_rows(method, P) < g))
            except DomainError as e:
                raise DomainError(f"{method.name} rejected a sampled vector: {e}") from e
        return counts

    blocks = map_blocks(
        count_block, config.replications, config.master_seed, config.block_size, workers
    )
    totals = np.sum(blocks, axis=0)
    return [
        RPEstimate.from_count(method.name, arm.kind, g, int(total), config.replications)
        for method, arm, g, total in zip(methods, config.arms, thresholds, totals)
    ]


def signal_means(case: SignalCase, K: int) -> tuple[float, ...]:
    """Signal means of the four simulation cases; signal counts must be whole numbers."""
    if case is SignalCase.NO_SIGNAL:
        return (0.0,) * K
    setting = get_settings().simulation.signals[case.value]
    count = setting.fraction * K
    if not math.isclose(count, round(count), abs_tol=1e-9):
        raise ConfigurationError(
            f"{case.value} needs {setting.fraction:.0%} of K={K} signals, "
            f"which is not a whole number ({count:g})"
        )
    n = int(round(count))
    return (setting.strength,) * n + (0.0,) * (K - n)


def sweep_rho(
    template: ExperimentConfig,
    case: SignalCase,
    rho_grid: Optional[Iterable[float]] = None,
    workers: Optional[int] = None,
) -> pd.DataFrame:
    """RP curves over rho for a one-factor Gaussian template; K comes from the template."""
    K = template.model.K
    rho_grid = get_settings().simulation.rho_grid if rho_grid is None else list(rho_grid)
    mu = signal_means(case, K)
    thresholds = arm_thresholds(template)

    rows = []
    for rho in rho_grid:
        config = template.model_copy(update={"model": OneFactorGaussian(rho=rho, mu=mu)})
        estimates = estimate_rp(config, workers=workers, thresholds=thresholds)
        logger.info(
            f"case={case.value} K={K} rho={rho:.2f}: "
            + ", ".join(f"{e.method}/{e.kind}={e.rp:.4f}" for e in estimates)
        )
        rows.extend(
            {
                "case": case.value,
                "K": K,
                "epsilon": config.epsilon,
                "rho": rho,
                "method": e.method,
                "threshold_kind": str(e.kind),
                "rp": e.rp,
                "std_error": e.std_error,
                "N": e.N,
                "seed": config.master_seed,
            }
            for e in estimates
        )
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def ic_balance_check(
    method: MergingMethod,
    K: int,
    N: int,
    seed: int,
    level: Optional[float] = None,
    workers: Optional[int] = None,
    lam: float = 1.0,
) -> ICBalanceResult:
    """Two-sample KS test of F under the IC mixture with weight lam against F(U, ..., U).

    lam = 1 compares independent uniforms with the comonotone vector. An
    IC-balanced F gives the same law for every lam.
    """
    if N < 10_000:
        raise ConfigurationError(f"the IC-balance check needs N >= 10000, got {N}")
    level = get_settings().ic_balance.level if level is None else level
    method = canonical_method(method)
    mixture = ICMixture(lam=lam, K=K)
    block_size = get_settings().monte_carlo.block_size

    def draw(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        mixed = combine_rows(method, sample_rows(mixture, rng, n))
        comonotone = combine_rows(method, np.repeat(uniforms(rng, (n, 1)), K, axis=1))
        return mixed, comonotone

    blocks = map_blocks(draw, N, seed, block_size, workers)
    mixed = np.concatenate([b[0] for b in blocks])
    comonotone = np.concatenate([b[1] for b in blocks])
    result = stats.ks_2samp(mixed, comonotone, method="asymp")
    critical = float(stats.kstwobign.isf(level)) * math.sqrt(2.0 / N)
    balanced = bool(result.pvalue >= level)
    logger.info(
        f"IC-balance {method.name} K={K} N={N} lam={lam:g}: D={result.statistic:.5f} "
        f"(critical {critical:.5f}), balanced={balanced}"
    )
    return ICBalanceResult(
        method=method.name,
        K=K,
        N=N,
        lam=lam,
        statistic=float(result.statistic),
        critical_value=critical,
        pvalue=float(result.pvalue),
        level=level,
        balanced=balanced,
    )


def ic_balance_profile(
    method: MergingMethod,
    K: int,
    N: int,
    seed: int,
    lambdas: Optional[Sequence[float]] = None,
    level: Optional[float] = None,
    workers: Optional[int] = None,
) -> pd.DataFrame:
    """ic_balance_check over a grid of IC-mixture weights, one row per lam."""
    lambdas = get_settings().ic_balance.lambdas if lambdas is None else lambdas
    rows = [
        ic_balance_check(method, K, N, seed, level, workers, lam=lam).model_dump()
        for lam in lambdas
    ]
    return pd.DataFrame(rows, columns=list(ICBalanceResult.model_fields))
