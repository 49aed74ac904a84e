import logging
import math
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from pcombine.errors import ConfigurationError, DomainError
from pcombine.models.methods import (
    CauchyCombination,
    GeneralizedMean,
    MergingMethod,
    OrderStatistics,
    Simes,
)
from pcombine.models.pvalues import PValueVector
from pcombine.special_functions import cauchy_cdf, cauchy_quantile

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4096)
def ell(K: int) -> float:
    """K-th harmonic number, summed without cancellation."""
    if K < 1:
        raise DomainError(f"ell needs K >= 1, got {K}")
    return math.fsum(1.0 / k for k in range(1, K + 1))


def _mean_rows(r: float, P: np.ndarray) -> np.ndarray:
    K = P.shape[-1]
    if r == -math.inf:
        return P.min(axis=-1)
    if r == math.inf:
        return P.max(axis=-1)
    with np.errstate(divide="ignore"):
        logs = np.log(P)
    if r == 0.0:
        return np.exp(logs.mean(axis=-1))
    # log M_r = (logsumexp(r log p) - log K) / r
    with np.errstate(invalid="ignore"):
        log_mean = (logsumexp(r * logs, axis=-1) - math.log(K)) / r
    return np.exp(log_mean)


def combine_mean(r: float, p: PValueVector) -> float:
    """Generalized mean M_{r,K}; r = -inf is the minimum, r = +inf the maximum."""
    values = p.array
    if r < 0 and r != -math.inf:
        zeros = np.flatnonzero(values == 0.0)
        if zeros.size:
            raise DomainError(
                f"p-value at index {int(zeros[0])} is 0, which the mean with r={r:g} "
                "cannot combine"
            )
    return float(_mean_rows(r, values))


def _cauchy_rows(P: np.ndarray) -> np.ndarray:
    return cauchy_cdf(np.mean(cauchy_quantile(P), axis=-1))


def combine_cauchy(p: PValueVector) -> float:
    """C((1/K) sum C^{-1}(p_i)) with C the standard Cauchy CDF."""
    values = p.array
    boundary = np.flatnonzero((values == 0.0) | (values == 1.0))
    if boundary.size:
        index = int(boundary[0])
        raise DomainError(
            f"p-value at index {index} is {values[index]:g}; the Cauchy combination "
            "needs every p-value in (0, 1)"
        )
    return float(_cauchy_rows(values))


def _order_stat_rows(alpha: np.ndarray, P: np.ndarray) -> np.ndarray:
    ordered = np.sort(P, axis=-1, kind="stable")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(alpha > 0.0, ordered / np.where(alpha > 0.0, alpha, 1.0), np.inf)
    return ratios.min(axis=-1)


def _check_weights(alpha: np.ndarray, K: int) -> None:
    if alpha.size != K:
        raise ConfigurationError(f"order-statistic weights have length {alpha.size}, expected K={K}")
    if not np.any(alpha > 0.0):
        raise ConfigurationError("order-statistic weights are all zero")


def combine_order_stat(alpha, p: PValueVector) -> float:
    """S_{alpha,K}(p) = min_i p_(i) / alpha_i, with p_(i)/0 read as infinity."""
    weights = np.asarray(alpha, dtype=float)
    _check_weights(weights, p.K)
    return float(_order_stat_rows(weights, p.array))


def combine_simes(p: PValueVector) -> float:
    return combine_order_stat(Simes.weights(p.K), p)


def combine(method: MergingMethod, p: PValueVector) -> float:
    match method:
        case GeneralizedMean(r=r):
            return combine_mean(r, p)
        case CauchyCombination():
            return combine_cauchy(p)
        case Simes():
            return combine_simes(p)
        case OrderStatistics(alpha=alpha):
            return combine_order_stat(alpha, p)
    raise ConfigurationError(f"unknown merging method {method!r}")


def combine_rows(method: MergingMethod, P: np.ndarray) -> np.ndarray:
    """Combine each row of an (N, K) array of p-values.

    Rows that the scalar combiner would reject raise DomainError naming the
    first offending row.
    """
    P = np.asarray(P, dtype=float)
    if P.ndim != 2:
        raise ConfigurationError(f"expected a 2-D array of p-values, got shape {P.shape}")
    K = P.shape[1]
    match method:
        case GeneralizedMean(r=r):
            if r < 0 and r != -math.inf:
                _reject_rows(P == 0.0, f"a zero p-value under the mean with r={r:g}")
            return _mean_rows(r, P)
        case CauchyCombination():
            _reject_rows((P == 0.0) | (P == 1.0), "a p-value on {0, 1} under the Cauchy combination")
            return _cauchy_rows(P)
        case Simes():
            return _order_stat_rows(np.asarray(Simes.weights(K)), P)
        case OrderStatistics(alpha=alpha):
            weights = np.asarray(alpha, dtype=float)
            _check_weights(weights, K)
            return _order_stat_rows(weights, P)
    raise ConfigurationError(f"unknown merging method {method!r}")


def _reject_rows(bad: np.ndarray, what: str) -> None:
    rows = np.flatnonzero(bad.any(axis=-1))
    if rows.size:
        raise DomainError(f"row {int(rows[0])} contains {what} ({rows.size} rows affected)")
