import logging
import math
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from pcombine.combiners import combine
from pcombine.errors import ConfigurationError, IngestionError
from pcombine.models.methods import (
    CauchyCombination,
    GeneralizedMean,
    MergingMethod,
    OrderStatistics,
    canonical_method,
)
from pcombine.models.pvalues import PValueVector
from pcombine.models.queries import ComputationMode, ThresholdKind
from pcombine.models.sequential import SequentialReport, SequentialStep
from pcombine.thresholds import threshold_inverse

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["n_removed", "K_remaining", "combined", "adjusted", "significant"]


def inline_pvalues(values: Sequence[float]) -> PValueVector:
    """Check p-values given on the command line; positions count from 1."""
    if not values:
        raise IngestionError("no p-values given")
    for position, value in enumerate(values, start=1):
        if not 0.0 <= value <= 1.0:
            raise IngestionError(
                f"p-value {value:g} at position {position} is not in [0, 1]", value=str(value)
            )
    return PValueVector.of(values)


def ingest_pvalues(
    path: Path, column: Optional[str] = None, header: Optional[bool] = None
) -> PValueVector:
    """Read p-values from a one-column text file or a CSV with a named column.

    Without ``column`` the file is read as one value per line, with an optional
    header line when ``header`` is true. With ``column`` the file is a CSV whose
    header names that column. Blank lines are skipped; line numbers in errors
    count every line of the file.
    """
    path = Path(path)
    named = column is not None
    has_header = named or bool(header)
    try:
        frame = pd.read_csv(
            path,
            header=0 if has_header else None,
            dtype=str,
            skip_blank_lines=False,
            keep_default_na=False,
        )
    except pd.errors.EmptyDataError:
        raise IngestionError(f"{path} contains no p-values")
    except (OSError, pd.errors.ParserError) as e:
        raise IngestionError(f"cannot read {path}: {e}") from e

    if named:
        if column not in frame.columns:
            raise IngestionError(
                f"column {column!r} not found in {path}; columns are {list(frame.columns)}"
            )
        raw = frame[column]
    else:
        if frame.shape[1] != 1:
            raise IngestionError(
                f"{path} has {frame.shape[1]} columns; name the p-value column"
            )
        raw = frame.iloc[:, 0]

    first_line = 2 if has_header else 1
    values = []
    for offset, text in enumerate(raw.str.strip()):
        if text == "":
            continue
        line = first_line + offset
        try:
            value = float(text)
        except ValueError:
            raise IngestionError(f"cannot parse {text!r} as a p-value", line=line, value=text)
        if not 0.0 <= value <= 1.0:
            raise IngestionError(f"p-value {text} is not in [0, 1]", line=line, value=text)
        values.append(value)

    if not values:
        raise IngestionError(f"{path} contains no p-values")
    pvalues = PValueVector.of(values)
    logger.info(
        f"Read {pvalues.K} p-values from {path} (min={min(values):.6g}, max={max(values):.6g})"
    )
    return pvalues


def _lower_boundary(method: MergingMethod, p: PValueVector) -> bool:
    """True when a remaining zero sends F to its lower boundary."""
    infinite_at_zero = isinstance(method, CauchyCombination) or (
        isinstance(method, GeneralizedMean) and method.r < 0 and math.isfinite(method.r)
    )
    return infinite_at_zero and bool(np.any(p.array == 0.0))


def adjusted_pvalue(
    method: MergingMethod,
    kind: ThresholdKind,
    p: PValueVector,
    epsilon: float,
    mode: Optional[ComputationMode] = None,
) -> tuple[float, float]:
    """(F(p), g_K^{-1}(F(p)) capped at 1) with the boundary rules for zeros and ones."""
    if _lower_boundary(method, p):
        return 0.0, 0.0
    if isinstance(method, CauchyCombination) and bool(np.any(p.array == 1.0)):
        return 1.0, 1.0
    combined = combine(method, p)
    return combined, threshold_inverse(method, kind, p.K, combined, mode, epsilon_hint=epsilon)


def run_sequential(
    p: PValueVector,
    method: MergingMethod,
    kind: ThresholdKind,
    epsilon: float,
    mode: Optional[ComputationMode] = None,
) -> SequentialReport:
    """Remove the smallest p-value until the adjusted combined p-value reaches epsilon.

    Thresholds use the number of p-values left at each step.
    """
    method = canonical_method(method)
    if isinstance(method, OrderStatistics):
        raise ConfigurationError(
            "order-statistic weights are tied to one K; use simes for the removal loop"
        )
    if not 0.0 < epsilon < 1.0:
        raise ConfigurationError(f"epsilon must be in (0, 1), got {epsilon}")

    steps: list[SequentialStep] = []
    remaining: Optional[PValueVector] = p
    stop_index = p.K
    n = 0
    while remaining is not None:
        combined, adjusted = adjusted_pvalue(method, kind, remaining, epsilon, mode)
        significant = adjusted < epsilon
        steps.append(
            SequentialStep(
                n_removed=n,
                K_remaining=remaining.K,
                combined=combined,
                adjusted=adjusted,
                significant=significant,
            )
        )
        if not significant:
            stop_index = n
            break
        remaining = remaining.without_smallest() if remaining.K > 1 else None
        n += 1

    logger.info(
        f"Sequential {method.name}/{kind}: stopped after removing {stop_index} of {p.K} p-values"
    )
    return SequentialReport(
        method=method.name, kind=str(kind), epsilon=epsilon, steps=steps, stop_index=stop_index
    )


def report_frame(report: SequentialReport) -> pd.DataFrame:
    return pd.DataFrame([step.model_dump() for step in report.steps], columns=REPORT_COLUMNS)
