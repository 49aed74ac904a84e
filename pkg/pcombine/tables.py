import logging
import math
from typing import Iterable, Optional, Sequence

import pandas as pd

from pcombine.errors import PCombineError
from pcombine.models.methods import MergingMethod, TABLE_METHODS, parse_method
from pcombine.models.queries import (
    Assumption,
    ComputationMode,
    TableCell,
    ThresholdKind,
)
from pcombine.thresholds import price_for_validity

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["method", "K", "epsilon", "kind", "value", "mode", "diagnostics"]


def _default_methods() -> list[MergingMethod]:
    return [parse_method(name) for name in TABLE_METHODS]


def _price_cell(
    method: MergingMethod,
    epsilon: float,
    K: int,
    assumption: Assumption,
    mode: Optional[ComputationMode],
    scale: float = 1.0,
) -> TableCell:
    vsd_mode = mode if assumption is Assumption.INDEPENDENCE else None
    try:
        price = price_for_validity(method, epsilon, K, assumption, vsd_mode)
    except (PCombineError, ValueError) as e:
        logger.warning(f"Cell {method.name} K={K} eps={epsilon} {assumption.kind} failed: {e}")
        return TableCell(
            method=method.name, K=K, epsilon=epsilon, kind=assumption.kind, diagnostics=str(e)
        )

    notes = []
    for part in (price.vad, price.vsd):
        diagnostics = part.diagnostics
        if diagnostics.residual is not None:
            notes.append(f"residual={diagnostics.residual:.2e}")
        if diagnostics.mc_standard_error is not None:
            notes.append(f"se={diagnostics.mc_standard_error:.3g}")
    logger.info(f"Cell {price.method} K={K} eps={epsilon} {assumption.kind}: {price.ratio:.6g}")
    return TableCell(
        method=price.method,
        K=K,
        epsilon=epsilon,
        kind=assumption.kind,
        value=price.ratio * scale,
        mode=price.vsd.mode_used.tag,
        diagnostics="; ".join(notes),
    )


def generate_table(
    epsilon: float,
    K_list: Sequence[int],
    methods: Optional[Iterable[MergingMethod]] = None,
    mode_policy: Optional[ComputationMode] = None,
) -> pd.DataFrame:
    """Prices for validity b_F/a_F and c_F/a_F, one row per (method, kind, K).

    With ``mode_policy`` None every VI cell uses the default mode policy;
    otherwise the given mode is used for the VI cells. Failed cells keep a
    missing value and carry the error text in ``diagnostics``.
    """
    methods = _default_methods() if methods is None else list(methods)
    cells = [
        _price_cell(method, epsilon, K, assumption, mode_policy)
        for method in methods
        for assumption in (Assumption.INDEPENDENCE, Assumption.COMONOTONICITY)
        for K in K_list
    ]
    return cells_to_frame(cells)


def generate_log_ratio_table(
    epsilons: Sequence[float],
    K_list: Sequence[int],
    methods: Optional[Iterable[MergingMethod]] = None,
) -> pd.DataFrame:
    """(1 / log K) b_F(eps) / a_F(eps) under the default mode policy."""
    if methods is None:
        methods = [parse_method(name) for name in ("simes", "cauchy", "harmonic")]
    cells = [
        _price_cell(method, epsilon, K, Assumption.INDEPENDENCE, None, scale=1.0 / math.log(K))
        for method in methods
        for epsilon in epsilons
        for K in K_list
    ]
    return cells_to_frame(cells)


def cells_to_frame(cells: Iterable[TableCell]) -> pd.DataFrame:
    frame = pd.DataFrame([cell.model_dump() for cell in cells], columns=TABLE_COLUMNS)
    frame["kind"] = frame["kind"].map(lambda kind: ThresholdKind(kind).value)
    return frame


def to_wide(frame: pd.DataFrame) -> pd.DataFrame:
    """One row per (method, kind, epsilon), one column per K; failed cells stay NaN."""
    keys = ["method", "kind", "epsilon"]
    wide = frame.set_index(keys + ["K"])["value"].unstack("K")
    wide = wide.reindex(pd.MultiIndex.from_frame(frame[keys].drop_duplicates()))
    wide.columns = [f"K={K}" for K in wide.columns]
    return wide.reset_index()
