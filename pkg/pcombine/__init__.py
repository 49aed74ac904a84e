from pcombine.combiners import (
    combine,
    combine_cauchy,
    combine_mean,
    combine_order_stat,
    combine_rows,
    combine_simes,
    ell,
)
from pcombine.dependence_sim import (
    estimate_rp,
    ic_balance_check,
    ic_balance_profile,
    sample_pvalues,
    signal_means,
    sweep_rho,
)
from pcombine.sequential import ingest_pvalues, run_sequential
from pcombine.tables import generate_log_ratio_table, generate_table
from pcombine.thresholds import (
    default_mode,
    price_for_validity,
    size_ratio,
    solve_cK,
    solve_log_cK,
    solve_xK,
    solve_yK,
    threshold,
    threshold_inverse,
    vad_threshold,
    vc_threshold,
    vi_threshold,
)

__all__ = [
    "combine",
    "combine_cauchy",
    "combine_mean",
    "combine_order_stat",
    "combine_rows",
    "combine_simes",
    "default_mode",
    "ell",
    "estimate_rp",
    "generate_log_ratio_table",
    "generate_table",
    "ic_balance_check",
    "ic_balance_profile",
    "ingest_pvalues",
    "price_for_validity",
    "run_sequential",
    "sample_pvalues",
    "signal_means",
    "size_ratio",
    "solve_cK",
    "solve_log_cK",
    "solve_xK",
    "solve_yK",
    "sweep_rho",
    "threshold",
    "threshold_inverse",
    "vad_threshold",
    "vc_threshold",
    "vi_threshold",
]
