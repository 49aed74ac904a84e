"""Validity thresholds a_F (VAD), b_F (VI) and c_F (VC) and prices for validity.

A threshold g makes F(P_1, ..., P_K) < g(epsilon) a level-epsilon test under
the matching dependence assumption. Homogeneous methods have VAD thresholds
linear in epsilon, so only their multipliers are computed (and cached per K).
"""

import logging
import math
from functools import lru_cache
from typing import Optional

import numpy as np
from pydantic import BaseModel
from scipy.special import gamma

from pcombine.combiners import combine_rows, ell
from pcombine.errors import (
    ConfigurationError,
    DomainError,
    RootFindingError,
    UnsupportedMethodError,
)
from pcombine.models.methods import (
    CauchyCombination,
    GeneralizedMean,
    MergingMethod,
    OrderStatistics,
    Simes,
    canonical_method,
)
from pcombine.models.queries import (
    Assumption,
    ComputationMode,
    Exact,
    LargeKAsymptotic,
    MonteCarlo,
    PriceResult,
    SmallEpsAsymptotic,
    ThresholdDiagnostics,
    ThresholdKind,
    ThresholdQuery,
    ThresholdResult,
)
from pcombine.settings import get_settings
from pcombine.special_functions import (
    RootBracket,
    StableLaw,
    cauchy_cdf,
    chisq_quantile,
    chisq_sf,
    find_root,
    integrate,
    ln_gamma,
    normal_cdf,
    normal_quantile,
    scan_bracket,
    stable_quantile,
    stable_sf,
)
from pcombine.streams import map_blocks, uniforms

logger = logging.getLogger(__name__)

VAD_MEAN_POWERS = (-math.inf, -4.0, -1.0, 0.0, 1.0, math.inf)
XK_SCAN_POINTS = 400


class RootSolution(BaseModel):
    root: float
    residual: float


# Root equations


def _cK_equation(K: int, t: float) -> float:
    """log(1/c - (K-1)) - (K - K^2 c) written in t = -log c."""
    s = math.exp(-t)
    return t + math.log1p(-(K - 1) * s) - K + K * K * s


@lru_cache(maxsize=256)
def _solve_cK(K: int) -> tuple[float, float]:
    """Return (t_K, residual) with c_K = exp(-t_K).

    The equation also vanishes at the excluded end c = 1/K, so the scan starts
    one grid step inside it.
    """
    if K < 3:
        raise DomainError(f"c_K is defined for K >= 3, got K={K}")
    points = get_settings().root_finding.scan_points
    lo_end, hi = math.log(K), K + 10.0
    lo = lo_end + (hi - lo_end) / points

    def g(t: float) -> float:
        return _cK_equation(K, t)

    t = find_root(g, scan_bracket(g, lo, hi, points=points))
    residual = abs(g(t))
    logger.info(f"Solved c_K for K={K}: t={t:.12g}, residual={residual:.3g}")
    return t, residual


def solve_log_cK(K: int) -> float:
    """log c_K, finite for every K >= 3."""
    return -_solve_cK(K)[0]


def solve_cK(K: int) -> float:
    """Root c of log(1/c - (K-1)) = K - K^2 c on (0, 1/K).

    c_K is about exp(-K) and leaves the float range near K = 745; beyond that
    only ``solve_log_cK`` is available.
    """
    t = _solve_cK(K)[0]
    c = math.exp(-t)
    if c == 0.0:
        raise DomainError(f"c_K = exp({-t:.6g}) underflows for K={K}; use solve_log_cK")
    return c


def geometric_vad_multiplier(K: int) -> RootSolution:
    """a_0 = (1 - (K-1) c_K) exp(K c_K - 1), evaluated in log space.

    Equals exp(-m_K / K) with m_K = -(K-1) log(1 - (K-1) c_K) - log c_K once
    the c_K equation is substituted.
    """
    t, residual = _solve_cK(K)
    c = math.exp(-t)
    log_a0 = math.log1p(-(K - 1) * c) + K * c - 1.0
    return RootSolution(root=math.exp(log_a0), residual=residual)


def _yK_equation(K: int, y: float) -> float:
    return y * y - K * ((y + 1.0) * math.log1p(y) - y)


@lru_cache(maxsize=256)
def _solve_yK(K: int) -> tuple[float, float]:
    if K < 3:
        raise DomainError(f"y_K is defined for K >= 3, got K={K}")

    def h(y: float) -> float:
        return _yK_equation(K, y)

    lo, hi = 1e-3, K * 1e3
    while True:
        try:
            bracket = scan_bracket(h, lo, hi, geometric=True)
            break
        except RootFindingError:
            if hi > 1e12 * K:
                raise
            lo, hi = hi, hi * 1e3
    y = find_root(h, bracket)
    residual = abs(h(y)) / (y * y)
    logger.info(f"Solved y_K for K={K}: y={y:.12g}, residual={residual:.3g}")
    return y, residual


def solve_yK(K: int) -> float:
    """Root y of y^2 = K((y+1) log(y+1) - y) on (0, inf)."""
    return _solve_yK(K)[0]


def harmonic_vad_multiplier(K: int) -> RootSolution:
    y, residual = _solve_yK(K)
    return RootSolution(root=(y + 1.0) * K / (y + K) ** 2, residual=residual)


def _cauchy_H(epsilon: float, K: int, x: float) -> float:
    """H_eps(x) = (K-1) C^{-1}(1 - eps + (K-1)x) + C^{-1}(1 - x), via cotangents."""
    return (K - 1) / math.tan(math.pi * (epsilon - (K - 1) * x)) + 1.0 / math.tan(
        math.pi * x
    )


def _xK_equation(epsilon: float, K: int, x: float) -> float:
    """K int_x^{eps/K} H_eps - (eps - K x) H_eps(x).

    The integral uses the antiderivative -(1/pi) ln sin(pi p) of C^{-1}.
    """
    integral = (
        math.log(math.sin(math.pi * (epsilon - (K - 1) * x)))
        - math.log(math.sin(math.pi * x))
    ) / math.pi
    return K * integral - (epsilon - K * x) * _cauchy_H(epsilon, K, x)


def _check_cauchy_epsilon(epsilon: float) -> None:
    if not 0.0 < epsilon < 0.5:
        raise DomainError(f"the Cauchy VAD threshold needs epsilon in (0, 1/2), got {epsilon}")


@lru_cache(maxsize=4096)
def _solve_xK(epsilon: float, K: int) -> tuple[float, float]:
    _check_cauchy_epsilon(epsilon)
    # H_eps is flat at eps/2 for K = 2, so the equation has no interior root
    if K < 3:
        raise DomainError(f"x_K is defined for K >= 3, got K={K}")
    end = epsilon / K

    def phi(x: float) -> float:
        return _xK_equation(epsilon, K, x)

    # phi -> -inf at 0 and vanishes again at the excluded end eps/K
    bracket = scan_bracket(
        phi, end * 1e-15, end * (1.0 - 1e-3), points=XK_SCAN_POINTS, geometric=True
    )
    x = find_root(phi, bracket, tol=end * 1e-13)
    scale = max(1.0, abs((epsilon - K * x) * _cauchy_H(epsilon, K, x)))
    residual = abs(phi(x)) / scale
    logger.debug(f"Solved x_K for eps={epsilon}, K={K}: x={x:.12g}, residual={residual:.3g}")
    return x, residual


def solve_xK(epsilon: float, K: int) -> float:
    """Root x on (0, eps/K) of K int_x^{eps/K} H_eps(t) dt = (eps - K x) H_eps(x)."""
    return _solve_xK(epsilon, K)[0]


def cauchy_vad(epsilon: float, K: int) -> RootSolution:
    """a_F(eps) = C(-H_eps(x_K) / K) for the Cauchy combination.

    For K = 2 the optimum sits at the end x = eps/2, where the antithetic pair
    gives a_F(eps) = eps/2.
    """
    if K == 1:
        return RootSolution(root=epsilon, residual=0.0)
    if K == 2:
        _check_cauchy_epsilon(epsilon)
        return RootSolution(root=epsilon / 2.0, residual=0.0)
    x, residual = _solve_xK(epsilon, K)
    return RootSolution(root=cauchy_cdf(-_cauchy_H(epsilon, K, x) / K), residual=residual)


# VAD


def _supported_vad() -> list[str]:
    return [
        "bonferroni",
        "negative-quartic",
        "harmonic",
        "geometric",
        "arithmetic",
        "maximum",
        "cauchy",
        "simes",
    ]


@lru_cache(maxsize=1024)
def vad_multiplier(method: MergingMethod, K: int) -> tuple[float, Optional[float], Optional[float]]:
    """(multiplier, root, residual) of a homogeneous method's VAD threshold."""
    method = canonical_method(method)
    if K == 1:
        if isinstance(method, OrderStatistics):
            return 1.0 / method.alpha[0], None, None
        return 1.0, None, None
    match method:
        case Simes():
            return 1.0 / ell(K), None, None
        case GeneralizedMean(r=r) if r == math.inf:
            return 1.0, None, None
        case GeneralizedMean(r=r) if r == -math.inf:
            return 1.0 / K, None, None
        case GeneralizedMean(r=r) if r == 1.0 or (K == 2 and r <= 1.0):
            # min(p) <= M_r(p), and the antithetic pair on [0, 2a] attains 2a
            return 0.5, None, None
        case GeneralizedMean(r=r) if r in VAD_MEAN_POWERS:
            if r == -4.0:
                return 0.75 * K**-0.75, None, None
            solution = geometric_vad_multiplier(K) if r == 0.0 else harmonic_vad_multiplier(K)
            if r == 0.0:
                root = math.exp(solve_log_cK(K)) or None
            else:
                root = solve_yK(K)
            return solution.root, root, solution.residual
    raise UnsupportedMethodError(method.name, ThresholdKind.VAD, _supported_vad())


def vad_threshold(q: ThresholdQuery) -> ThresholdResult:
    _check_kind(q, ThresholdKind.VAD)
    if not isinstance(q.mode, Exact):
        raise ConfigurationError(f"VAD thresholds are computed exactly; mode {q.mode.tag} is not available")
    method = canonical_method(q.method)
    if isinstance(method, CauchyCombination):
        if q.K == 1:
            return ThresholdResult(value=q.epsilon, mode_used=q.mode)
        if q.K == 2:
            value = cauchy_vad(q.epsilon, q.K).root
            return ThresholdResult(
                value=value,
                mode_used=q.mode,
                diagnostics=ThresholdDiagnostics(root_value=value, residual=0.0),
            )
        x, residual = _solve_xK(q.epsilon, q.K)
        value = cauchy_vad(q.epsilon, q.K).root
        return ThresholdResult(
            value=value,
            mode_used=q.mode,
            diagnostics=ThresholdDiagnostics(root_value=x, residual=residual),
        )
    multiplier, root, residual = vad_multiplier(method, q.K)
    return ThresholdResult(
        value=multiplier * q.epsilon,
        mode_used=q.mode,
        diagnostics=ThresholdDiagnostics(root_value=root, residual=residual),
    )


# VI


def positive_r_bound(r: float, K: int) -> float:
    """Largest epsilon for which the Gamma closed form is exact: Gamma(1+1/r)^K / Gamma(1+K/r)."""
    return math.exp(K * ln_gamma(1.0 + 1.0 / r) - ln_gamma(1.0 + K / r))


def _positive_r_exact(r: float, epsilon: float, K: int) -> float:
    bound = positive_r_bound(r, K)
    if epsilon > bound:
        raise DomainError(
            f"the closed-form VI threshold for r={r:g}, K={K} needs "
            f"epsilon <= Gamma(1+1/r)^K / Gamma(1+K/r) = {bound:.6g}, got {epsilon}; "
            "use the large-k mode"
        )
    log_b = (
        (ln_gamma(1.0 + K / r) + math.log(epsilon)) / K
        - math.log(K) / r
        - ln_gamma(1.0 + 1.0 / r)
    )
    return math.exp(log_b)


def _clt_moments(r: float) -> tuple[float, float]:
    mu = 1.0 / (r + 1.0)
    sigma = math.sqrt(r * r / ((1.0 + 2.0 * r) * (1.0 + r) ** 2))
    return mu, sigma


def _positive_r_clt(r: float, epsilon: float, K: int) -> float:
    mu, sigma = _clt_moments(r)
    inner = sigma / math.sqrt(K) * normal_quantile(epsilon) + mu
    if inner <= 0.0:
        raise DomainError(
            f"the normal approximation for r={r:g}, K={K} is negative at epsilon={epsilon}"
        )
    return inner ** (1.0 / r)


class StableConstants(BaseModel):
    alpha: float
    C: float
    b_K: float


@lru_cache(maxsize=512)
def stable_constants(r: float, K: int) -> StableConstants:
    """Scale C and centering b_K of sum_i P_i^r for r < 0, with alpha = -1/r."""
    if not (r < 0 and math.isfinite(r)):
        raise DomainError(f"stable constants need a finite r < 0, got {r}")
    alpha = -1.0 / r
    if alpha > 2.0:
        C = math.sqrt(K * (alpha / (alpha - 2.0) - (alpha / (alpha - 1.0)) ** 2))
        b_K = K * alpha / (alpha - 1.0)
    elif alpha == 2.0:
        C = math.sqrt(K * math.log(K))
        b_K = 2.0 * K
    elif alpha == 1.0:
        C = K * math.pi / 2.0
        omega = 2.0 / (K * math.pi)
        b_K = (math.pi * K * K / 2.0) * integrate(
            lambda x: x**-2, 1.0, math.inf, weight="sin", wvar=omega
        )
    else:
        C = (K * gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2.0)) ** (1.0 / alpha)
        b_K = K * alpha / (alpha - 1.0) if alpha > 1.0 else 0.0
    return StableConstants(alpha=alpha, C=C, b_K=b_K)


def _negative_r_large_k(r: float, epsilon: float, K: int) -> float:
    constants = stable_constants(r, K)
    quantile = stable_quantile(StableLaw(alpha=constants.alpha), 1.0 - epsilon)
    total = constants.C * quantile + constants.b_K
    if total <= 0.0:
        raise DomainError(f"stable approximation for r={r:g}, K={K} is not positive at epsilon={epsilon}")
    return (total / K) ** (1.0 / r)


@lru_cache(maxsize=32)
def _monte_carlo_sample(
    method: MergingMethod, K: int, replications: int, seed: int, workers: Optional[int] = None
) -> np.ndarray:
    """Sorted F(U_1, ..., U_K) over independent uniform vectors, identical for any workers."""
    settings = get_settings().monte_carlo

    def block(rng: np.random.Generator, n: int) -> np.ndarray:
        return combine_rows(method, uniforms(rng, (n, K)))

    values = np.concatenate(
        map_blocks(
            block,
            replications,
            seed,
            settings.block_size,
            workers=settings.workers if workers is None else workers,
        )
    )
    values.sort()
    logger.info(f"Simulated {replications} values of {method.name} for K={K} (seed={seed})")
    return values


def _monte_carlo_vi(method: MergingMethod, epsilon: float, K: int, mode: MonteCarlo) -> tuple[float, float]:
    sample = _monte_carlo_sample(method, K, mode.replications, mode.seed, mode.workers)
    N = sample.size
    center = N * epsilon
    spread = math.sqrt(N * epsilon * (1.0 - epsilon))
    index = min(max(math.ceil(center) - 1, 0), N - 1)
    lo = min(max(math.floor(center - spread) - 1, 0), N - 1)
    hi = min(max(math.ceil(center + spread) - 1, 0), N - 1)
    return float(sample[index]), float(sample[hi] - sample[lo]) / 2.0


def _supported_vi() -> list[str]:
    return ["bonferroni", "mean(r) for any r", "cauchy", "simes"]


def vi_threshold(q: ThresholdQuery) -> ThresholdResult:
    _check_kind(q, ThresholdKind.VI)
    method, eps, K, mode = canonical_method(q.method), q.epsilon, q.K, q.mode
    if K == 1:
        return ThresholdResult(value=_single_threshold(method, eps), mode_used=mode)

    if isinstance(mode, MonteCarlo):
        value, se = _monte_carlo_vi(method, eps, K, mode)
        return ThresholdResult(
            value=value, mode_used=mode, diagnostics=ThresholdDiagnostics(mc_standard_error=se)
        )

    match method:
        case Simes() | CauchyCombination():
            _require_mode(method, mode, Exact)
            return ThresholdResult(value=eps, mode_used=mode)
        case GeneralizedMean(r=r) if r == -math.inf:
            _require_mode(method, mode, Exact)
            return ThresholdResult(value=-math.expm1(math.log1p(-eps) / K), mode_used=mode)
        case GeneralizedMean(r=r) if r == math.inf:
            _require_mode(method, mode, Exact)
            return ThresholdResult(value=eps ** (1.0 / K), mode_used=mode)
        case GeneralizedMean(r=r) if r == 0.0:
            _require_mode(method, mode, Exact)
            value = math.exp(-chisq_quantile(1.0 - eps, 2 * K) / (2 * K))
            return ThresholdResult(value=value, mode_used=mode)
        case GeneralizedMean(r=r) if r > 0.0:
            if isinstance(mode, Exact):
                return ThresholdResult(value=_positive_r_exact(r, eps, K), mode_used=mode)
            _require_mode(method, mode, LargeKAsymptotic)
            return ThresholdResult(
                value=_positive_r_clt(r, eps, K),
                mode_used=mode,
                diagnostics=ThresholdDiagnostics(note="normal approximation"),
            )
        case GeneralizedMean(r=r):
            if isinstance(mode, SmallEpsAsymptotic):
                return ThresholdResult(value=K ** (-1.0 - 1.0 / r) * eps, mode_used=mode)
            if isinstance(mode, LargeKAsymptotic):
                constants = stable_constants(r, K)
                return ThresholdResult(
                    value=_negative_r_large_k(r, eps, K),
                    mode_used=mode,
                    diagnostics=ThresholdDiagnostics(
                        note=f"stable alpha={constants.alpha:g}, C={constants.C:.6g}, b_K={constants.b_K:.6g}"
                    ),
                )
            raise ConfigurationError(
                f"{method.name} has no closed-form VI threshold; "
                "choose an asymptotic or monte-carlo mode"
            )
    raise UnsupportedMethodError(method.name, ThresholdKind.VI, _supported_vi())


# VC


def _single_threshold(method: MergingMethod, epsilon: float) -> float:
    if isinstance(method, OrderStatistics):
        return epsilon / method.alpha[-1]
    return epsilon


def vc_threshold(q: ThresholdQuery) -> ThresholdResult:
    """Every method here returns F(U, ..., U) = U / alpha_K, which is U unless weights are rescaled."""
    _check_kind(q, ThresholdKind.VC)
    if not isinstance(q.mode, Exact):
        raise ConfigurationError(f"VC thresholds are exact; mode {q.mode.tag} is not available")
    return ThresholdResult(value=_single_threshold(canonical_method(q.method), q.epsilon), mode_used=q.mode)


def threshold(q: ThresholdQuery) -> ThresholdResult:
    match q.kind:
        case ThresholdKind.VAD:
            return vad_threshold(q)
        case ThresholdKind.VI:
            return vi_threshold(q)
        case ThresholdKind.VC:
            return vc_threshold(q)


def _check_kind(q: ThresholdQuery, kind: ThresholdKind) -> None:
    if q.kind != kind:
        raise ConfigurationError(f"expected a {kind} query, got {q.kind}")


def _require_mode(method: MergingMethod, mode: ComputationMode, expected: type) -> None:
    if not isinstance(mode, expected):
        raise ConfigurationError(
            f"mode {mode.tag} is not available for the {method.name} VI threshold"
        )


# Mode policy


def default_mode(
    method: MergingMethod,
    kind: ThresholdKind,
    epsilon: float,
    K: int,
    small_epsilon_cutoff: Optional[float] = None,
) -> ComputationMode:
    """Exact where defined; asymptotic modes for the VI thresholds of r < 0 and large-epsilon r > 0."""
    if kind != ThresholdKind.VI or K == 1:
        return Exact()
    method = canonical_method(method)
    if isinstance(method, GeneralizedMean) and math.isfinite(method.r):
        r = method.r
        if r < 0:
            cutoff = (
                get_settings().tables.small_epsilon_cutoff
                if small_epsilon_cutoff is None
                else small_epsilon_cutoff
            )
            return SmallEpsAsymptotic() if epsilon <= cutoff else LargeKAsymptotic()
        if r > 0 and epsilon > positive_r_bound(r, K):
            return LargeKAsymptotic()
    return Exact()


def resolve_query(
    method: MergingMethod,
    kind: ThresholdKind,
    epsilon: float,
    K: int,
    mode: Optional[ComputationMode] = None,
) -> ThresholdQuery:
    mode = default_mode(method, kind, epsilon, K) if mode is None else mode
    return ThresholdQuery(method=method, kind=kind, epsilon=epsilon, K=K, mode=mode)


# Inverses


def threshold_inverse(
    method: MergingMethod,
    kind: ThresholdKind,
    K: int,
    x: float,
    mode: Optional[ComputationMode] = None,
    epsilon_hint: Optional[float] = None,
) -> float:
    """Generalized inverse g^{-1}(x) of a threshold, capped to [0, 1].

    g^{-1}(F(p)) is the adjusted p-value of a combined value F(p). When mode is
    None the default mode policy is applied at ``epsilon_hint`` (or at x).
    """
    method = canonical_method(method)
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if mode is None:
        mode = default_mode(method, kind, epsilon_hint or min(x, 0.5), K)
    return min(1.0, max(0.0, _inverse(method, kind, K, x, mode)))


def _inverse(method: MergingMethod, kind: ThresholdKind, K: int, x: float, mode: ComputationMode) -> float:
    if K == 1 or kind == ThresholdKind.VC:
        return x / _single_threshold(method, 1.0)
    if kind == ThresholdKind.VAD:
        if isinstance(method, CauchyCombination):
            return _cauchy_vad_inverse(K, x)
        multiplier, _, _ = vad_multiplier(method, K)
        return x / multiplier

    if isinstance(mode, MonteCarlo):
        sample = _monte_carlo_sample(method, K, mode.replications, mode.seed, mode.workers)
        return float(np.searchsorted(sample, x, side="left")) / sample.size
    if x >= 1.0:
        return 1.0
    match method:
        case Simes() | CauchyCombination():
            return x
        case GeneralizedMean(r=r) if r == -math.inf:
            return -math.expm1(K * math.log1p(-min(x, 1.0)))
        case GeneralizedMean(r=r) if r == math.inf:
            return x**K
        case GeneralizedMean(r=r) if r == 0.0:
            return chisq_sf(-2.0 * K * math.log(x), 2 * K)
        case GeneralizedMean(r=r) if r > 0.0:
            if isinstance(mode, LargeKAsymptotic):
                mu, sigma = _clt_moments(r)
                return normal_cdf((x**r - mu) * math.sqrt(K) / sigma)

            log_eps = K * (
                math.log(x) + math.log(K) / r + ln_gamma(1.0 + 1.0 / r)
            ) - ln_gamma(1.0 + K / r)
            bound = positive_r_bound(r, K)
            if log_eps > math.log(bound):
                raise DomainError(
                    f"combined value {x:.6g} lies beyond the closed-form range of the "
                    f"r={r:g} VI threshold (epsilon bound {bound:.6g}); use the large-k mode"
                )
            return math.exp(log_eps)
        case GeneralizedMean(r=r):
            if isinstance(mode, SmallEpsAsymptotic):
                return x / K ** (-1.0 - 1.0 / r)
            if isinstance(mode, LargeKAsymptotic):
                constants = stable_constants(r, K)
                argument = (K * x**r - constants.b_K) / constants.C
                return stable_sf(StableLaw(alpha=constants.alpha), argument)
            raise ConfigurationError(
                f"{method.name} has no closed-form VI threshold; "
                "choose an asymptotic or monte-carlo mode"
            )
    raise UnsupportedMethodError(method.name, ThresholdKind.VI, _supported_vi())


def _cauchy_vad_inverse(K: int, x: float) -> float:
    """Solve a_C(eps) = x for eps on (0, 1/2); a_C(eps) <= eps gives the lower end."""
    upper = 0.5 * (1.0 - 1e-9)
    if cauchy_vad(upper, K).root <= x:
        return 1.0

    def gap(eps: float) -> float:
        return cauchy_vad(eps, K).root - x

    lo = min(x, upper * (1.0 - 1e-9))
    return find_root(gap, RootBracket.around(gap, lo, upper), tol=1e-15)


# Prices


def price_for_validity(
    method: MergingMethod,
    epsilon: float,
    K: int,
    assumption: Assumption,
    mode: Optional[ComputationMode] = None,
) -> PriceResult:
    """g_F(eps) / a_F(eps) with g the VI or VC threshold named by the assumption."""
    vad = threshold(resolve_query(method, ThresholdKind.VAD, epsilon, K))
    vsd = threshold(resolve_query(method, assumption.kind, epsilon, K, mode))
    return PriceResult(
        method=canonical_method(method).name,
        epsilon=epsilon,
        K=K,
        assumption=assumption,
        ratio=vsd.value / vad.value,
        vad=vad,
        vsd=vsd,
    )


def size_ratio(
    method: MergingMethod,
    epsilon: float,
    K: int,
    assumption: Assumption,
    mode: Optional[ComputationMode] = None,
) -> float:
    """eps / g^{-1}(a_F(eps)): how much smaller the VAD test's size is under the assumption."""
    kind = assumption.kind
    vad = threshold(resolve_query(method, ThresholdKind.VAD, epsilon, K)).value
    mode = default_mode(method, kind, epsilon, K) if mode is None else mode
    return epsilon / threshold_inverse(method, kind, K, vad, mode)


