"""Distribution functions, quantiles, root finding and quadrature.

Stable laws are written in the S1 parameterization with skewness 1, scale 1 and
shift 0, whose characteristic function is

    exp(-|t|^alpha (1 - i sign(t) tan(pi alpha / 2)))      alpha != 1
    exp(-|t| (1 + i (2 / pi) sign(t) log|t|))               alpha == 1

The CDF is evaluated with Nolan's integral representation. Nolan writes it in
the S0 parameterization, which for unit scale differs from S1 by the shift
zeta = -tan(pi alpha / 2); the integral only depends on x - zeta, which is the
S1 abscissa itself, so no shift appears below. At alpha == 1 and unit scale
the two parameterizations coincide.
"""

import logging
import math
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import integrate as sp_integrate
from scipy import optimize, special, stats

from pcombine.errors import (
    ConfigurationError,
    DomainError,
    IntegrationError,
    RootFindingError,
)
from pcombine.settings import get_settings

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi
# g levels at which the stable integrals are split; exp(-g) is negligible past the last one
SPLIT_LEVELS = tuple(
    math.log(g) for g in (1e-6, 1e-3, 0.1, 1.0, 4.0, 16.0, 64.0, 256.0, 750.0)
)


class StableLaw(BaseModel):
    """Totally skewed (beta = 1) stable law; alpha >= 2 is the standard normal."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0.0, description="Stability parameter")

    @property
    def is_normal(self) -> bool:
        return self.alpha >= 2.0


class RootBracket(BaseModel):
    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    @model_validator(mode="after")
    def check_sign_change(self) -> "RootBracket":
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if np.sign(self.f_lo) == np.sign(self.f_hi):
            raise ValueError(
                f"no sign change on [{self.lo}, {self.hi}]: "
                f"f(lo)={self.f_lo:.6g}, f(hi)={self.f_hi:.6g}"
            )
        return self

    @classmethod
    def around(cls, f: Callable[[float], float], lo: float, hi: float) -> "RootBracket":
        """Evaluate f at both ends; raises RootFindingError instead of a validation error."""
        f_lo, f_hi = float(f(lo)), float(f(hi))
        if not (lo < hi) or np.sign(f_lo) == np.sign(f_hi) or math.isnan(f_lo + f_hi):
            raise RootFindingError("no sign change at the bracket ends", lo, hi)
        return cls(lo=lo, hi=hi, f_lo=f_lo, f_hi=f_hi)


def _as_output(values: np.ndarray, like: ArrayLike):
    return float(values) if np.ndim(like) == 0 else values


# Normal, chi-square, gamma and Cauchy


def normal_cdf(x: ArrayLike):
    return _as_output(special.ndtr(np.asarray(x, dtype=float)), x)


def normal_quantile(p: ArrayLike):
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr <= 0.0) | (p_arr >= 1.0)) or np.any(np.isnan(p_arr)):
        raise DomainError(f"normal quantile needs p in (0, 1), got {p}")
    return _as_output(special.ndtri(p_arr), p)


def chisq_quantile(p: float, dof: int) -> float:
    if not 0.0 < p < 1.0:
        raise DomainError(f"chi-square quantile needs p in (0, 1), got {p}")
    if dof < 1:
        raise DomainError(f"chi-square quantile needs dof >= 1, got {dof}")
    return float(stats.chi2.ppf(p, dof))


def chisq_sf(x: float, dof: int) -> float:
    return float(stats.chi2.sf(x, dof))


def ln_gamma(x: float) -> float:
    if not x > 0.0:
        raise DomainError(f"ln_gamma needs x > 0, got {x}")
    return float(special.gammaln(x))


def cauchy_cdf(x: ArrayLike):
    """C(x) = arctan(x) / pi + 1/2, using arctan(-1/x) / pi on the left tail."""
    x_arr = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        left = np.arctan(-1.0 / x_arr) / math.pi
    values = np.where(x_arr < 0.0, left, 0.5 + np.arctan(x_arr) / math.pi)
    return _as_output(values, x)


def cauchy_quantile(p: ArrayLike):
    """C^{-1}(p) = tan(pi (p - 1/2)), via reciprocal tangents near 0 and 1."""
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr <= 0.0) | (p_arr >= 1.0)) or np.any(np.isnan(p_arr)):
        raise DomainError(f"Cauchy quantile needs p in (0, 1), got {p}")
    with np.errstate(divide="ignore"):
        low = -1.0 / np.tan(math.pi * p_arr)
        high = 1.0 / np.tan(math.pi * (1.0 - p_arr))
    values = np.where(p_arr < 0.5, low, np.where(p_arr == 0.5, 0.0, high))
    return _as_output(values, p)


def cauchy_quantile_integral(lo: float, hi: float) -> float:
    """Integral of C^{-1} over [lo, hi] from the antiderivative -(1/pi) ln sin(pi p)."""
    return (math.log(math.sin(math.pi * lo)) - math.log(math.sin(math.pi * hi))) / math.pi


# Root finding and quadrature


def find_root(
    f: Callable[[float], float],
    bracket: RootBracket,
    tol: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> float:
    """Brent's method inside a bracket with a guaranteed sign change."""
    settings = get_settings().root_finding
    tol = settings.xtol if tol is None else tol
    max_iterations = settings.max_iterations if max_iterations is None else max_iterations
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    try:
        root, info = optimize.brentq(
            f,
            bracket.lo,
            bracket.hi,
            xtol=tol,
            rtol=4 * np.finfo(float).eps,
            maxiter=max_iterations,
            full_output=True,
            disp=False,
        )
    except ValueError as e:
        raise RootFindingError(str(e), bracket.lo, bracket.hi) from e
    if not info.converged:
        raise RootFindingError(
            f"no convergence after {info.iterations} iterations ({info.flag})",
            bracket.lo,
            bracket.hi,
        )
    return float(root)


def scan_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    points: Optional[int] = None,
    geometric: bool = False,
) -> RootBracket:
    """Find the first sign change of f on a grid over [lo, hi].

    Non-finite values of f are skipped, which lets the scan start at an end
    where the function is singular.
    """
    points = get_settings().root_finding.scan_points if points is None else points
    grid = np.geomspace(lo, hi, points) if geometric else np.linspace(lo, hi, points)
    previous_x, previous_f = None, None
    for x in grid:
        fx = float(f(float(x)))
        if not math.isfinite(fx) or (fx == 0.0 and previous_f is None):
            continue
        if previous_f is not None and np.sign(fx) != np.sign(previous_f):
            return RootBracket(lo=previous_x, hi=float(x), f_lo=previous_f, f_hi=fx)
        previous_x, previous_f = float(x), fx
    raise RootFindingError("no sign change found on the scan grid", lo, hi)


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Optional[float] = None,
    *,
    epsabs: float = 0.0,
    weight: Optional[str] = None,
    wvar: Optional[float] = None,
) -> float:
    """Adaptive quadrature; infinite ranges are mapped by quad's own substitution.

    With ``weight="sin"`` or ``"cos"`` the integrand is multiplied by
    sin(wvar x) or cos(wvar x) and integrated with QUADPACK's Fourier rules,
    which on an infinite range only honour an absolute tolerance.
    """
    settings = get_settings().quadrature
    tol = settings.tolerance if tol is None else tol
    kwargs = dict(epsabs=epsabs, epsrel=tol, limit=settings.limit, full_output=1)
    if weight is not None:
        kwargs.update(weight=weight, wvar=wvar)
        if math.isinf(hi):
            kwargs["epsabs"] = max(epsabs, tol)
    with np.errstate(all="ignore"):
        result = sp_integrate.quad(f, lo, hi, **kwargs)
    value, abserr = float(result[0]), float(result[1])
    if len(result) > 3:
        accepted = abserr <= max(kwargs["epsabs"], 1e3 * tol * abs(value))
        if not accepted or not math.isfinite(value):
            raise IntegrationError(
                f"quadrature on [{lo}, {hi}] did not converge: {result[3]} "
                f"(estimate {value:.6g}, error {abserr:.3g})"
            )
        logger.debug(f"Quadrature warning accepted on [{lo}, {hi}]: {result[3]}")
    return value


# Stable laws


def _theta0(alpha: float, beta: float) -> float:
    return math.atan(beta * math.tan(HALF_PI * alpha)) / alpha


def _log_v(theta: float, alpha: float, theta0: float) -> float:
    a1 = alpha - 1.0
    return (
        math.log(math.cos(alpha * theta0)) / a1
        + (alpha / a1)
        * (np.log(np.cos(theta)) - np.log(np.sin(alpha * (theta0 + theta))))
        + np.log(np.cos(alpha * theta0 + a1 * theta))
        - np.log(np.cos(theta))
    )


def _tail_integral(u: float, alpha: float, beta: float, complement: bool) -> float:
    """(1/pi) times the integral of exp(-g) (or 1 - exp(-g)) with g = u^(a/(a-1)) V."""
    theta0 = _theta0(alpha, beta)
    shift = (alpha / (alpha - 1.0)) * math.log(u)
    lo, hi = -theta0, HALF_PI

    def log_g(theta: float) -> float:
        with np.errstate(all="ignore"):
            return float(shift + _log_v(theta, alpha, theta0))

    def integrand(theta: float) -> float:
        g = math.exp(min(log_g(theta), 700.0))
        return -math.expm1(-g) if complement else math.exp(-g)

    return _integrate_split(integrand, log_g, lo, hi) / math.pi


def _integrate_split(
    integrand: Callable[[float], float],
    log_g: Callable[[float], float],
    lo: float,
    hi: float,
) -> float:
    """Integrate over [lo, hi] piecewise, cut where log g crosses each of SPLIT_LEVELS.

    log g is monotone on the range. For large arguments the mass sits in a
    sliver next to the peak g = 1, which one adaptive pass over the whole
    range can miss.
    """
    width = hi - lo
    a, b = lo + 1e-12 * width, hi - 1e-12 * width
    f_a, f_b = log_g(a), log_g(b)
    cuts = set()
    if math.isfinite(f_a) and math.isfinite(f_b):
        for level in SPLIT_LEVELS:
            gap_a, gap_b = f_a - level, f_b - level
            if np.sign(gap_a) == np.sign(gap_b):
                continue
            try:
                bracket = RootBracket(lo=a, hi=b, f_lo=gap_a, f_hi=gap_b)
                cuts.add(find_root(lambda t, level=level: log_g(t) - level, bracket, tol=1e-14))
            except RootFindingError:
                continue
    edges = [lo, *sorted(t for t in cuts if lo < t < hi), hi]
    return math.fsum(
        integrate(integrand, left, right, epsabs=1e-300)
        for left, right in zip(edges[:-1], edges[1:])
        if right > left
    )


def _alpha_one_integral(x: float, complement: bool) -> float:
    def log_g(theta: float) -> float:
        with np.errstate(all="ignore"):
            return float(
                -HALF_PI * x
                + math.log(2.0 / math.pi)
                + np.log(HALF_PI + theta)
                - np.log(np.cos(theta))
                + (HALF_PI + theta) * np.tan(theta)
            )

    def integrand(theta: float) -> float:
        g = math.exp(min(log_g(theta), 700.0))
        return -math.expm1(-g) if complement else math.exp(-g)

    return _integrate_split(integrand, log_g, -HALF_PI, HALF_PI) / math.pi


def _stable_tails(law: StableLaw, x: float) -> tuple[Optional[float], Optional[float]]:
    """Return (cdf, sf) with whichever side is computed directly; the other is None."""
    alpha = law.alpha
    if alpha == 1.0:
        if x >= 0.0:
            return None, _alpha_one_integral(x, complement=True)
        return _alpha_one_integral(x, complement=False), None
    if alpha < 1.0:
        if x <= 0.0:
            return 0.0, None
        # support is [0, inf); F = (1/pi) int exp(-g)
        return None, _tail_integral(x, alpha, 1.0, complement=True)
    if x > 0.0:
        return None, _tail_integral(x, alpha, 1.0, complement=False)
    if x == 0.0:
        return (HALF_PI - _theta0(alpha, 1.0)) / math.pi, None
    # F(x; beta) = 1 - F(-x; -beta)
    return _tail_integral(-x, alpha, -1.0, complement=False), None


def stable_cdf(law: StableLaw, x: float) -> float:
    if law.is_normal:
        return normal_cdf(x)
    cdf, sf = _stable_tails(law, x)
    return cdf if cdf is not None else 1.0 - sf


def stable_sf(law: StableLaw, x: float) -> float:
    if law.is_normal:
        return normal_cdf(-x)
    cdf, sf = _stable_tails(law, x)
    return sf if sf is not None else 1.0 - cdf


def sample_stable(law: StableLaw, size: int, rng: np.random.Generator) -> np.ndarray:
    """Chambers-Mallows-Stuck draws in the S1 parameterization (beta = 1)."""
    if law.is_normal:
        return rng.standard_normal(size)
    alpha = law.alpha
    v = rng.uniform(-HALF_PI, HALF_PI, size)
    w = rng.standard_exponential(size)
    if alpha == 1.0:
        shifted = HALF_PI + v
        return (2.0 / math.pi) * (
            shifted * np.tan(v) - np.log(HALF_PI * w * np.cos(v) / shifted)
        )
    tan_term = math.tan(HALF_PI * alpha)
    b = math.atan(tan_term) / alpha
    s = (1.0 + tan_term**2) ** (1.0 / (2.0 * alpha))
    return (
        s
        * np.sin(alpha * (v + b))
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha)
    )


@lru_cache(maxsize=1024)
def _stable_quantile_integral(alpha: float, p: float) -> float:
    law = StableLaw(alpha=alpha)
    upper = 1.0 - p

    def fn(x: float) -> float:
        # increasing in x; the upper half works on the survival function
        if p <= 0.5:
            return stable_cdf(law, x) - p
        return upper - stable_sf(law, x)

    lo = 0.0 if alpha < 1.0 else -1.0
    hi = 1.0
    while fn(hi) < 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise RootFindingError(f"stable quantile p={p} beyond range", lo, hi)
    while alpha >= 1.0 and fn(lo) > 0.0:
        hi, lo = lo, 2.0 * lo
        if lo < -1e300:
            raise RootFindingError(f"stable quantile p={p} beyond range", lo, hi)
    root = find_root(fn, RootBracket.around(fn, lo, hi), tol=1e-13 * max(1.0, abs(hi)))
    logger.debug(f"Stable quantile alpha={alpha} p={p}: {root:.10g}")
    return root


def stable_quantile(
    law: StableLaw,
    p: float,
    method: str = "integral",
    samples: int = 10_000_000,
    seed: Optional[int] = None,
) -> float:
    """p-quantile of the stable law.

    ``method="integral"`` inverts the CDF by bracketed root finding;
    ``method="simulation"`` returns the empirical quantile of ``samples``
    Chambers-Mallows-Stuck draws from a fixed-seed Philox stream.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"stable quantile needs p in (0, 1), got {p}")
    if law.is_normal:
        return normal_quantile(p)
    if method == "integral":
        return _stable_quantile_integral(law.alpha, p)
    if method == "simulation":
        seed = get_settings().seed if seed is None else seed
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
        return float(np.quantile(sample_stable(law, samples, rng), p))
    raise ConfigurationError(f"unknown stable quantile method {method!r}")
