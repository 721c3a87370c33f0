"""Parameter types, thermal occupations, regime classification and the
special functions shared by every engine variant.

Natural units hbar = k_B = 1 throughout: frequencies carry energy units and
inverse temperatures are energies^-1.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "PoleError",
    "UnsupportedOrderError",
    "Statistics",
    "Regime",
    "EngineParams",
    "Occupations",
    "occupation",
    "beta_from_occupation",
    "classify_regime",
    "h_fn",
    "f_bound",
    "inverse_x_tanh_x",
]

# Relative tolerance used to detect the degenerate boundaries (equal
# frequencies, equal occupations, zero coupling).
BOUNDARY_RTOL = 1e-12

# Below this |x| the direct x/tanh(x/2) form of h is replaced by its even
# Taylor series; the truncated series error there is < 1e-18 relative.
H_SERIES_CUTOFF = 1e-4


class DomainError(ValueError):
    """An input lies outside the physical domain of an operation."""


class PoleError(DomainError):
    """A characteristic function was evaluated at (or too close to) a pole."""


class UnsupportedOrderError(DomainError):
    """A moment of higher order than the implementation supports was requested."""


class Statistics(enum.Enum):
    """Exchange statistics of the working modes."""

    BOSE = "bose"
    FERMI = "fermi"


class Regime(enum.Enum):
    """Operating regime of the cycle.

    DEGENERATE covers the zero-work boundaries: equal frequencies, equal
    occupations (the Carnot point) and vanishing coupling.
    """

    HEAT_ENGINE = "heat_engine"
    REFRIGERATOR = "refrigerator"
    THERMAL_ACCELERATOR = "thermal_accelerator"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class EngineParams:
    """Full configuration of one cycle.

    Mode a couples to the bath at inverse temperature ``beta_a`` and is the
    hot side under the usual convention beta_a < beta_b; a warning (not an
    error) is emitted otherwise.  The coupling phase ``phi`` is carried for
    completeness but no computed statistic depends on it.
    """

    omega_a: float
    omega_b: float
    beta_a: float
    beta_b: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ("omega_a", "omega_b", "beta_a", "beta_b"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not (-1e-12 <= self.theta <= math.pi / 2 + 1e-12):
            raise DomainError(f"theta must lie in [0, pi/2], got {self.theta!r}")
        if not (0.0 <= self.phi < 2.0 * math.pi):
            raise DomainError(f"phi must lie in [0, 2*pi), got {self.phi!r}")
        if self.beta_a >= self.beta_b:
            warnings.warn(
                "beta_a >= beta_b: bath a is not the hotter one; regime labels "
                "follow the hot-a convention",
                stacklevel=2,
            )

    @property
    def t_a(self) -> float:
        return 1.0 / self.beta_a

    @property
    def t_b(self) -> float:
        return 1.0 / self.beta_b

    @property
    def sin2_theta(self) -> float:
        return math.sin(self.theta) ** 2


def occupation(beta, omega, statistics: Statistics = Statistics.BOSE) -> float:
    """Mean thermal occupation of a mode of frequency ``omega`` at inverse
    temperature ``beta``.

    Bose gives 1/(e^{beta*omega} - 1) in (0, inf); Fermi gives
    1/(e^{beta*omega} + 1) in (0, 1/2).  ``beta = inf`` is accepted and
    returns the zero-temperature limit 0.
    """
    if not (beta > 0.0) or math.isnan(beta):
        raise DomainError(f"beta must be positive, got {beta!r}")
    if not (omega > 0.0) or not math.isfinite(omega):
        raise DomainError(f"omega must be positive and finite, got {omega!r}")
    x = beta * omega
    if statistics is Statistics.FERMI:
        e = math.exp(-x)
        return e / (1.0 + e)
    if x > 700.0:  # 1/expm1 would overflow; the occupation is e^-x to 1e-304
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def beta_from_occupation(n, omega, statistics: Statistics = Statistics.BOSE) -> float:
    """Inverse temperature reproducing occupation ``n`` at frequency ``omega``."""
    if not (omega > 0.0):
        raise DomainError(f"omega must be positive, got {omega!r}")
    if statistics is Statistics.FERMI:
        if not (0.0 < n < 0.5):
            raise DomainError(f"Fermi occupation must lie in (0, 1/2), got {n!r}")
        return math.log(1.0 / n - 1.0) / omega
    if not (n > 0.0):
        raise DomainError(f"Bose occupation must be positive, got {n!r}")
    return math.log1p(1.0 / n) / omega


@dataclass(frozen=True)
class Occupations:
    """Mean occupations of the two modes in their pre-stroke thermal states."""

    n_a: float
    n_b: float
    statistics: Statistics = Statistics.BOSE

    @classmethod
    def from_params(
        cls, params: EngineParams, statistics: Statistics = Statistics.BOSE
    ) -> "Occupations":
        return cls(
            n_a=occupation(params.beta_a, params.omega_a, statistics),
            n_b=occupation(params.beta_b, params.omega_b, statistics),
            statistics=statistics,
        )


def classify_regime(params: EngineParams) -> Regime:
    """Operating regime from the frequency and temperature ratios.

    Heat engine: T_B/T_A < omega_b/omega_a < 1 (work extracted).
    Refrigerator: omega_b/omega_a < T_B/T_A < 1 (heat pumped out of bath b).
    Thermal accelerator: omega_b/omega_a > 1 (work consumed to push heat
    downhill).  Equalities within BOUNDARY_RTOL, and vanishing coupling,
    are classified DEGENERATE (zero mean work).
    """
    if params.sin2_theta <= BOUNDARY_RTOL:
        return Regime.DEGENERATE
    if math.isclose(params.omega_a, params.omega_b, rel_tol=BOUNDARY_RTOL):
        return Regime.DEGENERATE
    xa = params.beta_a * params.omega_a
    xb = params.beta_b * params.omega_b
    if math.isclose(xa, xb, rel_tol=BOUNDARY_RTOL):
        return Regime.DEGENERATE  # equal occupations: the Carnot point
    if params.omega_b > params.omega_a:
        return Regime.THERMAL_ACCELERATOR
    # omega_a > omega_b: the sign of n_a - n_b (equivalently xb - xa) decides.
    return Regime.HEAT_ENGINE if xa < xb else Regime.REFRIGERATOR


def h_fn(x):
    """x * coth(x/2), continuously extended to h(0) = 2.

    Even in x, bounded by 2 <= h(x) <= 2 + x**2/6.  Scalar or ndarray input;
    near zero the direct form is replaced by the Taylor series
    2 + x**2/6 - x**4/360 to avoid cancellation.
    """
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < H_SERIES_CUTOFF
    safe = np.where(small, 1.0, arr)  # dummy argument inside the masked branch
    with np.errstate(invalid="ignore", over="ignore"):
        direct = safe / np.tanh(safe / 2.0)
    x2 = arr * arr
    series = 2.0 + x2 / 6.0 - x2 * x2 / 360.0
    out = np.where(small, series, direct)
    if np.ndim(x) == 0:
        return float(out)
    return out


def inverse_x_tanh_x(y):
    """Inverse of x*tanh(x) on x >= 0, to absolute tolerance 1e-14.

    Safeguarded Newton iteration with bisection fallback on the bracket
    [0, max(1, y + 1)] (valid since x*tanh(x) <= x**2 and >= x - 1).
    Accepts scalars or arrays.
    """
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0.0) or np.any(np.isnan(arr)):
        raise DomainError("inverse_x_tanh_x requires y >= 0")
    lo = np.zeros_like(arr)
    hi = np.maximum(1.0, arr + 1.0)
    x = 0.5 * hi
    with np.errstate(over="ignore"):
        for _ in range(200):
            f = x * np.tanh(x) - arr
            below = f < 0.0
            lo = np.where(below, x, lo)
            hi = np.where(below, hi, x)
            grad = np.tanh(x) + x / np.cosh(x) ** 2
            step = np.where(grad > 0.0, f / np.where(grad > 0.0, grad, 1.0), 0.0)
            newton = x - step
            inside = (newton > lo) & (newton < hi)
            x = np.where(inside, newton, 0.5 * (lo + hi))
            if np.all(hi - lo < 1e-14):
                break
    x = np.where(arr == 0.0, 0.0, x)  # exact fixed point at the origin
    if np.ndim(y) == 0:
        return float(x)
    return x


def f_bound(sigma):
    """Tightest saturable lower bound on var(W)/<W>**2 at mean entropy
    production ``sigma``: csch(g(sigma/2))**2 with g the inverse of x*tanh(x).

    Strictly decreasing; diverges as sigma -> 0+ (sigma = 0 returns inf).
    Scalar or ndarray input.
    """
    arr = np.asarray(sigma, dtype=float)
    if np.any(arr < 0.0) or np.any(np.isnan(arr)):
        raise DomainError("f_bound requires sigma >= 0")
    z = inverse_x_tanh_x(np.asarray(arr) / 2.0)
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        out = np.where(
            z > 300.0,  # csch**2 ~ 4 e^{-2z}; avoids sinh overflow
            4.0 * np.exp(-2.0 * np.minimum(z, 746.0)),
            1.0 / np.sinh(np.where(z > 300.0, 1.0, z)) ** 2,
        )
    if np.ndim(sigma) == 0:
        return float(out)
    return out
