"""Alternative unitary strokes: two-mode squeezing (full statistics) and the
cubic exchange engine (entropy relation, operating condition and support
structure; its higher moments have no closed form and stay oracle-fed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bosonic import Moments, TurReport, _degenerate_report
from .core import DomainError, Statistics, f_bound, h_fn, occupation
from .fock import (
    CubicExchange,
    TruncationError,
    TruncationSpec,
    TwoModeSqueeze,
    joint_distribution,
)

__all__ = [
    "SqueezeParams",
    "CubicParams",
    "DeltaStructureReport",
    "squeeze_moments",
    "cubic_entropy_relation",
    "cubic_sigma_from_work",
    "cubic_heat_engine_condition",
    "cubic_delta_structure",
    "delta_structure_report",
]


@dataclass(frozen=True)
class SqueezeParams:
    """Cycle driven by a two-mode squeezing stroke of magnitude r >= 0."""

    omega_a: float
    omega_b: float
    beta_a: float
    beta_b: float
    r: float

    def __post_init__(self):
        for name in ("omega_a", "omega_b", "beta_a", "beta_b"):
            if not (getattr(self, name) > 0.0):
                raise DomainError(f"{name} must be positive")
        if self.r < 0.0:
            raise DomainError("squeeze magnitude r must be non-negative")

    @property
    def occupations(self) -> tuple[float, float]:
        return (
            occupation(self.beta_a, self.omega_a, Statistics.BOSE),
            occupation(self.beta_b, self.omega_b, Statistics.BOSE),
        )


@dataclass(frozen=True)
class CubicParams:
    """Cycle driven by the cubic exchange stroke.

    The stroke conserves 2 a^dag a + b^dag b, pinning the support line
    W = -n*(omega_a - 2*omega_b), Q_H = n*omega_a.
    """

    omega_a: float
    omega_b: float
    beta_a: float
    beta_b: float
    theta_c: complex

    def __post_init__(self):
        for name in ("omega_a", "omega_b", "beta_a", "beta_b"):
            if not (getattr(self, name) > 0.0):
                raise DomainError(f"{name} must be positive")

    @property
    def occupations(self) -> tuple[float, float]:
        return (
            occupation(self.beta_a, self.omega_a, Statistics.BOSE),
            occupation(self.beta_b, self.omega_b, Statistics.BOSE),
        )


def squeeze_moments(params: SqueezeParams) -> tuple[Moments, TurReport]:
    """Closed-form moments and uncertainty report of the squeezing engine.

    <W> = (omega_a + omega_b)(n_a + n_b + 1) sinh(r)^2 is never negative:
    the stroke spends work building correlations that thermalisation then
    dumps as heat, so the machine cannot operate as an engine.  The exact
    identity var/<W>**2 = h(beta_a*omega_a + beta_b*omega_b)/sigma + 1 holds
    for every r > 0.
    """
    na, nb = params.occupations
    s = math.sinh(params.r) ** 2
    wsum = params.omega_a + params.omega_b
    mean_w = wsum * (na + nb + 1.0) * s
    mean_qh = -params.omega_a * (na + nb + 1.0) * s
    bracket = (na + nb + 2.0 * na * nb + 1.0) * s + (na + nb + 1.0) ** 2 * s * s
    var_w = wsum**2 * bracket
    mom = Moments(
        mean_w=mean_w,
        mean_qh=mean_qh,
        mean_qc=-mean_w - mean_qh,
        var_w=var_w,
        var_qh=params.omega_a**2 * bracket,
        cov_w_qh=-wsum * params.omega_a * bracket,
    )
    if s == 0.0:
        return mom, _degenerate_report()
    affinity = params.beta_a * params.omega_a + params.beta_b * params.omega_b
    sigma = affinity / wsum * mean_w
    inv_snr = (na + nb + 2.0 * na * nb + 1.0) / ((na + nb + 1.0) ** 2 * s) + 1.0
    standard = 2.0 / sigma
    shifted = standard + 1.0
    saturable = f_bound(sigma)
    report = TurReport(
        inv_snr_w=inv_snr,
        sigma=sigma,
        exact_rhs=h_fn(affinity) / sigma + 1.0,
        standard_tur_rhs=standard,
        shifted_tur_rhs=shifted,
        saturable_rhs=saturable,
        satisfies_standard=inv_snr >= standard,
        satisfies_shifted=inv_snr >= shifted,
        satisfies_saturable=inv_snr >= saturable,
    )
    return mom, report


def cubic_entropy_relation(params: CubicParams, mean_qh: float) -> float:
    """Mean entropy production from an externally supplied <Q_H>.

    sigma = -(beta_a*omega_a - 2*omega_b*beta_b)/omega_a * <Q_H>; the heat
    moment has no closed form for this stroke and is typically oracle-fed.
    """
    coeff = params.beta_a * params.omega_a - 2.0 * params.omega_b * params.beta_b
    return -coeff / params.omega_a * mean_qh


def cubic_sigma_from_work(params: CubicParams, mean_w: float) -> float:
    """Entropy production from <W>; undefined at omega_a = 2*omega_b."""
    denom = params.omega_a - 2.0 * params.omega_b
    if math.isclose(params.omega_a, 2.0 * params.omega_b, rel_tol=1e-14):
        raise DomainError(
            "the work form is undefined at omega_a = 2*omega_b; use the heat form"
        )
    coeff = params.beta_a * params.omega_a - 2.0 * params.omega_b * params.beta_b
    return coeff / denom * mean_w


def cubic_heat_engine_condition(params: CubicParams) -> bool:
    """True when engine operation (<Q_H> > 0 with <W> < 0) is allowed.

    Requires beta_a*omega_a < 2*beta_b*omega_b (equivalently
    n_a > n_b**2/(2*n_b + 1)) together with omega_a > 2*omega_b.
    """
    return (
        params.beta_a * params.omega_a < 2.0 * params.beta_b * params.omega_b
        and params.omega_a > 2.0 * params.omega_b
    )


@dataclass(frozen=True)
class DeltaStructureReport:
    """Observed support structure of an oracle joint distribution."""

    off_support_mass: float
    tail_bound: float
    total_mass: float
    ratio_min: float | None
    ratio_max: float | None
    n_max: int

    @property
    def within_tolerance(self) -> bool:
        return self.off_support_mass <= max(1e-10, self.tail_bound)

    @property
    def support_ratio(self) -> float | None:
        """-w/q_h measured on the populated support (constant when charge-conserving)."""
        if self.ratio_min is None:
            return None
        return 0.5 * (self.ratio_min + self.ratio_max)


def delta_structure_report(
    kind,
    n_a: float,
    n_b: float,
    omega_a: float,
    omega_b: float,
    trunc: TruncationSpec | None = None,
    *,
    dense: bool = False,
    mass_floor: float = 1e-13,
) -> DeltaStructureReport:
    """Measure how much oracle probability mass leaves the conserved-charge line.

    The ratio -w/q_h is collected over every populated cell with q_h != 0
    (mass above ``mass_floor``); a constant ratio across the support is
    exactly the no-efficiency-fluctuations statement.  With ``dense=True``
    the stroke is exponentiated on the full product space, so conserved
    charge is an observed property instead of a structural one.
    """
    if trunc is None:
        # grow the cutoff on refusal: the generator may need more room than
        # the Gibbs tail alone suggests
        trunc = TruncationSpec.for_occupations(n_a, n_b)
        for _ in range(4):
            try:
                result = joint_distribution(
                    kind, n_a, n_b, trunc, omega_a=omega_a, omega_b=omega_b, dense=dense
                )
                break
            except TruncationError as err:
                trunc = TruncationSpec.for_occupations(n_a, n_b, n_max=err.suggested_n_max)
        else:
            raise TruncationError("cutoff growth did not converge", trunc.n_max * 2)
    else:
        result = joint_distribution(
            kind, n_a, n_b, trunc, omega_a=omega_a, omega_b=omega_b, dense=dense
        )
    off = result.off_support_mass(kind.charge)
    d = result.offsets
    ratio_min = ratio_max = None
    populated = (result.probs > mass_floor).nonzero()
    for i, j in zip(*populated):
        dm = int(d[i])
        dn = int(d[j])
        if dm == 0:
            continue
        qh = -omega_a * dm
        w = omega_a * dm + omega_b * dn
        ratio = -w / qh
        ratio_min = ratio if ratio_min is None else min(ratio_min, ratio)
        ratio_max = ratio if ratio_max is None else max(ratio_max, ratio)
    return DeltaStructureReport(
        off_support_mass=off,
        tail_bound=result.tail_bound,
        total_mass=result.total_mass(),
        ratio_min=ratio_min,
        ratio_max=ratio_max,
        n_max=trunc.n_max,
    )


def cubic_delta_structure(
    params: CubicParams,
    trunc: TruncationSpec | None = None,
    *,
    dense: bool = False,
) -> DeltaStructureReport:
    """Support report for the cubic stroke; on support -w/q_h = 1 - 2*omega_b/omega_a."""
    na, nb = params.occupations
    return delta_structure_report(
        CubicExchange(params.theta_c),
        na,
        nb,
        params.omega_a,
        params.omega_b,
        trunc,
        dense=dense,
    )
