"""The two-qubit Otto engine: partial-swap stroke, three-point work/heat law,
the minus-one uncertainty identity and the violation scan.

Each qubit has Hamiltonian H = -omega |0><0| (ground manifold carries the
energy), so the thermal excited-state population is the Fermi occupation
N = 1/(e^{beta*omega} + 1) in (0, 1/2).  A 4x4 enumeration of all sixteen
initial/final basis pairs doubles as the exact reference implementation of
the two-point measurement scheme.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .bosonic import Moments, TurReport, _degenerate_report
from .core import (
    DomainError,
    EngineParams,
    Occupations,
    Statistics,
    f_bound,
    h_fn,
)

__all__ = [
    "QubitEngineParams",
    "ThreePointPmf",
    "ViolationScan",
    "qubit_char_fn",
    "qubit_moments",
    "qubit_heat_moment",
    "three_point_pmf",
    "qubit_tur_report",
    "violation_scan",
    "qubit_oracle_joint",
    "qubit_char_fn_oracle",
]


@dataclass(frozen=True)
class QubitEngineParams(EngineParams):
    """Engine parameters interpreted with Fermi occupations."""


def _occupations(params: EngineParams) -> Occupations:
    return Occupations.from_params(params, Statistics.FERMI)


@dataclass(frozen=True)
class ThreePointPmf:
    """The three-outcome work/heat law of the partial-swap qubit engine.

    Outcome n in {-1, 0, +1} carries q_h = n*omega_a, w = -n*(omega_a - omega_b).
    """

    p_zero: float
    p_plus: float
    p_minus: float

    def __post_init__(self):
        total = self.p_zero + self.p_plus + self.p_minus
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"three-point law must sum to 1, got {total!r}")
        for name in ("p_zero", "p_plus", "p_minus"):
            if not (0.0 <= getattr(self, name) <= 1.0):
                raise DomainError(f"{name} out of [0, 1]")

    def index_moment(self, k: int) -> float:
        return self.p_plus + (-1.0) ** k * self.p_minus if k > 0 else 1.0


def qubit_char_fn(params: EngineParams, lam, mu) -> complex:
    """<exp(i*lam*W + i*mu*Q_H)> for the two-qubit engine (complex args allowed)."""
    occ = _occupations(params)
    s = params.sin2_theta
    na, nb = occ.n_a, occ.n_b
    u = mu * params.omega_a - lam * (params.omega_a - params.omega_b)
    return complex(
        1.0
        + s
        * (
            (na + nb - 2.0 * na * nb) * (np.cos(u) - 1.0)
            + 1j * (na - nb) * np.sin(u)
        )
    )


def qubit_heat_moment(params: EngineParams, order: int) -> float:
    """<Q_H^k>: odd orders carry (n_a - n_b), even orders (n_a + n_b - 2 n_a n_b)."""
    if order < 0:
        raise DomainError("moment order must be non-negative")
    if order == 0:
        return 1.0
    occ = _occupations(params)
    s = params.sin2_theta
    if order % 2:
        return params.omega_a**order * (occ.n_a - occ.n_b) * s
    return params.omega_a**order * (occ.n_a + occ.n_b - 2.0 * occ.n_a * occ.n_b) * s


def qubit_moments(params: EngineParams) -> Moments:
    """Means, variances and covariance of work and heat for the qubit engine."""
    wa, wb = params.omega_a, params.omega_b
    q1 = qubit_heat_moment(params, 1)
    q2 = qubit_heat_moment(params, 2)
    ratio = (wb - wa) / wa
    mean_qh = q1
    mean_w = ratio * q1
    var_qh = q2 - q1 * q1
    var_w = ratio * ratio * var_qh
    cov = ratio * var_qh
    return Moments(
        mean_w=mean_w,
        mean_qh=mean_qh,
        mean_qc=-mean_w - mean_qh,
        var_w=var_w,
        var_qh=var_qh,
        cov_w_qh=cov,
    )


def three_point_pmf(params: EngineParams) -> ThreePointPmf:
    occ = _occupations(params)
    s = params.sin2_theta
    na, nb = occ.n_a, occ.n_b
    return ThreePointPmf(
        p_zero=1.0 - (na + nb - 2.0 * na * nb) * s,
        p_plus=na * (1.0 - nb) * s,
        p_minus=nb * (1.0 - na) * s,
    )


def _qubit_inv_snr(n_a, n_b, sin2):
    return (n_a + n_b - 2.0 * n_a * n_b) / ((n_a - n_b) ** 2 * sin2) - 1.0


def _fermi_energy(n):
    """beta*omega reproducing the Fermi occupation n."""
    return np.log(1.0 / n - 1.0)


def qubit_tur_report(params: EngineParams) -> TurReport:
    """Uncertainty report with the qubit identity var/<W>**2 = h(x)/sigma - 1.

    The standard 2/sigma bound MAY be violated here; the saturable bound
    never is.  Equal occupations give the infinity sentinel.
    """
    occ = _occupations(params)
    if occ.n_a == occ.n_b or params.sin2_theta == 0.0:
        return _degenerate_report()
    s = params.sin2_theta
    inv_snr = _qubit_inv_snr(occ.n_a, occ.n_b, s)
    affinity = params.beta_a * params.omega_a - params.beta_b * params.omega_b
    sigma = affinity * (occ.n_b - occ.n_a) * s
    exact = h_fn(affinity) / sigma - 1.0
    standard = 2.0 / sigma
    shifted = standard + 1.0
    saturable = f_bound(sigma)
    return TurReport(
        inv_snr_w=inv_snr,
        sigma=sigma,
        exact_rhs=exact,
        standard_tur_rhs=standard,
        shifted_tur_rhs=shifted,
        saturable_rhs=saturable,
        satisfies_standard=inv_snr >= standard,
        satisfies_shifted=inv_snr >= shifted,
        satisfies_saturable=inv_snr >= saturable,
    )


@dataclass(frozen=True)
class ViolationScan:
    """Standard-bound violation mask over an occupation grid.

    snr is <W>**2/var(W); a cell is violated when snr exceeds sigma/2.
    """

    theta: float
    n_a: np.ndarray
    n_b: np.ndarray
    snr: np.ndarray
    half_sigma: np.ndarray
    violated: np.ndarray
    area_fraction: float

    def to_csv(self, path) -> None:
        """Columns n_a, n_b, snr, half_sigma, violated(0/1)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n_a", "n_b", "snr", "half_sigma", "violated"])
            for i, na in enumerate(self.n_a):
                for j, nb in enumerate(self.n_b):
                    writer.writerow(
                        [
                            f"{na:.17g}",
                            f"{nb:.17g}",
                            f"{self.snr[i, j]:.17g}",
                            f"{self.half_sigma[i, j]:.17g}",
                            int(self.violated[i, j]),
                        ]
                    )


def violation_scan(theta: float, resolution: int = 200) -> ViolationScan:
    """Scan the open occupation square (0, 1/2)^2 for standard-bound violations.

    Cell centres avoid the degenerate diagonal n_a = n_b; the violation area
    is the violated-cell fraction of the grid.
    """
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    s = math.sin(theta) ** 2
    if s == 0.0:
        raise DomainError("theta = 0 has no work output to scan")
    centers = (np.arange(resolution) + 0.5) * 0.5 / resolution
    na = centers[:, None]
    nb = centers[None, :]
    diff2 = (na - nb) ** 2
    even = na + nb - 2.0 * na * nb
    snr = diff2 * s / (even - diff2 * s)
    sigma = (_fermi_energy(na) - _fermi_energy(nb)) * (nb - na) * s
    violated = snr > sigma / 2.0
    return ViolationScan(
        theta=theta,
        n_a=centers,
        n_b=centers.copy(),
        snr=snr,
        half_sigma=sigma / 2.0,
        violated=violated,
        area_fraction=float(violated.mean()),
    )


# -- exact 4x4 reference ------------------------------------------------------


def _qubit_unitary(theta: float) -> np.ndarray:
    """Partial swap on the ordered two-qubit basis |00>, |01>, |10>, |11>."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, s, 0.0],
            [0.0, -s, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def _qubit_levels(params: EngineParams):
    """Per-basis-state energies and thermal weights of the product state."""
    occ = _occupations(params)
    e_a = np.array([-params.omega_a, 0.0])  # index = excitation of qubit a
    e_b = np.array([-params.omega_b, 0.0])
    pa = np.array([1.0 - occ.n_a, occ.n_a])
    pb = np.array([1.0 - occ.n_b, occ.n_b])
    return e_a, e_b, pa, pb


def qubit_oracle_joint(params: EngineParams) -> dict[int, float]:
    """Exact joint law by enumerating all sixteen initial/final pairs.

    Returns probabilities keyed by the heat index n (q_h = n*omega_a).
    Independent of the closed three-point formula.
    """
    u = _qubit_unitary(params.theta)
    e_a, _, pa, pb = _qubit_levels(params)
    joint: dict[int, float] = {-1: 0.0, 0: 0.0, 1: 0.0}
    for ia in range(2):
        for ib in range(2):
            i = 2 * ia + ib
            weight = pa[ia] * pb[ib]
            for fa in range(2):
                for fb in range(2):
                    f = 2 * fa + fb
                    prob = weight * u[f, i] ** 2
                    if prob == 0.0:
                        continue
                    qh = e_a[ia] - e_a[fa]
                    n = round(qh / params.omega_a)
                    joint[n] = joint.get(n, 0.0) + prob
    return joint


def qubit_char_fn_oracle(params: EngineParams, lam, mu) -> complex:
    """Two-point-measurement trace over the sixteen basis pairs."""
    u = _qubit_unitary(params.theta)
    e_a, e_b, pa, pb = _qubit_levels(params)
    acc = 0.0 + 0.0j
    for ia in range(2):
        for ib in range(2):
            i = 2 * ia + ib
            weight = pa[ia] * pb[ib]
            e_i = e_a[ia] + e_b[ib]
            for fa in range(2):
                for fb in range(2):
                    f = 2 * fa + fb
                    amp2 = u[f, i] ** 2
                    if amp2 == 0.0:
                        continue
                    w = (e_a[fa] + e_b[fb]) - e_i
                    qh = e_a[ia] - e_a[fa]
                    acc += weight * amp2 * np.exp(1j * (lam * w + mu * qh))
    return complex(acc)
