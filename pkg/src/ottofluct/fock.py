"""Brute-force two-point-measurement oracle on a truncated Fock space.

Everything here is deliberately independent of the closed-form statistics:
strokes are matrix exponentials of their generators, initial weights are
geometric Gibbs weights, and the joint distribution over per-mode quantum
changes is obtained by direct enumeration.  Used to validate every closed
form in the other modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg

from .core import DomainError

__all__ = [
    "BeamSplitter",
    "TwoModeSqueeze",
    "CubicExchange",
    "TruncationSpec",
    "TruncationError",
    "Stroke",
    "FockOracleResult",
    "build_stroke",
    "joint_distribution",
    "char_fn_oracle",
    "gibbs_weights",
]

# Initial states whose joint Gibbs weight falls below this floor are skipped;
# the skipped mass is accounted for exactly in the reported tail bound.
WEIGHT_FLOOR = 1e-20

# Extra quanta added to the cutoff when certifying squeeze/cubic truncation.
ADEQUACY_PAD = 8
ADEQUACY_TOL = 1e-8


class TruncationError(RuntimeError):
    """The requested computation needs a larger Fock cutoff."""

    def __init__(self, message: str, suggested_n_max: int):
        super().__init__(f"{message} (suggested n_max: {suggested_n_max})")
        self.suggested_n_max = suggested_n_max


@dataclass(frozen=True)
class BeamSplitter:
    """Frequency-converting mode mixer exp(xi a+b - xi* a b+), xi = theta e^{i phi}.

    Conserves a+a + b+b; exact on each total-quanta sector.
    """

    theta: float
    phi: float = 0.0

    charge = (1, 1)


@dataclass(frozen=True)
class TwoModeSqueeze:
    """Two-mode squeezing exp(r (a+b+ - a b)); conserves a+a - b+b."""

    r: float

    charge = (1, -1)


@dataclass(frozen=True)
class CubicExchange:
    """Cubic exchange exp(t a+b^2 - t* a b+^2); conserves 2 a+a + b+b."""

    theta_c: complex

    charge = (2, 1)


StrokeKind = Union[BeamSplitter, TwoModeSqueeze, CubicExchange]


def _per_mode_tail(n: float, n_max: int) -> float:
    """Gibbs probability mass above Fock level n_max for mean occupation n."""
    if n <= 0.0:
        return 0.0
    q = n / (n + 1.0)
    return math.exp((n_max + 1) * math.log(q))


def _joint_tail(n_a: float, n_b: float, n_max: int) -> float:
    ta = _per_mode_tail(n_a, n_max)
    tb = _per_mode_tail(n_b, n_max)
    return ta + tb - ta * tb


def _default_n_max(n_a: float, n_b: float, per_mode_tail: float = 1e-12) -> int:
    n_max = 8
    for n in (n_a, n_b):
        if n <= 0.0:
            continue
        q = n / (n + 1.0)
        need = math.ceil(math.log(per_mode_tail) / math.log(q)) - 1
        n_max = max(n_max, need)
    return n_max


@dataclass(frozen=True)
class TruncationSpec:
    """Per-mode Fock cutoff together with the exact excluded Gibbs mass."""

    n_max: int
    tail_bound: float

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError("n_max must be at least 1")

    @classmethod
    def for_occupations(
        cls, n_a: float, n_b: float, n_max: int | None = None, per_mode_tail: float = 1e-12
    ) -> "TruncationSpec":
        """Cutoff for a pair of occupations; defaults to the smallest n_max
        whose per-mode geometric tail is below ``per_mode_tail``."""
        if n_max is None:
            n_max = _default_n_max(n_a, n_b, per_mode_tail)
        return cls(n_max=n_max, tail_bound=_joint_tail(n_a, n_b, n_max))


def gibbs_weights(n: float, n_max: int) -> np.ndarray:
    """Thermal weights p_m = (1-q) q^m, m = 0..n_max, computed in log space."""
    if n < 0.0:
        raise DomainError("occupation must be non-negative")
    if n == 0.0:
        w = np.zeros(n_max + 1)
        w[0] = 1.0
        return w
    log_q = math.log(n) - math.log1p(n)
    m = np.arange(n_max + 1)
    return np.exp(m * log_q - math.log1p(n))


def _chain_unitary(
    offdiag: np.ndarray, strength: float, phase: float, cols: np.ndarray | None = None
) -> np.ndarray:
    """exp(G) for the antihermitian chain generator
    G[j+1, j] = strength*e^{i phase}*offdiag[j], G[j, j+1] = -conj(G[j+1, j]).

    Diagonal phase conjugations reduce G to -i*strength*M with M real
    symmetric tridiagonal, solved by eigh_tridiagonal; the result is unitary
    up to roundoff.  ``cols`` restricts the output to those columns.
    """
    k = offdiag.size + 1
    if k == 1:
        out = np.ones((1, 1), dtype=complex)
        return out if cols is None else out[:, cols]
    lam, vec = scipy.linalg.eigh_tridiagonal(np.zeros(k), offdiag)
    rot = np.exp(-1j * strength * lam)
    j = np.arange(k)
    conj_factor = np.exp(1j * phase * j) * (1j**j)
    if cols is None:
        w = (vec * rot) @ vec.T
        return (conj_factor[:, None] * w) * np.conj(conj_factor)[None, :]
    w = (vec * rot) @ vec[cols, :].T
    return (conj_factor[:, None] * w) * np.conj(conj_factor[cols])[None, :]


def _bs_states(total: int) -> np.ndarray:
    m = np.arange(total + 1)
    return np.stack([m, total - m], axis=1)


def _squeeze_states(charge: int, n_max: int) -> np.ndarray | None:
    m_lo = max(charge, 0)
    m_hi = min(n_max, n_max + charge)
    if m_hi < m_lo:
        return None
    m = np.arange(m_lo, m_hi + 1)
    return np.stack([m, m - charge], axis=1)


def _cubic_states(charge: int, n_max: int) -> np.ndarray | None:
    m_lo = max(0, math.ceil((charge - n_max) / 2))
    m_hi = min(charge // 2, n_max)
    if m_hi < m_lo:
        return None
    m = np.arange(m_lo, m_hi + 1)
    return np.stack([m, charge - 2 * m], axis=1)


def _chain_coupling(kind: StrokeKind, states: np.ndarray):
    """(offdiag, strength, phase) of the chain generator linking the states."""
    m = states[:-1, 0].astype(float)
    n = states[:-1, 1].astype(float)
    if isinstance(kind, BeamSplitter):
        # (m, n) -> (m+1, n-1) with amplitude sqrt((m+1) n)
        off = np.sqrt((m + 1.0) * n)
        return off, kind.theta, kind.phi
    if isinstance(kind, TwoModeSqueeze):
        # pair creation: (m, n) -> (m+1, n+1) with amplitude sqrt((m+1)(n+1))
        off = np.sqrt((m + 1.0) * (n + 1.0))
        return off, kind.r, 0.0
    # (m, n) -> (m+1, n-2) with amplitude sqrt((m+1) n (n-1))
    off = np.sqrt((m + 1.0) * n * (n - 1.0))
    strength = abs(kind.theta_c)
    phase = np.angle(kind.theta_c) if strength > 0 else 0.0
    return off, strength, phase


class Stroke:
    """A unitary stroke on the truncated two-mode space, stored per charge block.

    ``certify=True`` (the default through build_stroke) demands cutoff
    adequacy for every interior initial state regardless of its thermal
    weight; joint_distribution instead certifies only the Gibbs-weighted
    columns it processes, which is the error that actually enters the joint.
    """

    def __init__(self, kind: StrokeKind, trunc: TruncationSpec, certify: bool = True):
        self.kind = kind
        self.trunc = trunc
        self.truncation_defect = 0.0
        if certify and not isinstance(kind, BeamSplitter):
            self.truncation_defect = self._certify()

    # -- block iteration ------------------------------------------------------
    def charges(self) -> range:
        n_max = self.trunc.n_max
        if isinstance(self.kind, BeamSplitter):
            return range(0, 2 * n_max + 1)
        if isinstance(self.kind, TwoModeSqueeze):
            return range(-n_max, n_max + 1)
        return range(0, 3 * n_max + 1)  # cubic: c = 2m + n

    def block_states(self, charge: int, n_max: int | None = None) -> np.ndarray | None:
        n_max = self.trunc.n_max if n_max is None else n_max
        if isinstance(self.kind, BeamSplitter):
            return _bs_states(charge)
        if isinstance(self.kind, TwoModeSqueeze):
            return _squeeze_states(charge, n_max)
        return _cubic_states(charge, n_max)

    def block_unitary(
        self, states: np.ndarray, cols: np.ndarray | None = None
    ) -> np.ndarray:
        off, strength, phase = _chain_coupling(self.kind, states)
        return _chain_unitary(off, strength, phase, cols)

    def block(self, charge: int, n_max: int | None = None):
        """(states, unitary) for one conserved-charge block, or None if empty."""
        states = self.block_states(charge, n_max)
        if states is None:
            return None
        return states, self.block_unitary(states)

    def iter_blocks(self):
        for charge in self.charges():
            blk = self.block(charge)
            if blk is not None:
                yield charge, blk[0], blk[1]

    # -- diagnostics ------------------------------------------------------------
    def unitarity_defect(self) -> float:
        """Max deviation of any block column norm from 1 (roundoff level)."""
        worst = 0.0
        for _, _, u in self.iter_blocks():
            norms = np.linalg.norm(u, axis=0)
            worst = max(worst, float(np.max(np.abs(norms - 1.0))))
        return worst

    def _padded_columns(self, charge: int, states: np.ndarray, cols: np.ndarray):
        """Columns of the block rebuilt at a padded cutoff, on the base rows."""
        states_pad = self.block_states(charge, self.trunc.n_max + ADEQUACY_PAD)
        first = int(np.nonzero((states_pad == states[0]).all(axis=1))[0][0])
        u_pad = self.block_unitary(states_pad, first + cols)
        k = states.shape[0]
        return u_pad[first : first + k, :], u_pad

    def _certify(self) -> float:
        """Truncation adequacy for squeeze/cubic strokes.

        The truncated generator is exactly antihermitian, so its exponential
        is unitary regardless of the cutoff; adequacy is instead certified by
        rebuilding each block with a padded cutoff and comparing the columns
        of interior initial states (total quanta <= n_max/2).
        """
        n_max = self.trunc.n_max
        interior = n_max / 2
        worst = 0.0
        for charge in self.charges():
            states = self.block_states(charge)
            if states is None:
                continue
            totals = states.sum(axis=1)
            cols = np.nonzero(totals <= interior)[0]
            if cols.size == 0:
                continue
            u_cols = self.block_unitary(states, cols)
            ref, u_pad = self._padded_columns(charge, states, cols)
            diff = np.linalg.norm(u_cols - ref, axis=0)
            leak = np.abs(
                np.linalg.norm(u_pad, axis=0) ** 2 - np.linalg.norm(ref, axis=0) ** 2
            )
            worst = max(worst, float(np.max(diff)), float(np.max(leak)))
        if worst > ADEQUACY_TOL:
            raise TruncationError(
                f"stroke truncation defect {worst:.3e} exceeds {ADEQUACY_TOL:.0e}",
                suggested_n_max=int(1.5 * n_max) + 2 * ADEQUACY_PAD,
            )
        return worst

    # -- dense construction (verification route) ---------------------------------
    def dense_unitary(self) -> np.ndarray:
        """exp(G) built on the full product space without using charge blocks.

        Dimension (n_max+1)**2; intended for moderate cutoffs where dense
        exponentiation is feasible.
        """
        n_max = self.trunc.n_max
        d = n_max + 1
        a = np.diag(np.sqrt(np.arange(1.0, d)), 1)
        eye = np.eye(d)
        am = np.kron(a, eye)
        bm = np.kron(eye, a)
        kind = self.kind
        if isinstance(kind, BeamSplitter):
            xi = kind.theta * np.exp(1j * kind.phi)
            gen = xi * am.conj().T @ bm - np.conj(xi) * am @ bm.conj().T
        elif isinstance(kind, TwoModeSqueeze):
            gen = kind.r * (am.conj().T @ bm.conj().T - am @ bm)
        else:
            t = complex(kind.theta_c)
            gen = t * am.conj().T @ bm @ bm - np.conj(t) * am @ bm.conj().T @ bm.conj().T
        if np.allclose(gen.imag, 0.0):
            return scipy.linalg.expm(gen.real).astype(complex)
        return scipy.linalg.expm(gen)


def build_stroke(kind: StrokeKind, trunc: TruncationSpec, certify: bool = True) -> Stroke:
    """Build (and, for squeeze/cubic, certify) a stroke at the given cutoff."""
    if trunc.n_max < 1:
        raise DomainError("n_max must be at least 1")
    return Stroke(kind, trunc, certify=certify)


@dataclass
class FockOracleResult:
    """Joint distribution over per-mode quantum changes (delta_m, delta_n).

    probs[i, j] is the probability of delta_m = i - n_max, delta_n = j - n_max.
    Derived energies follow the bath bookkeeping: heat released by the hot
    bath is q_h = -omega_a*delta_m, by the cold bath q_c = -omega_b*delta_n,
    and w = omega_a*delta_m + omega_b*delta_n.
    """

    probs: np.ndarray
    n_max: int
    omega_a: float
    omega_b: float
    tail_bound: float

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    def total_mass(self) -> float:
        return float(self.probs.sum())

    def _moment_dm(self, k: int) -> float:
        d = self.offsets.astype(float)
        return float((d**k) @ self.probs.sum(axis=1))

    def mean_w(self) -> float:
        d = self.offsets.astype(float)
        return float(
            self.omega_a * d @ self.probs.sum(axis=1)
            + self.omega_b * d @ self.probs.sum(axis=0)
        )

    def var_w(self) -> float:
        d = self.offsets.astype(float)
        w = self.omega_a * d[:, None] + self.omega_b * d[None, :]
        m1 = float((w * self.probs).sum())
        m2 = float((w * w * self.probs).sum())
        return m2 - m1 * m1

    def mean_qh(self) -> float:
        return -self.omega_a * self._moment_dm(1)

    def var_qh(self) -> float:
        m1 = self._moment_dm(1)
        m2 = self._moment_dm(2)
        return self.omega_a**2 * (m2 - m1 * m1)

    def mean_delta_e(self) -> tuple[float, float]:
        """Mean per-mode energy changes (<dE_a>, <dE_b>)."""
        d = self.offsets.astype(float)
        return (
            float(self.omega_a * d @ self.probs.sum(axis=1)),
            float(self.omega_b * d @ self.probs.sum(axis=0)),
        )

    def heat_marginal(self) -> tuple[np.ndarray, np.ndarray]:
        """(n, p) over the heat index n defined by q_h = n*omega_a."""
        marg = self.probs.sum(axis=1)[::-1]  # n = -delta_m
        return self.offsets.copy(), marg

    def off_support_mass(self, charge: tuple[int, int]) -> float:
        """Probability mass off the conserved-charge line ca*dm + cb*dn = 0."""
        ca, cb = charge
        d = self.offsets
        on_line = (ca * d[:, None] + cb * d[None, :]) == 0
        return float(self.probs[~on_line].sum())

    def to_csv(self, path) -> None:
        """delta_m, delta_n, w, q_h, probability, tail_bound for nonzero cells."""
        import csv

        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["delta_m", "delta_n", "w", "q_h", "probability", "tail_bound"])
            idx = np.argwhere(self.probs > 0.0)
            for i, j in idx:
                dm = int(i - self.n_max)
                dn = int(j - self.n_max)
                w = self.omega_a * dm + self.omega_b * dn
                qh = -self.omega_a * dm
                writer.writerow(
                    [
                        dm,
                        dn,
                        f"{w:.17g}",
                        f"{qh:.17g}",
                        f"{self.probs[i, j]:.17g}",
                        f"{self.tail_bound:.17g}",
                    ]
                )


def _resolve_stroke(stroke_or_kind, trunc: TruncationSpec | None) -> Stroke:
    if isinstance(stroke_or_kind, Stroke):
        return stroke_or_kind
    if trunc is None:
        raise DomainError("a TruncationSpec is required when passing a stroke kind")
    # adequacy of weighted columns is certified per call by joint_distribution
    return build_stroke(stroke_or_kind, trunc, certify=False)


def joint_distribution(
    stroke_or_kind,
    n_a: float,
    n_b: float,
    trunc: TruncationSpec | None = None,
    *,
    omega_a: float = 1.0,
    omega_b: float = 1.0,
    dense: bool = False,
    tail_tol: float | None = None,
    certify: bool = True,
) -> FockOracleResult:
    """Enumerate the two-point-measurement joint over (delta_m, delta_n).

    Initial states are Gibbs-weighted products truncated per mode; transition
    probabilities are squared stroke amplitudes.  ``dense=True`` uses the
    full product-space exponential instead of charge blocks (slower, but
    makes conserved-charge support an observed property rather than a
    structural one).  The reported tail bound includes both the analytic
    Gibbs tail and any initial mass skipped by the weight floor.  For
    squeeze/cubic strokes the Gibbs-weighted truncation distortion of the
    block route is certified against a padded cutoff unless ``certify`` is
    False.
    """
    stroke = _resolve_stroke(stroke_or_kind, trunc)
    trunc = stroke.trunc
    n_max = trunc.n_max
    tail = _joint_tail(n_a, n_b, n_max)
    if tail_tol is not None and tail > tail_tol:
        raise TruncationError(
            f"Gibbs tail {tail:.3e} exceeds requested tolerance {tail_tol:.1e}",
            suggested_n_max=_default_n_max(n_a, n_b, per_mode_tail=tail_tol / 2.0),
        )
    wa = gibbs_weights(n_a, n_max)
    wb = gibbs_weights(n_b, n_max)
    retained = wa.sum() * wb.sum()
    size = 2 * n_max + 1
    probs = np.zeros((size, size))
    processed = 0.0

    if dense:
        u = stroke.dense_unitary()
        p2 = np.abs(u) ** 2
        d = n_max + 1
        for m in range(d):
            for n in range(d):
                w0 = wa[m] * wb[n]
                if w0 < WEIGHT_FLOOR:
                    continue
                processed += w0
                col = p2[:, m * d + n].reshape(d, d)
                probs[n_max - m : 2 * n_max + 1 - m, n_max - n : 2 * n_max + 1 - n] += w0 * col
    else:
        ca, cb = stroke.kind.charge
        check_adequacy = certify and not isinstance(stroke.kind, BeamSplitter)
        stroke_defect = 0.0
        for charge in stroke.charges():
            states = stroke.block_states(charge)
            if states is None:
                continue
            m0 = states[:, 0]
            n0 = states[:, 1]
            keep = (m0 <= n_max) & (n0 <= n_max)
            w0 = np.where(keep, wa[np.minimum(m0, n_max)] * wb[np.minimum(n0, n_max)], 0.0)
            cols = np.nonzero(w0 >= WEIGHT_FLOOR)[0]
            if cols.size == 0:
                continue
            u_cols = stroke.block_unitary(states, cols)
            if check_adequacy:
                # Gibbs-weighted l1 distortion of the joint from cutting the
                # generator: sum_i w_i * 2*||col_i(n_max) - col_i(n_max+pad)||
                ref, _ = stroke._padded_columns(charge, states, cols)
                col_diff = np.linalg.norm(u_cols - ref, axis=0)
                stroke_defect += float(2.0 * w0[cols] @ col_diff)
            p2 = np.abs(u_cols) ** 2
            k = states.shape[0]
            line = np.zeros(2 * k - 1)
            for jj, j in enumerate(cols):
                # every chain advances m by one per link, so delta_m = row - j
                line[k - 1 - j : 2 * k - 1 - j] += w0[j] * p2[:, jj]
                processed += w0[j]
            offsets = np.nonzero(line)[0]
            for pos in offsets:
                dm = int(pos) - (k - 1)
                dn = -ca * dm // cb  # exact: dn is determined by the charge line
                probs[dm + n_max, dn + n_max] += line[pos]
        if check_adequacy and stroke_defect > ADEQUACY_TOL:
            raise TruncationError(
                f"cutting the stroke generator at n_max={n_max} distorts the "
                f"joint by {stroke_defect:.3e} in l1",
                suggested_n_max=int(1.5 * n_max) + 2 * ADEQUACY_PAD,
            )

    skipped = max(retained - processed, 0.0)
    return FockOracleResult(
        probs=probs,
        n_max=n_max,
        omega_a=omega_a,
        omega_b=omega_b,
        tail_bound=tail + skipped,
    )


def char_fn_oracle(
    stroke_or_kind,
    n_a: float,
    n_b: float,
    omega_a: float,
    omega_b: float,
    lam,
    mu,
    trunc: TruncationSpec | None = None,
    *,
    route: str = "joint",
) -> complex:
    """Characteristic function <exp(i*lam*W + i*mu*Q_H)> from the oracle.

    route="joint" sums the enumerated joint (any stroke; complex arguments
    allowed).  route="overlap" evaluates the trace of U_theta^dag U_xi
    against the initial Gibbs state, where U_xi is the same mixer with its
    coupling phase advanced by lam*(omega_a - omega_b) - mu*omega_a; it is
    valid for the beam splitter with real arguments and exercises the
    conserved-charge algebra instead of the two-point enumeration.
    """
    stroke = _resolve_stroke(stroke_or_kind, trunc)
    if route == "overlap":
        kind = stroke.kind
        if not isinstance(kind, BeamSplitter):
            raise DomainError("the overlap route applies to the beam splitter only")
        shift = float(lam) * (omega_a - omega_b) - float(mu) * omega_a
        rotated = BeamSplitter(theta=kind.theta, phi=kind.phi + shift)
        n_max = stroke.trunc.n_max
        wa = gibbs_weights(n_a, n_max)
        wb = gibbs_weights(n_b, n_max)
        xi_stroke = Stroke(rotated, stroke.trunc, certify=False)
        acc = 0.0 + 0.0j
        for total in range(0, 2 * n_max + 1):
            states = _bs_states(total)
            m0 = states[:, 0]
            n0 = states[:, 1]
            keep = (m0 <= n_max) & (n0 <= n_max)
            w0 = np.where(keep, wa[np.minimum(m0, n_max)] * wb[np.minimum(n0, n_max)], 0.0)
            cols = np.nonzero(w0 >= WEIGHT_FLOOR)[0]
            if cols.size == 0:
                continue
            u_theta = stroke.block_unitary(states, cols)
            u_xi = xi_stroke.block_unitary(states, cols)
            acc += np.sum(w0[cols] * np.sum(np.conj(u_theta) * u_xi, axis=0))
        return complex(acc)

    if route != "joint":
        raise DomainError(f"unknown characteristic-function route {route!r}")
    result = joint_distribution(stroke, n_a, n_b)
    d = result.offsets.astype(float)
    fa = np.exp((1j * lam * omega_a - 1j * mu * omega_a) * d)
    fb = np.exp(1j * lam * omega_b * d)
    return complex(fa @ result.probs @ fb)
