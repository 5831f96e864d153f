"""Two-time correlations and the three-time LG parameter under the map dynamics.

Measurements are projective on the eigenbasis of ``Q = n . sigma``; between
measurements the collapsed state is evolved by the map and renormalised
(post-selection).  With t1 = 0, t2 = n, t3 = 2n the joint probability of
outcomes (qi, qj) factorises as

    P_ij(qi, qj) = p(qi | f^{t_i} psi0) * p(qj | f^{t_j - t_i} |qi>)

where every conditional probability is taken on the normalised evolved
state.  The conditional factors depend only on the axis, so they are computed
once per axis and shared by every initial state.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bloch import SIGMA_X, ObservableAxis, ProjectiveQubit, QubitArray, check_precision
from .dynamics import MapParams, orbit_bloch

OUTCOMES = np.array([1.0, -1.0])  # index 0 <-> +1, index 1 <-> -1
PAIRS = ((1, 2), (2, 3), (1, 3))
LGI_TOL = 1e-12
LUDERS_BOUND = 1.5


def outcome_probabilities(bloch: np.ndarray, axis: ObservableAxis) -> np.ndarray:
    """p(+1), p(-1) for Bloch vectors of shape (..., 3); returns (..., 2)."""
    proj = bloch @ np.asarray(axis.vector)
    plus = 0.5 * (1.0 + proj)
    return np.stack([plus, 1.0 - plus], axis=-1)


def eigen_transitions(
    axis: ObservableAxis, params: MapParams, k_max: int, precision: str = "extended"
) -> np.ndarray:
    """T[k, a, b] = p(outcome b after k steps | collapsed onto outcome a)."""
    plus, minus = axis.eigenstates()
    b = orbit_bloch(QubitArray.from_qubits([plus, minus]), params, k_max, precision)
    return np.transpose(outcome_probabilities(b, axis), (1, 0, 2))


@dataclass(frozen=True)
class JointProbabilityTable:
    pair: tuple[int, int]
    n: int
    first: np.ndarray  # p(q_i) at t_i, shape (2,)
    conditional: np.ndarray  # p(q_j | q_i), shape (2, 2), rows sum to 1

    @property
    def joint(self) -> np.ndarray:
        return self.first[:, None] * self.conditional


def two_time_correlation(table: JointProbabilityTable) -> float:
    """C = P(++) - P(+-) - P(-+) + P(--)."""
    return float(OUTCOMES @ table.joint @ OUTCOMES)


def _times(pair: tuple[int, int], n: int) -> tuple[int, int]:
    t = {1: 0, 2: n, 3: 2 * n}
    i, j = pair
    if pair not in PAIRS:
        raise ValueError(f"pair must be one of {PAIRS}")
    return t[i], t[j]


def joint_probabilities(
    initial: ProjectiveQubit,
    axis: ObservableAxis,
    params: MapParams,
    n: int,
    pair: tuple[int, int],
    precision: str = "extended",
) -> JointProbabilityTable:
    if n < 1:
        raise ValueError("n must be >= 1")
    ti, tj = _times(tuple(pair), n)
    b = orbit_bloch(QubitArray.from_qubits([initial]), params, ti, precision)[0, ti]
    T = eigen_transitions(axis, params, tj - ti, precision)[tj - ti]
    return JointProbabilityTable(tuple(pair), n, outcome_probabilities(b, axis), T)


@dataclass(frozen=True)
class K3Record:
    n: int
    C12: float
    C23: float
    C13: float
    K3: float
    reduced: float  # <Q> after n steps


@dataclass
class K3Ensemble:
    """Per-state K3 data; column n of ``k3`` is iteration n (n = 0 from <Q>)."""

    k3: np.ndarray  # (L, n_max+1)
    c12: np.ndarray  # (L, n_max+1), column 0 is nan
    c23: np.ndarray
    c13: np.ndarray
    reduced: np.ndarray  # (L, n_max+1)
    axis: ObservableAxis = field(default=SIGMA_X)

    def records(self, row: int = 0) -> list[K3Record]:
        return [
            K3Record(n, self.c12[row, n], self.c23[row, n], self.c13[row, n], self.k3[row, n], self.reduced[row, n])
            for n in range(1, self.k3.shape[1])
        ]


def k3_ensemble(
    states: QubitArray,
    axis: ObservableAxis,
    params: MapParams,
    n_max: int,
    precision: str = "extended",
    transitions: np.ndarray | None = None,
) -> K3Ensemble:
    """Full three-time pipeline for every state of the batch, n = 1..n_max."""
    check_precision(precision)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    T = eigen_transitions(axis, params, 2 * n_max, precision) if transitions is None else transitions
    E = T @ OUTCOMES  # E[k, a] = conditional mean of the later outcome
    p = outcome_probabilities(orbit_bloch(states, params, n_max, precision), axis)  # (L, n+1, 2)
    ns = np.arange(1, n_max + 1)
    L = len(states)
    c12 = np.full((L, n_max + 1), np.nan)
    c23 = np.full_like(c12, np.nan)
    c13 = np.full_like(c12, np.nan)
    w0 = p[:, 0, :] * OUTCOMES  # (L, 2)
    c12[:, 1:] = w0 @ E[ns].T
    c13[:, 1:] = w0 @ E[2 * ns].T
    c23[:, 1:] = np.einsum("lna,na->ln", p[:, 1:, :] * OUTCOMES, E[ns])
    reduced = p[..., 0] - p[..., 1]
    k3 = reduced.copy()
    k3[:, 1:] = c12[:, 1:] + c23[:, 1:] - c13[:, 1:]
    return K3Ensemble(k3, c12, c23, c13, reduced, axis)


def k3_series(
    initial: ProjectiveQubit,
    axis: ObservableAxis,
    params: MapParams,
    n_max: int,
    precision: str = "extended",
) -> list[K3Record]:
    return k3_ensemble(QubitArray.from_qubits([initial]), axis, params, n_max, precision).records()


@dataclass(frozen=True)
class FaultyK3Result:
    records: list[K3Record]
    lgi_violations: list[int]  # n with |K3| > 1
    luders_violations: list[int]  # n with K3 > 1.5


def violation_mask(k3: np.ndarray, bound: float = 1.0) -> np.ndarray:
    return np.abs(k3) > bound + LGI_TOL


def faulty_axis(axis_error: tuple[float, float], base: ObservableAxis = SIGMA_X) -> ObservableAxis:
    dtheta, dphi = axis_error
    if abs(dtheta) >= np.pi / 4 or abs(dphi) >= np.pi / 4:
        raise ValueError("axis error must be below pi/4")
    if dtheta == 0 and dphi == 0:
        return base
    return base.perturbed(dtheta, dphi)


def faulty_k3_series(
    initial: ProjectiveQubit,
    axis_error: tuple[float, float],
    params: MapParams,
    n_max: int,
    precision: str = "extended",
    base: ObservableAxis = SIGMA_X,
) -> FaultyK3Result:
    axis = faulty_axis(axis_error, base)
    recs = k3_series(initial, axis, params, n_max, precision)
    return FaultyK3Result(
        recs,
        [r.n for r in recs if abs(r.K3) > 1 + LGI_TOL],
        [r.n for r in recs if r.K3 > LUDERS_BOUND + LGI_TOL],
    )
