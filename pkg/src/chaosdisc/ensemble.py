"""Ensembles of state pairs and the statistics computed over them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bloch import SIGMA_X, ObservableAxis, QubitArray, StatePair, check_precision, fidelity_array, pairs_at_delta
from .correlations import k3_ensemble, eigen_transitions
from .dynamics import MapParams, orbit_arrays
from .errors import NotReached, ZeroVariance

REGIONS = ("whole", "patch", "band")
SAMPLINGS = ("grid", "angle-grid", "uniform")


@dataclass(frozen=True)
class EnsembleSpec:
    """Where and how base states are drawn.

    ``grid`` is an equal-area lattice (equal steps in cos theta and phi),
    ``angle-grid`` uses equal steps in theta and phi, ``uniform`` draws
    area-uniform points from ``seed``.  Grid modes need a square ``size``.
    """

    size: int = 10_000
    delta: float = 1e-1
    region: str = "whole"
    theta_min: float = 0.0
    theta_max: float = math.pi
    sampling: str = "grid"
    seed: int = 0

    def __post_init__(self):
        if self.size < 2:
            raise ValueError("ensemble size must be >= 2")
        if not self.delta >= 0:
            raise ValueError("delta must be >= 0")
        if self.region not in REGIONS:
            raise ValueError(f"region must be one of {REGIONS}")
        if self.sampling not in SAMPLINGS:
            raise ValueError(f"sampling must be one of {SAMPLINGS}")
        if not 0.0 <= self.theta_min < self.theta_max <= math.pi:
            raise ValueError("need 0 <= theta_min < theta_max <= pi")
        if self.sampling != "uniform" and math.isqrt(self.size) ** 2 != self.size:
            raise ValueError(f"{self.sampling} sampling needs a square size, got {self.size}")

    @property
    def bounds(self) -> tuple[float, float]:
        if self.region == "whole":
            return 0.0, math.pi
        if self.region == "patch":
            return 0.0, self.theta_max
        return self.theta_min, self.theta_max


@dataclass
class PairEnsemble:
    base: QubitArray
    partner: QubitArray
    theta: np.ndarray
    phi: np.ndarray
    delta: float
    skipped: int = 0
    spec: EnsembleSpec | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.base)

    def pairs(self) -> list[StatePair]:
        return [StatePair(self.base.qubit(i), self.partner.qubit(i), self.delta) for i in range(len(self))]


def _grid(spec: EnsembleSpec) -> tuple[np.ndarray, np.ndarray]:
    m = math.isqrt(spec.size)
    lo, hi = spec.bounds
    k = (np.arange(m) + 0.5) / m
    if spec.sampling == "grid":
        theta = np.arccos(np.cos(lo) + (np.cos(hi) - np.cos(lo)) * k)
    else:
        theta = lo + (hi - lo) * k
    phi = 2 * np.pi * k
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    return th.ravel(), ph.ravel()


def _uniform(spec: EnsembleSpec) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.bounds
    hi_eff = min(hi, math.pi - spec.delta)
    if hi_eff <= lo:
        raise ValueError("region leaves no room for partners at this delta")
    theta = np.empty(0)
    phi = np.empty(0)
    while len(theta) < spec.size:
        u = rng.uniform(math.cos(hi), math.cos(lo), spec.size)
        p = rng.uniform(0.0, 2 * np.pi, spec.size)
        t = np.arccos(u)
        keep = t + spec.delta <= math.pi  # resample partners that would pass the south pole
        theta = np.concatenate([theta, t[keep]])
        phi = np.concatenate([phi, p[keep]])
    return theta[: spec.size], phi[: spec.size]


def sample_ensemble(spec: EnsembleSpec) -> PairEnsemble:
    if spec.sampling == "uniform":
        theta, phi = _uniform(spec)
        skipped = 0
    else:
        theta, phi = _grid(spec)
        keep = theta + spec.delta <= math.pi
        skipped = int(np.count_nonzero(~keep))
        theta, phi = theta[keep], phi[keep]
    base, partner = pairs_at_delta(theta, phi, spec.delta)
    return PairEnsemble(base, partner, theta, phi, spec.delta, skipped, spec)


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


def pearson_rxy(X, Y) -> float:
    """Pearson correlation of two equally long samples.

    Same value as the raw-sum formula, evaluated on centred data to avoid the
    cancellation in ``L sum x^2 - (sum x)^2``.
    """
    x = np.asarray(X, dtype=float)
    y = np.asarray(Y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("X and Y must be 1-d and of equal length")
    if len(x) < 2:
        raise ValueError("need at least two samples")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("zero variance in X or Y")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def pearson_columns(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Column-wise Pearson r for (L, m) matrices; nan where a column is constant."""
    dx = X - X.mean(axis=0)
    dy = Y - Y.mean(axis=0)
    sxx = np.einsum("ij,ij->j", dx, dx)
    syy = np.einsum("ij,ij->j", dy, dy)
    sxy = np.einsum("ij,ij->j", dx, dy)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = sxy / np.sqrt(sxx * syy)
    r[(sxx == 0) | (syy == 0)] = np.nan
    return np.clip(r, -1.0, 1.0)


@dataclass
class RxySeries:
    n: np.ndarray
    r: np.ndarray  # nan where variance vanished
    zero_variance: list[int]
    ensemble_size: int


def rxy_from_k3(k3_base: np.ndarray, k3_partner: np.ndarray) -> RxySeries:
    r = pearson_columns(k3_base, k3_partner)
    n = np.arange(k3_base.shape[1])
    return RxySeries(n, r, [int(i) for i in n[np.isnan(r)]], k3_base.shape[0])


def _ensemble(spec_or_ens) -> PairEnsemble:
    return spec_or_ens if isinstance(spec_or_ens, PairEnsemble) else sample_ensemble(spec_or_ens)


def rxy_vs_iteration(
    spec: EnsembleSpec | PairEnsemble,
    axis: ObservableAxis = SIGMA_X,
    params: MapParams = MapParams(1j),
    n_max: int = 100,
    precision: str = "extended",
) -> RxySeries:
    """r_XY between base and partner K3 values at each iteration 0..n_max."""
    ens = _ensemble(spec)
    T = eigen_transitions(axis, params, 2 * n_max, precision)
    kx = k3_ensemble(ens.base, axis, params, n_max, precision, T).k3
    ky = k3_ensemble(ens.partner, axis, params, n_max, precision, T).k3
    return rxy_from_k3(kx, ky)


def fidelity_matrix(ens: PairEnsemble, params: MapParams, n_max: int, precision: str = "extended") -> np.ndarray:
    check_precision(precision)
    out = np.empty((len(ens), n_max + 1))
    for k, (a, b) in enumerate(
        zip(orbit_arrays(ens.base, params, n_max, precision), orbit_arrays(ens.partner, params, n_max, precision))
    ):
        out[:, k] = fidelity_array(a, b)
    return out


def average_fidelity_vs_iteration(
    spec: EnsembleSpec | PairEnsemble,
    params: MapParams = MapParams(1j),
    n_max: int = 100,
    precision: str = "extended",
) -> tuple[np.ndarray, np.ndarray]:
    """Per-iteration mean and standard deviation of the pair fidelity."""
    F = fidelity_matrix(_ensemble(spec), params, n_max, precision)
    return F.mean(axis=0), F.std(axis=0)


def critical_iteration(series, epsilon: float = 0.05, window: int = 10) -> int:
    """Smallest n with |r(m)| < epsilon for every m in [n, n + window)."""
    r = np.asarray(series, dtype=float)
    if len(r) <= window:
        raise ValueError("series must be longer than the window")
    ok = np.abs(r) < epsilon  # nan compares False
    run = 0
    for m, good in enumerate(ok):
        run = run + 1 if good else 0
        if run >= window:
            return m - window + 1
    raise NotReached(f"|r| < {epsilon} never held for {window} consecutive iterations")
