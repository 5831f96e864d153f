"""Discrimination strategies built on the map dynamics.

Strategy A (s = 0) relies on the Fatou dynamics of z^2: states on opposite
sides of the equator run to opposite poles.  Strategy B (s = i) watches the
K3 series of both members of a pair and declares them distinguishable once the
difference clears a threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bloch import (
    SIGMA_X,
    ObservableAxis,
    QubitArray,
    StatePair,
    check_precision,
    equator_pairs,
    fidelity_array,
    pairs_at_delta,
)
from .circuit import success_probability_array
from .correlations import eigen_transitions, k3_ensemble
from .dynamics import MapParams, orbit_arrays
from .ensemble import EnsembleSpec, PairEnsemble, RxySeries, critical_iteration, rxy_vs_iteration, sample_ensemble
from .errors import NotReached

NOT_REACHED = -1
OUTSIDE = -2
DEFAULT_THRESHOLD = 1e-2
HIST_BINS = 10


# ---------------------------------------------------------------------------
# Strategy A
# ---------------------------------------------------------------------------


def fatou_straddle_ensemble(delta: float, size: int = 1000) -> PairEnsemble:
    """Pairs at colatitudes pi/2 -+ delta/2, azimuths on an even grid."""
    phi = 2 * np.pi * (np.arange(size) + 0.5) / size
    a, b = equator_pairs(delta, phi)
    theta = np.full(size, math.pi / 2 - delta / 2)
    return PairEnsemble(a, b, theta, phi, delta)


def fatou_band_ensemble(delta: float, size: int = 1000, seed: int = 0) -> PairEnsemble:
    """Base colatitude uniform in (pi/2 - delta, pi/2); partner at +delta.

    Roughly half of these pairs cross the equator, the rest stay in the
    southern hemisphere together.
    """
    rng = np.random.default_rng(seed)
    theta = rng.uniform(math.pi / 2 - delta, math.pi / 2 + delta, size)
    phi = rng.uniform(0.0, 2 * np.pi, size)
    a, b = pairs_at_delta(theta, phi, delta)
    return PairEnsemble(a, b, theta, phi, delta)


def straddles(ens: PairEnsemble) -> np.ndarray:
    """True where base and partner sit in different hemispheres (double-double sign)."""
    return ens.base.upper_hemisphere() != ens.partner.upper_hemisphere()


@dataclass
class StrategyAResult:
    n: np.ndarray
    mean_fidelity: np.ndarray
    std_fidelity: np.ndarray
    bin_edges: np.ndarray
    histograms: dict[int, np.ndarray]  # iteration -> population fraction per bin
    straddle: np.ndarray
    orthogonal: dict[int, np.ndarray]  # iteration -> mask of pairs in the last bin

    def orthogonal_fraction(self, n: int) -> float:
        return float(self.histograms[n][-1])


def strategy_a_run(
    ens: PairEnsemble,
    n_max: int = 60,
    params: MapParams = MapParams(0),
    precision: str = "extended",
    snapshots: tuple[int, ...] | None = None,
    bins: int = HIST_BINS,
) -> StrategyAResult:
    check_precision(precision)
    snaps = tuple(sorted(set(snapshots if snapshots is not None else (0, n_max // 4, n_max // 2, n_max))))
    if any(k < 0 or k > n_max for k in snaps):
        raise ValueError("snapshots must lie in [0, n_max]")
    edges = np.linspace(0.0, 1.0, bins + 1)
    mean = np.empty(n_max + 1)
    std = np.empty(n_max + 1)
    hist, orth = {}, {}
    base, partner = ens.base, ens.partner
    if precision == "standard":
        base, partner = base.rounded(), partner.rounded()
    for k, (a, b) in enumerate(zip(orbit_arrays(base, params, n_max, precision), orbit_arrays(partner, params, n_max, precision))):
        F = fidelity_array(a, b)
        mean[k], std[k] = F.mean(), F.std()
        if k in snaps:
            d = np.abs(a.colatitude() - b.colatitude()) / np.pi
            counts, _ = np.histogram(np.clip(d, 0.0, 1.0), bins=edges)
            hist[k] = counts / len(d)
            orth[k] = d >= edges[-2]
    return StrategyAResult(np.arange(n_max + 1), mean, std, edges, hist, straddles(ens), orth)


# ---------------------------------------------------------------------------
# Strategy B
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscriminationVerdict:
    distinguishable: bool
    first_nonzero_iteration: int | None  # None when the threshold was never cleared
    k3_difference_series: np.ndarray  # index n - 1 holds Delta K3(n)
    threshold: float


def _first_crossing(diff: np.ndarray, threshold: float) -> np.ndarray:
    """First n >= 1 with |diff| > threshold for each row of (L, n_max); -1 if none."""
    hit = np.abs(diff) > threshold
    first = np.argmax(hit, axis=1) + 1
    return np.where(hit.any(axis=1), first, NOT_REACHED)


def k3_difference(
    a: QubitArray, b: QubitArray, axis: ObservableAxis, params: MapParams, n_max: int,
    precision: str = "extended", transitions: np.ndarray | None = None,
) -> np.ndarray:
    """K3 of ``a`` minus K3 of ``b`` for n = 1..n_max, shape (L, n_max)."""
    T = eigen_transitions(axis, params, 2 * n_max, precision) if transitions is None else transitions
    ka = k3_ensemble(a, axis, params, n_max, precision, T).k3[:, 1:]
    kb = k3_ensemble(b, axis, params, n_max, precision, T).k3[:, 1:]
    return ka - kb


def strategy_b_discriminate(
    pair: StatePair,
    axis: ObservableAxis = SIGMA_X,
    params: MapParams = MapParams(1j),
    n_max: int = 100,
    threshold: float = DEFAULT_THRESHOLD,
    precision: str = "extended",
) -> DiscriminationVerdict:
    if not threshold >= 0:
        raise ValueError("threshold must be >= 0")
    diff = k3_difference(
        QubitArray.from_qubits([pair.a]), QubitArray.from_qubits([pair.b]), axis, params, n_max, precision
    )
    first = int(_first_crossing(diff, threshold)[0])
    reached = first != NOT_REACHED
    return DiscriminationVerdict(reached, first if reached else None, diff[0], threshold)


@dataclass
class HeatmapGrid:
    """First distinguishable iteration per cell of the unit disk |z| <= 1.

    The disk is the southern hemisphere chart; ``counts`` uses ``NOT_REACHED``
    and ``OUTSIDE`` as sentinels.  Row index follows ``y`` (imaginary part),
    column index follows ``x``.
    """

    x: np.ndarray
    y: np.ndarray
    counts: np.ndarray
    delta: float
    params: MapParams
    threshold: float
    n_max: int
    fixed_point: complex = 1 + 0j

    @property
    def inside(self) -> np.ndarray:
        return self.counts != OUTSIDE

    def cell_of(self, z: complex) -> tuple[int, int]:
        return int(np.argmin(np.abs(self.y - z.imag))), int(np.argmin(np.abs(self.x - z.real)))


def resolution_heatmap(
    delta: float,
    axis: ObservableAxis = SIGMA_X,
    params: MapParams = MapParams(1j),
    resolution: int = 101,
    n_max: int = 100,
    threshold: float = DEFAULT_THRESHOLD,
    precision: str = "extended",
) -> HeatmapGrid:
    """Each disk cell anchors a pair whose partner sits delta closer to the north pole."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if not 0 <= delta <= math.pi / 2:
        raise ValueError("delta must lie in [0, pi/2]")
    x = np.linspace(-1.0, 1.0, resolution)
    y = np.linspace(-1.0, 1.0, resolution)
    X, Y = np.meshgrid(x, y)
    Z = X + 1j * Y
    inside = np.abs(Z) <= 1.0
    z = Z[inside]
    theta = 2 * np.arctan2(1.0, np.abs(z))
    phi = np.angle(z)
    partner, cell = pairs_at_delta(theta - delta, phi, delta)
    diff = k3_difference(cell, partner, axis, params, n_max, precision)
    counts = np.full(Z.shape, OUTSIDE, dtype=np.int64)
    counts[inside] = _first_crossing(diff, threshold)
    return HeatmapGrid(x, y, counts, float(delta), params, threshold, n_max)


# ---------------------------------------------------------------------------
# Patch optimisation
# ---------------------------------------------------------------------------


@dataclass
class PatchResult:
    theta_max: float
    delta: float
    rxy: RxySeries
    critical_iteration: int | None
    min_success: float
    cumulative_bound: float | None  # min_success ** critical_iteration
    mean_cumulative_success: float | None  # actual product along orbits, averaged
    ensemble_size: int = 0
    notes: list[str] = field(default_factory=list)


def min_patch_success(theta_max: float, params: MapParams, n_theta: int = 257, n_phi: int = 64) -> float:
    """Smallest single-step success probability over the cap theta <= theta_max."""
    th = np.linspace(0.0, theta_max, n_theta)
    ph = 2 * np.pi * np.arange(n_phi) / n_phi
    T, P = np.meshgrid(th, ph, indexing="ij")
    states = QubitArray.from_sphere(T.ravel(), P.ravel())
    return float(success_probability_array(states, params).min())


def cumulative_success(states: QubitArray, params: MapParams, n: int, precision: str = "extended") -> np.ndarray:
    """Product of the success probabilities over steps 0..n-1 for each orbit."""
    out = np.ones(len(states))
    if n <= 0:
        return out
    for cur in orbit_arrays(states, params, n - 1, precision):
        out *= success_probability_array(cur, params)
    return out


def patch_success_optimization(
    theta_max: float = math.pi / 10,
    delta: float = 1e-8,
    axis: ObservableAxis = SIGMA_X,
    params: MapParams = MapParams(1j),
    n_max: int = 100,
    size: int = 10_000,
    seed: int = 1,
    precision: str = "extended",
    epsilon: float = 0.05,
    window: int = 10,
) -> PatchResult:
    spec = EnsembleSpec(size=size, delta=delta, region="patch", theta_max=theta_max, sampling="uniform", seed=seed)
    ens = sample_ensemble(spec)
    series = rxy_vs_iteration(ens, axis, params, n_max, precision)
    pmin = min_patch_success(theta_max, params)
    notes = []
    try:
        nc = critical_iteration(series.r, epsilon, window)
    except NotReached as exc:
        nc = None
        notes.append(str(exc))
    if nc is None:
        bound = mean_cum = None
    else:
        bound = pmin**nc
        mean_cum = float(cumulative_success(ens.base, params, nc, precision).mean())
    return PatchResult(theta_max, delta, series, nc, pmin, bound, mean_cum, len(ens), notes)


# ---------------------------------------------------------------------------
# Precision probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeRow:
    digits: int
    delta: float
    precision: str
    critical_iteration: int | None


def separation_iteration(a: QubitArray, b: QubitArray, params: MapParams, n_max: int, precision: str) -> int | None:
    """First n with |theta_1 - theta_2| / pi > 0.5 for a single pair."""
    for k, (x, y) in enumerate(zip(orbit_arrays(a, params, n_max, precision), orbit_arrays(b, params, n_max, precision))):
        if abs(x.colatitude()[0] - y.colatitude()[0]) / np.pi > 0.5:
            return k
    return None


def machine_precision_probe(
    digits=tuple(range(4, 17)),
    precisions=("standard", "extended"),
    params: MapParams = MapParams(0),
    n_max: int = 200,
    phi: float = 0.0,
) -> list[ProbeRow]:
    """Critical iteration for equator pairs separated by 10^-p, per working precision.

    In standard mode the pair is rounded to binary64 before iterating, so
    separations below the binary64 spacing collapse to a single state.
    """
    digits = list(digits)
    precisions = list(precisions)
    if len(digits) * len(precisions) < 2:
        raise ValueError("need at least two probe settings")
    rows = []
    for prec in precisions:
        check_precision(prec)
        for p in digits:
            delta = 10.0 ** (-p)
            a, b = equator_pairs(delta, phi)
            if prec == "standard":
                a, b = a.rounded(), b.rounded()
            rows.append(ProbeRow(int(p), delta, prec, separation_iteration(a, b, params, n_max, prec)))
    return rows
