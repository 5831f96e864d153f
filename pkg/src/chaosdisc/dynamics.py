"""The quadratic conformal map family f(z) = (z^2 + s) / (s z^2 + 1).

States are pushed through the homogeneous form
``(a, b) -> (a^2 + s b^2, s a^2 + b^2)``, which is defined at ``z = inf``
and never overflows because every image is rescaled by an exact power of two.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .bloch import (
    INFINITY,
    ObservableAxis,
    ProjectiveQubit,
    QubitArray,
    check_precision,
    chordal_array,
    is_infinite,
    to_state,
)
from .ddarith import DDComplex
from .errors import DegenerateImage


@dataclass(frozen=True)
class MapParams:
    s: complex = 1j

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))

    def f(self, z: complex) -> complex:
        """Affine-chart evaluation with explicit handling of infinity."""
        s = self.s
        if is_infinite(z):
            return INFINITY if s == 0 else 1 / s
        den = s * z * z + 1
        num = z * z + s
        if den == 0:
            return INFINITY
        return num / den

    def derivative(self, z: complex) -> complex:
        s = self.s
        return 2 * z * (1 - s * s) / (s * z * z + 1) ** 2


def _step(states: QubitArray, s: complex, precision: str) -> QubitArray:
    if precision == "standard":
        a = states.z1.to_complex()
        b = states.z2.to_complex()
        a, b = a * a, b * b
        out = QubitArray(DDComplex(a + s * b), DDComplex(s * a + b))
    else:
        a = states.z1.square()
        b = states.z2.square()
        out = QubitArray(a + b.scale(s), a.scale(s) + b)
    dead = (out.z1.hi == 0) & (out.z2.hi == 0)
    if np.any(dead):
        idx = int(np.flatnonzero(dead)[0])
        raise DegenerateImage(f"state {idx} mapped to (0, 0)", index=idx)
    return out.canonical()


def apply_map_array(states: QubitArray, params: MapParams, precision: str = "standard") -> QubitArray:
    check_precision(precision)
    return _step(states, params.s, precision)


def orbit_arrays(
    states: QubitArray, params: MapParams, n: int, precision: str = "standard"
) -> Iterator[QubitArray]:
    """Yield the batch at iterations 0, 1, ..., n."""
    check_precision(precision)
    cur = states.canonical()
    yield cur
    for k in range(1, n + 1):
        try:
            cur = _step(cur, params.s, precision)
        except DegenerateImage as exc:
            raise DegenerateImage(str(exc), iteration=k, index=exc.index) from None
        yield cur


def iterate_array(states: QubitArray, params: MapParams, n: int, precision: str = "standard") -> QubitArray:
    for cur in orbit_arrays(states, params, n, precision):
        pass
    return cur


def orbit_bloch(states: QubitArray, params: MapParams, n: int, precision: str = "standard") -> np.ndarray:
    """Bloch vectors along the orbits, shape (N, n+1, 3)."""
    out = np.empty((len(states), n + 1, 3))
    for k, cur in enumerate(orbit_arrays(states, params, n, precision)):
        out[:, k] = cur.bloch()
    return out


@dataclass(frozen=True)
class Orbit:
    points: list[ProjectiveQubit]
    params: MapParams
    precision: str = "standard"

    def __len__(self):
        return len(self.points)

    @property
    def final(self) -> ProjectiveQubit:
        return self.points[-1]


def apply_map(state: ProjectiveQubit, params: MapParams, precision: str = "standard") -> ProjectiveQubit:
    return apply_map_array(QubitArray.from_qubits([state]), params, precision).qubit(0)


def iterate(state: ProjectiveQubit, params: MapParams, n: int, precision: str = "standard") -> Orbit:
    if n < 0:
        raise ValueError("n must be >= 0")
    pts = [b.qubit(0) for b in orbit_arrays(QubitArray.from_qubits([state]), params, n, precision)]
    return Orbit(pts, params, precision)


# ---------------------------------------------------------------------------
# Fixed points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedPoint:
    z: complex
    multiplier: complex
    kind: str  # "attracting" | "repelling" | "neutral"

    @property
    def stable(self) -> bool:
        return self.kind == "attracting"


def _classify(m: complex, tol: float = 1e-9) -> str:
    if abs(m) < 1 - tol:
        return "attracting"
    if abs(m) > 1 + tol:
        return "repelling"
    return "neutral"


def fixed_points(params: MapParams) -> list[FixedPoint]:
    """Solutions of f(z) = z on the sphere with their multipliers.

    f(z) = z reduces to (z - 1)(s z^2 + (s - 1) z + s) = 0.  A multiplier is
    chart independent, so the label agrees with the spherical derivative; at
    infinity it is read off in the chart w = 1/z.
    """
    s = params.s
    roots: list[complex] = [1 + 0j]
    if s == 0:
        # quadratic factor degenerates to -z; the lost degree sits at infinity
        roots += [0j, INFINITY]
    else:
        b = s - 1
        disc = cmath.sqrt(b * b - 4 * s * s)
        q = -0.5 * (b + disc if (b.conjugate() * disc).real >= 0 else b - disc)
        roots += [q / s, s / q] if q != 0 else [0j, 0j]
    out = []
    for z in roots:
        if is_infinite(z):
            # g(w) = 1/f(1/w) = (s + w^2)/(1 + s w^2), g'(0) = 0
            m = 0j
        else:
            m = params.derivative(z)
        out.append(FixedPoint(z, m, _classify(m)))
    return out


# ---------------------------------------------------------------------------
# Measurement directions whose eigenstates land on z = 1
# ---------------------------------------------------------------------------

_R = 1 / math.sqrt(2)
ROOT_AXIS_VECTORS: tuple[tuple[float, float, float], ...] = (
    (1.0, 0.0, 0.0),
    (-1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, -1.0, 0.0),
    (_R, _R, 0.0),
    (_R, -_R, 0.0),
    (-_R, _R, 0.0),
    (-_R, -_R, 0.0),
)


@dataclass(frozen=True)
class RootDirection:
    axis: ObservableAxis
    arrival: tuple[int | None, int | None]  # steps for the (+1, -1) eigenstates
    verified: bool


def arrival_iteration(
    state: ProjectiveQubit, target: complex, params: MapParams, max_steps: int,
    precision: str = "extended", tol: float = 1e-12,
) -> int | None:
    """First k <= max_steps with chordal distance(f^k(state), target) < tol."""
    tgt = QubitArray.from_qubits([to_state(target)])
    for k, cur in enumerate(orbit_arrays(QubitArray.from_qubits([state]), params, max_steps, precision)):
        if chordal_array(cur, tgt)[0] < tol:
            return k
    return None


def root_directions(params: MapParams = MapParams(1j), max_steps: int = 4) -> list[RootDirection]:
    """The eight equatorial axes whose eigenstates are carried onto z = 1.

    ``max_steps`` bounds the search; the diagonal axes need four steps
    (z^2 = +-i goes through inf or 0, then -i or i, then -1).
    """
    out = []
    for v in ROOT_AXIS_VECTORS:
        axis = ObservableAxis.from_vector(v)
        plus, minus = axis.eigenstates()
        arr = (
            arrival_iteration(plus, 1.0, params, max_steps),
            arrival_iteration(minus, 1.0, params, max_steps),
        )
        out.append(RootDirection(axis, arr, all(a is not None for a in arr)))
    return out


# ---------------------------------------------------------------------------
# Angle recursion for s = i
# ---------------------------------------------------------------------------


def angle_recursion_step(theta, phi):
    """One step of the s = i map written on (colatitude, azimuth).

    The azimuth update is ``atan2(-2 cos theta, sin^2 theta cos 2 phi)``;
    the single-argument form ``-2 atan(cos theta / (cos 2phi sin^2 theta))``
    is not equivalent.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c2t = np.cos(2 * theta)
    t = 2 * np.sin(theta) ** 2 * np.sin(2 * phi)
    num, den = 3 + c2t + t, 3 + c2t - t
    theta_n = 2 * np.arctan2(np.sqrt(den), np.sqrt(num))
    phi_n = np.arctan2(-2 * np.cos(theta), np.sin(theta) ** 2 * np.cos(2 * phi))
    return theta_n, phi_n


def angle_recursion(theta, phi, n: int):
    """Colatitudes and azimuths along the orbit, shape (n+1, ...)."""
    th, ph = [np.asarray(theta, dtype=float)], [np.asarray(phi, dtype=float)]
    for _ in range(n):
        a, b = angle_recursion_step(th[-1], ph[-1])
        th.append(a)
        ph.append(b)
    return np.array(th), np.array(ph)
