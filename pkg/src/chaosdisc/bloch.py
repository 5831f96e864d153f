"""Qubit states as projective pairs and the Riemann-sphere correspondence.

A pure state is stored as an unnormalised pair ``(zeta1, zeta2)`` of
amplitudes on ``|up>`` and ``|down>``.  The plane coordinate is
``z = zeta1 / zeta2 = cot(theta/2) * exp(i*phi)`` so ``(1, 0)`` is the north
pole (``z = inf``) and ``(0, 1)`` the south pole.  With this labelling the
Bloch-vector azimuth is ``-phi``; colatitude is the usual one.

Every amplitude carries an optional low-order part so that extended-precision
runs keep ~32 digits from construction onwards.  Standard-precision states
simply have zero low parts.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import mpmath
import numpy as np

from . import ddarith as dd
from .ddarith import DDComplex
from .errors import OutOfRange

Precision = Literal["standard", "extended"]
PRECISIONS: tuple[str, ...] = ("standard", "extended")

INFINITY = complex(math.inf, 0.0)


def check_precision(precision: str) -> str:
    if precision not in PRECISIONS:
        raise ValueError(f"precision must be one of {PRECISIONS}, got {precision!r}")
    return precision


def is_infinite(z: complex) -> bool:
    return math.isinf(z.real) or math.isinf(z.imag)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise OutOfRange(f"colatitude {self.theta} outside [0, pi]")
        phi = 0.0 if self.theta in (0.0, math.pi) else self.phi % (2.0 * math.pi)
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class ProjectiveQubit:
    """Projective qubit ``(zeta1 + zeta1_lo, zeta2 + zeta2_lo)``."""

    zeta1: complex
    zeta2: complex
    zeta1_lo: complex = 0j
    zeta2_lo: complex = 0j

    def __post_init__(self):
        if self.zeta1 == 0 and self.zeta2 == 0:
            raise ValueError("(0, 0) is not a qubit state")

    @property
    def amplitudes(self) -> tuple[complex, complex]:
        """Amplitudes rounded to binary64."""
        return self.zeta1 + self.zeta1_lo, self.zeta2 + self.zeta2_lo

    def normalized(self) -> np.ndarray:
        v = np.array(self.amplitudes, dtype=np.complex128)
        m = np.max(np.abs(v))
        v = v / m
        return v / np.linalg.norm(v)

    def canonical(self) -> "ProjectiveQubit":
        return QubitArray.from_qubits([self]).canonical().qubit(0)

    def sphere_point(self) -> SpherePoint:
        a, b = self.normalized()
        theta = 2.0 * math.atan2(abs(b), abs(a))
        phi = cmath.phase(a * b.conjugate()) if a != 0 and b != 0 else 0.0
        return SpherePoint(min(max(theta, 0.0), math.pi), phi)

    def bloch_vector(self) -> np.ndarray:
        return QubitArray.from_qubits([self]).bloch()[0]


@dataclass(frozen=True)
class StatePair:
    a: ProjectiveQubit
    b: ProjectiveQubit
    delta: float


@dataclass(frozen=True)
class ObservableAxis:
    """Direction of the dichotomic observable ``n . sigma``.

    ``vector`` may be given explicitly to avoid the rounding of sin/cos at
    exact angles (the x axis built from pi/2 has a 6e-17 z-component).
    """

    theta_m: float
    phi_m: float = 0.0
    vector: tuple[float, float, float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vector is None:
            v = (
                math.sin(self.theta_m) * math.cos(self.phi_m),
                math.sin(self.theta_m) * math.sin(self.phi_m),
                math.cos(self.theta_m),
            )
        else:
            v = tuple(float(c) for c in self.vector)
            norm = math.sqrt(sum(c * c for c in v))
            v = tuple(c / norm for c in v)
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "ObservableAxis":
        x, y, z = (float(c) for c in v)
        r = math.sqrt(x * x + y * y + z * z)
        return cls(math.acos(max(-1.0, min(1.0, z / r))), math.atan2(y, x), vector=(x, y, z))

    def perturbed(self, dtheta: float = 0.0, dphi: float = 0.0) -> "ObservableAxis":
        return ObservableAxis(self.theta_m + dtheta, self.phi_m + dphi)

    def eigenstates(self) -> tuple[ProjectiveQubit, ProjectiveQubit]:
        """(+1, -1) eigenstates of ``n . sigma`` as unnormalised pairs."""
        nx, ny, nz = self.vector
        if nz >= 0.0:
            plus = ProjectiveQubit(complex(1.0 + nz), complex(nx, ny))
            minus = ProjectiveQubit(complex(-nx, ny), complex(1.0 + nz))
        else:
            plus = ProjectiveQubit(complex(nx, -ny), complex(1.0 - nz))
            minus = ProjectiveQubit(complex(1.0 - nz), complex(-nx, -ny))
        return plus.canonical(), minus.canonical()


SIGMA_X = ObservableAxis(math.pi / 2, 0.0, vector=(1.0, 0.0, 0.0))


# ---------------------------------------------------------------------------
# Vectorised states
# ---------------------------------------------------------------------------


def _pow2_normalize(z1: DDComplex, z2: DDComplex) -> tuple[DDComplex, DDComplex]:
    m = np.maximum(
        np.maximum(np.abs(z1.hi.real), np.abs(z1.hi.imag)),
        np.maximum(np.abs(z2.hi.real), np.abs(z2.hi.imag)),
    )
    _, e = np.frexp(np.where(m > 0, m, 1.0))
    return z1.ldexp(-e), z2.ldexp(-e)


class QubitArray:
    """A batch of projective qubits with double-double amplitudes."""

    __slots__ = ("z1", "z2")

    def __init__(self, z1: DDComplex, z2: DDComplex):
        self.z1 = z1
        self.z2 = z2

    @classmethod
    def from_complex(cls, z1, z2) -> "QubitArray":
        return cls(DDComplex(np.atleast_1d(z1)), DDComplex(np.atleast_1d(z2)))

    @classmethod
    def from_qubits(cls, qubits: Sequence[ProjectiveQubit]) -> "QubitArray":
        z1 = DDComplex([q.zeta1 for q in qubits], [q.zeta1_lo for q in qubits])
        z2 = DDComplex([q.zeta2 for q in qubits], [q.zeta2_lo for q in qubits])
        return cls(z1, z2)

    @classmethod
    def from_sphere(cls, theta, phi) -> "QubitArray":
        """States ``(cos(theta/2) e^{i phi}, sin(theta/2))``; the products with
        the phase are kept exact in double-double."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        phi = np.broadcast_to(np.asarray(phi, dtype=float), theta.shape)
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        return _phased(c, np.zeros_like(c), s, np.zeros_like(s), phi)

    def __len__(self):
        return len(self.z1)

    def __getitem__(self, idx) -> "QubitArray":
        return QubitArray(self.z1[idx], self.z2[idx])

    def qubit(self, i: int) -> ProjectiveQubit:
        return ProjectiveQubit(
            complex(self.z1.hi[i]), complex(self.z2.hi[i]),
            complex(self.z1.lo[i]), complex(self.z2.lo[i]),
        )

    def to_qubits(self) -> list[ProjectiveQubit]:
        return [self.qubit(i) for i in range(len(self))]

    def canonical(self) -> "QubitArray":
        return QubitArray(*_pow2_normalize(self.z1, self.z2))

    def rounded(self) -> "QubitArray":
        """Drop the low parts (binary64 view of the same states)."""
        return QubitArray.from_complex(self.z1.to_complex(), self.z2.to_complex()).canonical()

    def amplitudes(self) -> tuple[np.ndarray, np.ndarray]:
        c = self.canonical()
        return c.z1.to_complex(), c.z2.to_complex()

    def bloch(self) -> np.ndarray:
        """Bloch vectors (N, 3), rounded to binary64."""
        a, b = self.amplitudes()
        na, nb = np.abs(a) ** 2, np.abs(b) ** 2
        norm = na + nb
        cross = np.conj(a) * b
        return np.stack([2 * cross.real / norm, 2 * cross.imag / norm, (na - nb) / norm], axis=-1)

    def colatitude(self) -> np.ndarray:
        a, b = self.amplitudes()
        return 2.0 * np.arctan2(np.abs(b), np.abs(a))

    def upper_hemisphere(self) -> np.ndarray:
        """Sign of |zeta1| - |zeta2| evaluated in double-double (+1 north, -1 south, 0 equator)."""
        c = self.canonical()
        diff = dd.dd_sub(*c.z1.abs2(), *c.z2.abs2())
        return np.sign(diff[0])


def _phased(c_hi, c_lo, s_hi, s_lo, phi) -> QubitArray:
    """(c e^{i phi}, s) with a unit-modulus phase kept in double-double."""
    (ch, cl), (sh, sl) = dd.dd_unit_phase(phi)
    re = dd.dd_mul(c_hi, c_lo, ch, cl)
    im = dd.dd_mul(c_hi, c_lo, sh, sl)
    z1 = DDComplex.from_parts(re[0], re[1], im[0], im[1])
    z2 = DDComplex.from_parts(s_hi, s_lo, np.zeros_like(s_hi), np.zeros_like(s_hi))
    return QubitArray(z1, z2).canonical()


def _as_array(state) -> QubitArray:
    if isinstance(state, QubitArray):
        return state
    return QubitArray.from_qubits([state])


# ---------------------------------------------------------------------------
# Plane <-> state
# ---------------------------------------------------------------------------


def to_plane(state: ProjectiveQubit) -> complex:
    """``zeta1 / zeta2``; :data:`INFINITY` at the north pole."""
    a, b = state.normalized()
    if b == 0:
        return INFINITY
    return complex(a / b)


def to_state(z) -> ProjectiveQubit:
    """Inverse of :func:`to_plane`; also accepts a :class:`SpherePoint`."""
    if isinstance(z, SpherePoint):
        return QubitArray.from_sphere(z.theta, z.phi).qubit(0)
    z = complex(z)
    if is_infinite(z):
        return ProjectiveQubit(1 + 0j, 0j)
    if abs(z) > 1.0:
        return ProjectiveQubit(1 + 0j, 1 / z).canonical()
    return ProjectiveQubit(z, 1 + 0j).canonical()


# ---------------------------------------------------------------------------
# Overlaps and distances (double-double internally)
# ---------------------------------------------------------------------------


def _overlap_parts(a: QubitArray, b: QubitArray) -> tuple[np.ndarray, np.ndarray]:
    """(|<a|b>|^2, |a x b|^2) with the norms left in; their sum is ||a||^2 ||b||^2."""
    a, b = a.canonical(), b.canonical()
    dot = a.z1.conj() * b.z1 + a.z2.conj() * b.z2
    cross = a.z1 * b.z2 - a.z2 * b.z1
    return dd.dd_to_float(*dot.abs2()), dd.dd_to_float(*cross.abs2())


def fidelity_array(a: QubitArray, b: QubitArray) -> np.ndarray:
    dot, cross = _overlap_parts(a, b)
    return dot / (dot + cross)


def infidelity_array(a: QubitArray, b: QubitArray) -> np.ndarray:
    dot, cross = _overlap_parts(a, b)
    return cross / (dot + cross)


def geodesic_array(a: QubitArray, b: QubitArray) -> np.ndarray:
    dot, cross = _overlap_parts(a, b)
    return 2.0 * np.arctan2(np.sqrt(cross), np.sqrt(dot))


def chordal_array(a: QubitArray, b: QubitArray) -> np.ndarray:
    """Chordal distance on the unit Riemann sphere (diameter 2)."""
    dot, cross = _overlap_parts(a, b)
    return 2.0 * np.sqrt(cross / (dot + cross))


def fidelity(a: ProjectiveQubit, b: ProjectiveQubit) -> float:
    """``|<a|b>|^2`` for the normalised states."""
    return float(fidelity_array(_as_array(a), _as_array(b))[0])


def infidelity(a: ProjectiveQubit, b: ProjectiveQubit) -> float:
    """``1 - fidelity`` computed without cancellation."""
    return float(infidelity_array(_as_array(a), _as_array(b))[0])


def geodesic_distance(a: ProjectiveQubit, b: ProjectiveQubit) -> float:
    """Great-circle angle between the Bloch vectors, in [0, pi]."""
    return float(geodesic_array(_as_array(a), _as_array(b))[0])


# ---------------------------------------------------------------------------
# Pair construction
# ---------------------------------------------------------------------------


def pairs_at_delta(theta, phi, delta: float) -> tuple[QubitArray, QubitArray]:
    """Base states at (theta, phi) and partners displaced by ``delta`` in colatitude.

    The partner is the exact half-angle rotation of the base spinor, so the
    pair separation is ``delta`` to double-double accuracy.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.broadcast_to(np.asarray(phi, dtype=float), theta.shape)
    if not 0.0 <= delta <= math.pi:
        raise OutOfRange(f"delta {delta} outside [0, pi]")
    if np.any(theta + delta > math.pi) or np.any(theta < 0):
        raise OutOfRange("partner colatitude exits [0, pi]")
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    zero = np.zeros_like(c)
    (ch, cl), (sh, sl) = dd.dd_cos_sin(delta / 2)
    cp = dd.dd_sub(*dd.dd_mul_d(ch, cl, c), *dd.dd_mul_d(sh, sl, s))
    sp = dd.dd_add(*dd.dd_mul_d(ch, cl, s), *dd.dd_mul_d(sh, sl, c))
    return _phased(c, zero, s, zero, phi), _phased(cp[0], cp[1], sp[0], sp[1], phi)


def pair_at_delta(base: SpherePoint, delta: float) -> StatePair:
    a, b = pairs_at_delta(base.theta, base.phi, delta)
    return StatePair(a.qubit(0), b.qubit(0), float(delta))


def equator_pairs(delta: float, phi) -> tuple[QubitArray, QubitArray]:
    """Pairs placed symmetrically about the equator, colatitudes pi/2 -+ delta/2.

    Built directly from double-double half angles, so separations far below
    binary64 resolution are still exact.
    """
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    with mpmath.workdps(50):
        q = mpmath.pi / 4
        d = mpmath.mpf(delta) / 4
        north = [dd.dd_from_mpf(mpmath.cos(q - d)), dd.dd_from_mpf(mpmath.sin(q - d))]
        south = [dd.dd_from_mpf(mpmath.cos(q + d)), dd.dd_from_mpf(mpmath.sin(q + d))]
    ones = np.ones_like(phi)

    def build(cs):
        (ch, cl), (sh, sl) = cs
        return _phased(ch * ones, cl * ones, sh * ones, sl * ones, phi)

    return build(north), build(south)


# ---------------------------------------------------------------------------
# Helstrom
# ---------------------------------------------------------------------------


def helstrom_error(F: float) -> float:
    """Minimum error probability for two equiprobable pure states of fidelity ``F``."""
    if not 0.0 <= F <= 1.0 or math.isnan(F):
        raise ValueError(f"fidelity {F} outside [0, 1]")
    return 0.5 * (1.0 - math.sqrt(1.0 - F))
