"""Ancilla circuit that realises one map iteration by post-selection.

Two copies |psi>|psi> pass through U_comp = U_gate U_XOR; the second qubit is
post-selected on |up>.  The surviving first qubit is f(z) and the branch
probability is the success probability of that iteration.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .bloch import ProjectiveQubit, QubitArray, chordal_array
from .dynamics import MapParams, apply_map_array, orbit_arrays
from .errors import PostSelectionNull

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

# keeps |00> and |10>: identity on qubit 1, |up><up| on the ancilla
POSTSELECT = np.diag([1, 0, 1, 0]).astype(complex)


@dataclass(frozen=True)
class Gates:
    xor: np.ndarray
    gate: np.ndarray
    comp: np.ndarray
    gate_unitary: bool


def is_unitary(U: np.ndarray, tol: float = 1e-13) -> bool:
    return bool(np.allclose(U.conj().T @ U, np.eye(len(U)), atol=tol, rtol=0))


def build_gates(params: MapParams) -> Gates:
    s = params.s
    sc = s.conjugate()
    xor = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    gate = np.array(
        [[1, 0, s, 0], [0, sc, 0, 1], [s, 0, 1, 0], [0, 1, 0, sc]], dtype=complex
    ) / math.sqrt(1 + abs(s) ** 2)
    return Gates(xor, gate, gate @ xor, is_unitary(gate))


def pauli_decomposition(s: complex) -> np.ndarray:
    """U_gate rebuilt from its Pauli expansion; only s = 0 and s = i have one."""
    if s == 0:
        c = (1, 1, 1, -1)
    elif s == 1j:
        e = np.exp(-1j * np.pi / 4)
        c = (e, e.conjugate(), e.conjugate(), -e)
    else:
        raise ValueError("Pauli expansion tabulated for s = 0 and s = i only")
    terms = (np.kron(I2, I2), np.kron(I2, SZ), np.kron(SX, I2), np.kron(SX, SZ))
    return 0.5 * sum(ci * t for ci, t in zip(c, terms))


def circuit_step_array(a: np.ndarray, b: np.ndarray, params: MapParams, gates: Gates | None = None):
    """One circuit pass for normalised amplitude arrays (a, b).

    Returns the unnormalised first-qubit amplitudes after post-selection and
    the success probabilities.
    """
    g = build_gates(params) if gates is None else gates
    psi = np.stack([a * a, a * b, b * a, b * b], axis=-1)  # |psi> (x) |psi>
    out = psi @ (POSTSELECT @ g.comp).T
    p = np.einsum("ij,ij->i", out.conj(), out).real
    return out[:, 0], out[:, 2], p


def iterate_via_circuit(state: ProjectiveQubit, params: MapParams) -> tuple[ProjectiveQubit, float]:
    a, b = state.normalized()
    x, y, p = circuit_step_array(np.array([a]), np.array([b]), params)
    if p[0] < 1e-300:
        raise PostSelectionNull("post-selection removed the whole state")
    return QubitArray.from_complex(x, y).canonical().qubit(0), float(p[0])


def success_probability_z(absz2, params: MapParams = MapParams(1j)):
    """Closed form in |z|^2; valid for any purely imaginary s."""
    if params.s.real != 0:
        raise ValueError("closed form holds for purely imaginary s")
    w = np.asarray(absz2, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = (1 + w * w) / (1 + w) ** 2
    return np.where(np.isinf(w), 1.0, out)


def success_probability_array(states: QubitArray, params: MapParams = MapParams(1j)) -> np.ndarray:
    """(1 + |z|^4)/(1 + |z|^2)^2 written on the amplitudes, finite at the poles.

    For s off the imaginary axis the general branch weight
    (|a^2 + s b^2|^2 + |s a^2 + b^2|^2) / ((1 + |s|^2)(|a|^2 + |b|^2)^2) is used.
    """
    a, b = states.amplitudes()
    na, nb = np.abs(a) ** 2, np.abs(b) ** 2
    s = params.s
    if s.real == 0:
        return (na * na + nb * nb) / (na + nb) ** 2
    a2, b2 = a * a, b * b
    return (np.abs(a2 + s * b2) ** 2 + np.abs(s * a2 + b2) ** 2) / ((1 + abs(s) ** 2) * (na + nb) ** 2)


def success_probability(state: ProjectiveQubit, params: MapParams = MapParams(1j)) -> float:
    return float(success_probability_array(QubitArray.from_qubits([state]), params)[0])


def success_probability_angle(theta) -> np.ndarray:
    return 0.25 * (3 + np.cos(2 * np.asarray(theta, dtype=float)))


@dataclass
class ResourceReport:
    s: complex
    n: int
    success_probabilities: list[float]
    resource: float

    def to_json(self) -> str:
        d = asdict(self)
        d["s"] = [self.s.real, self.s.imag]
        return json.dumps(d, indent=2)


def resource_estimate(state: ProjectiveQubit, params: MapParams, n: int, precision: str = "standard") -> ResourceReport:
    """Copies needed up front: product over iterations of 2 / p_success(k).

    The factor 2 counts the two copies consumed by each circuit pass.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    probs = []
    for cur in orbit_arrays(QubitArray.from_qubits([state]), params, n - 1, precision):
        probs.append(float(success_probability_array(cur, params)[0]))
    resource = float(np.prod([2.0 / p for p in probs]))
    return ResourceReport(params.s, n, probs, resource)


def verify_circuit(samples: int, params: MapParams, seed: int = 0) -> dict:
    """Random-state comparison of the circuit against the homogeneous map."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1, 1, samples)
    phi = rng.uniform(0, 2 * np.pi, samples)
    states = QubitArray.from_sphere(np.arccos(u), phi).rounded()
    a, b = states.amplitudes()
    nrm = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
    a, b = a / nrm, b / nrm
    x, y, p = circuit_step_array(a, b, params)
    ref = apply_map_array(states, params)
    dev = chordal_array(QubitArray.from_complex(x, y), ref) / 2  # sin of half the angle
    out = {
        "s": [params.s.real, params.s.imag],
        "samples": samples,
        "seed": seed,
        "max_projective_deviation": float(dev.max()),
        "gate_unitary": build_gates(params).gate_unitary,
    }
    out["max_probability_deviation"] = float(np.abs(p - success_probability_array(states, params)).max())
    return out
