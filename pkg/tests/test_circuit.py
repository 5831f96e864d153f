import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaosdisc.bloch import QubitArray, SpherePoint, chordal_array, to_state
from chaosdisc.circuit import (
    build_gates,
    circuit_step_array,
    is_unitary,
    iterate_via_circuit,
    pauli_decomposition,
    resource_estimate,
    success_probability,
    success_probability_angle,
    success_probability_array,
    success_probability_z,
    verify_circuit,
)
from chaosdisc.dynamics import MapParams, apply_map
from chaosdisc.errors import PostSelectionNull

S_VALUES = [0, 0.25j, 0.5j, 1j]


@given(st.one_of(st.just(0.0), st.floats(1e-6, 3), st.floats(-3, -1e-6)), st.floats(-3, 3))
def test_gate_unitary_iff_imaginary(re, im):
    g = build_gates(MapParams(complex(re, im)))
    assert g.gate_unitary == (re == 0.0)
    assert is_unitary(g.xor)


@pytest.mark.parametrize("s_", [0, 1j])
def test_pauli_decomposition(s_):
    assert np.allclose(pauli_decomposition(s_), build_gates(MapParams(s_)).gate, atol=1e-15)


def test_pauli_decomposition_other_s():
    with pytest.raises(ValueError):
        pauli_decomposition(0.5j)


@pytest.mark.parametrize("s_", S_VALUES)
def test_circuit_equals_map(s_):
    rep = verify_circuit(1000, MapParams(s_), seed=1)
    assert rep["max_projective_deviation"] < 1e-12
    assert rep["max_probability_deviation"] < 1e-13


def test_general_branch_weight_off_axis():
    # no longer unitary, but the post-selected norm still equals the closed form
    rep = verify_circuit(200, MapParams(0.3 + 0.2j), seed=2)
    assert rep["max_projective_deviation"] < 1e-12 and rep["max_probability_deviation"] < 1e-13
    assert rep["gate_unitary"] is False


@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_single_state_circuit(theta, phi):
    q = to_state(SpherePoint(theta, phi))
    out, p = iterate_via_circuit(q, MapParams(1j))
    ref = apply_map(q, MapParams(1j))
    d = chordal_array(QubitArray.from_qubits([out]), QubitArray.from_qubits([ref]))[0]
    assert d < 1e-12
    assert p == pytest.approx(success_probability_angle(theta), abs=1e-13)


def test_post_selection_can_fail():
    with pytest.raises(PostSelectionNull):
        iterate_via_circuit(to_state(1j), MapParams(1.0))


def test_success_anchor_values():
    assert success_probability(to_state(1.0)) == 0.5
    assert success_probability(to_state(np.exp(0.7j))) == pytest.approx(0.5, abs=1e-16)
    assert success_probability(to_state(0)) == 1.0
    assert success_probability_z(1.0) == 0.5
    assert success_probability_z(np.inf) == 1.0
    with pytest.raises(ValueError):
        success_probability_z(1.0, MapParams(0.5))


@given(st.floats(0, 1e4), st.sampled_from([0.25j, 0.5j, 1j, -2j]))
def test_closed_form_any_imaginary_s(w2, s_):
    q = to_state(math.sqrt(w2))
    assert success_probability(q, MapParams(s_)) == pytest.approx(float(success_probability_z(w2)), abs=1e-13)


def test_sphere_average_two_thirds():
    m = 100
    th = np.arccos(1 - 2 * (np.arange(m) + 0.5) / m)
    ph = 2 * np.pi * (np.arange(m) + 0.5) / m
    T, P = np.meshgrid(th, ph, indexing="ij")
    p = success_probability_array(QubitArray.from_sphere(T.ravel(), P.ravel()))
    assert p.mean() == pytest.approx(2 / 3, abs=1e-3)


def test_resource_on_fixed_point():
    rep = resource_estimate(to_state(1.0), MapParams(1j), 5)
    assert rep.success_probabilities == [0.5] * 5
    assert rep.resource == pytest.approx(4.0**5)
    assert '"resource"' in rep.to_json()
    with pytest.raises(ValueError):
        resource_estimate(to_state(1.0), MapParams(1j), 0)


def test_circuit_step_shapes():
    a = np.array([1.0, 0.6]) + 0j
    b = np.array([0.0, 0.8]) + 0j
    x, y, p = circuit_step_array(a, b, MapParams(1j))
    assert x.shape == y.shape == p.shape == (2,)
    assert np.allclose(np.abs(x) ** 2 + np.abs(y) ** 2, p)
