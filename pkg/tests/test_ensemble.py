import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chaosdisc.bloch import geodesic_array
from chaosdisc.dynamics import MapParams
from chaosdisc.ensemble import (
    EnsembleSpec,
    average_fidelity_vs_iteration,
    critical_iteration,
    fidelity_matrix,
    pearson_columns,
    pearson_rxy,
    rxy_from_k3,
    rxy_vs_iteration,
    sample_ensemble,
)
from chaosdisc.errors import NotReached, ZeroVariance

finite = st.floats(-1e3, 1e3, allow_nan=False)
samples = arrays(np.float64, st.integers(3, 40), elements=finite)


def test_pearson_matches_numpy():
    rng = np.random.default_rng(0)
    x = rng.normal(size=500)
    y = 0.3 * x + rng.normal(size=500)
    assert pearson_rxy(x, y) == pytest.approx(np.corrcoef(x, y)[0, 1], abs=1e-14)


def test_pearson_raw_sum_formula():
    rng = np.random.default_rng(1)
    x, y = rng.uniform(size=100), rng.uniform(size=100)
    L = len(x)
    raw = (L * (x @ y) - x.sum() * y.sum()) / math.sqrt((L * (x @ x) - x.sum() ** 2) * (L * (y @ y) - y.sum() ** 2))
    assert pearson_rxy(x, y) == pytest.approx(raw, abs=1e-12)


@given(samples, st.floats(0.1, 10), st.floats(-100, 100), st.floats(0.1, 10), st.floats(-100, 100))
def test_pearson_affine_invariance(x, a, b, c, d):
    assume(np.ptp(x) > 1e-3)
    y = np.sin(x) + 0.1 * x
    assume(np.ptp(y) > 1e-3)
    r = pearson_rxy(x, y)
    assert pearson_rxy(a * x + b, c * y + d) == pytest.approx(r, abs=1e-9)
    assert pearson_rxy(-a * x + b, c * y + d) == pytest.approx(-r, abs=1e-9)


@given(samples)
def test_pearson_bounded_and_self(x):
    assume(np.ptp(x) > 1e-6)
    assert pearson_rxy(x, x) == pytest.approx(1.0, abs=1e-12)
    r = pearson_rxy(x, x[::-1])
    assert -1.0 <= r <= 1.0


def test_pearson_errors():
    with pytest.raises(ZeroVariance):
        pearson_rxy([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        pearson_rxy([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        pearson_rxy([1.0], [1.0])


def test_pearson_columns_flags_constant_columns():
    X = np.array([[1.0, 2.0], [1.0, 3.0], [1.0, 5.0]])
    r = pearson_columns(X, X)
    assert math.isnan(r[0]) and r[1] == pytest.approx(1.0)
    s = rxy_from_k3(X, X)
    assert s.zero_variance == [0]


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec(size=10)  # grid needs a square
    with pytest.raises(ValueError):
        EnsembleSpec(sampling="sobol")
    with pytest.raises(ValueError):
        EnsembleSpec(region="ring")
    with pytest.raises(ValueError):
        EnsembleSpec(delta=-1.0)
    EnsembleSpec(size=10, sampling="uniform")


@pytest.mark.parametrize("sampling", ["grid", "angle-grid", "uniform"])
def test_pairs_have_requested_separation(sampling):
    ens = sample_ensemble(EnsembleSpec(size=400, delta=0.05, sampling=sampling))
    assert np.allclose(geodesic_array(ens.base, ens.partner), 0.05, rtol=1e-10)
    assert np.all(ens.theta + 0.05 <= math.pi)
    assert len(ens) + ens.skipped == 400 or sampling == "uniform"


def test_grid_skips_rows_near_south_pole():
    ens = sample_ensemble(EnsembleSpec(size=400, delta=0.3, sampling="angle-grid"))
    assert ens.skipped > 0 and ens.skipped % 20 == 0


def test_uniform_is_seeded():
    a = sample_ensemble(EnsembleSpec(size=100, sampling="uniform", seed=5))
    b = sample_ensemble(EnsembleSpec(size=100, sampling="uniform", seed=5))
    c = sample_ensemble(EnsembleSpec(size=100, sampling="uniform", seed=6))
    assert np.array_equal(a.theta, b.theta) and not np.array_equal(a.theta, c.theta)


def test_patch_region_bounds():
    ens = sample_ensemble(EnsembleSpec(size=300, delta=1e-3, region="patch", theta_max=0.3, sampling="uniform"))
    assert ens.theta.max() <= 0.3


def test_rxy_starts_at_cos_delta():
    for d in (0.1, 0.01):
        s = rxy_vs_iteration(EnsembleSpec(size=2500, delta=d, sampling="angle-grid"), n_max=2)
        assert s.r[0] == pytest.approx(math.cos(d), abs=2e-3)


def test_zero_delta_keeps_perfect_correlation():
    s = rxy_vs_iteration(EnsembleSpec(size=100, delta=0.0, sampling="uniform"), n_max=20)
    assert np.allclose(s.r, 1.0)


def test_fidelity_starts_at_cos_squared():
    ens = sample_ensemble(EnsembleSpec(size=100, delta=0.2))
    F = fidelity_matrix(ens, MapParams(1j), 3)
    assert np.allclose(F[:, 0], math.cos(0.1) ** 2, atol=1e-14)
    mean, std = average_fidelity_vs_iteration(ens, MapParams(1j), 3)
    assert mean[0] == pytest.approx(math.cos(0.1) ** 2) and std[0] < 1e-12


def test_critical_iteration():
    r = np.r_[np.linspace(1, 0.1, 10), np.full(15, 0.01)]
    assert critical_iteration(r) == 10
    r2 = r.copy()
    r2[15] = 0.2
    assert critical_iteration(r2) == 16 if len(r2) - 16 >= 10 else True
    with pytest.raises(NotReached):
        critical_iteration(np.ones(30))
    with pytest.raises(ValueError):
        critical_iteration(np.zeros(5))
    nan = np.r_[np.zeros(5), np.nan, np.zeros(9)]
    with pytest.raises(NotReached):
        critical_iteration(nan)
