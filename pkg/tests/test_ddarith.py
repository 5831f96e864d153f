import mpmath
import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from chaosdisc import ddarith as dd
from chaosdisc.ddarith import DDComplex

mpmath.mp.dps = 60
moderate = st.floats(min_value=-1e100, max_value=1e100, allow_nan=False).filter(
    lambda x: x == 0 or abs(x) > 1e-100
)


def mpc(x: DDComplex, i=0):
    return mpmath.mpc(x.hi[i].real, x.hi[i].imag) + mpmath.mpc(x.lo[i].real, x.lo[i].imag)


@given(moderate, moderate)
def test_two_sum_is_exact(a, b):
    s, e = dd.two_sum(np.float64(a), np.float64(b))
    assert mpmath.mpf(a) + mpmath.mpf(b) == mpmath.mpf(float(s)) + mpmath.mpf(float(e))


@given(st.floats(-1e150, 1e150), st.floats(-1e150, 1e150))
def test_two_prod_is_exact(a, b):
    if a != 0 and abs(a) < 1e-140 or b != 0 and abs(b) < 1e-140:
        return
    p, e = dd.two_prod(np.float64(a), np.float64(b))
    assert mpmath.mpf(a) * mpmath.mpf(b) == mpmath.mpf(float(p)) + mpmath.mpf(float(e))


def _random_dd(rng, n):
    hi = rng.normal(size=n) + 1j * rng.normal(size=n)
    lo = (rng.normal(size=n) + 1j * rng.normal(size=n)) * 1e-17
    x = DDComplex(hi, lo)
    return x


def test_complex_mul_against_mpmath():
    rng = np.random.default_rng(1)
    a, b = _random_dd(rng, 50), _random_dd(rng, 50)
    c = a * b
    for i in range(50):
        ref = mpc(a, i) * mpc(b, i)
        assert abs(mpc(c, i) - ref) <= 1e-30 * abs(ref)


def test_square_matches_mul_and_mpmath():
    rng = np.random.default_rng(2)
    a = _random_dd(rng, 50)
    sq = a.square()
    for i in range(50):
        ref = mpc(a, i) ** 2
        assert abs(mpc(sq, i) - ref) <= 1e-30 * abs(ref)


def test_add_sub_roundtrip():
    rng = np.random.default_rng(3)
    a, b = _random_dd(rng, 20), _random_dd(rng, 20)
    back = (a + b) - b
    for i in range(20):
        assert abs(mpc(back, i) - mpc(a, i)) <= 1e-30 * abs(mpc(a, i))


def test_scale_by_pure_imaginary_and_general():
    rng = np.random.default_rng(4)
    a = _random_dd(rng, 20)
    for s in (1j, 0.5j, -2.0, 0.3 + 0.7j):
        c = a.scale(s)
        for i in range(20):
            ref = mpc(a, i) * mpmath.mpc(s.real, s.imag) if isinstance(s, complex) else mpc(a, i) * s
            assert abs(mpc(c, i) - ref) <= 1e-30 * abs(ref)


def test_abs2_and_ldexp():
    rng = np.random.default_rng(5)
    a = _random_dd(rng, 10)
    h, l = a.abs2()
    b = a.ldexp(np.full(10, -3))
    for i in range(10):
        ref = abs(mpc(a, i)) ** 2
        assert abs(mpmath.mpf(h[i]) + mpmath.mpf(l[i]) - ref) <= 1e-30 * ref
        assert mpc(b, i) == mpc(a, i) / 8


def test_cos_sin_constants():
    for ang in (1e-9, 0.1, 1.0, 2.5):
        (ch, cl), (sh, sl) = dd.dd_cos_sin(ang)
        with mpmath.workdps(50):
            assert abs(mpmath.mpf(ch) + mpmath.mpf(cl) - mpmath.cos(ang)) < 1e-31
            assert abs(mpmath.mpf(sh) + mpmath.mpf(sl) - mpmath.sin(ang)) < 1e-31 * max(1, ang)


def test_unit_phase_modulus():
    phi = np.random.default_rng(6).uniform(-7, 7, 200)
    (ch, cl), (sh, sl) = dd.dd_unit_phase(phi)
    with mpmath.workdps(50):
        for a, b, c, d in zip(ch, cl, sh, sl):
            c2 = (mpmath.mpf(a) + mpmath.mpf(b)) ** 2 + (mpmath.mpf(c) + mpmath.mpf(d)) ** 2
            assert abs(c2 - 1) < 1e-31
    assert np.allclose(ch, np.cos(phi), rtol=0, atol=1e-16)
