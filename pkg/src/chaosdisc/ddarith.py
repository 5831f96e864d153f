"""Vectorised double-double arithmetic on numpy arrays.

A double-double value is an unevaluated sum ``hi + lo`` of two binary64
numbers with ``|lo| <= ulp(hi)/2``, giving roughly 32 significant decimal
digits.  Complex values keep a complex128 ``hi`` and a complex128 ``lo``;
the real and imaginary parts are each a real double-double.

The error-free transformations are the classic Knuth/Dekker ones.  numpy
never contracts ``a*b + c`` into an FMA, so the Dekker split is exact here.
"""
from __future__ import annotations

from functools import lru_cache

import mpmath
import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    err = b - (s - a)
    return s, err


def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_neg(ah, al):
    return -ah, -al


def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_mul_d(ah, al, b):
    """Double-double times a plain double."""
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


def dd_sqr(ah, al):
    p, e = two_prod(ah, ah)
    e = e + 2.0 * ah * al
    return quick_two_sum(p, e)


def dd_unit_phase(phi):
    """cos and sin of ``phi`` as double-doubles with cos^2 + sin^2 = 1 to ~1e-32.

    The binary64 pair is off the unit circle by ~1e-16; one Newton step on
    1/sqrt(c^2 + s^2) moves it back.  The angle itself stays the binary64 one
    to within an ulp, only the modulus is corrected.
    """
    c, s = np.cos(phi), np.sin(phi)
    r2 = dd_add(*two_prod(c, c), *two_prod(s, s))
    eps = (r2[0] - 1.0) + r2[1]  # exact subtraction: r2 is within 2 ulp of 1
    return (c, -0.5 * c * eps), (s, -0.5 * s * eps)


@lru_cache(maxsize=4096)
def dd_from_mpf(x: mpmath.mpf) -> tuple[float, float]:
    hi = float(x)
    lo = float(x - mpmath.mpf(hi))
    return hi, lo


@lru_cache(maxsize=1024)
def dd_cos_sin(angle: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """cos and sin of a binary64 angle, each rounded to double-double."""
    with mpmath.workdps(50):
        a = mpmath.mpf(angle)
        return dd_from_mpf(mpmath.cos(a)), dd_from_mpf(mpmath.sin(a))


class DDComplex:
    """Array of complex double-double numbers (``hi + lo``)."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo=None):
        self.hi = np.asarray(hi, dtype=np.complex128)
        self.lo = np.zeros_like(self.hi) if lo is None else np.asarray(lo, dtype=np.complex128)

    @classmethod
    def from_parts(cls, re_hi, re_lo, im_hi, im_lo) -> "DDComplex":
        hi = np.empty(np.shape(re_hi), dtype=np.complex128)
        lo = np.empty_like(hi)
        hi.real, hi.imag = re_hi, im_hi
        lo.real, lo.imag = re_lo, im_lo
        return cls(hi, lo)

    # parts
    @property
    def shape(self):
        return self.hi.shape

    def __len__(self):
        return len(self.hi)

    def __getitem__(self, idx) -> "DDComplex":
        return DDComplex(self.hi[idx], self.lo[idx])

    def copy(self) -> "DDComplex":
        return DDComplex(self.hi.copy(), self.lo.copy())

    def to_complex(self) -> np.ndarray:
        return self.hi + self.lo

    # arithmetic
    def __add__(self, other: "DDComplex") -> "DDComplex":
        rh, rl = dd_add(self.hi.real, self.lo.real, other.hi.real, other.lo.real)
        ih, il = dd_add(self.hi.imag, self.lo.imag, other.hi.imag, other.lo.imag)
        return DDComplex.from_parts(rh, rl, ih, il)

    def __sub__(self, other: "DDComplex") -> "DDComplex":
        rh, rl = dd_sub(self.hi.real, self.lo.real, other.hi.real, other.lo.real)
        ih, il = dd_sub(self.hi.imag, self.lo.imag, other.hi.imag, other.lo.imag)
        return DDComplex.from_parts(rh, rl, ih, il)

    def __neg__(self) -> "DDComplex":
        return DDComplex(-self.hi, -self.lo)

    def __mul__(self, other) -> "DDComplex":
        if not isinstance(other, DDComplex):
            return self.scale(complex(other))
        a, al = self.hi.real, self.lo.real
        b, bl = self.hi.imag, self.lo.imag
        c, cl = other.hi.real, other.lo.real
        d, dl = other.hi.imag, other.lo.imag
        ac = dd_mul(a, al, c, cl)
        bd = dd_mul(b, bl, d, dl)
        ad = dd_mul(a, al, d, dl)
        bc = dd_mul(b, bl, c, cl)
        rh, rl = dd_sub(*ac, *bd)
        ih, il = dd_add(*ad, *bc)
        return DDComplex.from_parts(rh, rl, ih, il)

    __rmul__ = __mul__

    def scale(self, s: complex) -> "DDComplex":
        """Multiply by a binary64 complex scalar."""
        a, al = self.hi.real, self.lo.real
        b, bl = self.hi.imag, self.lo.imag
        x, y = float(s.real), float(s.imag)
        if y == 0.0:
            rh, rl = dd_mul_d(a, al, x)
            ih, il = dd_mul_d(b, bl, x)
        elif x == 0.0:
            rh, rl = dd_mul_d(b, bl, -y)
            ih, il = dd_mul_d(a, al, y)
        else:
            rh, rl = dd_sub(*dd_mul_d(a, al, x), *dd_mul_d(b, bl, y))
            ih, il = dd_add(*dd_mul_d(a, al, y), *dd_mul_d(b, bl, x))
        return DDComplex.from_parts(rh, rl, ih, il)

    def square(self) -> "DDComplex":
        a, al = self.hi.real, self.lo.real
        b, bl = self.hi.imag, self.lo.imag
        # (a+b)(a-b) keeps the real part accurate near |a| == |b|
        rh, rl = dd_mul(*dd_add(a, al, b, bl), *dd_sub(a, al, b, bl))
        ih, il = dd_mul(a, al, b, bl)
        return DDComplex.from_parts(rh, rl, 2.0 * ih, 2.0 * il)

    def conj(self) -> "DDComplex":
        return DDComplex(np.conj(self.hi), np.conj(self.lo))

    def abs2(self) -> tuple[np.ndarray, np.ndarray]:
        """Squared modulus as a real double-double (hi, lo)."""
        return dd_add(*dd_sqr(self.hi.real, self.lo.real), *dd_sqr(self.hi.imag, self.lo.imag))

    def ldexp(self, k) -> "DDComplex":
        """Exact scaling by 2**k (k broadcast against the array)."""
        k = np.asarray(k)
        return DDComplex.from_parts(
            np.ldexp(self.hi.real, k), np.ldexp(self.lo.real, k),
            np.ldexp(self.hi.imag, k), np.ldexp(self.lo.imag, k),
        )


def dd_to_float(hi, lo):
    return hi + lo
