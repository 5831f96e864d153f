"""Julia-set rasters and box-counting dimension.

Membership is decided by orbit separation rather than escape time: each
pixel centre is iterated together with two partners displaced by one pixel
(along the real and imaginary directions).  With d0 the initial chordal
separation and d_tail the largest separation over the last ``tail`` steps,

    lambda_N = log(d_tail / d0) / N

and the pixel is marked when lambda_N > threshold for either partner.  In the
Fatou set partners merge with the base orbit (lambda_N < 0); in the Julia set
the pixel-sized gap is blown up to O(1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .dynamics import MapParams
from .errors import InsufficientOccupancy

# the bundled TBB is too old for numba; skip it rather than warn on every launch
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

DEFAULT_WINDOW = (-2.0, 2.0, -2.0, 2.0)
DEFAULT_THRESHOLD = 0.0
DEFAULT_HORIZON = 200
DEFAULT_TAIL = 8


@numba.njit(cache=True, inline="always")
def _step(a, b, s):
    a2 = a * a
    b2 = b * b
    x = a2 + s * b2
    y = s * a2 + b2
    m = max(abs(x), abs(y))
    if m == 0.0:
        return x, y
    return x / m, y / m


@numba.njit(cache=True, inline="always")
def _chordal(a1, b1, a2, b2):
    n1 = a1.real * a1.real + a1.imag * a1.imag + b1.real * b1.real + b1.imag * b1.imag
    n2 = a2.real * a2.real + a2.imag * a2.imag + b2.real * b2.real + b2.imag * b2.imag
    return 2.0 * abs(a1 * b2 - a2 * b1) / math.sqrt(n1 * n2)


@numba.njit(cache=True, inline="always")
def _chart(z):
    # (z, 1) for |z| <= 1, (1, 1/z) otherwise; keeps both coordinates bounded
    if abs(z) <= 1.0:
        return z, 1.0 + 0.0j
    return 1.0 + 0.0j, 1.0 / z


@numba.njit(parallel=True, cache=True)
def _exponent_kernel(xs, ys, h, s, horizon, tail):
    ny = ys.shape[0]
    nx = xs.shape[0]
    out = np.empty((ny, nx))
    for j in numba.prange(ny):
        for i in range(nx):
            z = complex(xs[i], ys[j])
            a0, b0 = _chart(z)
            a1, b1 = _chart(z + h)
            a2, b2 = _chart(z + 1j * h)
            d01 = _chordal(a0, b0, a1, b1)
            d02 = _chordal(a0, b0, a2, b2)
            m1 = 0.0
            m2 = 0.0
            for k in range(horizon):
                a0, b0 = _step(a0, b0, s)
                a1, b1 = _step(a1, b1, s)
                a2, b2 = _step(a2, b2, s)
                if k >= horizon - tail:
                    m1 = max(m1, _chordal(a0, b0, a1, b1))
                    m2 = max(m2, _chordal(a0, b0, a2, b2))
            l1 = math.log(max(m1, 1e-300) / d01) / horizon
            l2 = math.log(max(m2, 1e-300) / d02) / horizon
            out[j, i] = max(l1, l2)
    return out


@dataclass
class JuliaRaster:
    window: tuple[float, float, float, float]  # xmin, xmax, ymin, ymax
    resolution: int
    mask: np.ndarray  # (resolution, resolution); row = imaginary part
    params: MapParams
    horizon: int = DEFAULT_HORIZON
    threshold: float = DEFAULT_THRESHOLD
    tail: int = DEFAULT_TAIL
    exponent: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        xmin, xmax, ymin, ymax = self.window
        if not all(map(math.isfinite, self.window)) or xmin >= xmax or ymin >= ymax:
            raise ValueError("window must be finite and nonempty")
        if self.mask.shape != (self.resolution, self.resolution):
            raise ValueError("mask shape does not match resolution")

    @property
    def width(self) -> float:
        return self.window[1] - self.window[0]

    def centres(self) -> tuple[np.ndarray, np.ndarray]:
        return _centres(self.window, self.resolution)

    @property
    def fraction(self) -> float:
        return float(self.mask.mean())

    def to_pgm(self) -> bytes:
        """Binary PGM, 255 on marked pixels; first row is the top (largest Im z)."""
        head = f"P5\n{self.resolution} {self.resolution}\n255\n".encode()
        return head + (self.mask[::-1] * np.uint8(255)).astype(np.uint8).tobytes()


def _centres(window, resolution):
    xmin, xmax, ymin, ymax = window
    k = (np.arange(resolution) + 0.5) / resolution
    return xmin + (xmax - xmin) * k, ymin + (ymax - ymin) * k


def julia_raster(
    params: MapParams,
    window: tuple[float, float, float, float] = DEFAULT_WINDOW,
    resolution: int = 1024,
    horizon: int = DEFAULT_HORIZON,
    threshold: float = DEFAULT_THRESHOLD,
    tail: int = DEFAULT_TAIL,
) -> JuliaRaster:
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    if horizon < 10:
        raise ValueError("horizon must be >= 10")
    if not 1 <= tail <= horizon:
        raise ValueError("tail must lie in [1, horizon]")
    xs, ys = _centres(window, resolution)
    h = (window[1] - window[0]) / resolution
    lam = _exponent_kernel(xs, ys, h, complex(params.s), horizon, tail)
    return JuliaRaster(tuple(map(float, window)), resolution, lam > threshold, params, horizon, threshold, tail, lam)


# ---------------------------------------------------------------------------
# Box counting
# ---------------------------------------------------------------------------


@dataclass
class BoxDimension:
    dimension: float
    r2: float
    residuals: np.ndarray
    scales: np.ndarray  # box size as a fraction of the window width
    counts: np.ndarray  # occupied boxes per scale
    intercept: float = 0.0

    def to_csv(self) -> str:
        lines = ["scale,occupied,residual"]
        for e, n, r in zip(self.scales, self.counts, self.residuals):
            lines.append(f"{e:.17g},{int(n)},{r:.17g}")
        return "\n".join(lines) + "\n"


def default_scales(resolution: int = 1024) -> list[float]:
    """2^-3 ... 2^-9 of the window width, stopping at two-pixel boxes."""
    kmax = min(9, int(math.log2(resolution)) - 1)
    return [2.0**-k for k in range(3, kmax + 1)]


def box_counts(mask: np.ndarray, box: int) -> int:
    """Occupied boxes of ``box`` pixels; a trailing partial box counts as a box."""
    n = mask.shape[0]
    m = -(-n // box)
    pad = m * box - n
    if pad:
        mask = np.pad(mask, ((0, pad), (0, pad)))
    return int(mask.reshape(m, box, m, box).any(axis=(1, 3)).sum())


def box_dimension(raster: JuliaRaster, scales=None) -> BoxDimension:
    """Least-squares slope of log N(eps) against log(1/eps)."""
    eps = np.asarray(default_scales(raster.resolution) if scales is None else scales, dtype=float)
    if len(eps) < 4:
        raise ValueError("need at least 4 scales")
    if np.any(eps <= 0) or np.any(eps > 1):
        raise ValueError("scales are fractions of the window width in (0, 1]")
    if math.log10(eps.max() / eps.min()) < 1.5:
        raise ValueError("scales must span at least 1.5 decades")
    px = np.rint(eps * raster.resolution).astype(int)
    if np.any(px < 1):
        raise ValueError("a scale is below one pixel at this resolution")
    counts = np.array([box_counts(raster.mask, int(b)) for b in px])
    if np.any(counts == 0):
        raise InsufficientOccupancy(f"no occupied boxes at scales {eps[counts == 0].tolist()}")
    x = np.log(1.0 / eps)
    y = np.log(counts)
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    ss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float(resid @ resid) / ss if ss > 0 else 1.0
    return BoxDimension(float(slope), r2, resid, eps, counts, float(icpt))
