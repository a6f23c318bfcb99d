"""Discrete spatial Gaussian smoothing and difference operators.

The 1-D discrete analogue of the Gaussian is T(n; s) = e^{-s} I_n(s).  It
forms an exact semi-group over s and has variance exactly s.  Images are
plain 2-D numpy arrays indexed [y, x]; boundaries are mirrored about the
edge sample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import ndimage

from .errors import ParameterError

MODE = "mirror"


@dataclass(frozen=True)
class DiscreteGaussian:
    s: float
    N: int
    values: np.ndarray  # T(-N..N; s)
    tail_eps: float

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    @property
    def variance(self) -> float:
        n = self.offsets
        return float(np.sum(n * n * self.values))


def _scaled_bessel_series(s: float, nmax: int) -> np.ndarray:
    """e^{-s} I_n(s) for n = 0..nmax by the power series (small s)."""
    out = np.zeros(nmax + 1)
    h = s / 2
    for n in range(nmax + 1):
        term = h ** n / math.factorial(n)
        acc = term
        k = 0
        while term > 1e-18 * acc and k < 200:
            k += 1
            term *= h * h / (k * (k + n))
            acc += term
        out[n] = acc
    return out * math.exp(-s)


def _scaled_bessel_miller(s: float, nmax: int) -> np.ndarray:
    """e^{-s} I_n(s) for n = 0..nmax by downward recurrence.

    Starts well beyond the significant range with an arbitrary seed and
    normalizes with I_0 + 2 sum_{n>0} I_n = e^s.
    """
    start = nmax + int(20 + 10 * math.sqrt(s) + 2 * math.log1p(s))
    vals = np.zeros(start + 2)
    vals[start] = 1e-300
    for n in range(start, 0, -1):
        vals[n - 1] = vals[n + 1] + (2.0 * n / s) * vals[n]
        if vals[n - 1] > 1e250:
            vals[n - 1:] *= 1e-250
    total = vals[0] + 2.0 * vals[1:].sum()
    return vals[: nmax + 1] / total


@lru_cache(maxsize=256)
def _kernel_cached(s: float, eps: float) -> DiscreteGaussian:
    if s == 0:
        return DiscreteGaussian(0.0, 0, np.ones(1), 0.0)
    nmax = int(math.ceil(10 * math.sqrt(s) + 20 + math.sqrt(-2 * math.log(eps)) * math.sqrt(s)))
    half = _scaled_bessel_series(s, nmax) if s < 0.5 else _scaled_bessel_miller(s, nmax)
    # smallest N with sum_{|n| <= N} T > 1 - eps
    mass = half[0] + 2 * np.cumsum(half[1:])
    mass = np.concatenate([[half[0]], mass])
    idx = np.nonzero(mass > 1 - eps)[0]
    N = int(idx[0]) if len(idx) else nmax
    vals = np.concatenate([half[N:0:-1], half[: N + 1]])
    vals.setflags(write=False)
    return DiscreteGaussian(float(s), N, vals, float(max(0.0, 1 - vals.sum())))


def discrete_gaussian_kernel(s: float, eps: float = 1e-10) -> DiscreteGaussian:
    if s < 0:
        raise ParameterError(f"spatial variance must be non-negative, got {s}")
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    return _kernel_cached(float(s), float(eps))


def sigma_to_pixel_variance(sigma_x: float, p: float) -> float:
    if not p > 0:
        raise ParameterError("pixels per unit must be positive")
    return (p * sigma_x) ** 2


def smooth_separable(img, s: float, eps: float = 1e-10) -> np.ndarray:
    """Smooth along x then y (the last two axes) with the 1-D discrete Gaussian."""
    img = np.asarray(img, dtype=float)
    if s == 0:
        return img.copy()
    w = discrete_gaussian_kernel(s, eps).values
    out = ndimage.correlate1d(img, w, axis=-1, mode=MODE)
    return ndimage.correlate1d(out, w, axis=-2, mode=MODE)


def _diagonal_kernel(w: np.ndarray, anti: bool) -> np.ndarray:
    k = np.diag(w)
    return np.fliplr(k) if anti else k


def smooth_gamma_third(img, s: float, eps: float = 1e-10) -> np.ndarray:
    """Rotationally more symmetric smoothing: two diagonal passes then a Cartesian pass.

    Each diagonal pass uses the 1-D kernel at s/6 along its diagonal, which
    adds s/6 of variance to each axis; the Cartesian pass adds 2s/3.
    """
    img = np.asarray(img, dtype=float)
    if s == 0:
        return img.copy()
    w = discrete_gaussian_kernel(s / 6, eps).values
    out = img
    for anti in (False, True):
        k = _diagonal_kernel(w, anti)
        if out.ndim == 2:
            out = ndimage.correlate(out, k, mode=MODE)
        else:
            k = k.reshape((1,) * (out.ndim - 2) + k.shape)
            out = ndimage.correlate(out, k, mode=MODE)
    return smooth_separable(out, 2 * s / 3, eps)


_DX = np.array([-0.5, 0.0, 0.5])
_DXX = np.array([1.0, -2.0, 1.0])


def spatial_difference(img, op: str) -> np.ndarray:
    """Central difference named by its axes, e.g. 'x', 'yy', 'xy', 'xxy'.

    Orders above two are composed from the first- and second-order stencils.
    """
    img = np.asarray(img, dtype=float)
    if img.shape[-1] < 3 or img.shape[-2] < 3:
        raise ParameterError("image must be at least 3x3")
    if not op or set(op) - {"x", "y"}:
        raise ParameterError(f"unknown difference operator {op!r}")
    out = img
    for axis, n in ((-1, op.count("x")), (-2, op.count("y"))):
        for _ in range(n // 2):
            out = ndimage.correlate1d(out, _DXX, axis=axis, mode=MODE)
        if n % 2:
            out = ndimage.correlate1d(out, _DX, axis=axis, mode=MODE)
    return out
