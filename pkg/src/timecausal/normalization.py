"""Scale normalization of temporal and spatial derivatives.

Two schemes are provided for temporal derivatives of order n:

* variance-based, multiplying by tau**(n gamma / 2);
* L_p-based, multiplying by alpha = G_{n,gamma} / ||h_{t^n}||_p with
  p = 1 / (1 + n (1 - gamma)), so that the normalized kernel has the same
  L_p norm as the gamma-normalized Gaussian derivative.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate, special

from .errors import ParameterError
from .kernels import kernel_derivative_samples
from .recursive import RecursiveCascade, impulse_response
from .scales import ScaleDistribution, logarithmic_time_constants, uniform_time_constants

IMPULSE_TAIL_EPS = 1e-10

# closed forms of ||g_{x^n}(., 1)||_1
G_CLOSED = {
    1: math.sqrt(2 / math.pi),
    2: math.sqrt(8 / (math.pi * math.e)),
    3: math.sqrt(2 / math.pi) * (1 + 4 * math.exp(-1.5)),
    4: 4 * math.sqrt(3) / (math.exp(1.5 + math.sqrt(1.5)) * math.sqrt(math.pi))
       * (math.sqrt(3 - math.sqrt(6)) * math.exp(math.sqrt(6)) + math.sqrt(3 + math.sqrt(6))),
}


def lp_exponent(n: int, gamma: float) -> float:
    """p = 1 / (1 + n (1 - gamma)); gamma = 1 gives p = 1 for every order."""
    p = 1.0 / (1.0 + n * (1.0 - gamma))
    if not p > 0:
        raise ParameterError(f"gamma = {gamma} gives no valid p for order {n}")
    return p


def variance_norm_factor(tau: float, n: int, gamma: float = 1.0) -> float:
    if tau < 0:
        raise ParameterError("tau must be non-negative")
    return tau ** (n * gamma / 2)


def spatial_norm_factor(s: float, m1: int, m2: int, gamma_s: float = 1.0) -> float:
    if s < 0:
        raise ParameterError("s must be non-negative")
    return s ** (gamma_s * (m1 + m2) / 2)


def _gaussian_derivative(x, n):
    # d^n/dx^n of the unit-variance Gaussian is (-1)^n He_n(x) g(x)
    return (-1) ** n * special.eval_hermitenorm(n, x) * np.exp(-x * x / 2) / math.sqrt(2 * math.pi)


def gaussian_derivative_norm_quad(n: int, gamma: float = 1.0) -> float:
    """||g_{x^n}(., 1)||_p by adaptive quadrature between the zeros of He_n."""
    if n <= 0:
        raise ParameterError("order must be positive")
    p = lp_exponent(n, gamma)
    zeros = list(special.roots_hermitenorm(n)[0]) if n > 1 else [0.0]
    edges = [-14.0] + sorted(zeros) + [14.0]
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        val, _ = integrate.quad(lambda x: abs(_gaussian_derivative(x, n)) ** p, a, b,
                                epsabs=1e-14, epsrel=1e-12, limit=200)
        total += val
    return total ** (1 / p)


@lru_cache(maxsize=64)
def gaussian_derivative_norm(n: int, gamma: float = 1.0) -> float:
    """G_{n,gamma}: closed form for gamma = 1 and n <= 4, quadrature otherwise."""
    if n <= 0:
        raise ParameterError("order must be positive")
    if gamma == 1.0 and n in G_CLOSED:
        return G_CLOSED[n]
    return gaussian_derivative_norm_quad(n, gamma)


def discrete_derivative_kernel(cascade: RecursiveCascade, n: int,
                               eps: float = IMPULSE_TAIL_EPS) -> np.ndarray:
    """Backward differences of order n applied to the cascade's impulse response."""
    h = impulse_response(cascade, eps).values
    padded = np.concatenate([np.zeros(n), h, np.zeros(n)])
    return np.diff(padded, n)


def lp_norm(values, p: float) -> float:
    return float(np.sum(np.abs(values) ** p) ** (1 / p))


def lp_norm_factor_discrete(cascade: RecursiveCascade, n: int, gamma: float = 1.0,
                            eps: float = IMPULSE_TAIL_EPS) -> float:
    """alpha_{n,gamma} for the discrete cascade, with the discrete l_p norm."""
    if n < 1:
        raise ParameterError("order must be >= 1")
    p = lp_exponent(n, gamma)
    return gaussian_derivative_norm(n, gamma) / lp_norm(discrete_derivative_kernel(cascade, n, eps), p)


def lp_norm_factor_continuous(dist: ScaleDistribution, n: int, gamma: float = 1.0,
                              oversample: int = 1024, horizon: float = 16.0) -> float:
    """alpha_{n,gamma} for the continuous cascade kernel.

    The kernel is sampled at dt = sqrt(tau)/oversample up to
    mean + horizon*sqrt(tau), so grids at different tau are similar.
    """
    root = math.sqrt(dist.tau_max)
    k = kernel_derivative_samples(dist, n, root / oversample, dist.mean + horizon * root)
    p = lp_exponent(n, gamma)
    norm = float(integrate.simpson(np.abs(k.values) ** p, dx=k.dt)) ** (1 / p)
    return gaussian_derivative_norm(n, gamma) / norm


def frame_distribution(tau: float, K: int, c: Optional[float]) -> ScaleDistribution:
    """Uniform (c is None) or logarithmic distribution, in frame units."""
    if c is None:
        return uniform_time_constants(tau, K)
    return logarithmic_time_constants(tau, c, K)


@lru_cache(maxsize=512)
def alpha_discrete(n: int, tau: float, K: int, c: Optional[float], gamma: float = 1.0) -> float:
    cascade = RecursiveCascade.from_distribution(frame_distribution(tau, K, c))
    return lp_norm_factor_discrete(cascade, n, gamma)


def default_k_ref(c: Optional[float]) -> int:
    return 1000 if c is None else 500


def deviation_from_limit(n: int, tau: float, c: Optional[float], K: int,
                         K_ref: Optional[int] = None, gamma: float = 1.0) -> float:
    """Relative deviation of alpha_n at K stages from its value at K_ref stages."""
    K_ref = default_k_ref(c) if K_ref is None else K_ref
    if K_ref < K:
        raise ParameterError("K_ref must be at least K")
    a = alpha_discrete(n, float(tau), K, c, gamma)
    ref = alpha_discrete(n, float(tau), K_ref, c, gamma)
    return abs(a - ref) / ref
