"""Continuous composed kernels, the limit kernel, cumulants and the log-normal comparison.

The composed kernel of K truncated exponentials has Laplace transform
prod_k 1/(1 + mu_k s).  It is evaluated here by partial fractions over the
distinct poles -1/mu_j.  Repeated time constants (which happen for
c = sqrt(2), where mu_1 == mu_2) give confluent terms t**r e^{-t/mu}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize, signal, special

from .errors import ContinuityError, DomainError, NumericError, ParameterError
from .scales import (DelayReport, Kind, ScaleDistribution, limit_time_constants,
                     tmax_uniform)

POLE_RTOL = 1e-9


@dataclass(frozen=True)
class SampledKernel:
    values: np.ndarray
    dt: float
    t0: float = 0.0
    order: int = 0

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.values))

    def mass(self) -> float:
        return float(integrate.simpson(self.values, dx=self.dt))

    def l1(self) -> float:
        return float(integrate.simpson(np.abs(self.values), dx=self.dt))


@dataclass(frozen=True)
class CumulantReport:
    kappa1: float
    kappa2: float
    kappa3: float
    kappa4: float
    M1: float
    M2: float
    M3: float
    M4: float
    gamma1: float
    gamma2: float


@dataclass(frozen=True)
class KoenderinkParams:
    sigma: float
    delta: float

    def __post_init__(self):
        if not (self.sigma > 0 and self.delta > 0):
            raise ParameterError("sigma and delta must be positive")


# ---------------------------------------------------------------------------
# partial fractions

@dataclass(frozen=True)
class _Pole:
    p: float            # pole location -1/mu
    coeffs: Tuple[float, ...]  # coeffs[r-1] multiplies t**(r-1) e^{pt} / (r-1)!


def _group_mus(mus: Sequence[float]) -> List[Tuple[float, int]]:
    groups: List[List[float]] = []
    for mu in sorted(float(m) for m in mus):
        if groups and abs(mu - groups[-1][0]) <= POLE_RTOL * mu:
            groups[-1].append(mu)
        else:
            groups.append([mu])
    return [(float(np.mean(g)), len(g)) for g in groups]


def _partial_fractions(mus: Sequence[float]) -> List[_Pole]:
    if len(mus) == 0:
        raise ParameterError("need at least one time constant")
    if any(not m > 0 for m in mus):
        raise ParameterError("time constants must be positive")
    groups = _group_mus(mus)
    poles = [-1.0 / mu for mu, _ in groups]
    mult = [m for _, m in groups]
    logC = -sum(m * math.log(mu) for mu, m in groups)
    out = []
    for j, (pj, mj) in enumerate(zip(poles, mult)):
        # f(s) = C / prod_{i != j} (s - p_i)^{m_i}, expanded around p_j
        diffs = [(pj - pi, mi) for i, (pi, mi) in enumerate(zip(poles, mult)) if i != j]
        sign = 1.0
        logabs = logC
        for d, mi in diffs:
            logabs -= mi * math.log(abs(d))
            if d < 0 and mi % 2:
                sign = -sign
        f = [sign * math.exp(logabs)]
        l = [0.0] + [sum(mi * (-1) ** k / (k * d ** k) for d, mi in diffs) for k in range(1, mj)]
        for n in range(1, mj):
            f.append(sum(k * l[k] * f[n - k] for k in range(1, n + 1)) / n)
        out.append(_Pole(pj, tuple(f[mj - r] for r in range(1, mj + 1))))
    return out


def _eval_poles(poles: List[_Pole], t: np.ndarray, n: int) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    pos = t > 0
    tp = np.where(pos, t, 0.0)
    res = np.zeros_like(tp)
    for pole in poles:
        e = np.exp(pole.p * tp)
        for r, A in enumerate(pole.coeffs, start=1):
            # n-th derivative of t^(r-1)/(r-1)! e^{pt} by Leibniz
            acc = np.zeros_like(tp)
            for i in range(0, min(n, r - 1) + 1):
                acc += math.comb(n, i) * tp ** (r - 1 - i) / math.factorial(r - 1 - i) * pole.p ** (n - i)
            res += A * acc * e
    return np.where(pos, res, 0.0)


def evaluate_cascade_kernel(t, mus: Sequence[float], n: int = 0):
    """Composed kernel (or its n-th time derivative) of a cascade of truncated exponentials.

    Zero for t <= 0.  Works on scalars and arrays.
    """
    poles = _partial_fractions(mus)
    out = _eval_poles(poles, np.atleast_1d(t), n)
    return float(out[0]) if np.ndim(t) == 0 else out


def evaluate_gamma_kernel(t, mu: float, K: int):
    """Gamma density, i.e. K equal truncated exponentials with time constant mu."""
    if not mu > 0 or K < 1:
        raise ParameterError("need mu > 0 and K >= 1")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t_arr)
    pos = t_arr > 0
    tp = t_arr[pos]
    out[pos] = np.exp((K - 1) * np.log(tp) - tp / mu - K * math.log(mu) - special.gammaln(K))
    if K == 1:
        out[t_arr == 0] = 1.0 / mu
    return float(out[0]) if np.ndim(t) == 0 else out


def default_sampling(dist: ScaleDistribution) -> Tuple[float, float]:
    """(dt, T) with dt = sqrt(tau)/256 and T = m + 12 sqrt(tau)."""
    root = math.sqrt(dist.tau_max)
    return root / 256.0, dist.mean + 12.0 * root


def kernel_derivative_samples(dist: ScaleDistribution, n: int = 0,
                              dt: Optional[float] = None, T: Optional[float] = None) -> SampledKernel:
    if n < 0:
        raise ParameterError("derivative order must be non-negative")
    if n > 0 and n > dist.K - 2:
        raise ContinuityError(f"order {n} derivative needs K >= {n + 2}, have K = {dist.K}")
    ddt, dT = default_sampling(dist)
    dt = ddt if dt is None else dt
    T = dT if T is None else T
    if not dt > 0 or not T > 0:
        raise ParameterError("dt and T must be positive")
    t = dt * np.arange(int(math.floor(T / dt)) + 1)
    vals = _eval_poles(_partial_fractions(dist.mus), t, n)
    if dist.K == 1 and n == 0:
        vals[0] = 1.0 / dist.mus[0]
    return SampledKernel(vals, dt, 0.0, n)


def tmax_numeric(dist: ScaleDistribution, tol: float = 1e-6) -> float:
    """Position of the maximum of the composed kernel.

    A grid scan over [0, sum(mu)] checks unimodality and brackets the peak,
    golden-section search narrows it to ``tol`` and a root of the analytic
    first derivative polishes the result.
    """
    if dist.K < 2:
        raise ParameterError("t_max needs K >= 2")
    poles = _partial_fractions(dist.mus)
    hi = dist.mean
    grid = np.linspace(0.0, hi, 2049)
    vals = _eval_poles(poles, grid, 0)
    # roundoff near t = 0 produces wiggles of order 1e-13; ignore them
    peaks, _ = signal.find_peaks(vals, prominence=1e-9 * vals.max())
    if len(peaks) > 1:
        raise NumericError("composed kernel has several local maxima on [0, mean]")
    i = int(np.argmax(vals))
    if i == 0 or i == len(grid) - 1:
        raise NumericError("kernel maximum not inside [0, mean]")
    a, b, c = grid[i - 1], grid[i], grid[i + 1]
    res = optimize.minimize_scalar(lambda x: -float(_eval_poles(poles, np.array([x]), 0)[0]),
                                   bracket=(a, b, c), method="golden", tol=tol / max(b, 1.0))
    x = float(res.x)
    deriv = lambda x: float(_eval_poles(poles, np.array([x]), 1)[0])
    lo, up = max(x - 2 * tol, a), min(x + 2 * tol, c)
    if deriv(lo) > 0 > deriv(up):
        x = optimize.brentq(deriv, lo, up, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return x


def delay_report(dist: ScaleDistribution) -> DelayReport:
    if dist.kind is Kind.UNIFORM:
        return DelayReport(dist.mean, tmax_uniform(dist.tau_max, dist.K), "closed_form")
    return DelayReport(dist.mean, tmax_numeric(dist), "numeric")


def limit_kernel_samples(tau: float, c: float, eps: float = 1e-10, dt: Optional[float] = None,
                         T: Optional[float] = None, n: int = 0) -> SampledKernel:
    """Samples of the scale-invariant limit kernel via a truncated cascade."""
    dist = limit_time_constants(tau, c, eps)
    return kernel_derivative_samples(dist, n, dt, T)


def fourier_cascade(omega, dist_or_mus) -> complex:
    mus = dist_or_mus.mus if isinstance(dist_or_mus, ScaleDistribution) else dist_or_mus
    w = np.asarray(omega, dtype=float)
    out = np.ones(w.shape, dtype=complex)
    for mu in mus:
        out = out / (1 + 1j * mu * w)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# cumulants

def cumulants_from_mus(mus: Sequence[float]) -> CumulantReport:
    """kappa_n = (n-1)! sum mu_k**n, exact for any cascade of truncated exponentials."""
    mus = np.asarray(mus, dtype=float)
    k = [math.factorial(n - 1) * math.fsum(mus ** n) for n in (1, 2, 3, 4)]
    return _report(*k)


def _report(k1, k2, k3, k4) -> CumulantReport:
    return CumulantReport(k1, k2, k3, k4, k1, k2, k3, k4 + 3 * k2 * k2,
                          k3 / k2 ** 1.5, k4 / (k2 * k2))


def cumulants_logarithmic(tau: float, c: float, K: Optional[int] = None) -> CumulantReport:
    """Cumulants of the geometric cascade; ``K=None`` gives the limit kernel."""
    if not c > 1:
        raise ParameterError("c must exceed 1")
    if K is not None:
        from .scales import logarithmic_time_constants
        return cumulants_from_mus(logarithmic_time_constants(tau, c, K).mus)
    r = math.sqrt(c * c - 1)
    M1 = math.sqrt((c + 1) / (c - 1)) * math.sqrt(tau)
    M3 = 2 * (c + 1) * r * tau ** 1.5 / (c * c + c + 1)
    M4 = 3 * (3 * c * c - 1) * tau * tau / (c * c + 1)
    k4 = M4 - 3 * tau * tau
    return CumulantReport(M1, tau, M3, k4, M1, tau, M3, M4,
                          2 * (c + 1) * r / (c * c + c + 1), 6 * (c * c - 1) / (c * c + 1))


def cumulants_uniform(tau: float, K: int) -> CumulantReport:
    if K < 1:
        raise ParameterError("K must be >= 1")
    mu2 = tau / K
    mu = math.sqrt(mu2)
    return _report(K * mu, tau, 2 * K * mu2 * mu, 6 * K * mu2 * mu2)


def numeric_moments(kernel: SampledKernel) -> Tuple[float, float, float, float, float]:
    """(mass, mean, central M2, M3, M4) of a sampled kernel by Simpson quadrature."""
    t, v = kernel.t, kernel.values
    q = lambda f: float(integrate.simpson(f, dx=kernel.dt))
    M0 = q(v)
    m = q(t * v) / M0
    d = t - m
    return M0, m, q(d ** 2 * v) / M0, q(d ** 3 * v) / M0, q(d ** 4 * v) / M0


# ---------------------------------------------------------------------------
# log-normal scale-time kernel

def koenderink_kernel(t, sigma: float, delta: float):
    if not (sigma > 0 and delta > 0):
        raise ParameterError("sigma and delta must be positive")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t_arr)
    pos = t_arr > 0
    lt = np.log(t_arr[pos] / delta)
    out[pos] = np.exp(-lt * lt / (2 * sigma * sigma) - sigma * sigma / 2) / (math.sqrt(2 * math.pi) * sigma * delta)
    return float(out[0]) if np.ndim(t) == 0 else out


def koenderink_moments(sigma: float, delta: float) -> Tuple[float, float]:
    """First moment and central second moment."""
    s2 = sigma * sigma
    return delta * math.exp(1.5 * s2), delta * delta * math.exp(3 * s2) * math.expm1(s2)


def koenderink_map_limit(tau: float, c: float) -> KoenderinkParams:
    """Log-normal parameters with the same mean and variance as the limit kernel."""
    if not c > 1:
        raise ParameterError("c must exceed 1")
    sigma = math.sqrt(math.log(2 * c / (c + 1)))
    delta = (c + 1) ** 2 * math.sqrt(tau) / (2 * math.sqrt(2) * math.sqrt((c - 1) * c ** 3))
    return KoenderinkParams(sigma, delta)


def koenderink_map_inverse(sigma: float, delta: float) -> Tuple[float, float]:
    """(tau, c) of the limit kernel matching a log-normal kernel."""
    if not (sigma > 0 and delta > 0):
        raise ParameterError("sigma and delta must be positive")
    e = math.exp(sigma * sigma)
    if not e < 2:
        raise DomainError("sigma must be below sqrt(log 2) for the inverse map")
    return delta * delta * e ** 3 * (e - 1), e / (2 - e)


def _direct_moment_match(m: float, tau: float) -> KoenderinkParams:
    s2 = math.log1p(tau / (m * m))
    return KoenderinkParams(math.sqrt(s2), m * math.exp(-1.5 * s2))


def koenderink_map_finite_K(tau: float, c: float, K: int) -> KoenderinkParams:
    """Log-normal parameters matching mean and variance of a K-stage geometric cascade."""
    if not c > 1:
        raise ParameterError("c must exceed 1")
    if K < 2:
        raise ParameterError("K must be >= 2")
    r = math.sqrt(c * c - 1)
    # every term is scaled by c**(-4K) (A, B) or c**(-K) (C) so large K does not overflow
    def p(e_K, e_0):
        return c ** (e_K * K + e_0 - 4 * K)
    A = 2 * c * (p(4, 0) - 4 * p(1, 2) - 4 * p(1, 3) + 3 * p(2, 3) - 3 * p(3, 2) + p(4, 1)
                 + 2 * p(0, 3) + (r - 1) * p(3, 0) - (r - 4) * p(2, 1) + (r + 5) * p(2, 2)
                 - (r + 4) * p(3, 1))
    Bs = c ** (-2 * K)
    B = (1 - 2 * c ** (1 - K) - 2 * c ** (2 - K) + c + 2 * c * c * Bs) ** 2
    C = c ** (2 - K) - (r + 1) * c ** (1 - K) + r
    D, E = A / 2, B
    if abs(A) < 1e-12 or abs(B) < 1e-12:
        # 0/0 in the closed form (c = sqrt(2), K = 2); fall back to moment matching
        from .scales import mean_logarithmic
        return _direct_moment_match(mean_logarithmic(tau, c, K), tau)
    if A / B <= 1 or D / E <= 0:
        raise DomainError("closed-form log-normal map undefined for these parameters")
    sigma = math.sqrt(math.log(A / B))
    delta = C / (2 * math.sqrt(2) * (c - 1) * (D / E) ** 1.5) * math.sqrt(tau)
    return KoenderinkParams(sigma, delta)


def limit_self_similarity_residual(tau: float, c: float, eps: float = 1e-10,
                                   dt: Optional[float] = None, T: Optional[float] = None) -> float:
    """L1 distance between Psi(t; tau) and c Psi(c t; c**2 tau) on a common grid."""
    base = limit_kernel_samples(tau, c, eps, dt, T)
    coarse = limit_time_constants(c * c * tau, c, eps)
    scaled = c * evaluate_cascade_kernel(c * base.t, coarse.mus)
    return float(integrate.simpson(np.abs(scaled - base.values), dx=base.dt))
