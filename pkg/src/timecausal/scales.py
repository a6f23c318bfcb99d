"""Temporal scale levels and the time constants of first-order integrators.

A cascade of K truncated exponential kernels with time constants mu_k has
temporal mean sum(mu_k) and variance sum(mu_k**2).  The functions here
distribute K temporal scale levels tau_1 < ... < tau_K = tau_max either
uniformly or geometrically and return the corresponding time constants.
All times are in abstract units; conversion from seconds is done in
:mod:`timecausal.recursive`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ParameterError

VARIANCE_RTOL = 1e-12


class Kind(enum.Enum):
    UNIFORM = "uniform"
    LOGARITHMIC = "logarithmic"
    LIMIT = "limit"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class ScaleDistribution:
    """Ordered temporal scale levels and the time constants that realize them.

    ``levels[k]`` is the variance after the first k+1 integrators, so
    ``levels[-1] == tau_max`` and ``levels[k] - levels[k-1] == mus[k]**2``.
    ``c`` is only set for logarithmic and limit distributions.
    """

    kind: Kind
    tau_max: float
    K: int
    mus: Tuple[float, ...]
    levels: Tuple[float, ...]
    c: Optional[float] = None

    def __post_init__(self):
        if self.K != len(self.mus) or self.K != len(self.levels):
            raise ParameterError("K must match the number of time constants")
        if any(m < 0 for m in self.mus):
            raise ParameterError("time constants must be non-negative")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ParameterError("scale levels must be strictly increasing")
        total = math.fsum(m * m for m in self.mus)
        if abs(total - self.tau_max) > VARIANCE_RTOL * self.tau_max:
            raise ParameterError("time constants do not add up to tau_max")

    @property
    def mean(self) -> float:
        return math.fsum(self.mus)

    @property
    def variance(self) -> float:
        return math.fsum(m * m for m in self.mus)

    def scaled(self, factor: float) -> "ScaleDistribution":
        """Same distribution with every time constant multiplied by ``factor``."""
        f2 = factor * factor
        return ScaleDistribution(self.kind, self.tau_max * f2, self.K,
                                 tuple(m * factor for m in self.mus),
                                 tuple(t * f2 for t in self.levels), self.c)


@dataclass(frozen=True)
class DelayReport:
    mean: float
    tmax: float
    method: str  # 'closed_form', 'numeric' or 'koenderink_estimate'


def _levels_from_mus(mus: Sequence[float]) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.cumsum(np.square(mus)))


def _check_tau_K(tau_max, K):
    if not tau_max > 0:
        raise ParameterError(f"tau_max must be positive, got {tau_max}")
    if int(K) != K or K < 1:
        raise ParameterError(f"K must be an integer >= 1, got {K}")


def uniform_time_constants(tau_max: float, K: int) -> ScaleDistribution:
    """Levels tau_k = k tau_max / K, all time constants equal to sqrt(tau_max/K)."""
    _check_tau_K(tau_max, K)
    K = int(K)
    mu = math.sqrt(tau_max / K)
    levels = tuple(k * tau_max / K for k in range(1, K + 1))
    return ScaleDistribution(Kind.UNIFORM, float(tau_max), K, (mu,) * K, levels)


def logarithmic_time_constants(tau_max: float, c: float, K: int) -> ScaleDistribution:
    """Levels tau_k = c**(2(k-K)) tau_max for a distribution parameter c > 1."""
    _check_tau_K(tau_max, K)
    if not c > 1:
        raise ParameterError(f"distribution parameter c must exceed 1, got {c}")
    K = int(K)
    root = math.sqrt(tau_max)
    mus = [c ** (1 - K) * root]
    step = math.sqrt(c * c - 1) * root
    mus += [c ** (k - K - 1) * step for k in range(2, K + 1)]
    levels = tuple(c ** (2 * (k - K)) * tau_max for k in range(1, K + 1))
    return ScaleDistribution(Kind.LOGARITHMIC, float(tau_max), K, tuple(mus), levels, float(c))


def logarithmic_from_min_scale(tau_min: float, tau_max: float, K: int) -> ScaleDistribution:
    """Geometric distribution whose finest level equals ``tau_min``."""
    _check_tau_K(tau_max, K)
    if K < 2:
        raise ParameterError("a given minimum scale needs K >= 2")
    if not 0 < tau_min < tau_max:
        raise ParameterError("need 0 < tau_min < tau_max")
    c = (tau_max / tau_min) ** (1.0 / (2 * (K - 1)))
    if c <= 1 + 1e-12:
        raise ParameterError(f"tau_min too close to tau_max (c = {c!r})")
    return logarithmic_time_constants(tau_max, c, K)


def limit_time_constants(tau: float, c: float, eps: float) -> ScaleDistribution:
    """Truncation of the infinite geometric cascade behind the limit kernel.

    Keeps mu_k = c**-k sqrt(c**2 - 1) sqrt(tau) for k = 1..K with the
    smallest K whose discarded variance tau c**(-2K) is below ``eps * tau``.
    The returned ``tau_max`` is the retained variance, i.e. tau (1 - c**(-2K)).
    Time constants are ordered finest first.
    """
    if not tau > 0:
        raise ParameterError("tau must be positive")
    if not c > 1:
        raise ParameterError(f"distribution parameter c must exceed 1, got {c}")
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    K = limit_truncation_length(c, eps)
    step = math.sqrt(c * c - 1) * math.sqrt(tau)
    mus = tuple(c ** (-k) * step for k in range(K, 0, -1))
    return ScaleDistribution(Kind.LIMIT, math.fsum(m * m for m in mus), K, mus,
                             _levels_from_mus(mus), float(c))


def limit_truncation_length(c: float, eps: float) -> int:
    K = max(1, math.ceil(-math.log(eps) / (2 * math.log(c))))
    # guard against the ceil landing exactly on the boundary
    while c ** (-2 * K) >= eps:
        K += 1
    return K


def explicit_time_constants(mus: Sequence[float]) -> ScaleDistribution:
    mus = tuple(float(m) for m in mus)
    if not mus:
        raise ParameterError("need at least one time constant")
    if any(m <= 0 for m in mus):
        raise ParameterError("explicit time constants must be positive")
    levels = _levels_from_mus(mus)
    return ScaleDistribution(Kind.EXPLICIT, math.fsum(m * m for m in mus), len(mus), mus, levels)


def composed_mean_variance(dist: ScaleDistribution) -> Tuple[float, float]:
    """Temporal mean and variance of the composed cascade kernel."""
    return dist.mean, dist.variance


def mean_uniform(tau: float, K: int) -> float:
    return math.sqrt(K * tau)


def mean_logarithmic(tau: float, c: float, K: int) -> float:
    """Closed form of sum(mu_k) for the geometric distribution."""
    if not c > 1:
        raise ParameterError("c must exceed 1")
    r = math.sqrt(c * c - 1)
    return c ** (-K) * (c * c - (r + 1) * c + r * c ** K) / (c - 1) * math.sqrt(tau)


def delay_limit_logarithmic(tau: float, c: float) -> float:
    """Temporal mean of the geometric cascade as K grows without bound."""
    if not c > 1:
        raise ParameterError(f"distribution parameter c must exceed 1, got {c}")
    return math.sqrt((c + 1) / (c - 1)) * math.sqrt(tau)


def tmax_uniform(tau: float, K: int) -> float:
    """Position of the maximum of the Gamma-shaped uniform cascade kernel."""
    if K < 1:
        raise ParameterError("K must be >= 1")
    return (K - 1) / math.sqrt(K) * math.sqrt(tau)
