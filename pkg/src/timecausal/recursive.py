"""Discrete time-recursive temporal smoothing.

Each stage is the first-order recursive filter

    f_out(t) = f_out(t-1) + (f_in(t) - f_out(t-1)) / (1 + mu)

whose kernel has mean mu and variance mu**2 + mu (in frames).  A cascade
only needs the previous output of each stage as memory.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import signal

from .errors import ParameterError, StateError, WarmupError
from .kernels import SampledKernel
from .scales import ScaleDistribution


def mu_from_delta_tau(dtau: float) -> float:
    """Time constant of a recursive stage that adds variance ``dtau`` (frames**2)."""
    if dtau < 0:
        raise ParameterError(f"variance increment must be non-negative, got {dtau}")
    return (math.sqrt(1 + 4 * dtau) - 1) / 2


def seconds_to_frame_variance(sigma_t: float, fps: float) -> float:
    if not fps > 0:
        raise ParameterError("frame rate must be positive")
    return (fps * sigma_t) ** 2


@dataclass(frozen=True)
class RecursiveCascade:
    mus: Tuple[float, ...]
    coeffs: Tuple[float, ...]
    dist: Optional[ScaleDistribution] = None

    @classmethod
    def from_distribution(cls, dist: ScaleDistribution) -> "RecursiveCascade":
        """Stages whose discrete variances match the increments between scale levels.

        ``dist`` must be expressed in frame units.
        """
        levels = (0.0,) + tuple(dist.levels)
        mus = tuple(mu_from_delta_tau(b - a) for a, b in zip(levels, levels[1:]))
        return cls.from_mus(mus, dist)

    @classmethod
    def from_mus(cls, mus: Sequence[float], dist: Optional[ScaleDistribution] = None) -> "RecursiveCascade":
        mus = tuple(float(m) for m in mus)
        if not mus:
            raise ParameterError("need at least one stage")
        if any(m < 0 for m in mus):
            raise ParameterError("time constants must be non-negative")
        return cls(mus, tuple(1.0 / (1.0 + m) for m in mus), dist)

    @property
    def K(self) -> int:
        return len(self.mus)

    @property
    def mean(self) -> float:
        return math.fsum(self.mus)

    @property
    def variance(self) -> float:
        return math.fsum(m * m + m for m in self.mus)

    def level_variances(self) -> np.ndarray:
        """Discrete temporal variance after each stage."""
        return np.cumsum([m * m + m for m in self.mus])

    def warmup_frames(self, k: Optional[int] = None) -> int:
        """Frames to skip before derivatives of stage ``k`` (default: last) are emitted."""
        m = math.fsum(self.mus[: (self.K if k is None else k + 1)])
        return max(2, math.ceil(m))


@dataclass
class CascadeState:
    """Last output of every stage, for one or many independent channels."""

    K: int
    values: Optional[np.ndarray] = None
    frame_index: int = 0
    init: str = "prime"  # 'prime' copies the first sample into all stages, 'zero' starts at 0

    def __post_init__(self):
        if self.init not in ("prime", "zero"):
            raise ParameterError("init must be 'prime' or 'zero'")

    def reset(self):
        self.values = None
        self.frame_index = 0

    def copy(self) -> "CascadeState":
        v = None if self.values is None else self.values.copy()
        return CascadeState(self.K, v, self.frame_index, self.init)


def step(state: CascadeState, cascade: RecursiveCascade, sample) -> np.ndarray:
    """Push one frame through the cascade; returns the K stage outputs for it."""
    if state.K != cascade.K:
        raise StateError(f"state has {state.K} stages, cascade has {cascade.K}")
    x = np.asarray(sample, dtype=float)
    if state.values is None:
        fill = x if state.init == "prime" else np.zeros_like(x)
        state.values = np.broadcast_to(fill, (cascade.K,) + x.shape).copy()
    elif state.values.shape[1:] != x.shape:
        raise StateError(f"sample shape {x.shape} does not match state {state.values.shape[1:]}")
    v = state.values
    inp = x
    for k, a in enumerate(cascade.coeffs):
        v[k] = v[k] + a * (inp - v[k])
        inp = v[k]
    state.frame_index += 1
    return v.copy()


def filter_sequence(cascade: RecursiveCascade, frames, state: Optional[CascadeState] = None,
                    stage: int = -1) -> np.ndarray:
    """Run ``frames`` (time along axis 0) through the cascade, returning one stage's output."""
    if state is None:
        state = CascadeState(cascade.K)
    frames = np.asarray(frames, dtype=float)
    out = np.empty_like(frames)
    for i in range(frames.shape[0]):
        out[i] = step(state, cascade, frames[i])[stage]
    return out


def impulse_response(cascade: RecursiveCascade, eps: float = 1e-10) -> SampledKernel:
    """Equivalent discrete kernel, extended until its mass reaches 1 - eps."""
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    # start from a generous guess and double until the tail is small enough
    L = int(cascade.mean + 10 * math.sqrt(cascade.variance) + 16)
    while True:
        h = np.zeros(L)
        h[0] = 1.0
        for a in cascade.coeffs:
            h = signal.lfilter([a], [1.0, a - 1.0], h)
        csum = np.cumsum(h)
        if csum[-1] >= 1 - eps:
            n = int(np.searchsorted(csum, 1 - eps)) + 1
            return SampledKernel(h[:n], 1.0, 0.0, 0)
        L *= 2


def temporal_difference(history: Sequence, op: str):
    """Backward temporal difference over the most recent frames (last entry is newest)."""
    need = {"d_t": 2, "d_tt": 3}
    if op not in need:
        raise ParameterError(f"unknown temporal difference {op!r}")
    if len(history) < need[op]:
        raise WarmupError(f"{op} needs {need[op]} frames, have {len(history)}")
    if op == "d_t":
        return np.asarray(history[-1]) - np.asarray(history[-2])
    return np.asarray(history[-1]) - 2 * np.asarray(history[-2]) + np.asarray(history[-3])


class DifferenceBuffer:
    """Three-deep ring of one scale channel, enough for d_t and d_tt."""

    def __init__(self, warmup: int = 0):
        self.frames: deque = deque(maxlen=3)
        self.count = 0
        self.warmup = warmup

    def push(self, frame):
        self.frames.append(np.array(frame, dtype=float, copy=True))
        self.count += 1

    @property
    def ready(self) -> bool:
        return len(self.frames) >= 3 and self.count >= self.warmup

    def value(self) -> np.ndarray:
        if not self.frames:
            raise WarmupError("no frames buffered")
        return self.frames[-1]

    def d_t(self) -> np.ndarray:
        return temporal_difference(self.frames, "d_t")

    def d_tt(self) -> np.ndarray:
        return temporal_difference(self.frames, "d_tt")
