"""Streaming spatio-temporal feature computation over a frame sequence.

Each frame is smoothed spatially at every requested s, pushed through one
recursive temporal cascade per (s, tau) channel, and the final stage of
each cascade feeds a three-deep ring for the temporal differences.  Memory
is K + 3 frame slices per channel regardless of sequence length.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from . import features as feat
from .errors import ParameterError, StateError
from .normalization import lp_norm_factor_discrete, variance_norm_factor
from .recursive import CascadeState, DifferenceBuffer, RecursiveCascade, seconds_to_frame_variance, step
from .scales import (ScaleDistribution, limit_time_constants, logarithmic_time_constants,
                     uniform_time_constants)
from .spatial import sigma_to_pixel_variance, smooth_gamma_third, smooth_separable


@dataclass(frozen=True)
class PipelineConfig:
    fps: float = 25.0
    tau_seconds: Tuple[float, ...] = (0.1,)
    sigma_x: Tuple[float, ...] = (2.0,)
    pixels_per_unit: float = 1.0
    dist: str = "log"  # 'uniform' or 'log'
    c: float = 2.0
    K: int = 7
    limit_eps: Optional[float] = None  # use the truncated limit cascade when set
    norm: str = "lp"  # 'var' or 'lp'
    gamma_s: float = 1.0
    gamma_t: float = 1.0
    features: Tuple[str, ...] = ("q2",)
    C: float = feat.C_TWO_THIRDS
    kappa: float = 1.0
    velocity: Tuple[float, float] = (0.0, 0.0)
    log_intensity: bool = False
    smoothing: str = "separable"  # or 'gamma_third'
    spatial_eps: float = 1e-10

    def validate(self):
        if not self.fps > 0:
            raise ParameterError("fps must be positive")
        if not self.tau_seconds or any(not t > 0 for t in self.tau_seconds):
            raise ParameterError("temporal scales must be positive")
        if not self.sigma_x or any(s < 0 for s in self.sigma_x):
            raise ParameterError("spatial scales must be non-negative")
        if self.dist not in ("uniform", "log"):
            raise ParameterError("dist must be 'uniform' or 'log'")
        if self.dist == "log" and not self.c > 1:
            raise ParameterError("c must exceed 1")
        if int(self.K) != self.K or self.K < 1:
            raise ParameterError("K must be a positive integer")
        if self.limit_eps is not None and not 0 < self.limit_eps < 1:
            raise ParameterError("limit eps must lie in (0, 1)")
        if self.norm not in ("var", "lp"):
            raise ParameterError("norm must be 'var' or 'lp'")
        if self.smoothing not in ("separable", "gamma_third"):
            raise ParameterError("smoothing must be 'separable' or 'gamma_third'")
        feat.needed_partials(self.features)
        feat.FeatureParams(self.C, self.kappa, self.velocity)
        for n in range(1, feat.max_temporal_order(self.features) + 1):
            for g in (self.gamma_t,):
                if 1 + n * (1 - g) <= 0:
                    raise ParameterError(f"gamma_t = {g} invalid for order {n}")

    def distribution(self, tau_frames: float) -> ScaleDistribution:
        if self.limit_eps is not None:
            return limit_time_constants(tau_frames, self.c, self.limit_eps)
        if self.dist == "uniform":
            return uniform_time_constants(tau_frames, self.K)
        return logarithmic_time_constants(tau_frames, self.c, self.K)


@dataclass
class Channel:
    s: float
    tau: float
    cascade: RecursiveCascade
    state: CascadeState
    ring: DifferenceBuffer
    alpha: Dict[int, float]


class StreamProcessor:
    """Single pass, constant memory feature computation; state carries across calls."""

    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config
        self.params = feat.FeatureParams(config.C, config.kappa, config.velocity)
        self.needed = feat.needed_partials(config.features)
        self.max_order = feat.max_temporal_order(config.features)
        self.scales_s = [sigma_to_pixel_variance(sx, config.pixels_per_unit) for sx in config.sigma_x]
        self.channels: List[Tuple[int, int, Channel]] = []
        for i, s in enumerate(self.scales_s):
            for j, ts in enumerate(config.tau_seconds):
                tau = seconds_to_frame_variance(ts, config.fps)
                cascade = RecursiveCascade.from_distribution(config.distribution(tau))
                alpha = {n: self._alpha(cascade, n) for n in range(1, self.max_order + 1)}
                warm = max(2, self.max_order + 1, math.ceil(cascade.mean))
                self.channels.append((i, j, Channel(s, tau, cascade, CascadeState(cascade.K),
                                                    DifferenceBuffer(warm), alpha)))
        self.frame_index = 0
        self.shape: Optional[Tuple[int, int]] = None
        self.high_water = 0

    def _alpha(self, cascade: RecursiveCascade, n: int) -> float:
        if self.config.norm == "var":
            return variance_norm_factor(cascade.variance, n, self.config.gamma_t)
        return lp_norm_factor_discrete(cascade, n, self.config.gamma_t)

    @property
    def warmup(self) -> int:
        return max(ch.ring.warmup for _, _, ch in self.channels)

    def resident_slices(self) -> int:
        """Frame-sized arrays currently held as state."""
        total = 0
        for _, _, ch in self.channels:
            if ch.state.values is not None:
                total += ch.state.values.shape[0]
            total += len(ch.ring.frames)
        return total

    def _smooth(self, frame, s):
        if self.config.smoothing == "gamma_third":
            return smooth_gamma_third(frame, s, self.config.spatial_eps)
        return smooth_separable(frame, s, self.config.spatial_eps)

    def push(self, frame) -> Dict[Tuple[str, int, int], np.ndarray]:
        """Consume one frame; returns {(feature, i_s, i_tau): image} once warmed up."""
        f = np.asarray(frame, dtype=float)
        if f.ndim != 2:
            raise StateError(f"frame {self.frame_index}: expected a 2-D image")
        if self.shape is None:
            self.shape = f.shape
        elif f.shape != self.shape:
            raise StateError(f"frame {self.frame_index}: size {f.shape} differs from {self.shape}")
        if self.config.log_intensity:
            f = np.log1p(np.maximum(f, 0.0))
        t = self.frame_index
        v = self.config.velocity
        moving = v[0] != 0 or v[1] != 0
        if moving:
            f = feat.velocity_warp(f, v, t)
        smoothed = {}
        out = {}
        for i, j, ch in self.channels:
            if i not in smoothed:
                smoothed[i] = self._smooth(f, ch.s)
            L = step(ch.state, ch.cascade, smoothed[i])[-1]
            ch.ring.push(L)
            if ch.ring.count < ch.ring.warmup:
                continue
            Lt = ch.ring.d_t() if self.max_order >= 1 else None
            Ltt = ch.ring.d_tt() if self.max_order >= 2 else None
            jet = feat.compute_jet(ch.ring.value(), Lt, Ltt, self.needed,
                                   ch.s, self.config.gamma_s, ch.alpha, ch.tau)
            for name in self.config.features:
                img = feat.evaluate_feature(jet, name, self.params)
                out[(name, i, j)] = feat.velocity_unwarp(img, v, t) if moving else img
        self.high_water = max(self.high_water, self.resident_slices() + len(smoothed))
        self.frame_index += 1
        return out

    def process(self, frames: Iterable, sink: Optional[Callable[[int, dict], None]] = None) -> list:
        """Push every frame; results go to ``sink(frame_index, outputs)`` or are collected."""
        collected = []
        for frame in frames:
            idx = self.frame_index
            res = self.push(frame)
            if not res:
                continue
            if sink is None:
                collected.append((idx, res))
            else:
                sink(idx, res)
        return collected

    def normalization_factors(self) -> Dict[str, float]:
        out = {}
        for i, j, ch in self.channels:
            for n, a in ch.alpha.items():
                out[f"alpha{n}_s{i}_t{j}"] = a
        return out
