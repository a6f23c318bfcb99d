"""Deterministic synthetic frame sequences with known ground truth."""
from __future__ import annotations

import math
from typing import NamedTuple, Optional, Tuple

import numpy as np


class Sequence(NamedTuple):
    frames: np.ndarray  # [T, H, W], values in [0, 1]
    truth: dict


def _gaussian(H, W, cx, cy, sigma):
    y, x = np.mgrid[0:H, 0:W]
    return np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * sigma * sigma))


def blob(T: int = 32, size: Tuple[int, int] = (48, 48), center: Optional[Tuple[float, float]] = None,
         sigma: float = 3.0, amplitude: float = 0.5, background: float = 0.25,
         period: Optional[float] = None) -> Sequence:
    """Gaussian blob at rest; with ``period`` its contrast is modulated sinusoidally."""
    H, W = size
    cx, cy = center if center is not None else ((W - 1) / 2, (H - 1) / 2)
    g = _gaussian(H, W, cx, cy, sigma)
    frames = np.empty((T, H, W))
    for t in range(T):
        a = amplitude if period is None else amplitude * (0.5 + 0.5 * math.sin(2 * math.pi * t / period))
        frames[t] = background + a * g
    return Sequence(frames, {"kind": "blob", "center": (cx, cy), "sigma": sigma, "period": period})


def flicker(T: int = 32, size: Tuple[int, int] = (32, 32), mean: float = 0.5,
            amplitude: float = 0.25, period: float = 8.0) -> Sequence:
    """Spatially uniform field whose intensity oscillates over time."""
    H, W = size
    vals = mean + amplitude * np.sin(2 * np.pi * np.arange(T) / period)
    frames = np.broadcast_to(vals[:, None, None], (T, H, W)).copy()
    return Sequence(frames, {"kind": "flicker", "period": period})


def translate(T: int = 48, size: Tuple[int, int] = (64, 64), start: Tuple[float, float] = (16.0, 32.0),
              velocity: Tuple[float, float] = (0.5, 0.0), sigma: float = 3.0,
              amplitude: float = 0.5, background: float = 0.25) -> Sequence:
    """Gaussian blob moving with constant velocity (pixels/frame); truth is its center per frame."""
    H, W = size
    frames = np.empty((T, H, W))
    centers = []
    for t in range(T):
        cx, cy = start[0] + velocity[0] * t, start[1] + velocity[1] * t
        centers.append((cx, cy))
        frames[t] = background + amplitude * _gaussian(H, W, cx, cy, sigma)
    return Sequence(frames, {"kind": "translate", "centers": centers, "velocity": velocity, "sigma": sigma})


def step(T: int = 48, size: Tuple[int, int] = (16, 16), onset: int = 8,
         low: float = 0.25, high: float = 0.75) -> Sequence:
    """Uniform field whose intensity jumps from ``low`` to ``high`` at frame ``onset``."""
    H, W = size
    vals = np.where(np.arange(T) >= onset, high, low)
    frames = np.broadcast_to(vals[:, None, None], (T, H, W)).astype(float)
    return Sequence(frames, {"kind": "step", "onset": onset})


GENERATORS = {"blob": blob, "flicker": flicker, "translate": translate, "step": step}
