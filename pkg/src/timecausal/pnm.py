"""Minimal binary PGM (P5) and PFM readers/writers."""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np


class FormatError(OSError):
    """File content is not a supported image format."""


def _tokens(data: bytes, count: int):
    """First ``count`` whitespace separated header tokens (skipping # comments) and the data offset."""
    toks = []
    pos = 0
    while len(toks) < count:
        m = re.compile(rb"\s*(#[^\n]*\n\s*)*([^\s#]+)").match(data, pos)
        if m is None:
            raise FormatError("truncated header")
        toks.append(m.group(2))
        pos = m.end()
    # exactly one whitespace byte separates the header from the raster
    return toks, pos + 1


def read_pgm(path) -> np.ndarray:
    """Read an 8- or 16-bit binary PGM; returns uint8 or uint16 array [rows, cols]."""
    data = Path(path).read_bytes()
    if data[:2] != b"P5":
        raise FormatError(f"{path}: not a binary PGM")
    (_, w, h, maxval), off = _tokens(data, 4)
    w, h, maxval = int(w), int(h), int(maxval)
    if not 0 < maxval < 65536:
        raise FormatError(f"{path}: bad maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    n = w * h * dtype.itemsize
    if len(data) - off < n:
        raise FormatError(f"{path}: raster truncated")
    img = np.frombuffer(data, dtype=dtype, count=w * h, offset=off).reshape(h, w)
    return img.astype(np.uint16 if maxval > 255 else np.uint8)


def write_pgm(path, img, maxval: int = 255):
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError("PGM images are 2-D")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    raster = np.clip(np.rint(img), 0, maxval).astype(dtype)
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n{maxval}\n".encode("ascii"))
        f.write(raster.tobytes())


def to_display(img, maxval: int = 255) -> np.ndarray:
    """Linear min-max stretch to [0, maxval] for viewing."""
    img = np.asarray(img, dtype=float)
    lo, hi = float(img.min()), float(img.max())
    if hi <= lo:
        return np.zeros_like(img)
    return (img - lo) * (maxval / (hi - lo))


def read_pfm(path) -> np.ndarray:
    """Read a grayscale PFM into float32 [rows, cols], top row first."""
    data = Path(path).read_bytes()
    (tag, w, h, scale), off = _tokens(data, 4)
    if tag != b"Pf":
        raise FormatError(f"{path}: only grayscale PFM ('Pf') is supported")
    w, h, scale = int(w), int(h), float(scale)
    dtype = "<f4" if scale < 0 else ">f4"
    if len(data) - off < 4 * w * h:
        raise FormatError(f"{path}: raster truncated")
    img = np.frombuffer(data, dtype=dtype, count=w * h, offset=off).reshape(h, w)
    return np.flipud(img).astype(np.float32)


def write_pfm(path, img):
    """Write little-endian grayscale PFM (rows stored bottom to top)."""
    img = np.asarray(img, dtype="<f4")
    if img.ndim != 2:
        raise ValueError("PFM images are 2-D")
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(f"Pf\n{w} {h}\n-1.0\n".encode("ascii"))
        f.write(np.ascontiguousarray(np.flipud(img)).tobytes())
