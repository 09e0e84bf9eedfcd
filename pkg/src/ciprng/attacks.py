"""Image attacks used to probe watermark robustness.

All attacks return a new uint8 image of the same shape and are
deterministic (the noise attack takes an explicit seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import dctn, idctn

from .sources import XorShift64

# ITU-T T.81 Annex K luminance quantization table
LUMINANCE_QTABLE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int64,
)

DEFAULT_NOISE_SEED = 0x5DEECE66D


def crop(img: np.ndarray, size: int, anchor: tuple[int, int] | None = None) -> np.ndarray:
    """Blank (zero-fill) a ``size`` x ``size`` square; ``anchor`` is its (row, col) top-left corner."""
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    if size < 0:
        raise ValueError("crop size must be non-negative")
    if size > min(h, w):
        raise ValueError(f"crop size {size} exceeds image side {min(h, w)}")
    top, left = anchor if anchor is not None else ((h - size) // 2, (w - size) // 2)
    if not (0 <= top <= h - size and 0 <= left <= w - size):
        raise ValueError(f"crop square at {(top, left)} falls outside the image")
    out = img.copy()
    out[top : top + size, left : left + size] = 0
    return out


def _rotate(img: np.ndarray, theta: float, interpolation: str) -> np.ndarray:
    h, w = img.shape
    cy, cx = h / 2.0, w / 2.0
    rad = math.radians(theta)
    cos, sin = math.cos(rad), math.sin(rad)
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    # inverse map: where each output pixel comes from
    dx, dy = xx - cx, yy - cy
    sx = cos * dx + sin * dy + cx
    sy = -sin * dx + cos * dy + cy
    src = img.astype(np.float64)
    if interpolation == "nearest":
        ix = np.rint(sx).astype(np.int64)
        iy = np.rint(sy).astype(np.int64)
        inside = (ix >= 0) & (ix < w) & (iy >= 0) & (iy < h)
        out = np.zeros((h, w))
        out[inside] = src[iy[inside], ix[inside]]
        return out
    if interpolation != "bilinear":
        raise ValueError(f"unknown interpolation {interpolation!r}")
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    fx, fy = sx - x0, sy - y0
    out = np.zeros((h, w))
    for oy, ox, wt in (
        (0, 0, (1 - fx) * (1 - fy)),
        (0, 1, fx * (1 - fy)),
        (1, 0, (1 - fx) * fy),
        (1, 1, fx * fy),
    ):
        px, py = x0 + ox, y0 + oy
        inside = (px >= 0) & (px < w) & (py >= 0) & (py < h)
        out[inside] += wt[inside] * src[py[inside], px[inside]]
    return out


def _to_u8(values: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(values), 0, 255).astype(np.uint8)


def rotate_roundtrip(img: np.ndarray, theta: float, interpolation: str = "nearest") -> np.ndarray:
    """Rotate by ``theta`` degrees about the image centre, then by ``-theta``.

    Samples falling outside the source read as 0. The image is requantised
    to 8 bits after each rotation. ``interpolation`` is "nearest" or
    "bilinear"; bilinear resampling smooths away most low bit planes even at
    2 degrees, nearest-neighbour returns most pixels to their exact origin.
    """
    img = np.asarray(img, dtype=np.uint8)
    if theta == 0:
        return img.copy()
    once = _to_u8(_rotate(img, theta, interpolation))
    return _to_u8(_rotate(once, -theta, interpolation))


def quantization_table(level: int) -> np.ndarray:
    """Luminance table scaled linearly with ``level`` (2*level percent; level 1 is near-lossless)."""
    if level < 1:
        raise ValueError("compression level must be >= 1")
    return np.clip((LUMINANCE_QTABLE * 2 * level + 50) // 100, 1, 255)


def jpeg_like(img: np.ndarray, level: int) -> np.ndarray:
    """Blockwise 8x8 DCT quantisation round trip (no entropy coding)."""
    img = np.asarray(img, dtype=np.uint8)
    q = quantization_table(level).astype(np.float64)
    h, w = img.shape
    ph, pw = -h % 8, -w % 8
    padded = np.pad(img, ((0, ph), (0, pw)), mode="edge").astype(np.float64) - 128.0
    H, W = padded.shape
    blocks = padded.reshape(H // 8, 8, W // 8, 8).transpose(0, 2, 1, 3)
    coef = dctn(blocks, axes=(2, 3), norm="ortho")
    coef = np.rint(coef / q) * q
    rec = idctn(coef, axes=(2, 3), norm="ortho")
    rec = rec.transpose(0, 2, 1, 3).reshape(H, W) + 128.0
    return _to_u8(rec[:h, :w])


def gaussian_samples(count: int, seed: int) -> np.ndarray:
    """Standard normal samples via Box-Muller over a seeded XORshift uniform stream."""
    gen = XorShift64(seed or DEFAULT_NOISE_SEED)
    pairs = (count + 1) // 2
    raw = np.array([gen() >> 11 for _ in range(2 * pairs)], dtype=np.float64) * 2.0**-53
    u1 = 1.0 - raw[0::2]  # (0, 1]
    u2 = raw[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(2 * np.pi * u2)
    z[1::2] = r * np.sin(2 * np.pi * u2)
    return z[:count]


def gaussian_noise(img: np.ndarray, sigma: float, noise_seed: int = DEFAULT_NOISE_SEED) -> np.ndarray:
    img = np.asarray(img, dtype=np.uint8)
    if sigma < 0:
        raise ValueError("standard deviation must be non-negative")
    if sigma == 0:
        return img.copy()
    noise = gaussian_samples(img.size, noise_seed).reshape(img.shape) * sigma
    return _to_u8(img.astype(np.float64) + noise)


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    parameter: float
    noise_seed: int = DEFAULT_NOISE_SEED

    KINDS = ("crop", "rotation", "jpeg", "gaussian")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown attack {self.kind!r}; choose from {', '.join(self.KINDS)}")
        if self.parameter < 0:
            raise ValueError("attack parameter must be non-negative")

    def apply(self, img: np.ndarray) -> np.ndarray:
        if self.kind == "crop":
            return crop(img, int(self.parameter))
        if self.kind == "rotation":
            return rotate_roundtrip(img, self.parameter)
        if self.kind == "jpeg":
            return jpeg_like(img, int(self.parameter))
        return gaussian_noise(img, self.parameter, self.noise_seed)
