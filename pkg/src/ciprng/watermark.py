"""Spatial-domain chaotic watermarking keyed by the 16-bit CIPRNG.

The low ``lsc_bits`` bit planes of a gray image are its least significant
coefficients (LSCs); the remaining high bits are the most significant
coefficients (MSCs). The watermark is XOR-mixed with a keyed CIPRNG stream
and written into CIPRNG-chosen LSCs. In authenticated mode both the mixing
stream and the positions also depend on a digest of the MSCs, so any change
to the carrier's MSCs scrambles extraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .engines import BitStream, FpgaCiprng, fpga_from_seeds

MASK64 = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3

# domain separation between the mixing stream and the position stream
_MIX_TAG = 0x6D6978696E67_0001
_POS_TAG = 0x706F736974696F6E


class WatermarkError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingKey:
    seeds: tuple[int, ...]
    mode: str = "unauth"
    lsc_bits: int = 3

    def __post_init__(self):
        if self.mode not in ("unauth", "auth"):
            raise ValueError(f"mode must be 'unauth' or 'auth', got {self.mode!r}")
        if not 1 <= self.lsc_bits <= 4:
            raise ValueError("lsc_bits must lie in [1, 4]")
        if not self.seeds:
            raise ValueError("key needs at least one seed word")
        object.__setattr__(self, "seeds", tuple(int(s) & MASK64 for s in self.seeds))

    @property
    def authenticated(self) -> bool:
        return self.mode == "auth"

    def with_mode(self, mode: str) -> "EmbeddingKey":
        return EmbeddingKey(self.seeds, mode, self.lsc_bits)

    @classmethod
    def from_text(cls, text: str, mode: str = "unauth", lsc_bits: int = 3) -> "EmbeddingKey":
        words = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                words.append(parse_hex_word(line))
        return cls(tuple(words), mode, lsc_bits)

    @classmethod
    def from_file(cls, path, mode: str = "unauth", lsc_bits: int = 3) -> "EmbeddingKey":
        return cls.from_text(Path(path).read_text(), mode, lsc_bits)


def parse_hex_word(text: str) -> int:
    t = text.strip().lower()
    if t.startswith("0x"):
        t = t[2:]
    if not t or len(t) > 16:
        raise ValueError(f"not a 64-bit hex word: {text!r}")
    return int(t, 16)


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


# -- bit planes -----------------------------------------------------------

def decompose_planes(img: np.ndarray, lsc_bits: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Split into (MSC array, flat LSC bit sequence).

    The LSC sequence lists each pixel's low bits high-to-low, pixels in
    row-major order, so LSC index ``p * lsc_bits + j`` is bit
    ``lsc_bits - 1 - j`` of pixel ``p``.
    """
    if not 1 <= lsc_bits <= 4:
        raise ValueError("lsc_bits must lie in [1, 4]")
    img = np.asarray(img, dtype=np.uint8)
    msc = img >> lsc_bits
    shifts = np.arange(lsc_bits - 1, -1, -1, dtype=np.uint8)
    lsc = ((img.reshape(-1, 1) >> shifts) & 1).astype(np.uint8).reshape(-1)
    return msc, lsc


def recompose_planes(msc: np.ndarray, lsc: np.ndarray, lsc_bits: int = 3) -> np.ndarray:
    weights = (1 << np.arange(lsc_bits - 1, -1, -1)).astype(np.uint16)
    low = (lsc.reshape(-1, lsc_bits).astype(np.uint16) @ weights).reshape(msc.shape)
    return ((msc.astype(np.uint16) << lsc_bits) | low).astype(np.uint8)


def msc_bitstream(msc: np.ndarray, lsc_bits: int) -> np.ndarray:
    width = 8 - lsc_bits
    shifts = np.arange(width - 1, -1, -1, dtype=np.uint8)
    return ((np.asarray(msc, dtype=np.uint8).reshape(-1, 1) >> shifts) & 1).astype(np.uint8).reshape(-1)


def msc_digest(msc: np.ndarray, lsc_bits: int) -> int:
    """64-bit FNV-1a fold of the MSC bit stream (plus its dimensions)."""
    bits = msc_bitstream(msc, lsc_bits)
    h, w = np.asarray(msc).shape
    return fnv1a64(b"%dx%d:" % (w, h) + np.packbits(bits).tobytes())


def keyed_generator(key: EmbeddingKey, msc: np.ndarray | None, tag: int) -> FpgaCiprng:
    if key.authenticated:
        if msc is None:
            raise WatermarkError("authenticated mode needs the carrier's MSCs")
        binding = msc_digest(msc, key.lsc_bits)
    else:
        binding = 0
    base = 0
    for word in key.seeds:
        base = splitmix64(base ^ word)
    root = splitmix64(base ^ binding ^ tag)
    seeds = [root]
    for _ in range(2):
        seeds.append(splitmix64(seeds[-1]))
    return fpga_from_seeds(seeds)


# -- operations -------------------------------------------------------------

def mix_watermark(
    wm: np.ndarray, key: EmbeddingKey, msc: np.ndarray | None = None, stream: BitStream | None = None
) -> np.ndarray:
    """XOR-CI mixing of the flattened watermark with a keyed mask stream (an involution)."""
    flat = np.asarray(wm, dtype=np.uint8).reshape(-1)
    if stream is None:
        stream = BitStream(keyed_generator(key, msc, _MIX_TAG))
    return flat ^ stream.read(len(flat))


def select_positions(key: EmbeddingKey, msc: np.ndarray | None, count: int, total_lsc: int) -> np.ndarray:
    """``count`` distinct LSC indices drawn from the keyed stream, repeats skipped."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if count > total_lsc:
        raise WatermarkError(f"cannot place {count} bits in {total_lsc} LSCs")
    plan = np.empty(count, dtype=np.int64)
    if count == 0:
        return plan
    gen = keyed_generator(key, msc, _POS_TAG)
    used = np.zeros(total_lsc, dtype=bool)
    k = 0
    while k < count:
        u = ((gen() << 16) | gen()) % total_lsc
        if not used[u]:
            used[u] = True
            plan[k] = u
            k += 1
    return plan


def embed(cover: np.ndarray, wm: np.ndarray, key: EmbeddingKey, plan: Sequence[int] | None = None) -> np.ndarray:
    cover = np.asarray(cover, dtype=np.uint8)
    msc, lsc = decompose_planes(cover, key.lsc_bits)
    nbits = np.asarray(wm).size
    if nbits > lsc.size:
        raise WatermarkError(f"watermark of {nbits} bits exceeds {lsc.size} LSCs")
    mixed = mix_watermark(wm, key, msc)
    if plan is None:
        plan = select_positions(key, msc, nbits, lsc.size)
    lsc = lsc.copy()
    lsc[np.asarray(plan, dtype=np.int64)] = mixed
    return recompose_planes(msc, lsc, key.lsc_bits)


def extract(stego: np.ndarray, key: EmbeddingKey, wm_shape: tuple[int, int]) -> np.ndarray:
    """``wm_shape`` is (height, width) of the watermark."""
    h, w = wm_shape
    if h <= 0 or w <= 0:
        raise WatermarkError(f"bad watermark dimensions {wm_shape}")
    msc, lsc = decompose_planes(np.asarray(stego, dtype=np.uint8), key.lsc_bits)
    nbits = h * w
    if nbits > lsc.size:
        raise WatermarkError(f"watermark of {nbits} bits cannot fit in {lsc.size} LSCs")
    plan = select_positions(key, msc, nbits, lsc.size)
    return mix_watermark(lsc[plan], key, msc).reshape(h, w)


def similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Percentage of equal bits."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise WatermarkError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return 100.0 * float(np.count_nonzero((a != 0) == (b != 0))) / a.size


def looks_watermarked(similarity_pct: float) -> bool:
    """Similarity at or below 50% reads as "probably not watermarked"."""
    return similarity_pct > 50.0


# -- reference material -----------------------------------------------------

def reference_carrier(size: int = 256) -> np.ndarray:
    """Deterministic gradient-plus-texture carrier standing in for a photo."""
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    s = 256.0 / size
    v = (
        40.0
        + 0.35 * x * s
        + 0.30 * y * s
        + 18.0 * np.sin(x * s / 7.0) * np.cos(y * s / 11.0)
        + 9.0 * np.sin((x + 2 * y) * s / 5.0)
    )
    return np.clip(np.rint(v), 0, 255).astype(np.uint8)


def reference_watermark(size: int = 64) -> np.ndarray:
    """Concentric rings crossed with a checkerboard."""
    y, x = np.mgrid[0:size, 0:size]
    c = (size - 1) / 2.0
    rings = (np.hypot(x - c, y - c) // (size / 16)).astype(np.int64) & 1
    checker = ((x // 8) + (y // 8)) & 1
    return (rings ^ checker).astype(np.uint8)


REFERENCE_KEY = EmbeddingKey((0x0123456789ABCDEF, 0xFEDCBA9876543210, 0x0F1E2D3C4B5A6978))
