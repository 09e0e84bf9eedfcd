"""Binary PGM (P5) and PBM (P4) reading and writing.

Gray images are ``(height, width)`` uint8 arrays; bit matrices are
``(height, width)`` uint8 arrays holding 0/1 (1 = black in the PBM file).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


class ImageFormatError(ValueError):
    pass


def _parse_header(data: bytes, fields: int) -> tuple[bytes, list[int], int]:
    """Return (magic, numeric fields, payload offset)."""
    tokens: list[bytes] = []
    i, n = 0, len(data)
    while len(tokens) < fields + 1:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        if i >= n:
            raise ImageFormatError("unexpected end of data in header")
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
            i += 1
        tokens.append(data[start:i])
    # exactly one whitespace byte separates the header from the raster
    if i >= n and fields:
        raise ImageFormatError("unexpected end of data")
    i += 1
    magic = tokens[0]
    try:
        values = [int(t) for t in tokens[1:]]
    except ValueError:
        raise ImageFormatError(f"malformed header field in {tokens!r}") from None
    return magic, values, i


def _check_magic(data: bytes, expected: bytes) -> None:
    magic = data[:2]
    if magic != expected:
        if magic in (b"P1", b"P2", b"P3", b"P4", b"P5", b"P6"):
            raise ImageFormatError(f"unsupported format {magic.decode()} (expected {expected.decode()})")
        raise ImageFormatError("not a PNM file")


def parse_pgm(data: bytes) -> np.ndarray:
    _check_magic(data, b"P5")
    _, (width, height, maxval), offset = _parse_header(data, 3)
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"unsupported maxval {maxval} (only 255)")
    size = width * height
    payload = data[offset : offset + size]
    if len(payload) < size:
        raise ImageFormatError("unexpected end of data")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()


def format_pgm(img: np.ndarray) -> bytes:
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("PGM output needs a 2-D uint8 array")
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


def parse_pbm(data: bytes) -> np.ndarray:
    _check_magic(data, b"P4")
    _, (width, height), offset = _parse_header(data, 2)
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"bad dimensions {width}x{height}")
    row_bytes = (width + 7) // 8
    size = row_bytes * height
    payload = data[offset : offset + size]
    if len(payload) < size:
        raise ImageFormatError("unexpected end of data")
    packed = np.frombuffer(payload, dtype=np.uint8).reshape(height, row_bytes)
    return np.unpackbits(packed, axis=1)[:, :width].copy()


def format_pbm(bits: np.ndarray) -> bytes:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 2:
        raise ValueError("PBM output needs a 2-D array")
    h, w = bits.shape
    return b"P4\n%d %d\n" % (w, h) + np.packbits(bits != 0, axis=1).tobytes()


def read_pgm(path) -> np.ndarray:
    return parse_pgm(Path(path).read_bytes())


def write_pgm(path, img: np.ndarray) -> None:
    Path(path).write_bytes(format_pgm(img))


def read_pbm(path) -> np.ndarray:
    return parse_pbm(Path(path).read_bytes())


def write_pbm(path, bits: np.ndarray) -> None:
    Path(path).write_bytes(format_pbm(bits))
