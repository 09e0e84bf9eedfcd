"""Generators built on chaotic iterations.

``CiprngV1`` and ``CiprngV2`` iterate an N-bit boolean state under a strategy
drawn from one entropy source and decimate the orbit with a second one.
``FpgaCiprng`` is the 16-bit hardware-oriented variant mixing two 64-bit
XORshifts with a Blum Blum Shub switch word.

States are held as Python ints internally. Component x_1 is the most
significant bit, so the string rendering of a block reads x_1 ... x_N.
"""

from __future__ import annotations

from bisect import bisect_right
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .sources import (
    DEFAULT_BBS_MODULUS,
    DEFAULT_TRIPLE,
    BlumBlumShub,
    BooleanState,
    EntropyError,
    EntropySource,
    LowWord,
    XorShift64,
)


class CiprngV1:
    """CIPRNG version 1: ``(a mod 2) + c`` single-bit negations per output block.

    ``prng1`` drives the decimation, ``prng2`` the strategy. With
    ``emit_seed`` set, the bit stream starts with the seed block x^0.
    """

    def __init__(
        self,
        x0: BooleanState | str,
        prng1: EntropySource,
        prng2: EntropySource,
        c: int = 4,
        emit_seed: bool = True,
    ):
        if isinstance(x0, str):
            x0 = BooleanState.from_string(x0)
        if c < 0:
            raise ValueError("iteration offset c must be >= 0")
        self.width = x0.n
        self.x = x0.to_int()
        self.prng1 = prng1
        self.prng2 = prng2
        self.c = c
        self.sigma = 0
        self.emit_seed = emit_seed

    @property
    def state(self) -> BooleanState:
        return BooleanState.from_int(self.x, self.width)

    def next_block(self) -> int:
        n = self.width
        m = self.prng1() % 2 + self.c
        x = self.x
        for _ in range(m):
            s = self.prng2() % n + 1
            x ^= 1 << (n - s)
        self.x = x
        self.sigma += m
        return x

    def blocks(self) -> Iterator[int]:
        if self.emit_seed:
            yield self.x
        while True:
            yield self.next_block()


@lru_cache(maxsize=None)
def _g1_thresholds(n: int) -> tuple[int, ...]:
    # Upper bin edges scaled by 2**32 so that a * 2**n can be compared exactly.
    cum, edges = 0, []
    for i in range(n + 1):
        cum += comb(n, i)
        edges.append(cum << 32)
    return tuple(edges)


def g1_map(a: int, n: int = 32) -> int:
    """Map a 32-bit word onto [0, n] through the Binomial(n, 1/2) CDF.

    Returns the unique i with ``sum_{j<i} C(n,j) <= a * 2**n / 2**32 < sum_{j<=i} C(n,j)``.
    """
    if not 0 <= a < 1 << 32:
        raise ValueError("g1_map expects a 32-bit word")
    return bisect_right(_g1_thresholds(n), a << n)


class CiprngV2:
    """CIPRNG version 2: g1-distributed count of *distinct* negations per block."""

    def __init__(self, x0: BooleanState | str, prng1: EntropySource, prng2: EntropySource):
        if isinstance(x0, str):
            x0 = BooleanState.from_string(x0)
        self.width = x0.n
        self.x = x0.to_int()
        self.d = [False] * self.width
        self.prng1 = prng1
        self.prng2 = prng2
        # positions negated in the last round, 1-indexed; kept for auditing
        self.last_touched: list[int] = []

    @property
    def state(self) -> BooleanState:
        return BooleanState.from_int(self.x, self.width)

    def next_block(self) -> int:
        n = self.width
        d = self.d = [False] * n
        m = g1_map(self.prng1() & 0xFFFFFFFF, n)
        touched: list[int] = []
        draws = 0
        x = self.x
        while len(touched) < m:
            if draws >= 64 * n:
                raise EntropyError(f"strategy source stalled: {draws} draws for {m} distinct positions")
            s = self.prng2() % n
            draws += 1
            if not d[s]:
                x ^= 1 << (n - 1 - s)
                d[s] = True
                touched.append(s + 1)
        self.x = x
        self.last_touched = touched
        return x

    def blocks(self) -> Iterator[int]:
        while True:
            yield self.next_block()


def derive_nibble_mask(z_word: int, t_bit: bool | int) -> int:
    """Four-bit toggle mask from twelve 2-bit chunks of ``z_word`` (+ a 13th if ``t_bit``)."""
    w = 0
    for i in range(12):
        w ^= 1 << ((z_word >> (i * 2)) & 3)
    if t_bit:
        w ^= 1 << ((z_word >> 24) & 3)
    return w


def split_words(x: int, y: int) -> tuple[int, int, int, int]:
    return (x & 0xFFFFFFFF, (x >> 32) & 0xFFFFFFFF, y & 0xFFFFFFFF, (y >> 32) & 0xFFFFFFFF)


class FpgaCiprng:
    """16-bit generator: two XORshift64 strategy sources switched by 4 BBS bits.

    ``xs1``/``xs2`` return 64-bit words and ``bbs`` returns a word whose four
    LSBs are the switch bits; live instances use ``XorShift64`` and a k=4
    ``BlumBlumShub`` but scripted sources work too.

    A round is split into ``sample`` (the three sources, run in parallel in
    hardware) and ``combine`` (folding them into the state) so the pipeline
    model can schedule the two halves independently.
    """

    width = 16

    def __init__(self, xs1: EntropySource, xs2: EntropySource, bbs: EntropySource, z: int = 0):
        if not 0 <= z < 1 << 16:
            raise ValueError("state must be a 16-bit word")
        self.xs1 = xs1
        self.xs2 = xs2
        self.bbs = bbs
        self.z = z

    def sample(self) -> tuple[int, int, int]:
        x = self.xs1()
        y = self.xs2()
        t = self.bbs() & 0xF
        return x, y, t

    def combine(self, x: int, y: int, t: int) -> int:
        z1, z2, z3, z4 = split_words(x, y)
        w1 = derive_nibble_mask(z1, t & 1)
        w2 = derive_nibble_mask(z2, t & 2)
        w3 = derive_nibble_mask(z3, t & 4)
        w4 = derive_nibble_mask(z4, t & 8)
        self.z ^= w1 ^ (w2 << 4) ^ (w3 << 8) ^ (w4 << 12)
        return self.z

    def next_block(self) -> int:
        return self.combine(*self.sample())

    __call__ = next_block

    def blocks(self) -> Iterator[int]:
        while True:
            yield self.next_block()


def mask_form_delta(x: int, y: int, t: int) -> int:
    """Assemble d^n directly: per nibble, XOR ``1 << chunk`` over its first 3*4 + t_j chunks.

    Independent of ``derive_nibble_mask``: the chunk streams are materialised
    first and folded afterwards.
    """
    d = 0
    for j, word in enumerate(split_words(x, y)):
        chunks = [(word >> (2 * l)) & 3 for l in range(16)]
        count = ((t >> j) & 1) + 3 * 4
        mask = 0
        for l in range(count):
            mask ^= 1 << chunks[l]
        d |= mask << (4 * j)
    return d


class FpgaCiprngMaskForm(FpgaCiprng):
    """Same generator written as ``x^n = x^{n-1} xor d^n``."""

    def combine(self, x: int, y: int, t: int) -> int:
        self.z ^= mask_form_delta(x, y, t)
        return self.z


class SourceBlocks:
    """Exposes a raw entropy source as a block generator of fixed width."""

    def __init__(self, source: EntropySource, width: int):
        self.source = source
        self.width = width
        self.mask = (1 << width) - 1

    def next_block(self) -> int:
        return self.source() & self.mask

    def blocks(self) -> Iterator[int]:
        while True:
            yield self.next_block()


class BitStream:
    """Concatenates a generator's blocks, most significant bit first, and serves exact bit counts."""

    def __init__(self, generator):
        self.generator = generator
        self.width = generator.width
        self._blocks = generator.blocks()
        self._buffer = np.zeros(0, dtype=np.uint8)
        self.blocks_drawn = 0

    def _expand(self, words: list[int]) -> np.ndarray:
        w = self.width
        if w == 16:
            arr = np.asarray(words, dtype=">u2").view(np.uint8)
            return np.unpackbits(arr)
        if w == 64:
            arr = np.asarray(words, dtype=">u8").view(np.uint8)
            return np.unpackbits(arr)
        shifts = np.arange(w - 1, -1, -1, dtype=object)
        out = np.empty(len(words) * w, dtype=np.uint8)
        for i, v in enumerate(words):
            out[i * w:(i + 1) * w] = [(v >> int(s)) & 1 for s in shifts]
        return out

    def read(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("bit count must be non-negative")
        have = len(self._buffer)
        if have < n:
            need = -(-(n - have) // self.width)
            words = [next(self._blocks) for _ in range(need)]
            self.blocks_drawn += need
            self._buffer = np.concatenate([self._buffer, self._expand(words)])
        out, self._buffer = self._buffer[:n], self._buffer[n:]
        return out


def stream_bits(generator, n: int) -> np.ndarray:
    """First ``n`` bits of a fresh stream over ``generator``'s blocks."""
    return BitStream(generator).read(n)


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


# -- profiles -------------------------------------------------------------

DEFAULT_SEEDS = (0x9E3779B97F4A7C15, 0xD1B54A32D192ED03, 0x2545F4914F6CDD1D)


def fpga_from_seeds(
    seeds: Sequence[int] = DEFAULT_SEEDS,
    modulus: int = DEFAULT_BBS_MODULUS,
    triple1: Sequence[int] = DEFAULT_TRIPLE,
    triple2: Sequence[int] = DEFAULT_TRIPLE,
    mask_form: bool = False,
) -> FpgaCiprng:
    """Build the 16-bit generator from up to three 64-bit seed words.

    Missing words are derived from the first; the BBS state is reduced
    into the modulus by ``BlumBlumShub.from_seed``.
    """
    s = list(seeds) + [0] * (3 - len(seeds))
    s1 = s[0] or DEFAULT_SEEDS[0]
    s2 = s[1] or (s1 * 0x9E3779B97F4A7C15 + 1) & 0xFFFFFFFFFFFFFFFF or DEFAULT_SEEDS[1]
    s3 = s[2] or s1 ^ s2
    cls = FpgaCiprngMaskForm if mask_form else FpgaCiprng
    return cls(XorShift64(s1, triple1), XorShift64(s2, triple2), BlumBlumShub.from_seed(s3, modulus))


def known_answer_fpga(mask_form: bool = False) -> FpgaCiprng:
    """xs1=1, xs2=2, triples (13,7,17), BBS b=2 over m=77, z=0."""
    cls = FpgaCiprngMaskForm if mask_form else FpgaCiprng
    return cls(XorShift64(1), XorShift64(2), BlumBlumShub(2, 77))


def v1_from_seeds(seeds: Sequence[int] = DEFAULT_SEEDS, n: int = 32, c: int = 4) -> CiprngV1:
    """Live CIPRNG v1: BBS drives decimation, XORshift drives the strategy."""
    s = list(seeds) + [0] * (3 - len(seeds))
    s1 = s[0] or DEFAULT_SEEDS[0]
    x0 = BooleanState.from_int((s[1] or s1) & ((1 << n) - 1), n)
    bbs = BlumBlumShub.from_seed(s[2] or s1)
    return CiprngV1(x0, bbs.step, XorShift64(s1), c=c, emit_seed=False)


def v2_from_seeds(seeds: Sequence[int] = DEFAULT_SEEDS, n: int = 32) -> CiprngV2:
    """Live CIPRNG v2 over two XORshifts (low 32 bits of the first feed g1)."""
    s = list(seeds) + [0] * (3 - len(seeds))
    s1 = s[0] or DEFAULT_SEEDS[0]
    s2 = s[1] or DEFAULT_SEEDS[1]
    x0 = BooleanState.from_int((s[2] or s1) & ((1 << n) - 1), n)
    return CiprngV2(x0, LowWord(XorShift64(s1), 32), XorShift64(s2))
