"""Entropy sources and the single-step chaotic-iteration primitives.

Two live generators are provided (a 64-bit XORshift and a Blum Blum Shub
generator over a small Blum modulus) together with a scripted source that
replays an explicit list of integers, which is how the known-answer traces
are driven.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Protocol, Sequence

MASK64 = (1 << 64) - 1

DEFAULT_TRIPLE = (13, 7, 17)

# Blum primes just below 2**16; product fits in 32 bits.
DEFAULT_BBS_P = 65519
DEFAULT_BBS_Q = 65479
DEFAULT_BBS_MODULUS = DEFAULT_BBS_P * DEFAULT_BBS_Q


class EntropyError(RuntimeError):
    """Raised when an entropy source cannot produce another value."""


class EntropySource(Protocol):
    def __call__(self) -> int: ...


class XorShift64:
    """Marsaglia's 64-bit three-shift XORshift.

    >>> XorShift64(1)()
    1082269761
    """

    __slots__ = ("x", "a", "b", "c")

    def __init__(self, seed: int, triple: Sequence[int] = DEFAULT_TRIPLE):
        seed &= MASK64
        if seed == 0:
            raise ValueError("xorshift seed must be nonzero (0 is a fixed point)")
        a, b, c = triple
        for s in (a, b, c):
            if not 1 <= s <= 63:
                raise ValueError(f"xorshift shift amounts must lie in [1, 63], got {tuple(triple)}")
        self.x = seed
        self.a, self.b, self.c = a, b, c

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __call__(self) -> int:
        x = self.x
        x ^= (x << self.a) & MASK64
        x ^= x >> self.b
        x ^= (x << self.c) & MASK64
        self.x = x
        return x

    next = __call__


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        y = pow(a, d, n)
        if y in (1, n - 1):
            continue
        for _ in range(r - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def blum_factors(m: int) -> tuple[int, int] | None:
    """Return (p, q) if m = p*q with distinct primes p, q = 3 mod 4, else None.

    Trial division only; intended for moduli of at most 32 bits.
    """
    if m < 21 or m % 2 == 0:
        return None
    p = 3
    while p * p <= m:
        if m % p == 0:
            q = m // p
            if p != q and p % 4 == 3 and q % 4 == 3 and is_probable_prime(p) and is_probable_prime(q):
                return (p, q)
            return None
        p += 2
    return None


class BlumBlumShub:
    """Blum Blum Shub over a Blum modulus; ``next(k)`` returns the k LSBs of the new state."""

    __slots__ = ("b", "m", "k")

    def __init__(self, b: int, m: int = DEFAULT_BBS_MODULUS, k: int = 4):
        if blum_factors(m) is None:
            raise ValueError(f"{m} is not a Blum integer (p*q with p = q = 3 mod 4)")
        if not 1 < b < m:
            raise ValueError(f"BBS state must satisfy 1 < b < m, got b={b}")
        if gcd(b, m) != 1:
            raise ValueError(f"BBS state {b} shares a factor with the modulus {m}")
        if b * b % m == 1:
            raise ValueError(f"BBS state {b} is a square root of 1 mod {m}; the orbit collapses to 1")
        if k < 1:
            raise ValueError("k must be at least 1")
        self.b = b
        self.m = m
        self.k = k

    @classmethod
    def from_seed(cls, seed: int, m: int = DEFAULT_BBS_MODULUS, k: int = 4) -> "BlumBlumShub":
        """Reduce an arbitrary seed into a valid state, incrementing until coprime."""
        b = seed % m
        while b < 2 or gcd(b, m) != 1 or b * b % m == 1:
            b = (b + 1) % m
        return cls(b, m, k)

    def step(self) -> int:
        """Square the state and return the full new state."""
        self.b = self.b * self.b % self.m
        return self.b

    def next(self, k: int | None = None) -> int:
        k = self.k if k is None else k
        if k < 1:
            raise ValueError("k must be at least 1")
        return self.step() & ((1 << k) - 1)

    def __call__(self) -> int:
        return self.next()


class ScriptedSource:
    """Replays a fixed list of integers; raises EntropyError when exhausted."""

    def __init__(self, values: Iterable[int], name: str = "script"):
        self.values = [int(v) for v in values]
        self.pos = 0
        self.name = name

    def __call__(self) -> int:
        if self.pos >= len(self.values):
            raise EntropyError(f"scripted source {self.name!r} exhausted after {len(self.values)} values")
        v = self.values[self.pos]
        self.pos += 1
        return v

    @property
    def remaining(self) -> int:
        return len(self.values) - self.pos


class LowWord:
    """Adapter exposing the low ``bits`` bits of another source."""

    def __init__(self, source: EntropySource, bits: int = 32):
        self.source = source
        self.mask = (1 << bits) - 1

    def __call__(self) -> int:
        return self.source() & self.mask


@dataclass(frozen=True)
class BooleanState:
    """An N-bit chaotic-iteration state; ``bits[0]`` is component x_1."""

    bits: tuple[bool, ...]

    def __post_init__(self):
        if len(self.bits) < 1:
            raise ValueError("state must have at least one component")

    @property
    def n(self) -> int:
        return len(self.bits)

    @classmethod
    def from_string(cls, s: str) -> "BooleanState":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(tuple(ch == "1" for ch in s))

    @classmethod
    def from_int(cls, value: int, n: int) -> "BooleanState":
        """x_1 is the most significant of the n bits."""
        return cls(tuple(bool((value >> (n - 1 - i)) & 1) for i in range(n)))

    def to_int(self) -> int:
        v = 0
        for bit in self.bits:
            v = (v << 1) | bit
        return v

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def weight(self) -> int:
        return sum(self.bits)


def ci_step(x: BooleanState, s: int) -> BooleanState:
    """Negate component ``s`` (1-indexed) and leave every other component alone."""
    if not 1 <= s <= x.n:
        raise ValueError(f"strategy element {s} outside [1, {x.n}]")
    bits = list(x.bits)
    bits[s - 1] = not bits[s - 1]
    return BooleanState(tuple(bits))


def xor_ci_step(x: int, s_mask: int) -> int:
    return x ^ s_mask
