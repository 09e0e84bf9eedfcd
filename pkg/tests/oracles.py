"""Independent reference computations used to freeze expected values.

Nothing here imports the package: each oracle restates its computation
from scratch so that it can catch mistakes in the implementation.
"""

from fractions import Fraction
from math import comb, erfc, sqrt

M64 = (1 << 64) - 1


def xorshift_hand_trace(x, a=13, b=7, c=17):
    """The three shift-xor steps, returning every intermediate value."""
    s1 = x ^ ((x << a) & M64)
    s2 = s1 ^ (s1 >> b)
    s3 = s2 ^ ((s2 << c) & M64)
    return [s1, s2, s3]


def bbs_brute_force(b, m, steps):
    """Square by repeated addition instead of multiplication."""
    out = []
    for _ in range(steps):
        acc = 0
        for _ in range(b):
            acc = (acc + b) % m
        b = acc
        out.append(b)
    return out


def quadratic_residues(m):
    return {(r * r) % m for r in range(m)}


def fpga_straight_line(rounds, s1=1, s2=2, b=2, m=77, z=0):
    """The 16-bit generator written out step by step, sub-generators inlined."""
    outs = []
    x1, x2 = s1, s2
    for _ in range(rounds):
        x1 ^= (x1 << 13) & M64
        x1 ^= x1 >> 7
        x1 ^= (x1 << 17) & M64
        x2 ^= (x2 << 13) & M64
        x2 ^= x2 >> 7
        x2 ^= (x2 << 17) & M64
        x, y = x1, x2
        z1 = x & 0xFFFFFFFF
        z2 = (x >> 32) & 0xFFFFFFFF
        z3 = y & 0xFFFFFFFF
        z4 = (y >> 32) & 0xFFFFFFFF
        b = (b * b) % m
        t = b
        t1, t2, t3, t4 = t & 1, t & 2, t & 4, t & 8
        w1 = w2 = w3 = w4 = 0
        for i in range(12):
            w1 = w1 ^ (1 << ((z1 >> (i * 2)) & 3))
            w2 = w2 ^ (1 << ((z2 >> (i * 2)) & 3))
            w3 = w3 ^ (1 << ((z3 >> (i * 2)) & 3))
            w4 = w4 ^ (1 << ((z4 >> (i * 2)) & 3))
        if t1 != 0:
            w1 = w1 ^ (1 << ((z1 >> 24) & 3))
        if t2 != 0:
            w2 = w2 ^ (1 << ((z2 >> 24) & 3))
        if t3 != 0:
            w3 = w3 ^ (1 << ((z3 >> 24) & 3))
        if t4 != 0:
            w4 = w4 ^ (1 << ((z4 >> 24) & 3))
        z = z ^ w1 ^ (w2 << 4) ^ (w3 << 8) ^ (w4 << 12)
        outs.append(z)
    return outs


def g1_by_enumeration(a, n=32):
    """Walk the cumulative binomial bins with exact rationals."""
    u = Fraction(a, 1 << 32)
    cum = Fraction(0)
    for i in range(n + 1):
        cum += Fraction(comb(n, i), 1 << n)
        if u < cum:
            return i
    raise AssertionError("unreachable")


def monobit_direct(ones, n):
    s = abs(2 * ones - n)
    return erfc(s / sqrt(n) / sqrt(2))


def longest_run_class_probs(m, lo, hi):
    """Exact P(longest run of ones in an m-bit block falls in each class lo..hi).

    Counts strings with no run longer than k by dynamic programming.
    """

    def at_most(k):
        if k < 0:
            return 0
        # ways[j] = number of strings ending in a run of exactly j ones
        ways = [1] + [0] * k
        for _ in range(m):
            new = [sum(ways)] + [0] * k
            for j in range(k):
                new[j + 1] = ways[j]
            ways = new
        return sum(ways)

    total = 1 << m
    probs = [Fraction(at_most(lo), total)]
    for k in range(lo + 1, hi):
        probs.append(Fraction(at_most(k) - at_most(k - 1), total))
    probs.append(Fraction(total - at_most(hi - 1), total))
    return [float(p) for p in probs]


def dct2_basis(block):
    """Orthonormal 8x8 DCT-II by the defining double sum."""
    import math

    n = 8
    out = [[0.0] * n for _ in range(n)]
    for u in range(n):
        for v in range(n):
            cu = math.sqrt(1 / n) if u == 0 else math.sqrt(2 / n)
            cv = math.sqrt(1 / n) if v == 0 else math.sqrt(2 / n)
            s = 0.0
            for x in range(n):
                for y in range(n):
                    s += (
                        block[x][y]
                        * math.cos((2 * x + 1) * u * math.pi / (2 * n))
                        * math.cos((2 * y + 1) * v * math.pi / (2 * n))
                    )
            out[u][v] = cu * cv * s
    return out
