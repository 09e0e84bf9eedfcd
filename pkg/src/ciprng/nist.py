"""A subset of the NIST SP 800-22 battery.

Implemented: monobit, block frequency, runs, longest run of ones,
cumulative sums, serial and approximate entropy. Every test function takes
a 0/1 array and returns a tuple of p-values (most tests yield one; cusum and
serial yield two).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import gammaincc

from .engines import BitStream

ALPHA = 0.01
PT_THRESHOLD = 0.0001


class SequenceTooShort(ValueError):
    pass


def igamc(a: float, x: float) -> float:
    """Regularised upper incomplete gamma Q(a, x)."""
    return float(gammaincc(a, x))


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    return arr


def _require(n: int, minimum: int, name: str):
    if n < minimum:
        raise SequenceTooShort(f"{name} needs at least {minimum} bits, got {n}")


def monobit(bits) -> tuple[float]:
    e = _as_bits(bits)
    n = len(e)
    _require(n, 100, "monobit")
    s = 2 * int(e.sum()) - n
    return (math.erfc(abs(s) / math.sqrt(n) / math.sqrt(2)),)


def block_frequency(bits, block_size: int = 128) -> tuple[float]:
    e = _as_bits(bits)
    n = len(e)
    _require(n, max(100, block_size), "block frequency")
    blocks = n // block_size
    pi = e[: blocks * block_size].reshape(blocks, block_size).mean(axis=1)
    chi2 = 4.0 * block_size * float(((pi - 0.5) ** 2).sum())
    return (igamc(blocks / 2.0, chi2 / 2.0),)


def runs(bits) -> tuple[float]:
    e = _as_bits(bits)
    n = len(e)
    _require(n, 100, "runs")
    pi = e.mean()
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return (0.0,)
    v = 1 + int(np.count_nonzero(e[1:] != e[:-1]))
    num = abs(v - 2.0 * n * pi * (1 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1 - pi)
    return (math.erfc(num / den),)


# (block size, class lower edge, class upper edge, class probabilities)
_LONGEST_RUN_PARAMS = (
    (750_000, 10_000, 10, 16, (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
    (6_272, 128, 4, 9, (0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847)),
    (128, 8, 1, 4, (0.21484375, 0.3671875, 0.23046875, 0.1875)),
)


def _longest_runs(rows: np.ndarray) -> np.ndarray:
    # run length ending at each column, row-wise
    run = np.zeros(rows.shape[0], dtype=np.int64)
    best = np.zeros(rows.shape[0], dtype=np.int64)
    for col in rows.T:
        run = (run + 1) * col
        np.maximum(best, run, out=best)
    return best


def longest_run(bits) -> tuple[float]:
    e = _as_bits(bits)
    n = len(e)
    _require(n, 128, "longest run of ones")
    for min_n, m, lo, hi, probs in _LONGEST_RUN_PARAMS:
        if n >= min_n:
            break
    blocks = n // m
    longest = _longest_runs(e[: blocks * m].reshape(blocks, m))
    counts = np.bincount(np.clip(longest, lo, hi) - lo, minlength=hi - lo + 1)
    expected = blocks * np.asarray(probs)
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    return (igamc((len(probs) - 1) / 2.0, chi2 / 2.0),)


def _phi(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _cusum_p(z: int, n: int) -> float:
    if z == 0:
        return 1.0
    sq = math.sqrt(n)
    total = 1.0
    # int() truncates toward zero, matching the reference implementation's bounds
    for k in range(int((-n / z + 1) / 4), int((n / z - 1) / 4) + 1):
        total -= _phi((4 * k + 1) * z / sq) - _phi((4 * k - 1) * z / sq)
    for k in range(int((-n / z - 3) / 4), int((n / z - 1) / 4) + 1):
        total += _phi((4 * k + 3) * z / sq) - _phi((4 * k + 1) * z / sq)
    return min(max(total, 0.0), 1.0)


def cumulative_sums(bits) -> tuple[float, float]:
    """(forward, backward) p-values."""
    e = _as_bits(bits)
    n = len(e)
    _require(n, 100, "cumulative sums")
    x = 2 * e.astype(np.int64) - 1
    forward = int(np.abs(np.cumsum(x)).max())
    backward = int(np.abs(np.cumsum(x[::-1])).max())
    return (_cusum_p(forward, n), _cusum_p(backward, n))


def pattern_counts(e: np.ndarray, m: int) -> np.ndarray:
    """Counts of the 2**m overlapping m-bit patterns, with wrap-around."""
    if m == 0:
        return np.array([len(e)], dtype=np.int64)
    ext = np.concatenate([e, e[: m - 1]]).astype(np.int64)
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    values = sliding_window_view(ext, m) @ weights
    return np.bincount(values, minlength=1 << m)


def _psi2(e: np.ndarray, m: int) -> float:
    if m <= 0:
        return 0.0
    n = len(e)
    counts = pattern_counts(e, m).astype(np.float64)
    return float((1 << m) / n * (counts**2).sum() - n)


def serial(bits, m: int = 10) -> tuple[float, float]:
    e = _as_bits(bits)
    n = len(e)
    _require(n, 1 << (m + 2), f"serial (m={m})")
    p0, p1, p2 = _psi2(e, m), _psi2(e, m - 1), _psi2(e, m - 2)
    d1 = p0 - p1
    d2 = p0 - 2 * p1 + p2
    return (igamc(2 ** (m - 2), d1 / 2.0), igamc(2 ** (m - 3), d2 / 2.0))


def _apen_phi(e: np.ndarray, m: int) -> float:
    counts = pattern_counts(e, m)
    c = counts[counts > 0] / len(e)
    return float((c * np.log(c)).sum())


def approximate_entropy(bits, m: int = 10) -> tuple[float]:
    e = _as_bits(bits)
    n = len(e)
    _require(n, 1 << (m + 2), f"approximate entropy (m={m})")
    apen = _apen_phi(e, m) - _apen_phi(e, m + 1)
    chi2 = 2.0 * n * (math.log(2) - apen)
    return (igamc(2 ** (m - 1), chi2 / 2.0),)


TESTS: dict[str, Callable[..., tuple[float, ...]]] = {
    "monobit": monobit,
    "block_frequency": block_frequency,
    "runs": runs,
    "longest_run": longest_run,
    "cumulative_sums": cumulative_sums,
    "serial": serial,
    "approximate_entropy": approximate_entropy,
}

TITLES = {
    "monobit": "Frequency (Monobit) Test",
    "block_frequency": "Frequency Test within a Block",
    "runs": "Runs Test",
    "longest_run": "Longest Run of Ones in a Block Test",
    "cumulative_sums": "Cumulative Sums (Cusum) Test",
    "serial": "Serial Test (m=10)",
    "approximate_entropy": "Approximate Entropy Test (m=10)",
}

NOT_IMPLEMENTED = (
    "Binary Matrix Rank Test",
    "Discrete Fourier Transform (Spectral) Test",
    "Non-overlapping Template Matching Test",
    "Overlapping Template Matching Test",
    "Universal Statistical Test",
    "Linear Complexity Test",
    "Random Excursions Test",
    "Random Excursions Variant Test",
)


def run_test_all(kind: str, bits, **params) -> tuple[float, ...]:
    try:
        fn = TESTS[kind]
    except KeyError:
        raise ValueError(f"unknown test {kind!r}; choose from {', '.join(TESTS)}") from None
    return fn(bits, **params)


def run_test(kind: str, bits, **params) -> float:
    """Single p-value for ``kind``; two-sided tests report the smaller one."""
    return min(run_test_all(kind, bits, **params))


def pt_uniformity(p_values: Sequence[float]) -> float:
    """Uniformity p-value of a p-value sample: chi-square over ten equal bins."""
    p = np.asarray(p_values, dtype=np.float64)
    s = len(p)
    if s < 10:
        raise ValueError(f"uniformity needs at least 10 p-values, got {s}")
    idx = np.minimum((p * 10).astype(np.int64), 9)
    counts = np.bincount(idx, minlength=10)
    expected = s / 10.0
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    return igamc(9 / 2.0, chi2 / 2.0)


@dataclass
class TestResult:
    name: str
    p_values: list[tuple[float, ...]] = field(default_factory=list)

    @property
    def subtests(self) -> int:
        return len(self.p_values[0]) if self.p_values else 0

    def column(self, j: int) -> list[float]:
        return [p[j] for p in self.p_values]

    @property
    def proportions(self) -> list[float]:
        return [float(np.mean([p >= ALPHA for p in self.column(j)])) for j in range(self.subtests)]

    @property
    def proportion(self) -> float:
        return min(self.proportions)

    @property
    def uniformities(self) -> list[float] | None:
        if len(self.p_values) < 10:
            return None
        return [pt_uniformity(self.column(j)) for j in range(self.subtests)]

    @property
    def p_t(self) -> float | None:
        u = self.uniformities
        return None if u is None else min(u)

    @property
    def first_p(self) -> float:
        return min(self.p_values[0])

    def passed(self, min_proportion: float | None = None) -> bool:
        k = len(self.p_values)
        if min_proportion is None:
            min_proportion = acceptable_proportion(k)
        if self.proportion < min_proportion:
            return False
        pt = self.p_t
        return pt is None or pt >= PT_THRESHOLD


def acceptable_proportion(k: int, alpha: float = ALPHA) -> float:
    """Lower edge of the confidence band for the pass proportion of k sequences."""
    p = 1 - alpha
    return p - 3 * math.sqrt(p * alpha / k)


@dataclass
class TestReport:
    sequences: int
    bits_per_sequence: int
    results: dict[str, TestResult]

    def passed(self, name: str, min_proportion: float | None = None) -> bool:
        return self.results[name].passed(min_proportion)

    def successes(self, min_proportion: float | None = None) -> int:
        return sum(r.passed(min_proportion) for r in self.results.values())

    def to_lines(self) -> str:
        """One line per test: name, p-value (P_T, or the lone p-value), proportion, verdict."""
        lines = []
        for name, r in self.results.items():
            p = r.p_t if r.p_t is not None else r.first_p
            verdict = "PASS" if r.passed() else "FAIL"
            lines.append(f"{name} {p:.6f} {r.proportion:.4f} {verdict}")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        head = f"{'Test':<40} {'P_T':>10} {'p(seq 1)':>10} {'Proportion':>11}  Result"
        out = [
            f"{self.sequences} sequences x {self.bits_per_sequence} bits",
            head,
            "-" * len(head),
        ]
        for name, r in self.results.items():
            pt = "n/a" if r.p_t is None else f"{r.p_t:.6f}"
            out.append(
                f"{TITLES[name]:<40} {pt:>10} {r.first_p:>10.6f} {r.proportion:>11.4f}  "
                f"{'PASS' if r.passed() else 'FAIL'}"
            )
        out.append(f"Success {self.successes()}/{len(self.results)}")
        return "\n".join(out) + "\n"


def analyse_sequence(bits: np.ndarray, tests: Sequence[str] = tuple(TESTS)) -> dict[str, tuple[float, ...]]:
    return {name: run_test_all(name, bits) for name in tests}


def analyse_sequences(
    sequences: Sequence[np.ndarray], tests: Sequence[str] = tuple(TESTS), jobs: int = 1
) -> TestReport:
    if not sequences:
        raise ValueError("need at least one sequence")
    results = {name: TestResult(name) for name in tests}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(analyse_sequence, sequences, [tuple(tests)] * len(sequences)))
    else:
        rows = [analyse_sequence(s, tests) for s in sequences]
    for row in rows:
        for name, ps in row.items():
            results[name].p_values.append(ps)
    return TestReport(len(sequences), len(sequences[0]), results)


def run_battery(
    generator, sequences: int = 100, bits_per_sequence: int = 20_000,
    tests: Sequence[str] = tuple(TESTS), jobs: int = 1,
) -> TestReport:
    """Draw consecutive sequences from ``generator`` and run every test on each."""
    if sequences < 1 or bits_per_sequence < 1:
        raise ValueError("sequence count and length must be positive")
    stream = BitStream(generator)
    seqs = [stream.read(bits_per_sequence) for _ in range(sequences)]
    return analyse_sequences(seqs, tests, jobs)
