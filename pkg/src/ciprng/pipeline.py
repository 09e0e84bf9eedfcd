"""Clock-level model of the 16-bit generator's hardware datapath.

Each round has two phases: phase A runs the two XORshifts and the BBS in
parallel and latches their outputs; phase B folds the latched words into the
16-bit state. In ``two-phase`` mode the phases alternate (one round every
two cycles). In ``overlapped`` mode phase A of round n+1 shares a cycle with
phase B of round n, so after a one-cycle fill one word leaves every cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, TextIO

from .engines import FpgaCiprng, fpga_from_seeds
from .sources import DEFAULT_TRIPLE

MODES = ("two-phase", "overlapped")
WORD_BITS = 16


def xorshift_logic_elements(triple) -> int:
    """Shift stages are free wiring; each XOR stage costs 64 - shift elements."""
    s1, s2, s3 = triple
    return 192 - s1 - s2 - s3


@dataclass(frozen=True)
class CycleEvent:
    cycle: int
    phase: str
    xs1: int | None = None
    xs2: int | None = None
    bbs: int | None = None
    output: int | None = None

    def trace_line(self) -> str:
        def h(v, width):
            return "-" * width if v is None else f"{v:0{width}x}"

        return (
            f"{self.cycle:8d} {self.phase:<3} xs1={h(self.xs1, 16)} xs2={h(self.xs2, 16)} "
            f"bbs={h(self.bbs, 1)} out={h(self.output, 4)}"
        )


class PipelineModel:
    def __init__(self, generator: FpgaCiprng | None = None, mode: str = "overlapped", clock_mhz: float = 400.0):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        if clock_mhz <= 0:
            raise ValueError("clock frequency must be positive")
        self.generator = generator if generator is not None else fpga_from_seeds()
        self.mode = mode
        self.clock_mhz = clock_mhz
        self.cycles = 0
        self.rounds = 0
        self._latched: tuple[int, int, int] | None = None

    @property
    def emitted_bits(self) -> int:
        return WORD_BITS * self.rounds

    def step_cycle(self) -> CycleEvent:
        g = self.generator
        c = self.cycles
        self.cycles += 1
        if self.mode == "two-phase":
            if self._latched is None:
                self._latched = g.sample()
                return CycleEvent(c, "A", *self._latched)
            z = g.combine(*self._latched)
            self._latched = None
            self.rounds += 1
            return CycleEvent(c, "B", output=z)
        out = None
        if self._latched is not None:
            out = g.combine(*self._latched)
            self.rounds += 1
        self._latched = g.sample()
        return CycleEvent(c, "A" if out is None else "AB", *self._latched, output=out)

    def run(self, cycles: int) -> Iterator[CycleEvent]:
        for _ in range(cycles):
            yield self.step_cycle()

    def outputs(self, cycles: int) -> list[int]:
        return [e.output for e in self.run(cycles) if e.output is not None]

    def write_trace(self, cycles: int, fh: TextIO) -> None:
        for event in self.run(cycles):
            fh.write(event.trace_line() + "\n")

    @property
    def steady_state_bits_per_cycle(self) -> float:
        return WORD_BITS if self.mode == "overlapped" else WORD_BITS / 2


@dataclass(frozen=True)
class ThroughputReport:
    mode: str
    clock_mhz: float
    cycles: int
    rounds: int
    bits: int
    bits_per_cycle: float
    measured_bits_per_cycle: float
    mbps: float
    logic_elements: tuple[int, int]

    def to_text(self) -> str:
        return (
            f"mode                 {self.mode}\n"
            f"clock                {self.clock_mhz:g} MHz\n"
            f"cycles               {self.cycles}\n"
            f"rounds               {self.rounds}\n"
            f"bits emitted         {self.bits}\n"
            f"bits/cycle (steady)  {self.bits_per_cycle:g}\n"
            f"bits/cycle (run)     {self.measured_bits_per_cycle:.4f}\n"
            f"throughput           {self.mbps:g} Mbps\n"
            f"xorshift LEs         {self.logic_elements[0]} + {self.logic_elements[1]}\n"
        )


def summarise(model: PipelineModel) -> ThroughputReport:
    g = model.generator
    les = tuple(xorshift_logic_elements(getattr(xs, "triple", DEFAULT_TRIPLE)) for xs in (g.xs1, g.xs2))
    bpc = model.steady_state_bits_per_cycle
    return ThroughputReport(
        mode=model.mode,
        clock_mhz=model.clock_mhz,
        cycles=model.cycles,
        rounds=model.rounds,
        bits=model.emitted_bits,
        bits_per_cycle=bpc,
        measured_bits_per_cycle=model.emitted_bits / max(model.cycles, 1),
        mbps=bpc * model.clock_mhz,
        logic_elements=les,
    )


def throughput_report(model: PipelineModel, cycles: int) -> ThroughputReport:
    """Advance ``model`` by ``cycles`` clocks and summarise its rate."""
    if cycles < 1:
        raise ValueError("cycles must be >= 1")
    for _ in model.run(cycles):
        pass
    return summarise(model)
