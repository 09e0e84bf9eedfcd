import io

import pytest

from ciprng.engines import fpga_from_seeds, known_answer_fpga
from ciprng.pipeline import PipelineModel, summarise, throughput_report, xorshift_logic_elements


def test_two_phase_counts():
    model = PipelineModel(mode="two-phase")
    outs = model.outputs(2000)
    assert len(outs) == 1000 and model.emitted_bits == 16000


def test_overlapped_fill():
    model = PipelineModel(mode="overlapped")
    assert len(model.outputs(1001)) == 1000
    assert model.rounds == 1000


@pytest.mark.parametrize("cycles", [0, 1, 2, 3, 17])
@pytest.mark.parametrize("mode", ["two-phase", "overlapped"])
def test_round_invariant(mode, cycles):
    model = PipelineModel(mode=mode)
    model.outputs(cycles)
    expected = cycles // 2 if mode == "two-phase" else max(0, cycles - 1)
    assert model.rounds == expected
    assert model.emitted_bits <= 16 * cycles


@pytest.mark.parametrize("mode", ["two-phase", "overlapped"])
def test_stream_equivalence(mode):
    seeds = (0x1234, 0xABCDEF, 0x77)
    direct = fpga_from_seeds(seeds)
    expected = [direct() for _ in range(10_000)]
    model = PipelineModel(fpga_from_seeds(seeds), mode)
    cycles = 20_000 if mode == "two-phase" else 10_001
    assert model.outputs(cycles) == expected


def test_known_answer_through_pipeline():
    assert PipelineModel(known_answer_fpga()).outputs(6) == [517, 40550, 55201, 49417, 3946]


def test_throughput_numbers():
    fast = throughput_report(PipelineModel(mode="overlapped"), 1001)
    slow = throughput_report(PipelineModel(mode="two-phase"), 2000)
    assert fast.mbps == 6400 and fast.mbps > 6000 and fast.bits_per_cycle == 16
    assert slow.mbps == 3200 and slow.bits_per_cycle == 8
    assert slow.measured_bits_per_cycle == 8
    assert fast.logic_elements == (155, 155)
    assert "6400 Mbps" in fast.to_text()


def test_logic_elements():
    assert xorshift_logic_elements((13, 7, 17)) == 155
    assert xorshift_logic_elements((1, 1, 1)) == 189


def test_report_validation():
    with pytest.raises(ValueError):
        throughput_report(PipelineModel(), 0)
    with pytest.raises(ValueError):
        PipelineModel(mode="serial")
    with pytest.raises(ValueError):
        PipelineModel(clock_mhz=0)


def test_trace_lines():
    buf = io.StringIO()
    model = PipelineModel(known_answer_fpga(), "two-phase")
    model.write_trace(4, buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 4
    assert " A " in lines[0] and "out=----" in lines[0]
    assert lines[1].split()[1] == "B" and lines[1].endswith(f"out={517:04x}")
    assert summarise(model).rounds == 2
