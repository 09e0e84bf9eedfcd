"""Chaotic-iteration pseudorandom generators and their applications."""

from .engines import (
    BitStream,
    CiprngV1,
    CiprngV2,
    FpgaCiprng,
    FpgaCiprngMaskForm,
    derive_nibble_mask,
    fpga_from_seeds,
    g1_map,
    stream_bits,
)
from .sources import BlumBlumShub, BooleanState, ScriptedSource, XorShift64, ci_step, xor_ci_step

__all__ = [
    "BitStream",
    "BlumBlumShub",
    "BooleanState",
    "CiprngV1",
    "CiprngV2",
    "FpgaCiprng",
    "FpgaCiprngMaskForm",
    "ScriptedSource",
    "XorShift64",
    "ci_step",
    "derive_nibble_mask",
    "fpga_from_seeds",
    "g1_map",
    "stream_bits",
    "xor_ci_step",
]

__version__ = "0.1.0"
