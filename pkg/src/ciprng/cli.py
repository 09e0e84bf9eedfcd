"""Command-line entry point: ``ciprng <subcommand> ...``.

Exit codes:
  0  success
  2  usage error (unknown flag, bad flag value)
  3  unreadable or malformed input file (image, key, stream script)
  4  precondition violated (e.g. watermark too large, crop larger than image)
  5  entropy source exhausted (scripted stream too short)
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import attacks, imageio, nist
from .engines import (
    DEFAULT_SEEDS,
    BitStream,
    CiprngV1,
    CiprngV2,
    FpgaCiprng,
    SourceBlocks,
    bits_to_str,
    fpga_from_seeds,
    v1_from_seeds,
    v2_from_seeds,
)
from .pipeline import PipelineModel, summarise, throughput_report
from .sources import BlumBlumShub, BooleanState, EntropyError, ScriptedSource, XorShift64
from .watermark import (
    EmbeddingKey,
    WatermarkError,
    embed,
    extract,
    parse_hex_word,
    reference_carrier,
    reference_watermark,
    similarity,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_PRECONDITION = 4
EXIT_ENTROPY = 5

GENERATORS = ("xorshift", "bbs", "ciprng-v1", "ciprng-v2", "ciprng-fpga")


class InputError(Exception):
    """Bad or missing input file."""


def parse_seeds(text: str) -> list[int]:
    try:
        return [parse_hex_word(w) for w in text.split(",") if w.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_streams(text: str) -> dict[str, object]:
    """Parse a stream script.

    Lines are ``name: v v v`` or bare integer lists; bare lines fill
    ``prng1``, ``prng2``, ``prng3`` in order. ``x0`` takes a bit string,
    ``c`` and ``n`` take integers. ``#`` starts a comment.
    """
    out: dict[str, object] = {}
    bare = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            name, _, rest = line.partition(":")
            name = name.strip().lower()
        else:
            bare += 1
            name, rest = f"prng{bare}", line
        try:
            if name == "x0":
                out[name] = BooleanState.from_string(rest)
            elif name in ("c", "n"):
                out[name] = int(rest)
            elif name in ("prng1", "prng2", "prng3"):
                out[name] = [int(v) for v in rest.split()]
            else:
                raise ValueError(f"unknown stream name {name!r}")
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    return out


def _scripted(streams: dict, name: str) -> ScriptedSource:
    if name not in streams:
        raise InputError(f"stream script lacks {name}")
    return ScriptedSource(streams[name], name)


def build_generator(kind: str, seeds: list[int] | None, script: dict | None):
    seeds = seeds or list(DEFAULT_SEEDS)
    if kind == "xorshift":
        src = _scripted(script, "prng1") if script else XorShift64(seeds[0])
        return SourceBlocks(src, 64)
    if kind == "bbs":
        src = _scripted(script, "prng1") if script else BlumBlumShub.from_seed(seeds[0])
        return SourceBlocks(src, 4)
    if kind == "ciprng-v1":
        if script:
            n = script.get("n")
            x0 = script.get("x0") or BooleanState((False,) * (n or 32))
            return CiprngV1(x0, _scripted(script, "prng1"), _scripted(script, "prng2"), c=script.get("c", 4))
        return v1_from_seeds(seeds)
    if kind == "ciprng-v2":
        if script:
            x0 = script.get("x0") or BooleanState((False,) * script.get("n", 32))
            return CiprngV2(x0, _scripted(script, "prng1"), _scripted(script, "prng2"))
        return v2_from_seeds(seeds)
    if kind == "ciprng-fpga":
        if script:
            return FpgaCiprng(_scripted(script, "prng1"), _scripted(script, "prng2"), _scripted(script, "prng3"))
        return fpga_from_seeds(seeds)
    raise ValueError(f"unknown generator {kind!r}")


def _read_input(path: str, reader):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    try:
        return reader(p)
    except imageio.ImageFormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _check_output(path: str | None) -> None:
    if path is None:
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        raise InputError(f"{path}: output directory does not exist")


def _load_script(path: str | None) -> dict | None:
    if path is None:
        return None
    return _read_input(path, lambda p: parse_streams(p.read_text()))


def _load_key(path: str, mode: str, lsc_bits: int) -> EmbeddingKey:
    return _read_input(path, lambda p: EmbeddingKey.from_file(p, mode, lsc_bits))


def _format_bits(bits: np.ndarray, fmt: str) -> str:
    if fmt == "raw":
        return bits_to_str(bits)
    padded = np.concatenate([bits, np.zeros(-len(bits) % 8, dtype=np.uint8)])
    digits = np.packbits(padded).tobytes().hex()
    return digits[: -(-len(bits) // 4)]


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None
    if w <= 0 or h <= 0:
        raise argparse.ArgumentTypeError("dimensions must be positive")
    return w, h


def _non_negative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# -- subcommands --------------------------------------------------------------

def cmd_generate(args) -> int:
    _check_output(args.out)
    gen = build_generator(args.gen, args.seed, _load_script(args.script))
    text = _format_bits(BitStream(gen).read(args.bits), args.format)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _read_bit_file(p: Path) -> np.ndarray:
    text = "".join(p.read_text().split())
    if set(text) - {"0", "1"}:
        raise ValueError("bit file must contain only 0/1 characters")
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")


def cmd_test(args) -> int:
    if args.input is not None:
        bits = _read_input(args.input, _read_bit_file)
        need = args.sequences * args.bits
        if len(bits) < need:
            raise WatermarkError(f"{args.input} holds {len(bits)} bits, need {need}")
        seqs = [bits[i * args.bits : (i + 1) * args.bits] for i in range(args.sequences)]
        report = nist.analyse_sequences(seqs, jobs=args.jobs)
    else:
        gen = build_generator(args.gen, args.seed, _load_script(args.script))
        report = nist.run_battery(gen, args.sequences, args.bits, jobs=args.jobs)
    sys.stdout.write(report.to_lines() if args.format == "lines" else report.to_table())
    return EXIT_OK


def cmd_embed(args) -> int:
    _check_output(args.out)
    cover = _read_input(args.cover, imageio.read_pgm)
    wm = _read_input(args.wm, imageio.read_pbm)
    key = _load_key(args.key, args.mode, args.lsc_bits)
    imageio.write_pgm(args.out, embed(cover, wm, key))
    return EXIT_OK


def cmd_extract(args) -> int:
    _check_output(args.out)
    stego = _read_input(args.stego, imageio.read_pgm)
    key = _load_key(args.key, args.mode, args.lsc_bits)
    w, h = args.wm_size
    imageio.write_pbm(args.out, extract(stego, key, (h, w)))
    return EXIT_OK


def cmd_attack(args) -> int:
    _check_output(args.out)
    img = _read_input(args.input, imageio.read_pgm)
    if args.kind == "crop":
        out = attacks.crop(img, int(args.param))
    elif args.kind == "rotate":
        out = attacks.rotate_roundtrip(img, args.param, args.interpolation)
    elif args.kind == "jpeg":
        out = attacks.jpeg_like(img, int(args.param))
    else:
        out = attacks.gaussian_noise(img, args.param, args.noise_seed)
    imageio.write_pgm(args.out, out)
    return EXIT_OK


def cmd_similarity(args) -> int:
    a = _read_input(args.a, imageio.read_pbm)
    b = _read_input(args.b, imageio.read_pbm)
    print(f"{similarity(a, b):.2f}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    _check_output(args.trace)
    model = PipelineModel(fpga_from_seeds(args.seed or DEFAULT_SEEDS), args.mode, args.mhz)
    if args.trace:
        with open(args.trace, "w") as fh:
            model.write_trace(args.cycles, fh)
        report = summarise(model)
    else:
        report = throughput_report(model, args.cycles)
    sys.stdout.write(report.to_text())
    return EXIT_OK


def cmd_reference(args) -> int:
    _check_output(args.cover)
    _check_output(args.wm)
    imageio.write_pgm(args.cover, reference_carrier())
    imageio.write_pbm(args.wm, reference_watermark())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ciprng",
        description="Chaotic-iteration PRNGs, NIST subset battery, watermarking and pipeline model.",
        epilog=__doc__.split("\n", 2)[2],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def gen_flags(p, required=True):
        p.add_argument("--gen", choices=GENERATORS, required=required)
        p.add_argument("--seed", type=parse_seeds, help="comma-separated 64-bit hex words")
        p.add_argument("--script", help="stream script replacing the live entropy sources")

    p = sub.add_parser("generate", help="emit a bit stream")
    gen_flags(p)
    p.add_argument("--bits", type=_non_negative, required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("raw", "hex"), default="raw")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("test", help="run the statistical battery")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", help="file of 0/1 characters")
    src.add_argument("--gen", choices=GENERATORS)
    p.add_argument("--seed", type=parse_seeds)
    p.add_argument("--script")
    p.add_argument("--sequences", type=_positive, default=100)
    p.add_argument("--bits", type=_positive, default=20_000)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--format", choices=("table", "lines"), default="table")
    p.set_defaults(func=cmd_test)

    for name, func in (("embed", cmd_embed), ("extract", cmd_extract)):
        p = sub.add_parser(name, help=f"{name} a watermark")
        if name == "embed":
            p.add_argument("--cover", required=True)
            p.add_argument("--wm", required=True)
        else:
            p.add_argument("--stego", required=True)
            p.add_argument("--wm-size", type=_parse_size, required=True, help="WxH")
        p.add_argument("--key", required=True, help="key file, one hex word per line")
        p.add_argument("--mode", choices=("auth", "unauth"), default="unauth")
        p.add_argument("--lsc-bits", type=int, choices=(1, 2, 3, 4), default=3)
        p.add_argument("--out", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("attack", help="attack a PGM image")
    p.add_argument("--kind", choices=("crop", "rotate", "jpeg", "noise"), required=True)
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--noise-seed", type=parse_hex_word, default=attacks.DEFAULT_NOISE_SEED)
    p.add_argument("--interpolation", choices=("nearest", "bilinear"), default="nearest")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("similarity", help="percentage of equal bits between two PBMs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("pipeline", help="cycle model of the hardware datapath")
    p.add_argument("--cycles", type=_positive, required=True)
    p.add_argument("--mode", choices=("two-phase", "overlapped"), default="overlapped")
    p.add_argument("--mhz", type=float, default=400.0)
    p.add_argument("--seed", type=parse_seeds)
    p.add_argument("--trace", help="write a per-cycle trace here")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("reference", help="write the synthetic carrier and watermark")
    p.add_argument("--cover", required=True)
    p.add_argument("--wm", required=True)
    p.set_defaults(func=cmd_reference)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"ciprng: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EntropyError as exc:
        print(f"ciprng: {exc}", file=sys.stderr)
        return EXIT_ENTROPY
    except (WatermarkError, ValueError) as exc:
        print(f"ciprng: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
