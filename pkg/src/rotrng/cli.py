"""Command line front end.

Subcommands: generate (emit bits), test (battery verdict on a capture
file), sweep (battery across a parameter grid), estimate (throughput and
area table), capture (run the RAM/UART harness over generated bits).

Exit status: 0 on success and on a passing battery, 1 when the battery
fails or a capture underruns, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .battery import DEFAULT_ALPHA, DEFAULT_MIN_BITS, run_battery
from .bitstream import BitStream
from .estimators import DEFAULT_F_CLK, clb_count, reference_table, throughput_bps
from .harness import CaptureConfig, CaptureUnderrun, run_capture
from .jitter import JitterModel
from .pipeline import TrngParams, multi_sampler_generate, trng_generate
from .sweep import SWEEP_AXES, sweep_axis

__all__ = ["main", "build_parser"]


def _add_model_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    g.add_argument("--element-delay", type=float, default=None,
                   help="delay element propagation time in seconds")
    g.add_argument("--jitter-sigma", type=float, default=None,
                   help="per half-period timing noise in seconds")
    g.add_argument("--aperture", type=float, default=None,
                   help="metastability window of the sampling register in seconds")
    g.add_argument("--mismatch", type=float, default=None,
                   help="relative spread of per-oscillator frequencies")
    g.add_argument("--combine-resolve", type=float, default=None,
                   help="finest edge spacing the combiner tracks, in seconds (0 = ideal)")


def _add_pipe_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("pipeline")
    g.add_argument("--n", type=int, default=20, help="number of oscillators (default 20)")
    g.add_argument("--l", type=int, default=3, help="delay chain length (default 3)")
    g.add_argument("--d", type=int, default=0, help="clock divider stages (default 0)")
    g.add_argument("--r", type=int, default=2, help="parity folding stages (default 2)")
    g.add_argument("--f-clk", type=float, default=float(DEFAULT_F_CLK),
                   help="sample clock in Hz (default 5e7)")


def _build_model(args) -> JitterModel:
    kw = {"seed": args.seed}
    if args.element_delay is not None:
        kw["element_delay"] = args.element_delay
    if args.jitter_sigma is not None:
        kw["jitter_sigma"] = args.jitter_sigma
    if args.aperture is not None:
        kw["aperture"] = args.aperture
    if args.mismatch is not None:
        kw["freq_mismatch_sigma"] = args.mismatch
    if args.combine_resolve is not None:
        kw["combine_resolve"] = args.combine_resolve
    return JitterModel(**kw)


def _build_params(args) -> TrngParams:
    return TrngParams(n=args.n, l=args.l, d=args.d, r=args.r, f_clk=args.f_clk)


def _write_stream(stream: BitStream, out_path, as_hex: bool) -> None:
    data = stream.to_bytes()
    if out_path and as_hex:
        with open(out_path, "w") as fh:
            fh.write(data.hex() + "\n")
    elif out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
    elif as_hex:
        sys.stdout.write(data.hex() + "\n")
    else:
        sys.stdout.buffer.write(data)


def _cmd_generate(args) -> int:
    model = _build_model(args)
    params = _build_params(args)
    if args.samplers > 1:
        stream = multi_sampler_generate(args.samplers, params.n, params.l,
                                        model, params.f_clk, args.nbits)
    else:
        stream = trng_generate(model, params, args.nbits)
    _write_stream(stream, args.out, args.hex or args.out is None)
    return 0


def _report_to_dict(report) -> dict:
    def _num(x):
        return None if (isinstance(x, float) and math.isnan(x)) else x
    return {
        "nbits": report.nbits,
        "alpha": report.alpha,
        "reliable": report.reliable,
        "passed": report.passed,
        "results": [
            {"test": r.test, "statistic": _num(r.statistic),
             "p_value": r.p_value, "verdict": r.verdict}
            for r in report.results
        ],
    }


def _cmd_test(args) -> int:
    if args.infile == "-":
        data = sys.stdin.buffer.read()
    else:
        with open(args.infile, "rb") as fh:
            data = fh.read()
    nbits = 8 * len(data) if args.nbits is None else args.nbits
    stream = BitStream.from_bytes(data[: (nbits + 7) // 8], nbits)
    report = run_battery(stream, alpha=args.alpha, min_bits=args.min_bits)
    if args.json:
        json.dump(_report_to_dict(report), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for line in report.summary_lines():
            print(line)
    return 0 if report.passed else 1


def _cmd_sweep(args) -> int:
    model = _build_model(args)
    params = _build_params(args)
    values = [int(v) for v in args.values.split(",") if v.strip() != ""]
    if not values:
        raise SystemExit("sweep needs at least one value")
    seeds = range(args.seed, args.seed + args.seeds)

    def progress(axis, value, seed, report):
        if args.verbose:
            print(f"# {axis}={value} seed={seed}: {'pass' if report.passed else 'fail'}",
                  file=sys.stderr)

    cells = sweep_axis(args.axis, values, model, params, args.nbits, seeds,
                       alpha=args.alpha, progress=progress)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("axis,value,seed,passed\n")
            for cell in cells:
                for seed, ok in zip(cell.seeds, cell.passed):
                    fh.write(f"{cell.axis},{cell.value},{seed},{int(ok)}\n")
    print(f"{'axis':<6}{'value':>6}{'seeds':>7}{'passes':>8}{'fraction':>10}")
    for cell in cells:
        print(f"{cell.axis:<6}{cell.value:>6}{len(cell.seeds):>7}"
              f"{cell.passes:>8}{cell.pass_fraction:>10.2f}")
    return 0


def _decimal_str(fr: Fraction) -> str:
    """Exact decimal form when it terminates, num/den otherwise."""
    num, den = fr.numerator, fr.denominator
    twos = fives = 0
    d = den
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{num}/{den}"
    k = max(twos, fives)
    if k == 0:
        return str(num)
    s = str(num * 10**k // den).rjust(k + 1, "0")
    return (s[:-k] + "." + s[-k:]).rstrip("0").rstrip(".")


def _cmd_estimate(args) -> int:
    if args.points:
        rows = []
        for chunk in args.points.split(";"):
            d, r, n, l = (int(x) for x in chunk.split(","))
            rows.append((d, r, n, l,
                         throughput_bps(args.f_clk, d, r),
                         clb_count(n, l, d, r).total))
    else:
        rows = list(reference_table(args.f_clk))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("d,r,n,l,throughput_bps,clb\n")
            for d, r, n, l, bps, clb in rows:
                fh.write(f"{d},{r},{n},{l},{_decimal_str(bps)},{_decimal_str(clb)}\n")
    print(f"{'d':>3}{'r':>3}{'n':>5}{'l':>3}{'Kbps':>9}{'CLB':>8}")
    for d, r, n, l, bps, clb in rows:
        kbps = int(bps / 1000)  # display truncates, the CSV stays exact
        print(f"{d:>3}{r:>3}{n:>5}{l:>3}{kbps:>9}{float(clb):>8g}")
    return 0


def _cmd_capture(args) -> int:
    model = _build_model(args)
    params = _build_params(args)
    config = CaptureConfig(ram_bits=args.ram_bits, framed=args.framed)
    rounds = -(-args.nbytes * 8 // config.ram_bits)
    nbits = max(rounds, 1) * config.ram_bits
    stream = trng_generate(model, params, nbits)
    try:
        data = run_capture(iter(stream), config, args.nbytes)
    except CaptureUnderrun as exc:
        print(f"capture underrun: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.hex() + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rotrng",
                                 description="ring oscillator TRNG simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate output bits")
    p.add_argument("--nbits", type=int, required=True)
    p.add_argument("--out", help="write raw bytes to this file")
    p.add_argument("--hex", action="store_true",
                   help="write hex text instead of raw bytes")
    p.add_argument("--samplers", type=int, default=1,
                   help="independent banks XORed together (default 1)")
    _add_model_args(p)
    _add_pipe_args(p)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("test", help="run the statistical battery on a file")
    p.add_argument("infile", help="byte file, or - for stdin")
    p.add_argument("--nbits", type=int, default=None,
                   help="use only the first nbits bits")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--min-bits", type=int, default=DEFAULT_MIN_BITS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_test)

    p = sub.add_parser("sweep", help="battery pass rates across a parameter grid")
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", required=True, help="comma separated values")
    p.add_argument("--nbits", type=int, default=1 << 21)
    p.add_argument("--seeds", type=int, default=10, help="number of seeds (from --seed up)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--csv", help="write per-seed outcomes to this file")
    p.add_argument("--verbose", action="store_true")
    _add_model_args(p)
    _add_pipe_args(p)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("estimate", help="throughput and area table")
    p.add_argument("--f-clk", type=float, default=float(DEFAULT_F_CLK))
    p.add_argument("--points", help="semicolon separated d,r,n,l tuples")
    p.add_argument("--csv", help="write exact values to this file")
    p.set_defaults(fn=_cmd_estimate)

    p = sub.add_parser("capture", help="capture bytes through the RAM/UART harness")
    p.add_argument("--nbytes", type=int, required=True)
    p.add_argument("--ram-bits", type=int, default=16384)
    p.add_argument("--framed", action="store_true",
                   help="model UART busy time between bytes")
    p.add_argument("--out", help="write captured bytes to this file")
    _add_model_args(p)
    _add_pipe_args(p)
    p.set_defaults(fn=_cmd_capture)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
