"""Command-line surface: generate, select, stats, encode, decode, experiment."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import coder, experiments, selection, stats
from .bitseq import read_bits, write_bits
from .generators import source_from_descriptor
from .measures import measure_from_descriptor, parse_keyvalues

_GENERATOR_KINDS = (
    "champernowne",
    "fibonacci_word",
    "sturmian",
    "bernoulli",
    "periodic",
    "constant",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqlab",
        description="Subsequence selection and randomness diagnostics on binary sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a generated sequence prefix")
    gen.add_argument("kind", choices=_GENERATOR_KINDS)
    gen.add_argument("--n", type=int, required=True, help="prefix length in bits")
    gen.add_argument("--out", help="output file (default: stdout)")
    gen.add_argument("--format", choices=("text", "packed"), default="text")
    gen.add_argument("--p", help="success probability as num/den (bernoulli)")
    gen.add_argument("--seed", type=int, default=1, help="64-bit seed (bernoulli)")
    gen.add_argument("--pattern", help="repeating pattern (periodic)")
    gen.add_argument("--bit", type=int, choices=(0, 1), default=1, help="constant bit")
    gen.add_argument("--alpha-preperiod", default="", help="CF preperiod, comma separated")
    gen.add_argument("--alpha-period", default="1", help="CF period, comma separated")
    gen.add_argument("--beta", default="0", help="rational offset in [0,1)")

    sel = sub.add_parser("select", help="select x at the ones of y")
    sel.add_argument("--in", dest="infile", required=True, help="x sequence file")
    sel.add_argument("--in2", dest="infile2", required=True, help="y sequence file")
    sel.add_argument("--out", required=True, help="selected sequence output")
    sel.add_argument("--format", choices=("text", "packed"), default="text")

    st = sub.add_parser("stats", help="block statistics of a sequence")
    st.add_argument("--in", dest="infile", required=True)
    st.add_argument("--k", default="1,2,3", help="block lengths, comma separated")
    st.add_argument("--out", help="CSV output (default: stdout)")
    st.add_argument("--format", choices=("text", "packed"), default="text")

    enc = sub.add_parser("encode", help="arithmetic-code a sequence under a measure")
    enc.add_argument("--in", dest="infile", required=True)
    enc.add_argument("--measure", required=True, help="measure descriptor file")
    enc.add_argument("--out", required=True, help="code bits output")
    enc.add_argument("--format", choices=("text", "packed"), default="text")
    enc.add_argument("--curve", help="also write a code-length CSV here")

    dec = sub.add_parser("decode", help="decode code bits under a measure")
    dec.add_argument("--in", dest="infile", required=True)
    dec.add_argument("--measure", required=True)
    dec.add_argument("--n", type=int, required=True, help="maximum bits to decode")
    dec.add_argument("--out", required=True)
    dec.add_argument("--format", choices=("text", "packed"), default="text")

    exp = sub.add_parser("experiment", help="run a manifest-driven experiment")
    exp.add_argument("--manifest", required=True)
    exp.add_argument("--out", help="output directory (overrides the manifest)")
    return parser


def _cmd_generate(args) -> int:
    desc = {"kind": args.kind}
    if args.kind == "bernoulli":
        if args.p is None:
            raise ValueError("bernoulli needs --p")
        desc["p"] = args.p
        desc["seed"] = str(args.seed)
    elif args.kind == "periodic":
        if args.pattern is None:
            raise ValueError("periodic needs --pattern")
        desc["pattern"] = args.pattern
    elif args.kind == "constant":
        desc["bit"] = str(args.bit)
    elif args.kind == "sturmian":
        desc["alpha_preperiod"] = args.alpha_preperiod
        desc["alpha_period"] = args.alpha_period
        desc["beta"] = args.beta
    s = source_from_descriptor(desc).prefix(args.n)
    if args.out:
        write_bits(args.out, s, args.format)
    else:
        sys.stdout.write(s.to_text() + "\n")
    return 0


def _cmd_select(args) -> int:
    x = read_bits(args.infile, args.format)
    y = read_bits(args.infile2, args.format)
    result = selection.select(x, y)
    write_bits(args.out, result.selected, args.format)
    sidecar = Path(args.out).with_name(Path(args.out).name + ".positions")
    sidecar.write_text("".join(f"{p}\n" for p in result.positions.tolist()))
    return 0


def _cmd_stats(args) -> int:
    s = read_bits(args.infile, args.format)
    ks = [int(k) for k in args.k.split(",") if k.strip()]
    rows = []
    n = len(s)
    for k in ks:
        rows.append(("discrepancy", k, n, stats.discrepancy(s, k)))
        rows.append(("entropy", k, n, stats.empirical_entropy(s, k)))
        rows.append(("factor_complexity", k, n, stats.factor_complexity(s, k)))
    phrases, ratio = stats.lz78_ratio(s)
    rows.append(("lz78_phrases", None, n, phrases))
    rows.append(("lz78_ratio", None, n, ratio))
    rows.append(("density", None, n, float(stats.density(s))))
    text = experiments._stat_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _read_measure(path):
    return measure_from_descriptor(parse_keyvalues(Path(path).read_text()))


def _cmd_encode(args) -> int:
    y = read_bits(args.infile, args.format)
    measure = _read_measure(args.measure)
    stream = coder.encode(measure, y)
    write_bits(args.out, stream.flushed_bits(), args.format)
    if args.curve:
        class _Fixed:
            def __init__(self, s):
                self._s = s

            def prefix_array(self, n):
                return self._s.to_array()[:n]

        cps = experiments.default_checkpoints(len(y))
        curve = coder.code_length_curve(measure, _Fixed(y), cps)
        Path(args.curve).write_text(curve.to_csv())
    return 0


def _cmd_decode(args) -> int:
    z = read_bits(args.infile, args.format)
    measure = _read_measure(args.measure)
    write_bits(args.out, coder.decode(measure, z, args.n), args.format)
    return 0


def _cmd_experiment(args) -> int:
    manifest = experiments.ExperimentManifest.from_file(args.manifest, out_dir=args.out)
    if args.out:
        manifest.out_dir = Path(args.out)
    checks = experiments.run_experiment(manifest)
    for check in checks:
        sys.stdout.write(check.line() + "\n")
    return 0 if all(c.passed for c in checks) else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "generate": _cmd_generate,
        "select": _cmd_select,
        "stats": _cmd_stats,
        "encode": _cmd_encode,
        "decode": _cmd_decode,
        "experiment": _cmd_experiment,
    }[args.command]
    try:
        return handler(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
