"""Command-line entry point: ``jackmoments <command> ...``.

Exit codes: 0 success / gate passed, 1 verification gate failed,
2 usage or domain error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .algebra import AlgebraError, AlgebraTag, MatrixF, hermitian_eigenvalues
from .campaign import DEMO_SHAPES, MODES, CampaignConfig, Cell, format_reports, run_campaign, summarize
from .hyper import hyper_pFq, stiefel_log_volume
from .jack import PoleError, TableTooSmallError, build_jack_table, jack_C
from .montecarlo import RandomStream, haar_sample
from .partitions import format_partition, parse_partition
from .verify import TruncationError

EXIT_OK, EXIT_GATE, EXIT_USAGE = 0, 1, 2


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _load_matrix(path: str, beta: int | None = None) -> MatrixF:
    with open(path) as fh:
        return MatrixF.from_json(json.load(fh), beta)


def _table_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--beta", type=int, help="algebra dimension 1, 2, 4 or 8 (alpha = 2/beta)")
    g.add_argument("--alpha", type=Fraction, help="Jack parameter, e.g. 2 or 1/2")


def _resolve_table(args, weight: int):
    if args.alpha is not None:
        return build_jack_table(weight, alpha=args.alpha)
    return build_jack_table(weight, args.beta if args.beta is not None else 1)


def cmd_jack(args) -> int:
    kappa = parse_partition(args.kappa)
    table = _resolve_table(args, sum(kappa))
    if args.exact:
        exp = table.expansion(kappa)
        print(json.dumps({format_partition(lam): str(c) for lam, c in exp.items()}))
        if args.x is None:
            return EXIT_OK
    if args.x is None:
        raise ValueError("--x is required unless --exact is given")
    print(jack_C(table, kappa, _floats(args.x)))
    return EXIT_OK


def cmd_table(args) -> int:
    table = _resolve_table(args, args.deg)
    _emit(table.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_hyper(args) -> int:
    beta = args.beta
    if args.matrix:
        x = list(hermitian_eigenvalues(_load_matrix(args.matrix, beta)))
    elif args.x is not None:
        x = _floats(args.x)
    else:
        raise ValueError("give --x eigenvalues or --matrix")
    kind = args.type.lower()
    if kind == "pfq":
        a, b = _floats(args.a or ""), _floats(args.b or "")
    else:
        try:
            p, q = int(kind[0]), int(kind[2])
        except (ValueError, IndexError):
            raise ValueError(f"--type must look like 0F1 or pFq, got {args.type!r}") from None
        a, b = _floats(args.a or ""), _floats(args.b or "")
        if (len(a), len(b)) != (p, q):
            raise ValueError(f"{args.type} needs {p} --a and {q} --b parameters, got {len(a)} and {len(b)}")
    table = build_jack_table(args.deg, beta)
    res = hyper_pFq(a, b, x, beta, table, args.deg)
    print(json.dumps(res.to_dict()))
    return EXIT_OK


def cmd_volume(args) -> int:
    logv = stiefel_log_volume(args.m, args.n, args.beta)
    print(json.dumps(logv if args.log else math.exp(logv)))
    return EXIT_OK


def cmd_sample(args) -> int:
    tag = AlgebraTag(args.beta)
    frames = [haar_sample(args.m, args.n, tag, RandomStream(args.seed, i)).to_json() for i in range(args.count)]
    print(json.dumps({"m": args.m, "n": args.n, "beta": args.beta, "seed": args.seed, "frames": frames}))
    return EXIT_OK


def _campaign_from_args(args) -> CampaignConfig:
    opts = dict(samples=args.samples, seed=args.seed, threshold=args.threshold, max_degree=args.deg,
                chunk_size=args.chunk, gate=args.gate)
    if args.matrix:
        x = _load_matrix(args.matrix, args.beta[0] if args.beta and len(args.beta) == 1 else None)
        ks = args.k or ([args.deg] if args.mode == "bessel" else [1])
        cells = [Cell(x.tag.beta, x.rows, x.cols, k) for k in ks]
        return CampaignConfig(cells=cells, mode=args.mode, matrix=x, **opts)
    if (args.m is None) != (args.n is None):
        raise ValueError("--m and --n must be given together")
    if args.m is None and args.beta is None and args.k is None:
        return CampaignConfig.demo(args.mode, **opts)
    shapes = DEMO_SHAPES if args.m is None else list(zip(args.m, args.n))
    if args.m is not None and len(args.m) != len(args.n):
        raise ValueError("--m and --n lists must have the same length")
    defaults = {"moment": [0, 1, 2, 3, 4], "odd": [1, 3, 5], "bessel": [args.deg]}
    return CampaignConfig.grid(args.beta or [1, 2, 4], shapes, args.k or defaults[args.mode],
                               mode=args.mode, **opts)


def cmd_verify(args) -> int:
    config = _campaign_from_args(args)
    reports = run_campaign(config, workers=args.workers)
    fmt = "csv" if args.csv else args.format
    _emit(format_reports(reports, fmt, timing=args.timing), args.out)
    summary = summarize(reports, config.gate)
    print(json.dumps(summary.to_dict()), file=sys.stderr)
    return EXIT_OK if summary.ok else EXIT_GATE


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jackmoments", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jack", help="evaluate C_kappa at a list of eigenvalues")
    _table_args(p)
    p.add_argument("--kappa", required=True, help='partition such as "3,1"')
    p.add_argument("--x", help="comma-separated eigenvalues")
    p.add_argument("--exact", action="store_true", help="also print the exact monomial expansion")
    p.set_defaults(func=cmd_jack)

    p = sub.add_parser("table", help="dump exact Jack coefficient tables as JSON")
    _table_args(p)
    p.add_argument("--deg", type=int, default=6, help="maximum weight")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("hyper", help="truncated pFq of one matrix argument")
    p.add_argument("--type", default="0F1", help="0F1, 1F0, 1F1, 2F1, ... or pFq")
    p.add_argument("--a", help="comma-separated numerator parameters")
    p.add_argument("--b", help="comma-separated denominator parameters")
    p.add_argument("--x", help="comma-separated eigenvalues of the argument")
    p.add_argument("--matrix", help="JSON file with a Hermitian matrix argument")
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--deg", type=int, default=12)
    p.set_defaults(func=cmd_hyper)

    p = sub.add_parser("volume", help="volume of the Stiefel manifold V_{m,n}")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--log", action="store_true", help="print the log-volume")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("sample", help="draw Haar frames from V_{m,n}")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="Monte Carlo verification campaign")
    p.add_argument("--mode", choices=MODES, default="moment")
    p.add_argument("--beta", type=_ints, help="comma-separated betas (default 1,2,4)")
    p.add_argument("--m", type=_ints, help="comma-separated m values, paired with --n")
    p.add_argument("--n", type=_ints, help="comma-separated n values, paired with --m")
    p.add_argument("--k", type=_ints, help="moment orders k (odd powers in odd mode)")
    p.add_argument("--matrix", help="JSON matrix file used for every cell instead of random X")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=4.0)
    p.add_argument("--deg", type=int, default=12, help="series degree for bessel mode")
    p.add_argument("--chunk", type=int, default=2**16)
    p.add_argument("--gate", type=float, default=0.95)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("jsonl", "json", "csv"), default="jsonl")
    p.add_argument("--csv", action="store_true", help="shorthand for --format csv")
    p.add_argument("--timing", action="store_true", help="include runtime_ms (breaks byte-stability)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AlgebraError, PoleError, TableTooSmallError, TruncationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
