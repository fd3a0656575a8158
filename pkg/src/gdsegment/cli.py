"""Command-line front end.

Subcommands cover the full loop: generate datasets, sweep deviation sizes,
benchmark encoders, select a configuration by preset or usage-derived
weights, advise on re-encoding, inspect segment internals, and export
cached measurements as CSV.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import baselines, datagen, profiler, selector
from .gdseg import GD_VARIANTS, gd_encode

CACHE_DIR_ENV = "GDSEGMENT_CACHE_DIR"
DEFAULT_CACHE_DIR = ".gdsegment_cache"


class CliError(Exception):
    """User-facing failure with a clean message and nonzero exit."""


def _cache_dir(args) -> Path:
    if args.cache_dir:
        return Path(args.cache_dir)
    return Path(os.environ.get(CACHE_DIR_ENV, DEFAULT_CACHE_DIR))


def _read_dataset(path: str):
    try:
        return datagen.read_values(path)
    except FileNotFoundError as exc:
        raise CliError(f"cannot read dataset: {exc}") from exc
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _workload(args) -> profiler.WorkloadSpec:
    kwargs = {}
    if getattr(args, "queries", None) is not None:
        kwargs["query_count"] = args.queries
    if getattr(args, "rand_offsets", None) is not None:
        kwargs["rand_count"] = args.rand_offsets
    if getattr(args, "reps", None) is not None:
        kwargs["reps"] = args.reps
    return profiler.WorkloadSpec(**kwargs)


def _cache_path(cache_dir: Path, variant: int, digest: str) -> Path:
    return cache_dir / f"gd{variant}_{digest.split(':', 1)[1][:16]}.json"


def _sweep_table(args, *, allow_measure: bool) -> profiler.DiagnosticsTable:
    values = _read_dataset(args.dataset)
    digest = profiler.content_hash(values, args.variant)
    path = _cache_path(_cache_dir(args), args.variant, digest)
    if not args.measure:
        try:
            return profiler.cache_load(path, expected_hash=digest)
        except profiler.CacheMissingError:
            if not allow_measure:
                raise CliError(
                    f"no cached sweep for {args.dataset} (variant {args.variant}); "
                    "run the sweep command first or pass --measure"
                )
        except profiler.CacheError as exc:
            raise CliError(str(exc)) from exc
    table = profiler.sweep(
        values,
        args.variant,
        workload=_workload(args),
        seed=args.seed,
        dataset_id=Path(args.dataset).stem,
    )
    profiler.cache_store(table, path, digest, args.variant)
    return table


def cmd_gen(args) -> int:
    spec = datagen.DatasetSpec(
        kind=datagen.DatasetKind(args.kind), length=args.len, seed=args.seed
    )
    try:
        values = datagen.generate(spec)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    datagen.write_values(args.out, values)
    print(f"wrote {values.size} values to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    table = _sweep_table(args, allow_measure=True)
    print(f"dataset={table.dataset_id} variant={args.variant} rows={len(table.rows)}")
    for row in table.rows:
        print(
            f"  n={row.dev_size:<2} gain={row.gain_pct:7.2f}% "
            f"seq={row.seq_ns:9.1f}ns rand={row.rand_ns:9.1f}ns scan={row.scan_us:9.2f}us"
        )
    return 0


def cmd_bench(args) -> int:
    values = _read_dataset(args.dataset)
    dataset_id = Path(args.dataset).stem
    workload = _workload(args)
    table = profiler.measure_baselines(values, workload, seed=args.seed, dataset_id=dataset_id)
    for variant in sorted(GD_VARIANTS):
        seg = gd_encode(variant, values, args.dev_size)
        table.rows.append(
            profiler.measure(
                seg, workload, seed=args.seed,
                config_id=f"gd{variant}:n={args.dev_size}", values=values,
            )
        )
    _emit_csv(profiler.table_to_csv_rows(table), args.out)
    return 0


def cmd_select(args) -> int:
    table = _sweep_table(args, allow_measure=args.measure)
    if args.weights_file:
        try:
            weights = selector.load_weights_file(args.weights_file)
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(f"cannot load weights file: {exc}") from exc
    else:
        weights = selector.Preset(args.preset).weights
    best = selector.select_best(table, weights)
    dev = f" n={best.dev_size}" if best.dev_size is not None else ""
    print(f"best: {best.config_id}{dev} gain={best.gain_pct:.2f}%")
    return 0


def cmd_advise(args) -> int:
    table = _sweep_table(args, allow_measure=args.measure)
    try:
        stats = selector.UsageStats.from_dict(json.loads(Path(args.usage_file).read_text()))
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot load usage stats: {exc}") from exc
    try:
        current = table.row(args.current)
    except KeyError as exc:
        raise CliError(str(exc)) from exc
    decision = selector.advise(
        current, table, stats, threshold=args.threshold, compression_floor=args.floor
    )
    print(json.dumps(decision.__dict__, indent=1))
    return 0


def cmd_inspect(args) -> int:
    values = _read_dataset(args.dataset)
    if args.encoder.startswith("gd"):
        if args.dev_size is None:
            raise CliError("gd encoders need --dev-size")
        seg = profiler.encode_config(f"{args.encoder}:n={args.dev_size}", values)
    else:
        seg = profiler.encode_config(args.encoder, values)
    print(f"encoder={args.encoder} length={len(seg)} bytes={seg.size_bytes()}")
    if hasattr(seg, "describe"):
        for row in seg.describe():
            first_last = ""
            if "first" in row:
                first_last = f" first={row['first']} last={row['last']}"
            print(
                f"  {row['list']:<18} width={row['width_bits']:>2}b "
                f"len={row['length']:>7} bytes={row['payload_bytes']:>8}{first_last}"
            )
    return 0


def cmd_report(args) -> int:
    cache_dir = _cache_dir(args)
    if not cache_dir.is_dir():
        raise CliError(f"cache directory {cache_dir} does not exist")
    rows = []
    for path in sorted(cache_dir.glob("*.json")):
        try:
            table = profiler.cache_load(path)
        except profiler.CacheError as exc:
            raise CliError(str(exc)) from exc
        rows.extend(profiler.table_to_csv_rows(table))
    if not rows:
        raise CliError(f"no cached metrics in {cache_dir}")
    _emit_csv(rows, args.out)
    return 0


def _emit_csv(rows: list[dict], out: str | None) -> None:
    target = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.DictWriter(target, fieldnames=profiler.CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out:
            target.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdsegment", description="Integer segment compression toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_workload_flags(p):
        p.add_argument("--queries", type=int, help="scan query values per measurement")
        p.add_argument("--rand-offsets", type=int, help="random offsets per measurement")
        p.add_argument("--reps", type=int, help="timing repetitions per metric")
        p.add_argument("--seed", type=int, default=0)

    def add_cache_flags(p):
        p.add_argument("--cache-dir", help=f"metrics cache directory (or ${CACHE_DIR_ENV})")
        p.add_argument("--measure", action="store_true", help="force re-measuring")

    p = sub.add_parser("gen", help="generate a synthetic dataset file")
    p.add_argument("--kind", required=True, choices=[k.value for k in datagen.DatasetKind])
    p.add_argument("--len", type=int, default=datagen.DEFAULT_LENGTH)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sweep", help="measure one GD variant at every deviation size")
    p.add_argument("--dataset", required=True)
    p.add_argument("--variant", type=int, default=1, choices=sorted(GD_VARIANTS))
    add_cache_flags(p)
    add_workload_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="measure the reference encoders plus GD variants")
    p.add_argument("--dataset", required=True)
    p.add_argument("--dev-size", type=int, default=8)
    p.add_argument("--out", help="CSV output path (default stdout)")
    add_workload_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("select", help="pick the best configuration from a cached sweep")
    p.add_argument("--dataset", required=True)
    p.add_argument("--variant", type=int, default=1, choices=sorted(GD_VARIANTS))
    p.add_argument("--preset", default="mc", choices=[pr.value for pr in selector.Preset])
    p.add_argument("--weights-file", help="JSON weight config overriding --preset")
    add_cache_flags(p)
    add_workload_flags(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("advise", help="judge whether re-encoding is worth it")
    p.add_argument("--dataset", required=True)
    p.add_argument("--variant", type=int, default=1, choices=sorted(GD_VARIANTS))
    p.add_argument("--usage-file", required=True, help="JSON usage counters")
    p.add_argument("--current", required=True, help="config id of the current encoding")
    p.add_argument("--threshold", type=float, default=selector.DEFAULT_REENCODE_THRESHOLD)
    p.add_argument("--floor", type=float, default=selector.DEFAULT_COMPRESSION_FLOOR)
    add_cache_flags(p)
    add_workload_flags(p)
    p.set_defaults(func=cmd_advise)

    p = sub.add_parser("inspect", help="dump the internal lists of one encoding")
    p.add_argument("--dataset", required=True)
    p.add_argument(
        "--encoder", required=True,
        choices=[f"gd{v}" for v in sorted(GD_VARIANTS)] + list(profiler.BASELINE_ENCODERS),
    )
    p.add_argument("--dev-size", type=int)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("report", help="export cached measurements as CSV")
    p.add_argument("--cache-dir", help=f"metrics cache directory (or ${CACHE_DIR_ENV})")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
