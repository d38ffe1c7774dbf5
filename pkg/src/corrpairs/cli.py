"""Command-line entry point: ``corrpairs {gen,mine,bench,verify,convert}``.

Exit codes: 0 success, 1 verification or mining mismatch, 2 usage or
environment error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from concurrent.futures import ThreadPoolExecutor

from . import bench, datagen, miners, txdb

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _theta(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"theta must lie in (0, 1], got {value}")
    return value


def _theta_list(text: str) -> list[float]:
    return [_theta(t) for t in text.split(",") if t.strip()]


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        try:
            fh = open(path, "w", encoding="utf-8", newline="")
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc}") from exc
        with fh:
            yield fh


def _load(source: str, seed: int) -> txdb.TransactionDatabase:
    try:
        return bench.resolve_dataset(source, seed)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_gen(args) -> int:
    if args.preset:
        params = datagen.preset(args.preset, seed=args.seed)
    elif args.transactions is not None and args.items is not None and args.avg_size is not None:
        params = datagen.GenParams(args.transactions, args.items, args.avg_size, seed=args.seed)
    else:
        raise UsageError("give --preset or all of --transactions/--items/--avg-size")
    overrides = {
        "n_patterns": args.patterns,
        "avg_pattern_len": args.pattern_len,
        "corruption": args.corruption,
    }
    params = datagen.GenParams(**{**params.__dict__, **{k: v for k, v in overrides.items() if v is not None}})
    db = datagen.generate(params)
    try:
        txdb.save_basket_file(db, args.output)
        datagen.write_meta(params, args.output + ".meta")
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}") from exc
    return EXIT_OK


def cmd_mine(args) -> int:
    db = _load(args.dataset, args.seed)
    report = miners.mine(db, miners.MiningQuery(args.theta, args.algo))
    with _output(args.output) as out:
        bench.write_results_csv(report, db.item_names, out)
    print(bench.stats_line(report), file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    plan = bench.BenchPlan(
        datasets=args.dataset or bench.DESK_PRESETS,
        thetas=args.thetas,
        algorithms=args.algo,
        repeats=args.repeats,
        seed=args.seed,
    )
    rows = bench.run_bench(plan)
    with _output(args.output) as out:
        bench.write_bench_csv(rows, out)
    bad = [r for r in rows if r.status != "ok"]
    for r in bad:
        print(f"{r.dataset} {r.algorithm} theta={r.theta}: {r.status}", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_verify(args) -> int:
    db = _load(args.dataset, args.seed)
    cap = miners.brute_max_items()
    if db.n_items > cap:
        print(f"oracle unavailable: {db.n_items} items exceed the brute-force cap of {cap} "
              f"(set {miners.BRUTE_MAX_ITEMS_ENV} to raise it)", file=sys.stderr)
        return EXIT_USAGE

    def check(theta):
        return theta, miners.verify_equivalence(db, theta)

    if args.parallel:
        with ThreadPoolExecutor() as pool:
            outcomes = list(pool.map(check, args.thetas))
    else:
        outcomes = [check(t) for t in args.thetas]

    failed = False
    for theta, eq in outcomes:
        print(f"theta={theta}: {'ok' if eq.ok else 'MISMATCH'}")
        for line in eq.diff:
            print("  " + line)
        failed |= not eq.ok
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_convert(args) -> int:
    schema = txdb.CategoricalSchema(
        delimiter=args.delimiter,
        skip_header=args.skip_header,
        missing=args.missing,
        itemize_missing=args.itemize_missing,
        columns=[int(c) for c in _csv_list(args.columns)] if args.columns else None,
    )
    try:
        db = txdb.convert_categorical(args.input, schema)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    try:
        txdb.save_basket_file(db, args.output)
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}") from exc
    print(f"transactions={len(db)} items={db.n_items}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="corrpairs", description="Mine strongly phi-correlated item pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic basket file")
    p.add_argument("--preset", help="dataset name such as T10I400D100K")
    p.add_argument("--transactions", type=int)
    p.add_argument("--items", type=int)
    p.add_argument("--avg-size", type=float)
    p.add_argument("--patterns", type=int)
    p.add_argument("--pattern-len", type=float)
    p.add_argument("--corruption", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mine", help="mine pairs with phi >= theta")
    p.add_argument("dataset", help="basket file or preset name")
    p.add_argument("--theta", type=_theta, required=True)
    p.add_argument("--algo", choices=miners.ALGORITHMS, default="tcp")
    p.add_argument("--seed", type=int, default=1, help="seed when DATASET is a preset")
    p.add_argument("-o", "--output", help="result CSV (default stdout)")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("bench", help="sweep theta over datasets and miners")
    p.add_argument("--dataset", action="append", help="basket file or preset name (repeatable)")
    p.add_argument("--thetas", type=_theta_list, default=list(bench.DEFAULT_THETAS))
    p.add_argument("--algo", type=_csv_list, default=["tcp", "taper"])
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("-o", "--output", help="bench CSV (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check tcp, taper and brute force agree")
    p.add_argument("dataset")
    p.add_argument("--thetas", type=_theta_list, default=list(bench.DEFAULT_THETAS))
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--parallel", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="categorical table to basket file")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--skip-header", action="store_true")
    p.add_argument("--missing", default="?")
    p.add_argument("--itemize-missing", action="store_true")
    p.add_argument("--columns", help="comma-separated column indices to keep")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, txdb.FormatError) as exc:
        print(f"corrpairs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
