"""Batch command-line front end.

    mrapriori gen --transactions 1000 --items 50 --avg-len 8 --seed 1 --out db.txt
    mrapriori mine db.txt --min-sup-count 20 --strategy data-parallel --out result.txt
    mrapriori bench --transactions-list 1000,2000,4000 --min-sup-frac 0.05
    mrapriori compare-clusters --hetero hetero.txt --homo homo.txt --tasks 12

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .apriori_mr import (
    CANDIDATE_PARALLEL,
    DATA_PARALLEL,
    LevelTrace,
    SimulationSettings,
    apriori_mapreduce,
    naive_all_subsets_mine,
)
from .cluster import (
    DEFAULT_CAPACITY_PENALTY,
    ClusterConfig,
    TimingComparison,
    load_cluster_config,
    model_curve,
    simulate_stages,
)
from .datagen import GeneratorParams, generate_db
from .formats import format_results, read_db, write_db
from .itemsets import FrequentItemsets, SupportThreshold, TransactionDatabase, apriori_sequential

SEQUENTIAL = "sequential"
NAIVE = "naive"
MINE_STRATEGIES = (SEQUENTIAL, CANDIDATE_PARALLEL, DATA_PARALLEL, NAIVE)
BENCH_STRATEGIES = (CANDIDATE_PARALLEL, DATA_PARALLEL, NAIVE)

BENCH_HEADER = [
    "transactions", "strategy", "nodes", "virtual_makespan", "wall_ms", "level_count", "frequent_count",
]


def fmt_time(value) -> str:
    return format(float(value), ".6f")


@dataclass
class RunReport:
    parameters: dict
    trace: Optional[LevelTrace] = None
    result: Optional[FrequentItemsets] = None
    wall_ms: float = 0.0
    virtual_makespan: Optional[Fraction] = None
    output_path: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def render(self) -> str:
        lines = ["parameters: " + " ".join(f"{k}={v}" for k, v in self.parameters.items())]
        if self.trace is not None and self.trace.levels:
            lines.append("level candidates frequent map_tasks virtual_makespan")
            for lv in self.trace.levels:
                vm = "-" if lv.virtual_makespan is None else fmt_time(lv.virtual_makespan)
                lines.append(f"{lv.k} {lv.candidates} {lv.frequent} {lv.map_tasks} {vm}")
            lines.append(f"map tasks: {self.trace.total_tasks}")
        elif self.result is not None:
            lines.append("level frequent")
            for k, level in enumerate(self.result.levels, 1):
                lines.append(f"{k} {len(level)}")
        if self.result is not None:
            lines.append(f"frequent itemsets: {len(self.result)}")
        lines.append(f"wall time: {self.wall_ms:.3f} ms")
        if self.virtual_makespan is not None:
            lines.append(f"virtual makespan: {fmt_time(self.virtual_makespan)}")
        if self.output_path:
            lines.append(f"output: {self.output_path}")
        lines.extend(self.notes)
        return "\n".join(lines)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {value}")
    return value


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1]: {text}")
    return value


def _int_list(text: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"expected non-negative integers: {text!r}")
    return values


def _add_threshold_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--min-sup-count", type=_non_negative_int, help="absolute minimum support")
    group.add_argument("--min-sup-frac", type=_fraction, help="relative minimum support in (0, 1]")


def _add_execution_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--splits", type=_positive_int, default=4, help="input splits for data-parallel counting")
    p.add_argument("--parallelism", type=_positive_int, default=1, help="concurrent map tasks")
    p.add_argument("--capacity-penalty", type=_positive_int, default=DEFAULT_CAPACITY_PENALTY,
                   help="slowdown of nodes holding more data than their capacity")


def _threshold(args) -> SupportThreshold:
    if args.min_sup_count is not None:
        return SupportThreshold.absolute(args.min_sup_count)
    return SupportThreshold.relative(args.min_sup_frac)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrapriori", description="Map/reduce Apriori toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic transaction database")
    p.add_argument("--transactions", type=_non_negative_int, required=True)
    p.add_argument("--items", type=_positive_int, default=50)
    p.add_argument("--avg-len", type=_positive_int, default=8)
    p.add_argument("--seed", type=_non_negative_int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen, subparser=p)

    p = sub.add_parser("mine", help="mine frequent itemsets from a database file")
    p.add_argument("input")
    p.add_argument("--out", help="result file (default: stdout)")
    _add_threshold_flags(p)
    p.add_argument("--strategy", choices=MINE_STRATEGIES, default=DATA_PARALLEL)
    _add_execution_flags(p)
    p.add_argument("--cluster", help="cluster config file; enables virtual-time simulation")
    p.add_argument("--dump-dir", help="write per-level counts as level-<k>.txt here")
    p.set_defaults(func=cmd_mine, subparser=p)

    p = sub.add_parser("bench", help="sweep database sizes and emit a CSV timing table")
    p.add_argument("--transactions-list", type=_int_list, required=True)
    p.add_argument("--items", type=_int_list, default=[50],
                   help="item universe size, or a comma-separated sweep")
    p.add_argument("--avg-len", type=_positive_int, default=8)
    p.add_argument("--seed", type=_non_negative_int, default=1)
    _add_threshold_flags(p)
    p.add_argument("--strategy", choices=BENCH_STRATEGIES, default=DATA_PARALLEL)
    _add_execution_flags(p)
    where = p.add_mutually_exclusive_group()
    where.add_argument("--cluster", help="cluster config file")
    where.add_argument("--nodes", type=_positive_int, default=3, help="uniform cluster size (default 3)")
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_bench, subparser=p)

    p = sub.add_parser("compare-clusters", help="heterogeneous vs homogeneous makespan and eta")
    p.add_argument("--hetero", required=True, help="heterogeneous cluster config file")
    p.add_argument("--homo", required=True, help="homogeneous cluster config file")
    p.add_argument("--tasks", type=_non_negative_int, default=12, help="uniform workload: number of tasks")
    p.add_argument("--task-cost", type=_positive_int, default=1, help="uniform workload: cost per task")
    p.add_argument("--data-units", type=_non_negative_int,
                   help="stored data units, for the capacity penalty (default: none, or |db| with --db)")
    p.add_argument("--db", help="use the map tasks of mining this database as the workload")
    p.add_argument("--strategy", choices=(CANDIDATE_PARALLEL, DATA_PARALLEL), default=DATA_PARALLEL)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--min-sup-count", type=_non_negative_int)
    group.add_argument("--min-sup-frac", type=_fraction)
    p.add_argument("--splits", type=_positive_int, default=4)
    p.add_argument("--capacity-penalty", type=_positive_int, default=DEFAULT_CAPACITY_PENALTY)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_compare_clusters, subparser=p)
    return parser


class _Output:
    """Main output goes to a file or stdout; the human summary goes to
    stdout, or to stderr when stdout already carries the main output."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.summary = sys.stdout if path else sys.stderr

    def write(self, text: str) -> None:
        if self.path:
            with open(self.path, "w", encoding="ascii", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()


def mine(db: TransactionDatabase, threshold: SupportThreshold, strategy: str, splits: int = 4,
         parallelism: int = 1, simulation: Optional[SimulationSettings] = None, dump_dir=None):
    """Dispatch to the miner for ``strategy``; the trace is None for sequential."""
    if strategy == SEQUENTIAL:
        return apriori_sequential(db, threshold), None
    if strategy == NAIVE:
        return naive_all_subsets_mine(db, threshold, parallelism, simulation, dump_dir=dump_dir)
    return apriori_mapreduce(db, threshold, strategy, splits, parallelism, simulation, dump_dir)


def cmd_gen(args, parser) -> int:
    try:
        params = GeneratorParams(args.transactions, args.items, args.avg_len, args.seed)
    except ValueError as exc:
        parser.error(str(exc))
    db = generate_db(params)
    write_db(db, args.out)
    print(f"wrote {len(db)} transactions over {len(db.universe)} distinct items to {args.out}")
    return 0


def cmd_mine(args, parser) -> int:
    if args.cluster and args.strategy == SEQUENTIAL:
        parser.error("--cluster needs a map/reduce strategy, not 'sequential'")
    db = read_db(args.input)
    threshold = _threshold(args)
    simulation = None
    if args.cluster:
        cluster = load_cluster_config(args.cluster)
        simulation = SimulationSettings(cluster, cluster.data_per_node(len(db)), args.capacity_penalty)
    start = time.perf_counter()
    result, trace = mine(db, threshold, args.strategy, args.splits, args.parallelism, simulation, args.dump_dir)
    wall_ms = (time.perf_counter() - start) * 1000
    out = _Output(args.out)
    out.write(format_results(result))
    report = RunReport(
        parameters={
            "input": args.input,
            "transactions": len(db),
            "min_count": threshold.min_count(len(db)),
            "strategy": args.strategy,
            "splits": args.splits,
            "parallelism": args.parallelism,
        },
        trace=trace,
        result=result,
        wall_ms=wall_ms,
        virtual_makespan=trace.virtual_makespan if trace is not None else None,
        output_path=args.out,
    )
    print(report.render(), file=out.summary)
    return 0


def cmd_bench(args, parser) -> int:
    threshold = _threshold(args)
    cluster = load_cluster_config(args.cluster) if args.cluster else ClusterConfig.uniform(args.nodes)
    rows = []
    for num_items in args.items:
        if num_items < 1 or args.avg_len > num_items:
            parser.error(f"--avg-len {args.avg_len} does not fit {num_items} items")
        for n in args.transactions_list:
            db = generate_db(GeneratorParams(n, num_items, args.avg_len, args.seed))
            simulation = SimulationSettings(cluster, cluster.data_per_node(n), args.capacity_penalty)
            start = time.perf_counter()
            result, trace = mine(db, threshold, args.strategy, args.splits, args.parallelism, simulation)
            wall_ms = (time.perf_counter() - start) * 1000
            rows.append([
                n, args.strategy, cluster.N, fmt_time(trace.virtual_makespan),
                f"{wall_ms:.3f}", len(result.levels), len(result),
            ])
            print(
                f"transactions={n} items={num_items} universe={len(db.universe)} "
                f"map_tasks={trace.total_tasks} candidates={trace.total_candidates} "
                f"frequent={len(result)} virtual_makespan={fmt_time(trace.virtual_makespan)}",
                file=sys.stderr,
            )
    out = _Output(args.out)
    out.write(_csv_text(BENCH_HEADER, rows))
    return 0


def _csv_text(header, rows) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_compare_clusters(args, parser) -> int:
    hetero = load_cluster_config(args.hetero)
    homo = load_cluster_config(args.homo)
    if args.db:
        if args.min_sup_count is None and args.min_sup_frac is None:
            parser.error("--db needs --min-sup-count or --min-sup-frac")
        db = read_db(args.db)
        _, trace = apriori_mapreduce(db, _threshold(args), args.strategy, args.splits)
        stages = [lv.task_costs for lv in trace.levels]
        units = len(db) if args.data_units is None else args.data_units
    else:
        stages = [[args.task_cost] * args.tasks]
        units = args.data_units

    def run(cluster: ClusterConfig) -> Fraction:
        per_node = None if units is None else cluster.data_per_node(units)
        return simulate_stages(stages, cluster, per_node, args.capacity_penalty)

    comparison = TimingComparison(run(hetero), run(homo))
    rows = [
        ["fhdsc", hetero.N, fmt_time(hetero.total_speed), fmt_time(comparison.fhdsc_makespan)],
        ["fhssc", homo.N, fmt_time(homo.total_speed), fmt_time(comparison.fhssc_makespan)],
    ]
    out = _Output(args.out)
    out.write(_csv_text(["cluster", "nodes", "total_speed", "makespan"], rows))
    print(f"eta = {float(comparison.eta):.6f}", file=out.summary)
    for n in sorted({hetero.N, homo.N}):
        print(f"model_curve(N={n}) = ln {n} = {model_curve(n):.4f}", file=out.summary)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args, args.subparser)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (OSError, UnicodeDecodeError, ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"mrapriori: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
