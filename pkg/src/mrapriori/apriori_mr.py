"""Apriori as map/reduce jobs.

Two counting strategies share one driver:

``candidate-parallel``
    One map task per candidate itemset. The task's record is the candidate;
    the mapper scans the whole database and emits ``(candidate, count)``.
    Virtual cost per task: ``len(db)`` record scans.

``data-parallel`` (count distribution)
    One map task per input split of the database. Each task emits local
    counts for the candidates it sees; the reducer sums them.
    Virtual cost per task: ``len(split) * len(candidates)`` comparisons.

Support filtering happens in the driver after the reduce, so the reducer is a
plain sum for both strategies.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .cluster import ClusterConfig, simulate_makespan, DEFAULT_CAPACITY_PENALTY
from .engine import JobResult, JobSpec, partition_input, run_job, sum_reducer
from .itemsets import (
    DEFAULT_ENUMERATION_CAP,
    FrequentItemsets,
    Itemset,
    SupportCountTable,
    SupportThreshold,
    CandidateMatcher,
    TransactionDatabase,
    enumerate_all_subsets,
    generate_candidates,
    itemset_order,
)

CANDIDATE_PARALLEL = "candidate-parallel"
DATA_PARALLEL = "data-parallel"
STRATEGIES = (CANDIDATE_PARALLEL, DATA_PARALLEL)


@dataclass
class LevelStats:
    k: int
    candidates: int
    frequent: int
    task_costs: Tuple[int, ...]
    virtual_makespan: Optional[Fraction] = None

    @property
    def map_tasks(self) -> int:
        return len(self.task_costs)


@dataclass
class LevelTrace:
    """Per-level job statistics of one mining run.

    ``virtual_makespan`` is None unless a cluster was given.
    """

    levels: List[LevelStats] = field(default_factory=list)
    virtual_makespan: Optional[Fraction] = None

    @property
    def total_tasks(self) -> int:
        return sum(lv.map_tasks for lv in self.levels)

    @property
    def total_candidates(self) -> int:
        return sum(lv.candidates for lv in self.levels)

    def __len__(self) -> int:
        return len(self.levels)


@dataclass
class SimulationSettings:
    """Cluster to replay task costs on, plus the storage knob for the capacity penalty."""

    cluster: ClusterConfig
    data_per_node: Optional[int] = None
    penalty: int = DEFAULT_CAPACITY_PENALTY

    def makespan(self, costs: Sequence[int]) -> Fraction:
        return simulate_makespan(costs, self.cluster, self.data_per_node, self.penalty)


def _check_strategy(strategy: str) -> None:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def candidate_parallel_job(db: TransactionDatabase, candidates: Sequence[Itemset]) -> JobSpec:
    txs = [frozenset(t) for t in db.transactions]

    def mapper(candidate):
        wanted = frozenset(candidate)
        yield candidate, sum(1 for t in txs if wanted <= t)

    n = len(db)
    return JobSpec(
        mapper=mapper,
        reducer=sum_reducer,
        splits=partition_input(candidates, len(candidates)),
        cost_model=lambda split: n * len(split.records),
        name=f"cp-k{len(candidates[0])}",
    )


def data_parallel_job(db: TransactionDatabase, candidates: Sequence[Itemset], splits: int) -> JobSpec:
    matcher = CandidateMatcher(candidates)
    ncand = len(candidates)

    def mapper(transaction):
        return [(c, 1) for c in matcher.matches(transaction)]

    return JobSpec(
        mapper=mapper,
        reducer=sum_reducer,
        combiner=sum_reducer,
        splits=partition_input(db.transactions, splits),
        cost_model=lambda split: len(split.records) * ncand,
        name=f"dp-k{len(candidates[0])}",
    )


def count_candidates_mr(
    db: TransactionDatabase,
    candidates: Iterable[Itemset],
    strategy: str = DATA_PARALLEL,
    splits: int = 1,
    parallelism: int = 1,
) -> Tuple[SupportCountTable, JobResult]:
    """Exact global support of every candidate, counted by one map/reduce job.

    Returns the count table (canonical order, zero counts included) and the
    raw job result with its per-task costs.
    """
    _check_strategy(strategy)
    cands = sorted(set(candidates), key=itemset_order)
    if not cands:
        raise ValueError("empty candidate set")
    if any(not c or len(c) != len(cands[0]) for c in cands):
        raise ValueError("candidates must be non-empty and of uniform size")
    if strategy == CANDIDATE_PARALLEL:
        spec = candidate_parallel_job(db, cands)
    else:
        spec = data_parallel_job(db, cands, splits)
    result = run_job(spec, parallelism)
    counts = {c: result.outputs.get(c, 0) for c in cands}
    return counts, result


def _dump_level(dump_dir, k: int, counts: SupportCountTable) -> None:
    from .formats import format_results

    os.makedirs(dump_dir, exist_ok=True)
    with open(os.path.join(dump_dir, f"level-{k}.txt"), "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_results(counts))


def apriori_mapreduce(
    db: TransactionDatabase,
    threshold: SupportThreshold,
    strategy: str = DATA_PARALLEL,
    splits: int = 1,
    parallelism: int = 1,
    simulation: Optional[SimulationSettings] = None,
    dump_dir=None,
) -> Tuple[FrequentItemsets, LevelTrace]:
    """Level-wise Apriori with one counting job per level.

    Level 1 counts every item of the universe as a singleton candidate. With
    ``simulation`` set, each level's task costs are scheduled on the cluster
    and the level makespans add up (levels are barriers). ``dump_dir``
    receives the reduced counts of each level as ``level-<k>.txt``.
    """
    _check_strategy(strategy)
    minsup = threshold.min_count(len(db))
    trace = LevelTrace()
    levels = []
    candidates = [(i,) for i in db.universe]
    k = 1
    while candidates:
        counts, result = count_candidates_mr(db, candidates, strategy, splits, parallelism)
        if dump_dir is not None:
            _dump_level(dump_dir, k, counts)
        frequent = {c: n for c, n in counts.items() if n >= minsup}
        costs = tuple(result.makespan_inputs)
        trace.levels.append(LevelStats(
            k=k,
            candidates=len(counts),
            frequent=len(frequent),
            task_costs=costs,
            virtual_makespan=simulation.makespan(costs) if simulation else None,
        ))
        if not frequent:
            break
        levels.append(frequent)
        candidates = generate_candidates(frequent)
        k += 1
    if simulation is not None:
        trace.virtual_makespan = sum((lv.virtual_makespan for lv in trace.levels), Fraction(0))
    return FrequentItemsets(levels), trace


def naive_all_subsets_mine(
    db: TransactionDatabase,
    threshold: SupportThreshold,
    parallelism: int = 1,
    simulation: Optional[SimulationSettings] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
    dump_dir=None,
) -> Tuple[FrequentItemsets, LevelTrace]:
    """Count every non-empty subset of the universe in one candidate-parallel job.

    The job has ``2**m - 1`` map tasks for an ``m``-item universe. The trace
    groups them by subset size; its ``virtual_makespan`` schedules the whole
    job as a single batch, so per-level makespans stay None.
    """
    minsup = threshold.min_count(len(db))
    subsets = enumerate_all_subsets(db.universe, cap)
    trace = LevelTrace()
    if not subsets:
        if simulation is not None:
            trace.virtual_makespan = Fraction(0)
        return FrequentItemsets(), trace

    txs = [frozenset(t) for t in db.transactions]

    def mapper(candidate):
        wanted = frozenset(candidate)
        yield candidate, sum(1 for t in txs if wanted <= t)

    n = len(db)
    spec = JobSpec(
        mapper=mapper,
        reducer=sum_reducer,
        splits=partition_input(subsets, len(subsets)),
        cost_model=lambda split: n * len(split.records),
        name="naive",
    )
    result = run_job(spec, parallelism)
    frequent = {s: c for s, c in result.outputs.items() if c >= minsup}

    by_size = Counter(len(s) for s in subsets)
    freq_by_size = Counter(len(s) for s in frequent)
    costs = result.makespan_inputs
    start = 0
    for k in sorted(by_size):
        trace.levels.append(LevelStats(
            k=k,
            candidates=by_size[k],
            frequent=freq_by_size[k],
            task_costs=tuple(costs[start:start + by_size[k]]),
        ))
        start += by_size[k]
    if dump_dir is not None:
        for k in sorted(by_size):
            _dump_level(dump_dir, k, {s: c for s, c in result.outputs.items() if len(s) == k})
    if simulation is not None:
        trace.virtual_makespan = simulation.makespan(costs)
    return FrequentItemsets.from_counts(frequent), trace
