"""A small in-process map -> shuffle -> reduce engine.

Map tasks (one per input split) run on a thread pool; their outputs are
collected by task index, shuffled into key order and reduced by a single
logical reducer. Results never depend on the split count, the pool size or
the order in which tasks finish.

Each map task also gets a virtual cost from the job's cost model. Those costs
are what :mod:`mrapriori.cluster` schedules; reduce work is not costed.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

log = logging.getLogger(__name__)

KeyValue = Tuple[Hashable, int]
Mapper = Callable[[Any], Iterable[KeyValue]]
Reducer = Callable[[Hashable, List[int]], int]


class JobError(RuntimeError):
    """A mapper, combiner or reducer raised; ``task_id`` names the failing task."""

    def __init__(self, task_id: str, cause: BaseException):
        super().__init__(f"task {task_id} failed: {cause!r}")
        self.task_id = task_id


@dataclass(frozen=True)
class InputSplit:
    index: int
    records: Tuple[Any, ...]

    def __len__(self) -> int:
        return len(self.records)


def key_order(key):
    """Canonical key comparison: tuples by (size, lexicographic), others natively."""
    if isinstance(key, tuple):
        return (len(key), key)
    return key


def records_scanned(split: InputSplit) -> int:
    return len(split.records)


def sum_reducer(key, values: List[int]) -> int:
    return sum(values)


@dataclass
class JobSpec:
    """A map/reduce job.

    ``mapper`` turns one record into key/value pairs and ``reducer`` folds the
    sorted values of one key into a single value. The optional ``combiner``
    has the reducer's signature and is applied to each task's local output
    before the shuffle. Both must be pure.
    """

    mapper: Mapper
    reducer: Reducer
    splits: Sequence[InputSplit]
    cost_model: Callable[[InputSplit], int] = records_scanned
    combiner: Optional[Reducer] = None
    name: str = "job"


@dataclass
class JobResult:
    outputs: Dict[Hashable, int]
    task_costs: List[Tuple[str, int]] = field(default_factory=list)

    @property
    def makespan_inputs(self) -> List[int]:
        return [cost for _, cost in self.task_costs]

    @property
    def num_map_tasks(self) -> int:
        return len(self.task_costs)


def partition_input(records: Sequence[Any], num_splits: int) -> List[InputSplit]:
    """Cut ``records`` into ``num_splits`` contiguous chunks.

    Chunk sizes differ by at most one; the first ``len(records) % num_splits``
    chunks get the extra record.
    """
    if num_splits < 1:
        raise ValueError(f"num_splits must be >= 1, got {num_splits}")
    records = tuple(records)
    base, extra = divmod(len(records), num_splits)
    splits = []
    start = 0
    for idx in range(num_splits):
        size = base + (1 if idx < extra else 0)
        splits.append(InputSplit(idx, records[start:start + size]))
        start += size
    return splits


def shuffle(map_outputs: Iterable[KeyValue]) -> List[Tuple[Hashable, List[int]]]:
    """Group values by key; keys in canonical order, values ascending."""
    groups = defaultdict(list)
    for key, value in map_outputs:
        groups[key].append(value)
    return [(key, sorted(groups[key])) for key in sorted(groups, key=key_order)]


def _run_map_task(spec: JobSpec, split: InputSplit) -> List[KeyValue]:
    task_id = f"{spec.name}/map-{split.index}"
    try:
        out = []
        for record in split.records:
            out.extend(spec.mapper(record))
        if spec.combiner is not None:
            out = [(key, spec.combiner(key, values)) for key, values in shuffle(out)]
        return out
    except Exception as exc:
        raise JobError(task_id, exc) from exc


def run_job(spec: JobSpec, parallelism: int = 1) -> JobResult:
    """Execute ``spec`` with up to ``parallelism`` concurrent map tasks."""
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    splits = list(spec.splits)
    if parallelism == 1 or len(splits) <= 1:
        per_task = [_run_map_task(spec, s) for s in splits]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            per_task = list(pool.map(lambda s: _run_map_task(spec, s), splits))

    outputs = {}
    for key, values in shuffle(kv for task_out in per_task for kv in task_out):
        try:
            outputs[key] = spec.reducer(key, values)
        except Exception as exc:
            raise JobError(f"{spec.name}/reduce", exc) from exc

    task_costs = [(f"{spec.name}/map-{s.index}", spec.cost_model(s)) for s in splits]
    log.debug("%s: %d map tasks, %d keys", spec.name, len(splits), len(outputs))
    return JobResult(outputs, task_costs)
