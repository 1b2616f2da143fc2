"""Virtual-time cluster simulation.

Map-task costs are scheduled onto simulated nodes with longest-processing-time
list scheduling. All times are exact :class:`~fractions.Fraction` values, so
comparisons between simulated makespans carry no rounding error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

Number = Union[int, float, str, Fraction]

DEFAULT_CAPACITY_PENALTY = 4


class ConfigError(ValueError):
    """Malformed cluster configuration file."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UndefinedRatioError(ZeroDivisionError):
    pass


def as_fraction(value: Number) -> Fraction:
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class NodeProfile:
    """One simulated node. ``speed`` is cost units per virtual time unit;
    ``capacity`` is in storage units, with 0 meaning unlimited."""

    name: str
    speed: Fraction
    capacity: int = 0

    def __post_init__(self):
        object.__setattr__(self, "speed", as_fraction(self.speed))
        if self.speed <= 0:
            raise ValueError(f"node {self.name!r}: speed must be positive, got {self.speed}")
        if self.capacity < 0:
            raise ValueError(f"node {self.name!r}: capacity must be non-negative")


@dataclass(frozen=True)
class ClusterConfig:
    nodes: Tuple[NodeProfile, ...]
    replication_factor: int = 1

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not self.nodes:
            raise ValueError("cluster needs at least one node")
        if not 1 <= self.replication_factor <= len(self.nodes):
            raise ValueError(
                f"replication factor {self.replication_factor} not in [1, {len(self.nodes)}]"
            )

    @property
    def N(self) -> int:
        return len(self.nodes)

    @property
    def total_speed(self) -> Fraction:
        return sum((n.speed for n in self.nodes), Fraction(0))

    @classmethod
    def uniform(cls, n: int, speed: Number = 1, capacity: int = 0, replication_factor: Optional[int] = None):
        """``n`` identical nodes; replication defaults to min(3, n)."""
        if replication_factor is None:
            replication_factor = min(3, n)
        nodes = [NodeProfile(f"node{i}", speed, capacity) for i in range(n)]
        return cls(tuple(nodes), replication_factor)

    @classmethod
    def from_speeds(cls, speeds: Sequence[Number], capacity: int = 0, replication_factor: int = 1):
        nodes = [NodeProfile(f"node{i}", s, capacity) for i, s in enumerate(speeds)]
        return cls(tuple(nodes), replication_factor)

    def data_per_node(self, total_units: int) -> int:
        """Storage units each node holds when ``total_units`` are spread evenly
        and every unit is stored ``replication_factor`` times."""
        return -(-total_units * self.replication_factor // self.N)


@dataclass(frozen=True)
class TimingComparison:
    fhdsc_makespan: Fraction
    fhssc_makespan: Fraction
    eta: Fraction = field(init=False)

    def __post_init__(self):
        if self.fhssc_makespan == 0:
            if self.fhdsc_makespan != 0:
                raise UndefinedRatioError("homogeneous makespan is 0 but heterogeneous is not")
            eta = Fraction(1)
        else:
            eta = Fraction(self.fhdsc_makespan) / Fraction(self.fhssc_makespan)
        object.__setattr__(self, "eta", eta)


def effective_speeds(
    cluster: ClusterConfig,
    data_per_node: Optional[int] = None,
    penalty: Number = DEFAULT_CAPACITY_PENALTY,
) -> List[Fraction]:
    penalty = as_fraction(penalty)
    if penalty < 1:
        raise ValueError("capacity penalty must be >= 1")
    speeds = []
    for node in cluster.nodes:
        over = data_per_node is not None and node.capacity and data_per_node > node.capacity
        speeds.append(node.speed / penalty if over else node.speed)
    return speeds


def schedule(
    task_costs: Sequence[Number],
    cluster: ClusterConfig,
    data_per_node: Optional[int] = None,
    penalty: Number = DEFAULT_CAPACITY_PENALTY,
) -> Tuple[Fraction, List[int]]:
    """LPT list scheduling. Returns the makespan and each task's node index.

    Tasks go longest first (ties by original index) to the node that would
    complete them earliest (ties by lowest node index).
    """
    costs = [as_fraction(c) for c in task_costs]
    if any(c < 0 for c in costs):
        raise ValueError("task costs must be non-negative")
    speeds = effective_speeds(cluster, data_per_node, penalty)
    avail = [Fraction(0)] * len(speeds)
    placement = [0] * len(costs)
    for idx in sorted(range(len(costs)), key=lambda i: (-costs[i], i)):
        cost = costs[idx]
        best = min(range(len(speeds)), key=lambda n: (avail[n] + cost / speeds[n], n))
        avail[best] += cost / speeds[best]
        placement[idx] = best
    return max(avail), placement


def simulate_makespan(
    task_costs: Sequence[Number],
    cluster: ClusterConfig,
    data_per_node: Optional[int] = None,
    penalty: Number = DEFAULT_CAPACITY_PENALTY,
) -> Fraction:
    """Virtual makespan of ``task_costs`` on ``cluster``.

    Nodes whose nonzero capacity is below ``data_per_node`` run ``penalty``
    times slower. An empty workload has makespan 0.
    """
    return schedule(task_costs, cluster, data_per_node, penalty)[0]


def simulate_stages(
    stages: Sequence[Sequence[Number]],
    cluster: ClusterConfig,
    data_per_node: Optional[int] = None,
    penalty: Number = DEFAULT_CAPACITY_PENALTY,
) -> Fraction:
    """Makespan of barrier-separated stages run one after another."""
    return sum(
        (simulate_makespan(s, cluster, data_per_node, penalty) for s in stages), Fraction(0)
    )


def compare_clusters(
    task_costs: Sequence[Number],
    hetero: ClusterConfig,
    homo: ClusterConfig,
    data_per_node: Optional[int] = None,
    penalty: Number = DEFAULT_CAPACITY_PENALTY,
) -> TimingComparison:
    """Run the same workload on both clusters; ``eta`` is hetero/homo."""
    return TimingComparison(
        simulate_makespan(task_costs, hetero, data_per_node, penalty),
        simulate_makespan(task_costs, homo, data_per_node, penalty),
    )


def model_curve(n: int) -> float:
    """Reference curve ln(N) for an N-node cluster."""
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    return math.log(n)


def parse_cluster_config(text: str) -> ClusterConfig:
    """Parse the plain-text cluster format.

    One ``replication <r>`` line (optional, default 1) and one
    ``name speed capacity`` line per node. ``#`` starts a comment line.
    """
    nodes = []
    replication = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "replication":
            if len(parts) != 2 or replication is not None:
                raise ConfigError("expected a single 'replication <r>' line", lineno)
            try:
                replication = int(parts[1])
            except ValueError:
                raise ConfigError(f"bad replication factor {parts[1]!r}", lineno) from None
            continue
        if len(parts) != 3:
            raise ConfigError(f"expected 'name speed capacity', got {line!r}", lineno)
        name, speed, capacity = parts
        try:
            node = NodeProfile(name, Fraction(speed), int(capacity))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(str(exc), lineno) from None
        nodes.append(node)
    if not nodes:
        raise ConfigError("no nodes defined")
    try:
        return ClusterConfig(tuple(nodes), 1 if replication is None else replication)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_cluster_config(path) -> ClusterConfig:
    with open(path, encoding="ascii") as fh:
        return parse_cluster_config(fh.read())


def format_cluster_config(cluster: ClusterConfig) -> str:
    lines = [f"replication {cluster.replication_factor}"]
    for node in cluster.nodes:
        lines.append(f"{node.name} {node.speed} {node.capacity}")
    return "\n".join(lines) + "\n"
