"""Apriori frequent-itemset mining on a miniature map/reduce engine, with a
virtual-time cluster simulator for comparing node configurations."""

__version__ = "0.1.0"

from .itemsets import (
    FrequentItemsets,
    SupportThreshold,
    TransactionDatabase,
    apriori_sequential,
    brute_force_frequent,
    canonicalize,
    enumerate_all_subsets,
    generate_candidates,
    support_count,
)
from .engine import JobSpec, JobResult, InputSplit, partition_input, run_job, shuffle
from .apriori_mr import (
    LevelTrace,
    SimulationSettings,
    apriori_mapreduce,
    count_candidates_mr,
    naive_all_subsets_mine,
)
from .cluster import (
    ClusterConfig,
    NodeProfile,
    TimingComparison,
    compare_clusters,
    model_curve,
    simulate_makespan,
)
from .datagen import GeneratorParams, generate_db
from .formats import read_db, read_results, write_db, write_results
