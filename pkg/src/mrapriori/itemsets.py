"""Itemset and transaction types, subset enumeration, Apriori candidate
generation, a sequential level-wise miner and a brute-force oracle.

Itemsets are plain tuples of non-negative ints in strictly increasing order.
Every function that returns itemsets returns them in canonical order: by
size first, then lexicographically.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

Itemset = Tuple[int, ...]
SupportCountTable = Dict[Itemset, int]

DEFAULT_ENUMERATION_CAP = 24

CONTAINMENT = "containment"
EXACT_MATCH = "exact-match"


class EnumerationCapError(ValueError):
    """Universe too large for exhaustive subset enumeration."""


def itemset_order(itemset: Itemset) -> Tuple[int, Itemset]:
    """Sort key giving the canonical (size, lexicographic) order."""
    return (len(itemset), itemset)


def canonicalize(items: Iterable[int]) -> Itemset:
    """Sort and deduplicate ``items``. Empty input gives an empty itemset."""
    out = tuple(sorted(set(items)))
    for item in out:
        if isinstance(item, bool) or not isinstance(item, int) or item < 0:
            raise ValueError(f"item ids must be non-negative integers, got {item!r}")
    return out


def format_itemset(itemset: Itemset) -> str:
    return " ".join(str(i) for i in itemset)


@dataclass(frozen=True)
class TransactionDatabase:
    """Ordered, immutable list of non-empty canonical transactions."""

    transactions: Tuple[Itemset, ...] = ()
    universe: Itemset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        txs = tuple(canonicalize(t) for t in self.transactions)
        for idx, t in enumerate(txs):
            if not t:
                raise ValueError(f"transaction {idx} is empty")
        object.__setattr__(self, "transactions", txs)
        object.__setattr__(self, "universe", canonicalize(i for t in txs for i in t))

    @classmethod
    def from_lists(cls, rows: Iterable[Iterable[int]]) -> "TransactionDatabase":
        return cls(tuple(tuple(r) for r in rows))

    def __len__(self) -> int:
        return len(self.transactions)

    def __iter__(self) -> Iterator[Itemset]:
        return iter(self.transactions)

    def __getitem__(self, idx):
        return self.transactions[idx]


@dataclass(frozen=True)
class SupportThreshold:
    """Minimum support, either an absolute count or a fraction in (0, 1].

    Fractions are converted with ``ceil(f * n)``. The effective count is never
    below 1, so an itemset has to occur at least once to be frequent.
    """

    kind: str
    value: object

    def __post_init__(self):
        if self.kind == "absolute":
            if isinstance(self.value, bool) or not isinstance(self.value, int) or self.value < 0:
                raise ValueError(f"absolute support must be a non-negative integer, got {self.value!r}")
        elif self.kind == "relative":
            frac = _to_fraction(self.value)
            if not 0 < frac <= 1:
                raise ValueError(f"relative support must lie in (0, 1], got {self.value!r}")
            object.__setattr__(self, "value", frac)
        else:
            raise ValueError(f"unknown threshold kind {self.kind!r}")

    @classmethod
    def absolute(cls, count: int) -> "SupportThreshold":
        return cls("absolute", count)

    @classmethod
    def relative(cls, fraction) -> "SupportThreshold":
        return cls("relative", fraction)

    def min_count(self, num_transactions: int) -> int:
        if self.kind == "absolute":
            count = self.value
        else:
            count = math.ceil(self.value * num_transactions)
        return max(1, count)


def _to_fraction(value) -> Fraction:
    # floats go through their decimal repr so 0.1 means 1/10
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    return Fraction(value)


@dataclass
class FrequentItemsets:
    """Frequent itemsets grouped by size; ``levels[k - 1]`` holds size-k sets."""

    levels: List[SupportCountTable] = field(default_factory=list)

    def __post_init__(self):
        self.levels = [
            {s: level[s] for s in sorted(level, key=itemset_order)} for level in self.levels
        ]
        while self.levels and not self.levels[-1]:
            self.levels.pop()

    @classmethod
    def from_counts(cls, counts: SupportCountTable) -> "FrequentItemsets":
        levels: List[SupportCountTable] = []
        for itemset in sorted(counts, key=itemset_order):
            while len(levels) < len(itemset):
                levels.append({})
            levels[len(itemset) - 1][itemset] = counts[itemset]
        return cls(levels)

    def items(self) -> Iterator[Tuple[Itemset, int]]:
        for level in self.levels:
            yield from level.items()

    def as_dict(self) -> SupportCountTable:
        return dict(self.items())

    def __len__(self) -> int:
        return sum(len(level) for level in self.levels)

    def __contains__(self, itemset) -> bool:
        k = len(itemset)
        return 0 < k <= len(self.levels) and itemset in self.levels[k - 1]

    def support(self, itemset: Itemset) -> int:
        return self.levels[len(itemset) - 1][itemset]


def enumerate_all_subsets(universe: Sequence[int], cap: int = DEFAULT_ENUMERATION_CAP) -> List[Itemset]:
    """All ``2**m - 1`` non-empty subsets of ``universe`` in canonical order."""
    universe = canonicalize(universe)
    if len(universe) > cap:
        raise EnumerationCapError(
            f"universe too large for exhaustive enumeration: {len(universe)} items (cap {cap})"
        )
    return [c for k in range(1, len(universe) + 1) for c in combinations(universe, k)]


def support_count(db: TransactionDatabase, candidate: Itemset, mode: str = CONTAINMENT) -> int:
    """Number of transactions containing ``candidate``.

    ``mode="exact-match"`` counts only transactions equal to the candidate.
    """
    if not candidate:
        raise ValueError("empty candidate")
    if mode == CONTAINMENT:
        wanted = frozenset(candidate)
        return sum(1 for t in db.transactions if wanted.issubset(t))
    if mode == EXACT_MATCH:
        candidate = tuple(candidate)
        return sum(1 for t in db.transactions if t == candidate)
    raise ValueError(f"unknown counting mode {mode!r}")


def generate_candidates(frequent_k: Iterable[Itemset]) -> List[Itemset]:
    """Join size-k itemsets sharing a (k-1)-prefix, then prune any candidate
    with an infrequent k-subset."""
    level = sorted(set(frequent_k))
    if not level:
        return []
    k = len(level[0])
    if k == 0 or any(len(s) != k for s in level):
        raise ValueError("non-uniform level: all itemsets must have the same non-zero size")
    known = set(level)
    out = []
    for i, a in enumerate(level):
        for b in level[i + 1:]:
            if a[:-1] != b[:-1]:
                # sorted order groups equal prefixes together
                break
            cand = a + (b[-1],)
            if all(cand[:j] + cand[j + 1:] in known for j in range(k - 1)):
                out.append(cand)
    return out


class CandidateMatcher:
    """Finds which of a fixed set of same-size candidates a transaction contains.

    Enumerates the transaction's k-subsets when that is cheaper than testing
    every candidate.
    """

    def __init__(self, candidates: Sequence[Itemset]):
        self.candidates = list(candidates)
        self.k = len(self.candidates[0]) if self.candidates else 0
        self._lookup = set(self.candidates)
        self._relevant = {i for c in self.candidates for i in c}
        self._sets = [(c, frozenset(c)) for c in self.candidates]

    def matches(self, transaction: Itemset) -> Iterator[Itemset]:
        t = [i for i in transaction if i in self._relevant]
        if not self.candidates or len(t) < self.k:
            return
        if math.comb(len(t), self.k) <= len(self.candidates):
            for sub in combinations(t, self.k):
                if sub in self._lookup:
                    yield sub
        else:
            tset = frozenset(t)
            for c, cs in self._sets:
                if cs <= tset:
                    yield c


def count_level(transactions: Iterable[Itemset], candidates: Sequence[Itemset]) -> SupportCountTable:
    """Containment support of each same-size candidate, zero counts included."""
    counts: SupportCountTable = dict.fromkeys(candidates, 0)
    matcher = CandidateMatcher(candidates)
    for t in transactions:
        for c in matcher.matches(t):
            counts[c] += 1
    return counts


def apriori_sequential(db: TransactionDatabase, threshold: SupportThreshold) -> FrequentItemsets:
    """Single-node level-wise Apriori."""
    minsup = threshold.min_count(len(db))
    item_counts = Counter(i for t in db for i in t)
    current = {(i,): c for i, c in item_counts.items() if c >= minsup}
    levels = []
    while current:
        levels.append(current)
        candidates = generate_candidates(current)
        counts = count_level(db.transactions, candidates)
        current = {c: n for c, n in counts.items() if n >= minsup}
    return FrequentItemsets(levels)


def brute_force_frequent(
    db: TransactionDatabase, threshold: SupportThreshold, cap: int = DEFAULT_ENUMERATION_CAP
) -> FrequentItemsets:
    """Reference miner: count every subset of the universe, keep the frequent ones."""
    minsup = threshold.min_count(len(db))
    counts = {}
    for subset in enumerate_all_subsets(db.universe, cap):
        n = support_count(db, subset)
        if n >= minsup:
            counts[subset] = n
    return FrequentItemsets.from_counts(counts)
