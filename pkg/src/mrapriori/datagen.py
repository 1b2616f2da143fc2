"""Deterministic synthetic market-basket data.

The random source is SplitMix64 (Steele, Lea and Flood 2014):

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all modulo 2**64. Everything on the sampling path is integer arithmetic, so a
given seed yields the same database on every platform.

Transaction lengths are ``1 + Poisson(avg_len - 1)``, sampled by inversion
against a fixed-point CDF table and clamped to ``[1, num_items]``. Items are
drawn without replacement with Zipf weights ``1 / (rank + 1)``, item 0 being
the most popular.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .itemsets import TransactionDatabase

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

# fixed-point scale for CDF tables and item weights
_ONE = 1 << 64
_WEIGHT_SCALE = 1 << 40


class SplitMix64:
    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` without modulo bias."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = _ONE - (_ONE % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


@dataclass(frozen=True)
class GeneratorParams:
    num_transactions: int
    num_items: int = 50
    avg_transaction_len: int = 8
    seed: int = 1

    def __post_init__(self):
        if self.num_transactions < 0:
            raise ValueError("num_transactions must be non-negative")
        if self.num_items < 1:
            raise ValueError("num_items must be positive")
        if not 1 <= self.avg_transaction_len <= self.num_items:
            raise ValueError("avg_transaction_len must lie in [1, num_items]")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _exp_fraction(lam: int) -> Fraction:
    # Taylor series of e**lam, truncated well past the point where terms vanish
    # at 64-bit fixed-point precision
    total = Fraction(0)
    term = Fraction(1)
    j = 0
    while True:
        total += term
        j += 1
        term = term * lam / j
        if j > lam and term * _ONE < 1:
            return total


def poisson_cdf_table(lam: int, max_k: int) -> List[int]:
    """``floor(2**64 * P(X <= k))`` for ``k = 0 .. max_k``, X ~ Poisson(lam)."""
    inv_exp = 1 / _exp_fraction(lam)
    table = []
    acc = Fraction(0)
    term = inv_exp
    for k in range(max_k + 1):
        acc += term
        table.append(min(_ONE, (acc * _ONE).__floor__()))
        term = term * lam / (k + 1)
    return table


def zipf_weights(num_items: int) -> List[int]:
    return [_WEIGHT_SCALE // (rank + 1) for rank in range(num_items)]


def _draw_length(rng: SplitMix64, cdf: List[int], num_items: int) -> int:
    u = rng.next_u64()
    extra = bisect.bisect_right(cdf, u)
    return min(1 + extra, num_items)


def _draw_items(rng: SplitMix64, weights: List[int], cumulative: List[int], k: int) -> List[int]:
    n = len(weights)
    if 2 * k <= n:
        # rejection of repeats is cheap while fewer than half the items are taken
        chosen = set()
        total = cumulative[-1]
        while len(chosen) < k:
            chosen.add(bisect.bisect_right(cumulative, rng.below(total)))
        return sorted(chosen)
    remaining = list(range(n))
    rem_weights = list(weights)
    chosen = []
    for _ in range(k):
        r = rng.below(sum(rem_weights))
        for pos, w in enumerate(rem_weights):
            if r < w:
                break
            r -= w
        chosen.append(remaining.pop(pos))
        rem_weights.pop(pos)
    return sorted(chosen)


def generate_db(params: GeneratorParams) -> TransactionDatabase:
    """Generate a database; a pure function of ``params``."""
    rng = SplitMix64(params.seed)
    n_items = params.num_items
    cdf = poisson_cdf_table(params.avg_transaction_len - 1, n_items)
    weights = zipf_weights(n_items)
    cumulative = []
    acc = 0
    for w in weights:
        acc += w
        cumulative.append(acc)
    rows = []
    for _ in range(params.num_transactions):
        k = _draw_length(rng, cdf, n_items)
        rows.append(tuple(_draw_items(rng, weights, cumulative, k)))
    return TransactionDatabase(tuple(rows))
