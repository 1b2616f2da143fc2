import random

import pytest
from hypothesis import strategies as st

from mrapriori.itemsets import SupportThreshold, TransactionDatabase

# A=0, B=1, C=2 in the hand-worked examples
A, B, C, D = 0, 1, 2, 3


@st.composite
def small_dbs(draw, max_transactions=15, max_items=6):
    n_items = draw(st.integers(1, max_items))
    rows = draw(st.lists(
        st.sets(st.integers(0, n_items - 1), min_size=1),
        max_size=max_transactions,
    ))
    return TransactionDatabase.from_lists(rows)


thresholds = st.one_of(
    st.integers(0, 16).map(SupportThreshold.absolute),
    st.fractions(min_value=0, max_value=1).filter(lambda f: f > 0).map(SupportThreshold.relative),
)


def random_db(rng: random.Random, max_transactions=15, max_items=6) -> TransactionDatabase:
    n_items = rng.randint(1, max_items)
    rows = []
    for _ in range(rng.randint(0, max_transactions)):
        size = rng.randint(1, n_items)
        rows.append(rng.sample(range(n_items), size))
    return TransactionDatabase.from_lists(rows)


def random_threshold(rng: random.Random) -> SupportThreshold:
    if rng.random() < 0.5:
        return SupportThreshold.absolute(rng.randint(0, 8))
    return SupportThreshold.relative(rng.choice(["0.1", "0.2", "0.25", "1/3", "0.5", "0.75", "1"]))


@pytest.fixture
def abc_db():
    return TransactionDatabase.from_lists([[A, B], [A, C], [A, B, C]])


@pytest.fixture
def four_tx_db():
    return TransactionDatabase.from_lists([[A, B], [A, B], [A, C], [B]])


# --- acceptance summary -------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
