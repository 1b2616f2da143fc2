"""Text formats for transaction databases and mining results.

Database: one transaction per line, ascending space-separated decimal item
ids, LF-terminated. Lines starting with ``#`` are comments.

Results: one itemset per line as ``<ids> #SUP: <count>``, ordered by size
then lexicographically.
"""

from __future__ import annotations

from typing import Iterable, Tuple

from .itemsets import (
    FrequentItemsets,
    Itemset,
    SupportCountTable,
    TransactionDatabase,
    format_itemset,
    itemset_order,
)


class FormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _parse_items(text: str, lineno: int) -> Itemset:
    items = []
    for token in text.split(" "):
        if not token.isdigit() or not token.isascii():
            raise FormatError(f"not a non-negative integer: {token!r}", lineno)
        items.append(int(token))
    if len(set(items)) != len(items):
        raise FormatError("duplicate item", lineno)
    return tuple(sorted(items))


def _lines(text: str):
    for lineno, line in enumerate(text.split("\n"), 1):
        if line.endswith("\r"):
            raise FormatError("CR line terminator", lineno)
        yield lineno, line
    # a trailing LF yields one final empty element, which is skipped by callers


def format_db(db: TransactionDatabase) -> str:
    return "".join(format_itemset(t) + "\n" for t in db.transactions)


def parse_db(text: str) -> TransactionDatabase:
    rows = []
    lines = list(_lines(text))
    if lines and lines[-1][1] == "":
        lines.pop()
    for lineno, line in lines:
        if line.startswith("#"):
            continue
        if not line.strip():
            raise FormatError("empty transaction", lineno)
        rows.append(_parse_items(line, lineno))
    return TransactionDatabase(tuple(rows))


def write_db(db: TransactionDatabase, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_db(db))


def read_db(path) -> TransactionDatabase:
    with open(path, encoding="ascii", newline="") as fh:
        return parse_db(fh.read())


def format_results(results) -> str:
    """Render a :class:`FrequentItemsets` or a plain count table."""
    if isinstance(results, FrequentItemsets):
        pairs: Iterable[Tuple[Itemset, int]] = results.items()
    else:
        pairs = ((s, results[s]) for s in sorted(results, key=itemset_order))
    return "".join(f"{format_itemset(s)} #SUP: {n}\n" for s, n in pairs)


def parse_results(text: str) -> SupportCountTable:
    counts = {}
    lines = list(_lines(text))
    if lines and lines[-1][1] == "":
        lines.pop()
    for lineno, line in lines:
        if line.startswith("#"):
            continue
        body, sep, sup = line.partition(" #SUP: ")
        if not sep:
            raise FormatError("missing ' #SUP: ' separator", lineno)
        if not sup.isdigit() or not sup.isascii():
            raise FormatError(f"bad support {sup!r}", lineno)
        itemset = _parse_items(body, lineno)
        if itemset in counts:
            raise FormatError("duplicate itemset", lineno)
        counts[itemset] = int(sup)
    return counts


def write_results(results, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_results(results))


def read_results(path) -> FrequentItemsets:
    with open(path, encoding="ascii", newline="") as fh:
        return FrequentItemsets.from_counts(parse_results(fh.read()))
