"""Transaction databases: basket-file I/O, categorical conversion, support counts."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class FormatError(ValueError):
    """Raised when an input file does not match the expected layout."""


@dataclass(frozen=True)
class TransactionDatabase:
    """An immutable multiset of transactions over dense item ids ``0..n_items-1``.

    ``item_names[i]`` is the external token of item ``i``.  Each transaction
    is a frozenset, so duplicates inside one transaction cannot occur.
    """

    transactions: tuple[frozenset[int], ...]
    item_names: tuple[str, ...]

    def __post_init__(self):
        n = len(self.item_names)
        if len(set(self.item_names)) != n:
            raise ValueError("item names must be unique")
        for t in self.transactions:
            for i in t:
                if not 0 <= i < n:
                    raise ValueError(f"item id {i} outside 0..{n - 1}")

    @property
    def n_items(self) -> int:
        return len(self.item_names)

    def __len__(self) -> int:
        return len(self.transactions)

    def item_id(self, name: str) -> int:
        return self.item_names.index(name)

    @classmethod
    def from_transactions(
        cls,
        rows: Iterable[Iterable[str]],
        vocabulary: Sequence[str] | None = None,
    ) -> "TransactionDatabase":
        """Build a database from token rows.

        Ids follow ``vocabulary`` when given, then first appearance for any
        token not listed there.
        """
        ids: dict[str, int] = {}
        for name in vocabulary or ():
            ids.setdefault(name, len(ids))
        transactions = []
        for row in rows:
            t = set()
            for token in row:
                if token not in ids:
                    ids[token] = len(ids)
                t.add(ids[token])
            transactions.append(frozenset(t))
        return cls(tuple(transactions), tuple(ids))


@dataclass(frozen=True)
class SupportTable:
    counts: tuple[int, ...]
    n_transactions: int

    def support(self, item: int) -> float:
        return self.counts[item] / self.n_transactions

    def is_constant(self, item: int) -> bool:
        """True when the item occurs in no transaction or in every one."""
        c = self.counts[item]
        return c == 0 or c == self.n_transactions


def count_supports(db: TransactionDatabase) -> SupportTable:
    counts = [0] * db.n_items
    for t in db.transactions:
        for i in t:
            counts[i] += 1
    return SupportTable(tuple(counts), len(db))


def _basket_rows(lines: Iterable[str]):
    for line in lines:
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        yield tokens


def load_basket_file(path: str | os.PathLike) -> TransactionDatabase:
    """Read a whitespace-separated basket file, one transaction per line.

    Blank lines and ``#`` comment lines are skipped.  Ids are assigned in
    order of first appearance.
    """
    with open(path, encoding="utf-8") as fh:
        return TransactionDatabase.from_transactions(_basket_rows(fh))


def format_basket(db: TransactionDatabase) -> str:
    """Render ``db`` in basket format; items within a line in ascending id order."""
    names = db.item_names
    lines = [" ".join(names[i] for i in sorted(t)) for t in db.transactions]
    return "".join(line + "\n" for line in lines)


def save_basket_file(db: TransactionDatabase, path: str | os.PathLike) -> None:
    for t in db.transactions:
        if not t:
            # an empty line would be skipped on reload
            raise FormatError("cannot serialize an empty transaction")
    for name in db.item_names:
        if not name or any(ch.isspace() for ch in name) or name.startswith("#"):
            raise FormatError(f"item name {name!r} is not a valid basket token")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_basket(db))


@dataclass
class CategoricalSchema:
    """How to read a delimited categorical table.

    ``columns`` selects column indices (all when None).  Cells equal to
    ``missing`` yield no item unless ``itemize_missing`` is set, in which case
    the missing marker becomes an ordinary value.
    """

    delimiter: str = ","
    skip_header: bool = False
    missing: str | None = "?"
    itemize_missing: bool = False
    columns: list[int] | None = field(default=None)


def convert_categorical(
    path: str | os.PathLike, schema: CategoricalSchema | None = None
) -> TransactionDatabase:
    """Turn each record of a categorical table into one transaction.

    Every (column, value) pair becomes the item ``col{index}={value}``.
    """
    schema = schema or CategoricalSchema()
    if len(schema.delimiter) != 1:
        raise FormatError(f"delimiter must be a single character, got {schema.delimiter!r}")

    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=schema.delimiter)
        for lineno, record in enumerate(reader, 1):
            if lineno == 1 and schema.skip_header:
                continue
            if not record or record == [""]:
                continue
            if width is None:
                width = len(record)
            elif len(record) != width:
                raise FormatError(f"line {lineno}: expected {width} fields, got {len(record)}")
            cols = schema.columns if schema.columns is not None else range(width)
            row = []
            for c in cols:
                if not 0 <= c < width:
                    raise FormatError(f"column {c} outside table of width {width}")
                value = record[c].strip()
                if value == schema.missing and not schema.itemize_missing:
                    continue
                row.append(f"col{c}={value}")
            rows.append(row)
    return TransactionDatabase.from_transactions(rows)
