"""FP-tree over all items (no support threshold) and conditional pattern bases."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .txdb import SupportTable, TransactionDatabase


class FPNode:
    __slots__ = ("item", "count", "parent", "children", "next_same_item")

    def __init__(self, item: int | None, count: int = 0, parent: "FPNode | None" = None):
        self.item = item
        self.count = count
        self.parent = parent
        self.children: dict[int, FPNode] = {}
        self.next_same_item: FPNode | None = None

    def __repr__(self):
        return f"FPNode({self.item!r}:{self.count})"


@dataclass
class HeaderEntry:
    item: int
    head: FPNode | None = None
    tail: FPNode | None = None
    total: int = 0

    def nodes(self):
        node = self.head
        while node is not None:
            yield node
            node = node.next_same_item


@dataclass
class PatternBase:
    base_item: int
    paths: list[tuple[tuple[int, ...], int]] = field(default_factory=list)


def item_order(supports: SupportTable) -> list[int]:
    """Occurring items by descending support, ties by ascending id."""
    counts = supports.counts
    present = [i for i, c in enumerate(counts) if c > 0]
    return sorted(present, key=lambda i: (-counts[i], i))


class FPTree:
    """Prefix tree of rank-sorted transactions with a per-item header table."""

    def __init__(self, order: Sequence[int]):
        self.root = FPNode(None)
        self.order: dict[int, int] = {item: rank for rank, item in enumerate(order)}
        self.header: list[HeaderEntry] = [HeaderEntry(item) for item in order]
        self._entry = {e.item: e for e in self.header}
        self.n_transactions = 0

    def entry(self, item: int) -> HeaderEntry:
        try:
            return self._entry[item]
        except KeyError:
            raise KeyError(f"item {item} is not in the tree's header table") from None

    def sort_items(self, items: Iterable[int]) -> list[int]:
        order = self.order
        for i in items:
            if i not in order:
                raise KeyError(f"item {i} is not in the tree's item order")
        return sorted(set(items), key=order.__getitem__)

    def insert_transaction(self, items: Sequence[int], count: int = 1) -> None:
        """Insert an already rank-sorted, duplicate-free item list."""
        order = self.order
        node = self.root
        last_rank = -1
        for item in items:
            rank = order.get(item)
            if rank is None:
                raise KeyError(f"item {item} is not in the tree's item order")
            if rank <= last_rank:
                raise ValueError("items must be strictly ascending in rank")
            last_rank = rank
            child = node.children.get(item)
            if child is None:
                child = FPNode(item, 0, node)
                node.children[item] = child
                entry = self._entry[item]
                if entry.tail is None:
                    entry.head = child
                else:
                    entry.tail.next_same_item = child
                entry.tail = child
            child.count += count
            self._entry[item].total += count
            node = child
        if items:
            self.n_transactions += count

    def conditional_pattern_base(self, item: int) -> PatternBase:
        base = PatternBase(item)
        for node in self.entry(item).nodes():
            prefix = []
            p = node.parent
            while p.item is not None:
                prefix.append(p.item)
                p = p.parent
            prefix.reverse()
            base.paths.append((tuple(prefix), node.count))
        return base

    def iter_nodes(self):
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            yield node, depth
            kids = sorted(node.children.values(), key=lambda n: self.order[n.item])
            stack.extend((k, depth + 1) for k in reversed(kids))

    def node_count(self) -> int:
        return sum(1 for n, _ in self.iter_nodes() if n.item is not None)

    def leaf_count(self) -> int:
        return sum(1 for n, _ in self.iter_nodes() if n.item is not None and not n.children)

    def dump(self, names: Sequence[str] | None = None) -> str:
        """One node per line, two spaces of indent per level, ``item:count``."""
        lines = []
        for node, depth in self.iter_nodes():
            if node.item is None:
                lines.append("NULL")
                continue
            label = names[node.item] if names is not None else str(node.item)
            lines.append("  " * depth + f"{label}:{node.count}")
        return "\n".join(lines) + "\n"


def build_fptree(db: TransactionDatabase, supports: SupportTable) -> FPTree:
    tree = FPTree(item_order(supports))
    rank = tree.order.__getitem__
    for t in db.transactions:
        tree.insert_transaction(sorted(t, key=rank))
    return tree


def cooccurrence_counts(base: PatternBase) -> dict[int, int]:
    """Per-item totals over a pattern base, i.e. the conditional tree's header."""
    counts: defaultdict[int, int] = defaultdict(int)
    for prefix, count in base.paths:
        for item in prefix:
            counts[item] += count
    return dict(counts)


def insert_transaction(tree: FPTree, items) -> None:
    tree.insert_transaction(items)


def conditional_pattern_base(tree: FPTree, item: int) -> PatternBase:
    return tree.conditional_pattern_base(item)
