import random
from itertools import combinations
from pathlib import Path

from corrpairs.txdb import TransactionDatabase

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

FIG1_ROWS = ["fcamp", "fcabm", "fb", "cbp", "fcamp"]
# header order of the worked example; ids follow it so the id tie-break agrees
FIG1_VOCAB = ["f", "c", "a", "b", "m", "p"]


def fig1_database() -> TransactionDatabase:
    return TransactionDatabase.from_transactions(FIG1_ROWS, vocabulary=FIG1_VOCAB)


def random_database(seed: int, max_items: int = 50, max_transactions: int = 500) -> TransactionDatabase:
    """Small random database with per-item densities drawn from a skewed range."""
    rng = random.Random(seed)
    n_items = rng.randint(2, max_items)
    n_trans = rng.randint(1, max_transactions)
    scale = rng.choice([0.05, 0.2, 0.5, 0.9])
    dens = [min(1.0, rng.random() ** 2 * scale * 2) for _ in range(n_items)]
    rows = []
    for _ in range(n_trans):
        t = [str(i) for i in range(n_items) if rng.random() < dens[i]]
        if rng.random() < 0.3 and t:
            # plant a correlated partner for some baskets
            t.append(str((int(t[0]) + 1) % n_items))
        rows.append(t)
    return TransactionDatabase.from_transactions(rows, vocabulary=[str(i) for i in range(n_items)])


def naive_pair_counts(db: TransactionDatabase) -> dict[tuple[int, int], int]:
    """Independent oracle: count every co-occurring pair straight from the sets."""
    counts: dict[tuple[int, int], int] = {}
    for t in db.transactions:
        for a, b in combinations(sorted(t), 2):
            counts[(a, b)] = counts.get((a, b), 0) + 1
    return counts


# (criterion number, title, passed, detail) rows printed at the end of the run
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.append((number, title, bool(ok), detail))
