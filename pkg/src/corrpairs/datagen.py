"""Seeded synthetic basket generator in the style of the IBM Quest generator.

Randomness comes from one PCG64 stream (numpy's bit generator, seeded through
``numpy.random.SeedSequence``).  Raw 64-bit outputs are turned into uniforms in
[0, 1) as ``(raw >> 11) * 2**-53``; every other draw is derived from that
uniform stream, so a seed fixes the output exactly:

* Poisson(lam): inversion, counting up the cumulative mass until it passes u.
* Exponential(1): ``-log(1 - u)``.
* Uniform integer in [0, n): ``floor(u * n)``.
"""

from __future__ import annotations

import bisect
import math
import os
import re
from dataclasses import asdict, dataclass

import numpy as np

from .txdb import TransactionDatabase

PRNG_NAME = "PCG64"
_BLOCK = 4096
_PRESET = re.compile(r"T(\d+)I(\d+)D(\d+)([KM]?)")


class UniformStream:
    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed)
        self._buf: list[float] = []
        self._pos = 0

    def _refill(self):
        raw = self._bits.random_raw(_BLOCK)
        self._buf = ((raw >> np.uint64(11)).astype(np.float64) * 2.0**-53).tolist()
        self._pos = 0

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._refill()
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def randint(self, n: int) -> int:
        return min(int(self.uniform() * n), n - 1)

    def exponential(self) -> float:
        return -math.log1p(-self.uniform())

    def poisson(self, lam: float) -> int:
        u = self.uniform()
        p = math.exp(-lam)
        cdf = p
        k = 0
        # the cap only matters when rounding stops the cdf short of u
        while u > cdf and k < 10 * lam + 100:
            k += 1
            p *= lam / k
            cdf += p
        return k


@dataclass(frozen=True)
class GenParams:
    n_transactions: int
    n_items: int
    avg_size: float
    n_patterns: int = 100
    avg_pattern_len: float = 4.0
    corruption: float = 0.5
    seed: int = 0

    def validate(self) -> None:
        if self.n_transactions < 0:
            raise ValueError("n_transactions must be non-negative")
        if self.avg_size < 1:
            raise ValueError("avg_size must be at least 1")
        if self.n_items < self.avg_size:
            raise ValueError("n_items must be at least avg_size")
        if self.n_patterns < 1:
            raise ValueError("n_patterns must be positive")
        if self.avg_pattern_len <= 0:
            raise ValueError("avg_pattern_len must be positive")
        if not 0.0 <= self.corruption <= 1.0:
            raise ValueError("corruption must be a probability")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


def preset(name: str, seed: int = 0) -> GenParams:
    """Parse a ``T{avg}I{items}D{transactions}`` name, e.g. ``T10I400D100K``.

    The latent pattern pool gets one pattern per item so that nearly every
    item occurs; with a fixed small pool most of a wide vocabulary would
    never be drawn.
    """
    m = _PRESET.fullmatch(name.strip())
    if m is None:
        raise ValueError(f"cannot parse dataset name {name!r}; expected e.g. T10I400D100K")
    avg, items, n, suffix = m.groups()
    n_transactions = int(n) * {"": 1, "K": 1000, "M": 1_000_000}[suffix]
    n_items = int(items)
    return GenParams(n_transactions, n_items, int(avg), n_patterns=max(1, n_items), seed=seed)


def _sample_distinct(rng: UniformStream, pool: list[int], k: int) -> list[int]:
    pool = list(pool)
    for i in range(k):
        j = i + rng.randint(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


def _make_patterns(rng: UniformStream, p: GenParams) -> list[list[int]]:
    patterns: list[list[int]] = []
    prev: list[int] = []
    for _ in range(p.n_patterns):
        size = min(max(1, rng.poisson(p.avg_pattern_len)), p.n_items)
        # fraction taken from the previous pattern ~ Exp(mean 0.5), as in Quest
        frac = min(1.0, 0.5 * rng.exponential())
        n_reuse = min(len(prev), int(frac * size + 0.5))
        items = _sample_distinct(rng, prev, n_reuse)
        chosen = set(items)
        while len(items) < size:
            i = rng.randint(p.n_items)
            if i not in chosen:
                chosen.add(i)
                items.append(i)
        patterns.append(items)
        prev = items
    return patterns


def generate(params: GenParams) -> TransactionDatabase:
    params.validate()
    rng = UniformStream(params.seed)
    patterns = _make_patterns(rng, params)
    weights = [rng.exponential() for _ in patterns]
    total = sum(weights)
    cumulative = []
    acc = 0.0
    for w in weights:
        acc += w / total
        cumulative.append(acc)
    last = len(patterns) - 1
    keep = 1.0 - params.corruption

    transactions = []
    for _ in range(params.n_transactions):
        target = min(max(1, rng.poisson(params.avg_size)), params.n_items)
        t: dict[int, None] = {}
        tries = 0
        while len(t) < target:
            tries += 1
            if tries > 50 * target:
                # patterns cannot fill the basket; pad with uniform items
                t.setdefault(rng.randint(params.n_items))
                continue
            pat = patterns[min(bisect.bisect_right(cumulative, rng.uniform()), last)]
            for item in pat:
                if rng.uniform() < keep:
                    t.setdefault(item)
        transactions.append(frozenset(list(t)[:target]))
    names = tuple(str(i) for i in range(params.n_items))
    return TransactionDatabase(tuple(transactions), names)


def format_meta(params: GenParams) -> str:
    lines = [f"{k}={v}" for k, v in asdict(params).items()]
    lines.append(f"prng={PRNG_NAME}")
    return "\n".join(lines) + "\n"


def write_meta(params: GenParams, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_meta(params))
