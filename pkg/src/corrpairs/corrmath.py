"""Phi coefficient of two binary items and its support-only upper bound."""

from __future__ import annotations

import math
from typing import NamedTuple


class ConstantItemError(ValueError):
    """Phi is undefined when an item has relative support 0 or 1."""


class PairSupports(NamedTuple):
    sup_a: float
    sup_b: float
    sup_ab: float


def _check(sup: float) -> None:
    if not 0.0 < sup < 1.0:
        raise ConstantItemError(f"support {sup!r} is not strictly between 0 and 1")


def phi(sup_a: float, sup_b: float, sup_ab: float) -> float:
    """Pearson correlation of two binary items from relative supports.

    >>> phi(0.6, 0.6, 0.6)
    1.0
    """
    _check(sup_a)
    _check(sup_b)
    if sup_a < sup_b:
        # fixed operand order makes the result exactly symmetric
        sup_a, sup_b = sup_b, sup_a
    # sup_ab - sup_a*sup_b written as the 2x2 table determinant; the direct
    # form cancels badly near the Frechet bounds when supports approach 1
    only_a = sup_a - sup_ab
    only_b = sup_b - sup_ab
    neither = (1.0 - sup_a) - only_b
    num = sup_ab * neither - only_a * only_b
    # sqrt(v * v) == v exactly, so identical items give exactly 1.0
    return num / math.sqrt((sup_a * (1.0 - sup_a)) * (sup_b * (1.0 - sup_b)))


def phi_from_counts(count_a: int, count_b: int, count_ab: int, n: int) -> float:
    # every miner goes through here so results agree bit for bit
    return phi(count_a / n, count_b / n, count_ab / n)


def phi_upper_bound(sup_a: float, sup_b: float) -> float:
    """Largest phi any pair with these marginal supports can reach.

    Attained when the rarer item only ever occurs together with the other.
    """
    _check(sup_a)
    _check(sup_b)
    if sup_a < sup_b:
        sup_a, sup_b = sup_b, sup_a
    return math.sqrt(sup_b / sup_a) * math.sqrt((1.0 - sup_a) / (1.0 - sup_b))
