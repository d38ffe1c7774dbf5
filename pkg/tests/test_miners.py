import math
from itertools import combinations

import pytest

from corrpairs.corrmath import phi_from_counts
from corrpairs.miners import (
    EmptyDatabaseError,
    MiningQuery,
    OracleUnavailableError,
    PairResult,
    canonical_order,
    compare_results,
    mine,
    mine_brute,
    mine_taper,
    mine_tcp,
    verify_equivalence,
)
from corrpairs.txdb import TransactionDatabase, count_supports

from helpers import naive_pair_counts, random_database

MINERS = [mine_tcp, mine_taper, mine_brute]
THETAS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
BOUND_612 = 0.6123724356957946  # sqrt(0.6/0.8) * sqrt(0.2/0.4)


def named(db, report):
    return {(db.item_names[r.item_a], db.item_names[r.item_b]): r.phi for r in report.results}


def naive_results(db, theta):
    """Pairs with phi >= theta straight from set intersections."""
    s = count_supports(db)
    co = naive_pair_counts(db)
    out = set()
    for a, b in combinations(range(db.n_items), 2):
        if s.is_constant(a) or s.is_constant(b):
            continue
        f = phi_from_counts(s.counts[a], s.counts[b], co.get((a, b), 0), len(db))
        if f >= theta:
            out.add((a, b))
    return out


@pytest.mark.parametrize("miner", MINERS)
def test_fig1_theta_06(fig1, miner):
    got = named(fig1, miner(fig1, 0.6))
    assert set(got) == {
        tuple(sorted(p, key=fig1.item_id)) for p in ["fa", "fm", "ca", "cm", "cp", "am"]
    }
    assert got[("a", "m")] == pytest.approx(1.0, abs=1e-12)
    for pair, f in got.items():
        if pair != ("a", "m"):
            assert f == pytest.approx(BOUND_612, abs=1e-12)


@pytest.mark.parametrize("miner", MINERS)
def test_fig1_theta_1(fig1, miner):
    assert set(named(fig1, miner(fig1, 1.0))) == {("a", "m")}


@pytest.mark.parametrize("miner", MINERS)
def test_theta_above_max_is_empty(fig1, miner):
    assert miner(fig1, 1.0).results  # (a, m) reaches exactly 1
    db = random_database(3)
    top = max((r.phi for r in mine_brute(db, 0.01).results), default=0.0)
    if top < 1.0:
        assert miner(db, math.nextafter(top, 2.0)).results == []


def test_results_are_canonical(fig1):
    r = mine_tcp(fig1, 0.6)
    assert r.results == canonical_order(r.results)
    assert fig1.item_names[r.results[0].item_a] + fig1.item_names[r.results[0].item_b] == "am"
    for p in r.results:
        assert p.item_a < p.item_b
        assert p.phi == phi_from_counts(p.count_a, p.count_b, p.count_ab, len(fig1))


def test_taper_stats_fig1(fig1):
    r = mine_taper(fig1, 0.7)
    assert (r.stats.pairs_considered, r.stats.pairs_pruned_by_bound, r.stats.pairs_refined) == (15, 8, 7)
    assert set(named(fig1, r)) == {("a", "m")}
    r = mine_taper(fig1, 0.6)
    assert (r.stats.pairs_pruned_by_bound, r.stats.pairs_refined) == (0, 15)
    assert len(r.results) == 6


def test_taper_theta_one_distinct_supports():
    rows = [["a", "b", "c", "d"], ["a", "b", "c"], ["a", "b"], ["a"], [], []]
    db = TransactionDatabase.from_transactions(rows)
    r = mine_taper(db, 1.0)
    assert r.results == []
    assert r.stats.pairs_refined == 0
    assert r.stats.pairs_pruned_by_bound == r.stats.pairs_considered == 6


def test_tcp_considers_exactly_cooccurring_pairs(fig1):
    r = mine_tcp(fig1, 0.5)
    assert r.stats.pairs_considered == len(naive_pair_counts(fig1))
    assert r.stats.pairs_pruned_by_bound == 0


def test_brute_single_transaction_has_only_constant_items():
    db = TransactionDatabase.from_transactions([["x", "y"]])
    for miner in MINERS:
        r = miner(db, 0.1)
        assert r.results == []
        assert r.constant_items == [0, 1]


def test_independent_pairs_give_nothing():
    # every pair has count_ab = count_a * count_b / n
    rows = [["a", "b"], ["a"], ["b"], []]
    db = TransactionDatabase.from_transactions(rows)
    for miner in MINERS:
        assert miner(db, 1e-9).results == []


def test_constant_items_excluded():
    rows = [["k", "a", "b"], ["k", "a", "b"], ["k"], ["k", "c"]]
    db = TransactionDatabase.from_transactions(rows, vocabulary=["k", "a", "b", "c", "z"])
    for miner in MINERS:
        r = miner(db, 0.1)
        assert r.constant_items == [0, 4]
        assert all(0 not in (p.item_a, p.item_b) for p in r.results)
        assert {(p.item_a, p.item_b) for p in r.results} == {(1, 2)}


@pytest.mark.parametrize("miner", MINERS)
def test_empty_database_rejected(miner):
    with pytest.raises(EmptyDatabaseError):
        miner(TransactionDatabase((), ()), 0.5)


@pytest.mark.parametrize("theta", [0.0, -0.1, 1.5, float("nan")])
def test_invalid_theta(fig1, theta):
    with pytest.raises(ValueError):
        MiningQuery(theta)
    with pytest.raises(ValueError):
        mine_tcp(fig1, theta)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        MiningQuery(0.5, "apriori")


def test_mine_dispatch(fig1):
    assert mine(fig1, MiningQuery(0.6, "taper")).algorithm == "taper"


def test_brute_cap(fig1, monkeypatch):
    with pytest.raises(OracleUnavailableError):
        mine_brute(fig1, 0.5, max_items=5)
    monkeypatch.setenv("CORRPAIRS_BRUTE_MAX_ITEMS", "3")
    with pytest.raises(OracleUnavailableError):
        mine_brute(fig1, 0.5)


@pytest.mark.parametrize("theta", THETAS)
def test_verify_fig1(fig1, theta):
    eq = verify_equivalence(fig1, theta)
    assert eq.ok and eq.diff == []


@pytest.mark.parametrize("seed", range(40))
def test_miners_agree_with_naive_oracle(seed):
    db = random_database(seed)
    for theta in (0.1, 0.4, 0.8):
        want = naive_results(db, theta)
        for miner in MINERS:
            got = {(r.item_a, r.item_b) for r in miner(db, theta).results}
            assert got == want, miner.__name__


def _corrupted_taper(db, theta):
    # bound with the square roots dropped: too small, prunes real results
    import corrpairs.miners as m

    real = m.phi_upper_bound
    m.phi_upper_bound = lambda a, b: real(a, b) ** 2
    try:
        return m.mine_taper(db, theta)
    finally:
        m.phi_upper_bound = real


def test_verify_detects_corrupted_taper(fig1):
    eq = verify_equivalence(fig1, 0.6, miners={"brute": mine_brute, "tcp": mine_tcp, "taper": _corrupted_taper})
    assert not eq.ok
    assert eq.diff and all("only in brute" in d for d in eq.diff)


def test_compare_results_reports_phi_and_count_mismatch():
    a = [PairResult(0, 1, 3, 3, 2, 0.5)]
    b = [PairResult(0, 1, 3, 3, 2, 0.5 + 1e-6)]
    assert compare_results(a, b)
    assert not compare_results(a, [PairResult(0, 1, 3, 3, 2, 0.5 + 1e-10)])
    assert compare_results(a, [PairResult(0, 1, 3, 3, 1, 0.5)])


@pytest.mark.parametrize("seed", range(20))
def test_taper_filter_sound(seed):
    db = random_database(seed)
    s = count_supports(db)
    co = naive_pair_counts(db)
    for theta in THETAS:
        r = mine_taper(db, theta, trace=True)
        assert len(r.pruned_pairs) == r.stats.pairs_pruned_by_bound
        for a, b in r.pruned_pairs:
            assert phi_from_counts(s.counts[a], s.counts[b], co.get((a, b), 0), len(db)) < theta


@pytest.mark.parametrize("seed", range(20))
def test_monotone_in_theta(seed):
    db = random_database(seed)
    prev_results, prev_pruned = None, None
    for theta in sorted(THETAS, reverse=True):
        r = mine_taper(db, theta)
        pairs = {(p.item_a, p.item_b) for p in r.results}
        if prev_results is not None:
            assert prev_results <= pairs
            assert r.stats.pairs_pruned_by_bound <= prev_pruned
        prev_results, prev_pruned = pairs, r.stats.pairs_pruned_by_bound
        assert r.stats.pairs_pruned_by_bound + r.stats.pairs_refined == r.stats.pairs_considered


@pytest.mark.parametrize("seed", range(10))
def test_tcp_work_independent_of_theta(seed):
    db = random_database(seed)
    assert len({mine_tcp(db, t).stats.pairs_considered for t in THETAS}) == 1


def test_tcp_parallel_matches_serial():
    db = random_database(11)
    assert mine_tcp(db, 0.2, workers=4).results == mine_tcp(db, 0.2).results
