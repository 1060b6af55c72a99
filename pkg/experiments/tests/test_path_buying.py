import pytest

from spanlab.common.classes import Edge, Graph
from spanlab.common.errors import InputError
from spanlab.common.toy import path_graph
from spanlab.upper_bounds.path_buying import BuyDecision, BuyLedger, buy_paths, verify_path_buying


def two_clusters() -> Graph:
    """0 - 4 - 5 - 1 with pendant cluster members 2 (at 0) and 3 (at 1)"""
    return Graph(6, (Edge(0, 4), Edge(4, 5), Edge(5, 1), Edge(0, 2), Edge(1, 3)))


def test_path_worth_its_cost_is_bought():
    g = two_clusters()
    v1 = frozenset({0, 1, 2, 3})
    balls = {0: frozenset({1, 3}), 2: frozenset({1, 3})}
    cluster_of = [2, 3, -1, -1, -1, -1]
    bought, ledger = buy_paths(
        g, {(0, 2), (1, 3)}, v1, balls, target_bound=2, cluster_of=cluster_of
    )
    assert bought == {(0, 4), (4, 5), (1, 5)}
    assert ledger.forced == 0
    assert [tuple(d.pair) for d in ledger.bought] == [(0, 1)]
    first = ledger.bought[0]
    assert (first.cost, first.value) == (3, 4)
    assert ledger.pairs == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_expensive_pair_is_forced_in_the_closing_sweep():
    bought, ledger = buy_paths(
        path_graph(5), set(), frozenset({0, 4}), {0: frozenset({4})}, target_bound=2
    )
    assert bought == {(0, 1), (1, 2), (2, 3), (3, 4)}
    assert ledger.forced == 1
    assert ledger.bought[0].value <= ledger.bought[0].cost


def test_pairs_already_within_bound_are_skipped():
    g = path_graph(5)
    base = {(0, 1), (1, 2), (2, 3), (3, 4)}
    bought, ledger = buy_paths(g, base, frozenset({0, 4}), {0: frozenset({4})}, target_bound=0)
    assert bought == set()
    assert not ledger.bought
    assert [tuple(d.pair) for d in ledger.skipped] == [(0, 4)]


def test_partners_must_be_in_v1():
    with pytest.raises(InputError):
        buy_paths(path_graph(3), set(), frozenset({0}), {0: frozenset({2})}, target_bound=2)
    with pytest.raises(InputError):
        buy_paths(path_graph(3), set(), frozenset({0, 2}), {0: frozenset({2})}, target_bound=-1)


def test_verification_catches_a_pair_out_of_bound():
    ledger = BuyLedger(2, bought=[BuyDecision((0, 4), [0, 1, 2, 3, 4], 4, 0, forced=True)])
    report = verify_path_buying(path_graph(5), Graph(5, ()), ledger)
    assert not report.passed
    assert report.claim("qualifying pairs within the additive target").violations == 1
    assert report.claim("every qualifying pair decided once").passed


def test_verification_catches_an_underpriced_purchase():
    ledger = BuyLedger(2, bought=[BuyDecision((0, 4), [0, 1, 2, 3, 4], 4, 1)])
    report = verify_path_buying(path_graph(5), path_graph(5), ledger)
    assert not report.claim("priced purchases had value above cost").passed
    assert report.claim("qualifying pairs within the additive target").passed
