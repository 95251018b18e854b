"""Tests for relsnd.flow."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from relsnd import fixtures
from relsnd.errors import InfeasibleError, InvalidArgumentError
from relsnd.flow import edge_connectivity, max_flow_min_cut, min_cost_flow
from relsnd.graph import Multigraph, component_labels, cut_edges


def _ones(g):
    return {e.id: Fraction(1) for e in g.edges}


def _costs(g):
    return {e.id: e.weight for e in g.edges}


def test_triangle_two_paths():
    """Two disjoint paths; the closest cut is the source's star."""
    g = fixtures.triangle()
    res = max_flow_min_cut(g, _ones(g), {0}, {2})
    assert res.value == 2
    assert res.source_side == {0}
    assert res.complete


def test_path_closest_cut():
    """On a path the first edge saturates and the source side is {0}."""
    g = fixtures.path3()
    res = max_flow_min_cut(g, _ones(g), {0}, {2})
    assert res.value == 1
    assert res.source_side == {0}
    assert res.cut(g) == {0}


def test_ch2_closest_cut():
    """Across CH2 the min cut is the joining pair, closest side the first K4."""
    g = fixtures.ch2()
    res = max_flow_min_cut(g, _ones(g), {0}, {7})
    assert res.value == 2
    assert res.source_side == {0, 1, 2, 3}
    assert res.cut(g) == {12, 13}


def test_ch2_cut_is_minimum_by_enumeration():
    """No single edge separates 0 from 7 in CH2, and no pair is closer than the joining one."""
    g = fixtures.ch2()
    for eid in g.edge_ids:
        labels = component_labels(g, [eid])
        assert labels[0] == labels[7]
    for pair in combinations(sorted(g.edge_ids), 2):
        labels = component_labels(g, pair)
        if labels[0] != labels[7]:
            reach = {v for v in g.nodes if labels[v] == labels[0]}
            assert {0, 1, 2, 3} <= reach


def test_net_flow_sign_and_conservation():
    """Net flow is signed along (u, v) and conserved at inner nodes."""
    g = fixtures.k4()
    res = max_flow_min_cut(g, _ones(g), {0}, {3})
    assert res.value == 3
    for v in (1, 2):
        balance = sum(
            res.net_flow[e.id] if e.v == v else -res.net_flow[e.id] for e in g.incident(v)
        )
        assert balance == 0
    assert all(f >= 0 for f in res.flow_per_edge.values())


def test_cutoff_stops_early():
    """With a cutoff below the max flow the result is flagged incomplete."""
    g = fixtures.k4()
    res = max_flow_min_cut(g, _ones(g), {0}, {3}, cutoff=Fraction(2))
    assert res.value == 2
    assert not res.complete


def test_fractional_capacities():
    """Rational capacities give a rational flow value."""
    g = fixtures.triangle()
    cap = {0: Fraction(1, 3), 1: Fraction(1, 2), 2: Fraction(2)}
    res = max_flow_min_cut(g, cap, {0}, {2})
    assert res.value == Fraction(5, 6)


def test_set_terminals_ignore_internal_edges():
    """Edges inside X carry no flow."""
    g = fixtures.k4()
    res = max_flow_min_cut(g, _ones(g), {0, 1}, {3})
    assert res.value == 3
    assert res.net_flow[0] == 0


def test_overlapping_terminals_rejected():
    """X and Y must be disjoint."""
    g = fixtures.triangle()
    with pytest.raises(InvalidArgumentError):
        max_flow_min_cut(g, _ones(g), {0, 1}, {1})


def test_edge_connectivity_matches_enumeration():
    """Unit max flow equals the smallest separating edge set on small random graphs."""
    rng = random.Random(7)
    for _ in range(15):
        n = rng.randint(3, 5)
        pairs = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < 0.7]
        pairs += [p for p in pairs if rng.random() < 0.3]
        g = Multigraph.from_edges(n, pairs)
        u, v = 0, n - 1
        brute = None
        for size in range(len(pairs) + 1):
            for removed in combinations(sorted(g.edge_ids), size):
                labels = component_labels(g, removed)
                if labels[u] != labels[v]:
                    brute = size
                    break
            if brute is not None:
                break
        assert edge_connectivity(g, u, v) == brute


def test_min_cost_flow_k4():
    """Three disjoint 0–3 paths in K4 cost 5."""
    g = fixtures.k4()
    res = min_cost_flow(g, _costs(g), {e.id: 1 for e in g.edges}, 0, 3, 3)
    assert res.cost == 5
    assert len(res.support) == 5
    assert res.support == {0, 1, 2, 4, 5}


def test_min_cost_flow_zero_amount():
    """Zero units cost nothing."""
    g = fixtures.k4()
    res = min_cost_flow(g, _costs(g), {e.id: 1 for e in g.edges}, 0, 3, 0)
    assert res.cost == 0
    assert res.support == frozenset()


def test_min_cost_flow_path():
    """Costs 2 and 5 along the only path."""
    g = Multigraph.from_edges(3, [(0, 1, 2), (1, 2, 5)])
    res = min_cost_flow(g, _costs(g), {0: 1, 1: 1}, 0, 2, 1)
    assert res.cost == 7


def test_min_cost_flow_prefers_cheap_detour():
    """A cheaper two-hop route beats the direct edge."""
    g = Multigraph.from_edges(3, [(0, 2, 10), (0, 1, 1), (1, 2, Fraction(3, 2))])
    res = min_cost_flow(g, _costs(g), {e.id: 1 for e in g.edges}, 0, 2, 1)
    assert res.cost == Fraction(5, 2)
    assert res.support == {1, 2}


def test_min_cost_flow_infeasible_reports_max():
    """Asking a path for two units fails with the achievable value."""
    g = fixtures.path3()
    with pytest.raises(InfeasibleError) as info:
        min_cost_flow(g, _costs(g), {0: 1, 1: 1}, 0, 2, 2)
    assert info.value.max_value == 1


def _random_multigraph(rng, max_edges=10):
    n = rng.randint(3, 5)
    pairs = []
    for _ in range(rng.randint(2, max_edges)):
        u, v = rng.sample(range(n), 2)
        pairs.append((u, v, Fraction(rng.randint(1, 6), 2)))
    return Multigraph.from_edges(n, pairs)


def test_closest_cut_is_minimal_by_enumeration():
    """source_side is a minimum cut and lies inside every other minimum cut's source side."""
    rng = random.Random(11)
    for _ in range(25):
        g = _random_multigraph(rng)
        s, t = rng.sample(range(g.node_count), 2)
        res = max_flow_min_cut(g, _costs(g), {s}, {t})
        others = [v for v in g.nodes if v not in (s, t)]
        sides = [
            frozenset({s, *extra})
            for size in range(len(others) + 1)
            for extra in combinations(others, size)
        ]
        values = {side: g.weight_of(cut_edges(g, side)) for side in sides}
        best = min(values.values())
        assert res.value == best
        assert values[res.source_side] == best
        for side, value in values.items():
            if value == best:
                assert res.source_side <= side


def _cheapest_subgraph_with_paths(g, s, t, amount):
    best = None
    ids = sorted(g.edge_ids)
    for size in range(len(ids) + 1):
        for keep in combinations(ids, size):
            cost = g.weight_of(keep)
            if best is not None and cost >= best:
                continue
            if edge_connectivity(g.restrict(keep), s, t, cutoff=amount) >= amount:
                best = cost
    return best


def test_min_cost_flow_matches_enumeration():
    """Min-cost flow equals the cheapest edge set carrying that many edge-disjoint paths."""
    rng = random.Random(5)
    checked = 0
    while checked < 12:
        g = _random_multigraph(rng, max_edges=9)
        s, t = rng.sample(range(g.node_count), 2)
        amount = rng.randint(1, 3)
        if edge_connectivity(g, s, t) < amount:
            continue
        res = min_cost_flow(g, _costs(g), {e.id: 1 for e in g.edges}, s, t, amount)
        assert res.cost == _cheapest_subgraph_with_paths(g, s, t, amount)
        assert res.cost == g.weight_of(res.support)
        assert edge_connectivity(g.restrict(res.support), s, t) >= amount
        checked += 1
