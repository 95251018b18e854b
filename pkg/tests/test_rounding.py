"""Tests for relsnd.rounding."""

import random
from fractions import Fraction

import pytest

from relsnd import fixtures
from relsnd.errors import InvalidArgumentError
from relsnd.flow import edge_connectivity
from relsnd.graph import Multigraph
from relsnd.instance import kefts_demands
from relsnd.oracle import exact_opt, gen_random, verify_kefts, verify_rsnd
from relsnd.rounding import (
    HALF,
    high_degree_count,
    kefts_feasible,
    kefts_unweighted,
    kefts_weighted,
    snd_jain,
)


def _small_batch(seed, count, weighted, k):
    rng = random.Random(seed)
    return [
        gen_random(
            rng.randint(4, 5), 0.75, (1, 4) if weighted else (1, 1), f"kefts:{k}",
            seed=rng.randrange(1 << 30), weight_denominator=2 if weighted else 1,
        ).graph
        for _ in range(count)
    ]


# --- Feasibility ---

def test_feasible_whole_graph():
    """Every graph is a k-EFTS of itself."""
    for g in (fixtures.k4(), fixtures.ch2(), fixtures.triangles_bridge()):
        assert kefts_feasible(g, 2, g.edge_ids)


def test_triangle_in_k4_infeasible():
    """Dropping node 3's edges breaks the component match."""
    assert not kefts_feasible(fixtures.k4(), 2, {0, 1, 3})


def test_hamiltonian_cycle_in_k4_feasible():
    """The cycle 0-1-3-2-0 survives any single fault."""
    assert kefts_feasible(fixtures.k4(), 2, {0, 4, 5, 1})


def test_feasibility_matches_fault_enumeration():
    """Cut test, partition test and per-pair demands agree on random triples."""
    rng = random.Random(21)
    for _ in range(40):
        k = rng.randint(1, 3)
        g = gen_random(rng.randint(3, 5), 0.7, seed=rng.randrange(1 << 30)).graph
        h = {e.id for e in g.edges if rng.random() < 0.75}
        by_cuts = kefts_feasible(g, k, h)
        assert by_cuts == (verify_kefts(g, h, k) is None)
        assert by_cuts == (verify_rsnd(g, h, kefts_demands(g.node_count, k)) is None)


# --- Weighted ---

def test_weighted_triangle_all_forced():
    """F = E on a triangle at k=2, so no LP is solved."""
    res = kefts_weighted(fixtures.triangle(), 2)
    assert res.edges == {0, 1, 2}
    assert res.trace.records == []
    assert res.trace.lower_bound == 3


def test_weighted_path_k3():
    """Bridges are always kept."""
    assert kefts_weighted(fixtures.path3(), 3).edges == {0, 1}


def test_weighted_k4():
    """K4 at k=2: feasible, within twice the optimum of 4."""
    g = fixtures.k4()
    res = kefts_weighted(g, 2)
    assert kefts_feasible(g, 2, res.edges)
    assert 4 <= len(res.edges) <= 8
    assert res.trace.lower_bound == 4
    assert res.trace.ledger_holds()
    assert all(rec.max_value >= HALF for rec in res.trace.records)


def test_weighted_ratio_random():
    """Output feasible and at most 2·OPT; every vertex has an entry ≥ 1/2."""
    for k in (2, 3):
        for g in _small_batch(31 + k, 6, weighted=True, k=k):
            res = kefts_weighted(g, k)
            assert verify_kefts(g, res.edges, k) is None
            opt, _ = exact_opt(g, kefts_demands(g.node_count, k))
            assert g.weight_of(res.edges) <= 2 * opt
            assert res.trace.lower_bound <= opt
            assert all(rec.max_value >= HALF for rec in res.trace.records)
            assert res.trace.ledger_holds()


def test_weighted_prefers_cheap_edges():
    """A 4-cycle with an expensive chord keeps the cycle."""
    g = Multigraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2, 100)])
    res = kefts_weighted(g, 2)
    assert res.edges == {0, 1, 2, 3}


def test_trace_serializes_fractions_as_strings():
    """Trace dictionaries carry rationals as text."""
    data = kefts_weighted(fixtures.k4(), 2).trace.to_dict()
    assert data["lower_bound"] == "4"
    assert all(isinstance(r["lp_value"], str) for r in data["rounds"])


# --- Unweighted ---

def test_unweighted_triangle_and_star():
    """Fully forced graphs return E."""
    assert kefts_unweighted(fixtures.triangle(), 2).edges == {0, 1, 2}
    assert kefts_unweighted(fixtures.star(), 2).edges == {0, 1, 2}


def test_unweighted_k4():
    """One LP, fractional count within 2·n_h, feasible output."""
    g = fixtures.k4()
    res = kefts_unweighted(g, 2)
    assert kefts_feasible(g, 2, res.edges)
    assert len(res.edges) <= 6
    (rec,) = res.trace.records
    assert rec.fractional <= 2 * high_degree_count(g, 2)


def test_unweighted_ratio_random():
    """|H| ≤ (1 + 4/k)·OPT on random unit-weight graphs."""
    for k in (2, 3):
        for g in _small_batch(41 + k, 6, weighted=False, k=k):
            res = kefts_unweighted(g, k)
            assert kefts_feasible(g, k, res.edges)
            opt, _ = exact_opt(g, kefts_demands(g.node_count, k))
            assert len(res.edges) <= (1 + Fraction(4, k)) * opt


def test_unweighted_rejects_weights():
    """Mixed weights are refused."""
    g = Multigraph.from_edges(3, [(0, 1, 1), (1, 2, 2), (0, 2, 1)])
    with pytest.raises(InvalidArgumentError):
        kefts_unweighted(g, 2)


def test_high_degree_count():
    """n_h counts nodes with degree at least k."""
    assert high_degree_count(fixtures.star(), 3) == 1
    assert high_degree_count(fixtures.star(), 1) == 4


# --- Classical SND ---

def test_snd_triangle():
    """Two disjoint 0–2 paths need the whole triangle."""
    assert snd_jain(fixtures.triangle(), [(0, 2, 2)]).edges == {0, 1, 2}


def test_snd_k4():
    """Demand (0,3,2) in K4: feasible and at most twice the cycle cost 4."""
    g = fixtures.k4()
    res = snd_jain(g, [(0, 3, 2)])
    assert edge_connectivity(g.restrict(res.edges), 0, 3) >= 2
    assert len(res.edges) <= 8


def test_snd_tree_paths():
    """Unit demands on a tree take the tree paths."""
    g = Multigraph.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    assert snd_jain(g, [(0, 2, 1), (2, 4, 1)]).edges == {0, 1, 2, 3}


def test_snd_ignores_trivial_demands():
    """Zero demands and s = t need nothing."""
    assert snd_jain(fixtures.k4(), [(0, 0, 3), (1, 2, 0)]).edges == frozenset()


def test_snd_rejects_impossible_demand():
    """A demand above the graph's connectivity is refused."""
    with pytest.raises(InvalidArgumentError):
        snd_jain(fixtures.path3(), [(0, 2, 2)])
