"""Tests for relsnd.steiner."""

import random
from fractions import Fraction

import pytest

from relsnd import fixtures
from relsnd.errors import InvalidArgumentError, ResourceLimitError
from relsnd.graph import Multigraph, component_labels
from relsnd.oracle import gen_random
from relsnd.steiner import SteinerInstance, connects_pairs, steiner_forest, steiner_forest_opt


def _is_forest(g, edges):
    components = len(set(component_labels(g.restrict(edges))))
    return len(edges) == g.node_count - components


def test_path_pair():
    """The only 0–2 path costs 2."""
    g = fixtures.path3()
    edges = steiner_forest(SteinerInstance(g, ((0, 2),)))
    assert edges == {0, 1}
    assert g.weight_of(edges) == 2


def test_path_two_pairs():
    """On the path 0-1-2-3 pairs (0,1) and (2,3) buy the two end edges."""
    g = Multigraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    edges = steiner_forest(SteinerInstance(g, ((0, 1), (2, 3))))
    assert edges == {0, 2}
    assert g.weight_of(edges) == 2


def test_k4_three_pairs():
    """Three pairs in K4 stay within (2 - 1/3) times the spanning-tree optimum."""
    g = fixtures.k4()
    inst = SteinerInstance(g, ((0, 1), (1, 2), (2, 3)))
    edges = steiner_forest(inst)
    assert connects_pairs(g, edges, inst.pairs)
    opt, _ = steiner_forest_opt(inst)
    assert opt == 3
    assert g.weight_of(edges) <= (2 - Fraction(1, 3)) * opt


def test_pruning_drops_unneeded_edges():
    """Pendant edges bought by the moats are pruned back out."""
    g = Multigraph.from_edges(4, [(0, 1, 3), (0, 2, 1), (1, 3, 1)])
    assert steiner_forest(SteinerInstance(g, ((0, 1),))) == {0}


def test_no_pairs():
    """No pairs, or only pairs with equal ends, buy nothing."""
    g = fixtures.k4()
    assert steiner_forest(SteinerInstance(g, ())) == frozenset()
    assert steiner_forest(SteinerInstance(g, ((2, 2),))) == frozenset()


def test_disconnected_pair_rejected():
    """A pair with no path is refused."""
    g = Multigraph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(InvalidArgumentError):
        steiner_forest(SteinerInstance(g, ((0, 3),)))


def test_pair_outside_graph_rejected():
    """Pair nodes must exist."""
    with pytest.raises(InvalidArgumentError):
        SteinerInstance(fixtures.triangle(), ((0, 5),))


def test_opt_edge_limit():
    """Enumeration refuses graphs above the edge limit."""
    with pytest.raises(ResourceLimitError):
        steiner_forest_opt(SteinerInstance(fixtures.ch2(), ((0, 7),)), max_edges=10)


def test_random_against_enumeration():
    """Feasible and within (2 - 1/k)·OPT for k pairs on random weighted graphs."""
    rng = random.Random(13)
    for _ in range(25):
        g = gen_random(rng.randint(4, 6), 0.6, (1, 5), seed=rng.randrange(1 << 30)).graph
        if len(g.edges) > 12:
            continue
        labels = component_labels(g)
        candidates = [(a, b) for a in g.nodes for b in g.nodes if a < b and labels[a] == labels[b]]
        if not candidates:
            continue
        pairs = tuple(rng.sample(candidates, min(len(candidates), rng.randint(1, 3))))
        inst = SteinerInstance(g, pairs)
        edges = steiner_forest(inst)
        assert connects_pairs(g, edges, pairs)
        assert _is_forest(g, edges)
        opt, _ = steiner_forest_opt(inst)
        assert g.weight_of(edges) <= (2 - Fraction(1, len(pairs))) * opt
        assert g.weight_of(edges) <= 2 * opt


def test_output_is_a_forest():
    """Moat growing only joins distinct components, so no cycle is ever bought."""
    rng = random.Random(21)
    for _ in range(30):
        g = gen_random(rng.randint(4, 8), 0.7, (1, 3), seed=rng.randrange(1 << 30)).graph
        labels = component_labels(g)
        candidates = [(a, b) for a in g.nodes for b in g.nodes if a < b and labels[a] == labels[b]]
        if not candidates:
            continue
        pairs = tuple(rng.sample(candidates, min(len(candidates), rng.randint(1, 5))))
        edges = steiner_forest(SteinerInstance(g, pairs))
        assert _is_forest(g, edges)
        assert connects_pairs(g, edges, pairs)
