"""Tests for relsnd.solver."""

import random
from fractions import Fraction

import pytest

from relsnd import fixtures
from relsnd.errors import InvalidArgumentError
from relsnd.instance import Demand, Instance
from relsnd.oracle import exact_opt, gen_random, verify_rsnd
from relsnd.solver import build_registry, component_subinstances, rsnd2, rsnd3_single


# --- rsnd2 ---

def test_rsnd2_triangle():
    """Demand (0,2,2) keeps the whole triangle."""
    assert rsnd2(fixtures.triangle(), [(0, 2, 2)]) == {0, 1, 2}


def test_rsnd2_two_triangles_ledger():
    """Both triangles plus the bridge; one SND entry per component."""
    g = fixtures.triangles_bridge()
    ledger = []
    edges = rsnd2(g, [(0, 4, 2)], ledger=ledger)
    assert edges == g.edge_ids
    assert verify_rsnd(g, edges, [(0, 4, 2)]) is None
    assert [c.subroutine for c in ledger] == ["snd", "snd"]
    assert sum(c.cost for c in ledger) == 6


def test_rsnd2_rejects_demand_three():
    """Demands above 2 belong to another solver."""
    with pytest.raises(InvalidArgumentError):
        rsnd2(fixtures.k4(), [(0, 3, 3)])


def test_rsnd2_random_ratio():
    """Feasible and at most 2·OPT on random pair demands."""
    rng = random.Random(37)
    for _ in range(6):
        inst = gen_random(rng.randint(4, 5), 0.7, (1, 3), "pairs:3:2", seed=rng.randrange(1 << 30))
        edges = rsnd2(inst.graph, inst.demands)
        assert verify_rsnd(inst.graph, edges, inst.demands) is None
        opt, _ = exact_opt(inst.graph, inst.demands)
        assert inst.graph.weight_of(edges) <= 2 * opt


# --- rsnd3_single ---

def test_rsnd3_k4_is_min_cost_flow():
    """No 2-chain in K4: the answer is the 3-flow support of cost 5."""
    g = fixtures.k4()
    ledger = []
    edges = rsnd3_single(g, 0, 3, ledger=ledger)
    assert edges == {0, 1, 2, 4, 5}
    assert [(c.subroutine, c.cost) for c in ledger] == [("flow", 5)]


def test_rsnd3_ch2():
    """CH2 keeps both separator edges and is feasible."""
    g = fixtures.ch2()
    ledger = []
    edges = rsnd3_single(g, 0, 7, ledger=ledger)
    assert {12, 13} <= edges
    assert verify_rsnd(g, edges, [(0, 7, 3)]) is None
    assert ledger[0].subroutine == "separators"
    assert ledger[0].cost == 2
    assert {c.component for c in ledger[1:]} == {"component 0/R0", "component 0/R1"}


def test_rsnd3_two_triangles_double():
    """Every chain component is covered; the output is feasible."""
    g = fixtures.triangles_double()
    edges = rsnd3_single(g, 0, 5)
    assert verify_rsnd(g, edges, [(0, 5, 3)]) is None


def test_rsnd3_rejects_equal_endpoints():
    """s and t must differ."""
    with pytest.raises(InvalidArgumentError):
        rsnd3_single(fixtures.k4(), 2, 2)


def test_rsnd3_random_planted():
    """Feasible and within 27/4 of OPT on planted 2-cut instances."""
    rng = random.Random(41)
    for _ in range(5):
        inst = gen_random(rng.randint(4, 6), 0.4, (1, 3), "single:3", seed=rng.randrange(1 << 30), plant_two_cut=True)
        s, t, _ = inst.demands[0]
        edges = rsnd3_single(inst.graph, s, t)
        assert verify_rsnd(inst.graph, edges, inst.demands) is None
        opt, _ = exact_opt(inst.graph, inst.demands)
        assert inst.graph.weight_of(edges) <= Fraction(27, 4) * opt


# --- Component subinstances ---

def test_component_subinstances_disjoint_boundaries():
    """K4 with boundaries {0} and {3}: a flow problem, two demand-2 problems, one pair."""
    sub = component_subinstances(fixtures.k4(), {0}, {3})
    assert sub.flow is not None
    assert sub.flow.source != sub.flow.sink
    assert len(sub.left_demands.demands) == 1
    assert len(sub.right_demands.demands) == 1
    assert sub.steiner.pairs == ((0, 3),)


def test_component_subinstances_shared_boundary():
    """Equal boundaries leave nothing but an empty Steiner instance."""
    sub = component_subinstances(fixtures.triangle(), {0}, {0})
    assert sub.flow is None
    assert sub.left_demands.demands == ()
    assert sub.right_demands.demands == ()
    assert sub.steiner.pairs == ()


def test_component_subinstances_rejects_empty_boundary():
    """Both boundaries must be nonempty."""
    with pytest.raises(InvalidArgumentError):
        component_subinstances(fixtures.k4(), set(), {3})


# --- Registry ---

def test_registry_tags_and_guarantees():
    """Four solvers with their approximation factors."""
    registry = build_registry()
    assert set(registry) == {"kefts-weighted", "kefts-unweighted", "rsnd2", "rsnd3-single"}
    assert registry["kefts-weighted"].guarantee(5) == 2
    assert registry["kefts-unweighted"].guarantee(4) == 2
    assert registry["rsnd2"].guarantee(2) == 2
    assert registry["rsnd3-single"].guarantee(3) == Fraction(27, 4)
    assert registry["kefts-weighted"].uses_k
    assert not registry["rsnd2"].uses_k


def test_registry_kefts_needs_k():
    """k-EFTS handlers refuse a missing k."""
    inst = Instance(fixtures.k4())
    with pytest.raises(InvalidArgumentError):
        build_registry()["kefts-weighted"].handler(inst, None, 100)


def test_registry_kefts_outcome_demands():
    """The outcome carries the all-pairs demands it must satisfy."""
    outcome = build_registry()["kefts-weighted"].handler(Instance(fixtures.k4()), 2, 1000)
    assert len(outcome.demands) == 6
    assert all(d.k == 2 for d in outcome.demands)
    assert "lower_bound" in outcome.trace


def test_registry_rsnd3_needs_single_demand():
    """Two demands, or one demand of another size, are refused."""
    handler = build_registry()["rsnd3-single"].handler
    two = Instance(fixtures.k4(), (Demand(0, 3, 3), Demand(1, 2, 3)))
    with pytest.raises(InvalidArgumentError, match="single demand k=3 required"):
        handler(two, None, 100)
    with pytest.raises(InvalidArgumentError):
        handler(Instance(fixtures.k4(), (Demand(0, 3, 2),)), None, 100)


def test_registry_rsnd2_ledger_trace():
    """The rsnd2 trace lists subroutine costs as strings."""
    outcome = build_registry()["rsnd2"].handler(Instance(fixtures.triangle(), (Demand(0, 2, 2),)), None, 100)
    assert outcome.trace["ledger"] == [{"component": "component 0", "subroutine": "snd", "cost": "3"}]
