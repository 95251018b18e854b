"""Tests for relsnd.reduction."""

import pytest

from relsnd import fixtures
from relsnd.errors import InvalidArgumentError
from relsnd.graph import Multigraph
from relsnd.oracle import exact_opt
from relsnd.reduction import DemandFunction, lift_demands, solve_via_components, terminals_and_pt


def _exact_solver(sub, demands):
    return exact_opt(sub, demands)[1]


def _pendant_triangle():
    """Triangle {0,1,2} with pendant bridges (0,3) and (1,4)."""
    return Multigraph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)])


def test_demand_function_symmetric_max():
    """Repeated pairs keep the larger demand, in either orientation."""
    r = DemandFunction.from_demands([(0, 4, 1), (4, 0, 2), (1, 1, 5)])
    assert r[0, 4] == r[4, 0] == 2
    assert r[1, 1] == 0
    assert list(r.items()) == [(0, 4, 2)]
    assert r.max_value == 2


def test_demand_function_rejects_negative():
    """Demands are nonnegative."""
    with pytest.raises(InvalidArgumentError):
        DemandFunction().raise_to(0, 1, -1)


def test_terminals_two_triangles():
    """The bridge endpoints are the terminals; both see the cross pair."""
    terminals, pt = terminals_and_pt(fixtures.triangles_bridge())
    assert terminals == {2, 3}
    assert (0, 4) in pt[2]
    assert (0, 4) in pt[3]
    assert (0, 1) not in pt[2]
    assert len(pt[2].enumerate()) == 9


def test_terminals_bridgeless():
    """No bridges, no terminals."""
    terminals, pt = terminals_and_pt(fixtures.k4())
    assert terminals == frozenset()
    assert pt == {}


def test_terminals_path():
    """Every path node touches a bridge; (0,2) crosses bridges at 1."""
    terminals, pt = terminals_and_pt(fixtures.path3())
    assert terminals == {0, 1, 2}
    assert (0, 2) in pt[1]


def test_lift_two_triangles():
    """r(0,4)=2 lifts to (0,2) and (3,4) at 2 and a unit cross demand."""
    reduced = lift_demands(fixtures.triangles_bridge(), DemandFunction.from_demands([(0, 4, 2)]))
    assert reduced.lifted[0, 2] == 2
    assert reduced.lifted[3, 4] == 2
    assert reduced.lifted[0, 4] == 1
    assert reduced.cross_component_ones == {frozenset({0, 4})}
    assert reduced.component_demands(0) == [(0, 2, 2)]
    assert reduced.component_demands(1) == [(3, 4, 2)]


def test_lift_within_component_unchanged():
    """Inside a bridgeless graph the demands pass through."""
    r = DemandFunction.from_demands([(0, 3, 3), (1, 2, 1)])
    reduced = lift_demands(fixtures.k4(), r)
    assert reduced.lifted.values == r.values
    assert reduced.cross_component_ones == frozenset()


def test_lift_terminals_same_component():
    """A demand between two terminals of one component stays as it is."""
    reduced = lift_demands(_pendant_triangle(), DemandFunction.from_demands([(0, 1, 2)]))
    assert list(reduced.lifted.items()) == [(0, 1, 2)]


def test_lift_through_middle_component():
    """A path through the triangle demands its entry-exit pair."""
    reduced = lift_demands(_pendant_triangle(), DemandFunction.from_demands([(3, 4, 2)]))
    assert reduced.lifted[0, 1] == 2
    assert reduced.lifted[3, 4] == 1


def test_lift_skips_disconnected_pairs():
    """Pairs in different connected components need nothing."""
    g = Multigraph.from_edges(4, [(0, 1), (2, 3)])
    reduced = lift_demands(g, DemandFunction.from_demands([(0, 3, 2)]))
    assert reduced.lifted.values == {}


def test_solve_two_triangles_exact():
    """Both triangles in full plus the bridge: seven edges."""
    g = fixtures.triangles_bridge()
    r = DemandFunction.from_demands([(0, 4, 2)])
    edges = solve_via_components(g, r, _exact_solver)
    assert edges == g.edge_ids
    assert exact_opt(g, [(0, 4, 2)])[1] == edges


def test_solve_zero_demand():
    """No demand, no edges."""
    calls = []
    result = solve_via_components(fixtures.triangles_bridge(), DemandFunction(), lambda g, d: calls.append(d))
    assert result == frozenset()
    assert calls == []


def test_solve_single_component():
    """A demand inside one component only calls the solver there."""
    g = fixtures.triangles_bridge()
    seen = []

    def solver(sub, demands):
        seen.append((sub.node_count, demands))
        return _exact_solver(sub, demands)

    edges = solve_via_components(g, DemandFunction.from_demands([(3, 5, 1)]), solver)
    assert seen == [(3, [(0, 2, 1)])]
    assert edges <= {3, 4, 5}
    assert 6 not in edges
