"""Named graphs shared by the tests, the CLI and the bench suites.

Edge ids follow the order the pairs are listed in, so the ids quoted in
docstrings are stable.
"""

from __future__ import annotations

from collections.abc import Callable
from itertools import combinations

from relsnd.cuts import AbstractCutProfile
from relsnd.graph import Multigraph

# k at which both cut profiles break weak supermodularity
PROFILE_K = 100


def _unit(n: int, pairs) -> Multigraph:
    return Multigraph.from_edges(n, [(u, v, 1) for u, v in pairs])


def triangle() -> Multigraph:
    """0:(0,1) 1:(0,2) 2:(1,2)."""
    return _unit(3, [(0, 1), (0, 2), (1, 2)])


def path3() -> Multigraph:
    return _unit(3, [(0, 1), (1, 2)])


def star() -> Multigraph:
    """K_{1,3} with centre 0."""
    return _unit(4, [(0, 1), (0, 2), (0, 3)])


def k4() -> Multigraph:
    """0:(0,1) 1:(0,2) 2:(0,3) 3:(1,2) 4:(1,3) 5:(2,3)."""
    return _unit(4, combinations(range(4), 2))


def cycle4() -> Multigraph:
    """0:(0,1) 1:(1,2) 2:(2,3) 3:(0,3)."""
    return _unit(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def ch2() -> Multigraph:
    """Two K4s on 0..3 and 4..7 joined by edge 12 = (2,4) and edge 13 = (3,5)."""
    pairs = list(combinations(range(4), 2)) + list(combinations(range(4, 8), 2))
    return _unit(8, pairs + [(2, 4), (3, 5)])


def triangles_bridge() -> Multigraph:
    """Triangles {0,1,2} and {3,4,5}; edge 6 = (2,3) is the bridge."""
    return _unit(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


def triangles_double() -> Multigraph:
    """Triangles {0,1,2} and {3,4,5} joined by edge 6 = (1,3) and edge 7 = (2,4)."""
    return _unit(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (1, 3), (2, 4)])


GRAPHS: dict[str, Callable[[], Multigraph]] = {
    "triangle": triangle,
    "path3": path3,
    "star": star,
    "k4": k4,
    "cycle4": cycle4,
    "ch2": ch2,
    "triangles-bridge": triangles_bridge,
    "triangles-double": triangles_double,
}


def first_profile() -> AbstractCutProfile:
    """f_F fails both uncrossing inequalities here; A is an empty cut."""
    return AbstractCutProfile(
        only_a_out=49, only_b_out=105, both_out=3, only_a_only_b=0, only_a_both=2, only_b_both=49
    )


def second_profile() -> AbstractCutProfile:
    """Plain min(k, |δ|) fails both inequalities: 200 > 190 and 200 > 155."""
    return AbstractCutProfile(
        only_a_out=95, only_b_out=95, both_out=55, only_a_only_b=0, only_a_both=0, only_b_both=0
    )
