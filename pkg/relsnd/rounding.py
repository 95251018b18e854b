"""Iterative LP rounding for k-EFTS and classical survivable network design.

Each round solves the residual LP to a vertex with the cutting-plane driver,
commits every edge with x_e ≥ 1/2 and repeats until the committed set is
feasible on its own. Edges at 0 are never deleted: the requirement function
reads cut sizes from the original graph.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from relsnd.cuts import (
    CutRequirement,
    check_snd_demands,
    f_value,
    forced_edges,
    separate_kefts,
    separate_snd,
    snd_requirement,
)
from relsnd.errors import InternalLogicError, InvalidArgumentError
from relsnd.graph import CutSide, Edge, Multigraph
from relsnd.lp import DEFAULT_MAX_ROUNDS, CoveringRow, VertexSolution, cutting_plane_solve

log = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RoundRecord:
    forced_size: int  # |F'| when the round starts
    lp_value: Fraction
    fractional: int
    max_value: Fraction
    promoted: tuple[int, ...]
    promoted_weight: Fraction
    cutting_rounds: int = 0


@dataclass
class RoundingTrace:
    forced_count: int = 0  # |F| before any rounding
    lower_bound: Fraction | None = None  # w(F) + LP(F), a lower bound on OPT
    records: list[RoundRecord] = field(default_factory=list)

    def ledger_holds(self) -> bool:
        """w(promoted_r) ≤ 2 (LP_r - LP_{r+1}) every round, LP after the last being 0."""
        for i, rec in enumerate(self.records):
            nxt = self.records[i + 1].lp_value if i + 1 < len(self.records) else Fraction(0)
            if rec.promoted_weight > 2 * (rec.lp_value - nxt):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "forced_count": self.forced_count,
            "lower_bound": None if self.lower_bound is None else str(self.lower_bound),
            "rounds": [
                {
                    "forced_size": r.forced_size,
                    "lp_value": str(r.lp_value),
                    "fractional": r.fractional,
                    "max_value": str(r.max_value),
                    "promoted": list(r.promoted),
                    "cutting_rounds": r.cutting_rounds,
                }
                for r in self.records
            ],
        }


class RoundingResult(NamedTuple):
    edges: frozenset[int]
    trace: RoundingTrace


def _row(free: Sequence[Edge], side: CutSide, rhs: int) -> CoveringRow:
    index = {e.id: i for i, e in enumerate(free)}
    return CoveringRow(frozenset(index[eid] for eid in side.boundary if eid in index), Fraction(rhs))


def _solve_residual(
    free: Sequence[Edge],
    separate: Callable[[dict[int, Fraction]], CutSide | None],
    requirement: Callable[[CutSide], int],
    seeds: Iterable[CutSide],
    max_rounds: int,
) -> VertexSolution:
    """Vertex of the residual LP over the free edges."""
    def oracle(values: tuple[Fraction, ...]) -> CoveringRow | None:
        side = separate({e.id: v for e, v in zip(free, values)})
        return None if side is None else _row(free, side, requirement(side))

    initial = [r for r in (_row(free, s, requirement(s)) for s in seeds) if r.rhs > 0]
    return cutting_plane_solve(
        len(free), [e.weight for e in free], oracle, initial_rows=initial, max_rounds=max_rounds
    )


def _singletons(g: Multigraph, nodes: Iterable[int]) -> list[CutSide]:
    return [CutSide.of(g, {v}) for v in nodes] if g.node_count > 1 else []


def _record(forced_size: int, sol: VertexSolution, promoted: Sequence[int], g: Multigraph) -> RoundRecord:
    values = sol.values
    return RoundRecord(
        forced_size=forced_size,
        lp_value=sol.objective_value,
        fractional=sum(1 for v in values if 0 < v < 1),
        max_value=max(values, default=Fraction(0)),
        promoted=tuple(promoted),
        promoted_weight=g.weight_of(promoted),
        cutting_rounds=sol.rounds,
    )


def kefts_feasible(g: Multigraph, k: int, h: Iterable[int], forced: Iterable[int] | None = None) -> bool:
    """H is a k-EFTS of G iff it contains F and no cut row is violated at x ≡ 0."""
    h = frozenset(h)
    forced = forced_edges(g, k).edges if forced is None else frozenset(forced)
    if not forced <= h:
        return False
    return separate_kefts(CutRequirement(g, k, h), {}) is None


def kefts_weighted(g: Multigraph, k: int, max_rounds: int = DEFAULT_MAX_ROUNDS) -> RoundingResult:
    """2-approximate minimum-weight k-EFTS by iterative rounding."""
    req = CutRequirement.initial(g, k)
    forced = req.forced_superset
    trace = RoundingTrace(forced_count=len(forced))
    while not kefts_feasible(g, k, req.forced_superset, forced=forced):
        free = req.free_edges
        current = req
        sol = _solve_residual(
            free,
            lambda x: separate_kefts(current, x),
            lambda side: f_value(current, side),
            _singletons(g, g.nodes),
            max_rounds,
        )
        if trace.lower_bound is None:
            trace.lower_bound = g.weight_of(forced) + sol.objective_value
        promoted = [e.id for e, v in zip(free, sol.values) if v >= HALF]
        if not promoted:
            raise InternalLogicError(
                f"vertex with max x_e = {max(sol.values, default=0)} < 1/2 over {len(free)} free edges"
            )
        trace.records.append(_record(len(req.forced_superset), sol, promoted, g))
        log.info(
            "round %d: LP %s, %d fractional, promoting %d edges",
            len(trace.records), sol.objective_value, trace.records[-1].fractional, len(promoted),
        )
        req = req.with_forced(promoted)
    if trace.lower_bound is None:
        trace.lower_bound = g.weight_of(forced)
    return RoundingResult(req.forced_superset, trace)


def high_degree_count(g: Multigraph, k: int) -> int:
    """n_h: nodes of degree at least k."""
    return sum(1 for v in g.nodes if g.degree(v) >= k)


def kefts_unweighted(g: Multigraph, k: int, max_rounds: int = DEFAULT_MAX_ROUNDS) -> RoundingResult:
    """(1 + 4/k)-approximate k-EFTS for uniform weights: round the first vertex up."""
    if not g.is_uniform():
        raise InvalidArgumentError("kefts_unweighted needs all edge weights equal")
    req = CutRequirement.initial(g, k)
    forced = req.forced_superset
    trace = RoundingTrace(forced_count=len(forced))
    if kefts_feasible(g, k, forced, forced=forced):
        trace.lower_bound = g.weight_of(forced)
        return RoundingResult(forced, trace)

    free = req.free_edges
    sol = _solve_residual(
        free,
        lambda x: separate_kefts(req, x),
        lambda side: f_value(req, side),
        _singletons(g, g.nodes),
        max_rounds,
    )
    trace.lower_bound = g.weight_of(forced) + sol.objective_value
    support = [e.id for e, v in zip(free, sol.values) if v > 0]
    trace.records.append(_record(len(forced), sol, support, g))
    n_h = high_degree_count(g, k)
    fractional = trace.records[-1].fractional
    if fractional > 2 * n_h:
        raise InternalLogicError(f"{fractional} fractional variables exceed 2·n_h = {2 * n_h}")
    log.info("unweighted: LP %s, %d fractional, n_h = %d", sol.objective_value, fractional, n_h)
    return RoundingResult(forced | frozenset(support), trace)


def snd_jain(
    g: Multigraph,
    demands: Iterable[tuple[int, int, int]],
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> RoundingResult:
    """Iterative rounding for edge-connectivity demands (s, t, k)."""
    demands = [tuple(d) for d in demands if d[0] != d[1] and d[2] > 0]
    check_snd_demands(g, demands)
    trace = RoundingTrace()
    chosen: frozenset[int] = frozenset()
    endpoints = sorted({v for a, b, _ in demands for v in (a, b)})
    while separate_snd(g, demands, chosen, {}, checked=True) is not None:
        committed = chosen
        free = [e for e in g.edges if e.id not in committed]
        sol = _solve_residual(
            free,
            lambda x: separate_snd(g, demands, committed, x, checked=True),
            lambda side: snd_requirement(demands, side.nodes) - len(side.boundary & committed),
            _singletons(g, endpoints),
            max_rounds,
        )
        if trace.lower_bound is None:
            trace.lower_bound = sol.objective_value
        promoted = [e.id for e, v in zip(free, sol.values) if v >= HALF]
        if not promoted:
            raise InternalLogicError(f"vertex with max x_e = {max(sol.values, default=0)} < 1/2")
        trace.records.append(_record(len(committed), sol, promoted, g))
        log.debug("snd round %d: LP %s, promoting %s", len(trace.records), sol.objective_value, promoted)
        chosen = committed | frozenset(promoted)
    if trace.lower_bound is None:
        trace.lower_bound = Fraction(0)
    return RoundingResult(chosen, trace)
