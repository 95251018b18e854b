"""Acceptance suites behind `relsnd bench`.

Each suite draws a deterministic batch from a seed and checks one property
against a brute-force reference. Results are rows of (label, cases,
failures) that the CLI renders as a table.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

from relsnd import fixtures
from relsnd.chain import build_chain, check_structure, closest_important_separator_2, is_important_separator
from relsnd.config import Config
from relsnd.cuts import (
    NAMED_SETS,
    CutRequirement,
    brute_force_violated_row,
    f_value,
    forced_edges,
    lws_check,
    realize_profile,
    separate_kefts,
)
from relsnd.errors import ResourceLimitError
from relsnd.flow import min_cost_flow
from relsnd.graph import component_labels
from relsnd.instance import Instance, kefts_demands
from relsnd.oracle import HarnessReport, gen_random, ratio_harness, verify_kefts, verify_rsnd
from relsnd.rounding import HALF, kefts_feasible, kefts_weighted
from relsnd.solver import rsnd3_single
from relsnd.steiner import SteinerInstance, steiner_forest, steiner_forest_opt

log = logging.getLogger(__name__)


@dataclass
class SuiteRow:
    label: str
    cases: int = 0
    failures: int = 0
    skipped: int = 0
    max_ratio: Fraction | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, note: str) -> None:
        self.failures += 1
        self.notes.append(note)


@dataclass
class SuiteResult:
    name: str
    rows: list[SuiteRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def _from_harness(label: str, report: HarnessReport) -> SuiteRow:
    row = SuiteRow(label, cases=len(report.rows), skipped=len(report.skipped), max_ratio=report.max_ratio)
    for r in report.rows:
        if not r.feasible:
            row.fail(f"instance {r.index}: infeasible output")
    for i in report.guarantee_violations:
        row.fail(f"instance {i}: ratio above guarantee")
    return row


def _kefts_batch(count: int, seed: int, k: int, weighted: bool) -> list[Instance]:
    rng = random.Random(seed)
    weights = (1, 5) if weighted else (1, 1)
    denominator = 2 if weighted else 1
    return [
        gen_random(
            rng.randint(4, 6), 0.7, weights, f"kefts:{k}",
            seed=rng.randrange(1 << 30), weight_denominator=denominator,
        )
        for _ in range(count)
    ]


def _rsnd2_batch(count: int, seed: int) -> list[Instance]:
    rng = random.Random(seed)
    return [
        gen_random(rng.randint(4, 6), 0.6, (1, 4), "pairs:3:2", seed=rng.randrange(1 << 30))
        for _ in range(count)
    ]


def _planted_batch(count: int, seed: int) -> list[Instance]:
    rng = random.Random(seed)
    return [
        gen_random(
            rng.randint(4, 8), 0.4, (1, 4), "single:3", seed=rng.randrange(1 << 30), plant_two_cut=True
        )
        for _ in range(count)
    ]


# --- Suites ---

def suite_kefts_weighted(cfg: Config, count: int, seed: int) -> SuiteResult:
    result = SuiteResult("kefts-weighted")
    for k in (2, 3):
        batch = _kefts_batch(count, seed + k, k, weighted=True)
        report = ratio_harness("kefts-weighted", batch, k=k, **_harness_args(cfg))
        row = _from_harness(f"ratio k={k}", report)
        result.rows.append(row)
        semi = SuiteRow(f"semi-integrality k={k}")
        for i, inst in enumerate(batch):
            for rec in kefts_weighted(inst.graph, k, cfg.cutting_plane_max_rounds).trace.records:
                semi.cases += 1
                if rec.max_value < HALF:
                    semi.fail(f"instance {i}: vertex max {rec.max_value}")
        result.rows.append(semi)
    return result


def suite_kefts_unweighted(cfg: Config, count: int, seed: int) -> SuiteResult:
    result = SuiteResult("kefts-unweighted")
    for k in (2, 3):
        batch = _kefts_batch(count, seed + k, k, weighted=False)
        report = ratio_harness("kefts-unweighted", batch, k=k, **_harness_args(cfg))
        result.rows.append(_from_harness(f"ratio k={k}", report))
    return result


def suite_rsnd2(cfg: Config, count: int, seed: int) -> SuiteResult:
    report = ratio_harness("rsnd2", _rsnd2_batch(count, seed), **_harness_args(cfg))
    return SuiteResult("rsnd2", [_from_harness("ratio", report)])


def suite_rsnd3(cfg: Config, count: int, seed: int) -> SuiteResult:
    report = ratio_harness("rsnd3-single", _planted_batch(count, seed), **_harness_args(cfg))
    flows = SuiteRow("3-connected pairs match min-cost flow")
    rng = random.Random(seed)
    for i in range(count):
        inst = gen_random(rng.randint(4, 6), 1.0, (1, 6), "single:3", seed=rng.randrange(1 << 30))
        g = inst.graph
        s, t, _ = inst.demands[0]
        flows.cases += 1
        costs, ones = {e.id: e.weight for e in g.edges}, {e.id: 1 for e in g.edges}
        expected = min_cost_flow(g, costs, ones, s, t, 3).cost
        got = g.weight_of(rsnd3_single(g, s, t, max_rounds=cfg.cutting_plane_max_rounds))
        if got != expected:
            flows.fail(f"instance {i}: cost {got}, min-cost 3-flow {expected}")
    return SuiteResult("rsnd3", [_from_harness("planted ratio", report), flows])


def suite_ratios(cfg: Config, count: int, seed: int) -> SuiteResult:
    args = _harness_args(cfg)
    runs = [
        ("kefts-weighted k=2", "kefts-weighted", _kefts_batch(count, seed, 2, True), 2),
        ("kefts-unweighted k=2", "kefts-unweighted", _kefts_batch(count, seed, 2, False), 2),
        ("rsnd2", "rsnd2", _rsnd2_batch(count, seed), None),
        ("rsnd3-single", "rsnd3-single", _planted_batch(count, seed), None),
    ]
    rows = [_from_harness(label, ratio_harness(tag, batch, k=k, **args)) for label, tag, batch, k in runs]
    return SuiteResult("ratios", rows)


def suite_steiner(cfg: Config, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    row = SuiteRow("moat growing vs enumeration")
    while row.cases + row.skipped < count:
        inst = gen_random(rng.randint(4, 7), 0.5, (1, 5), "kefts:1", seed=rng.randrange(1 << 30))
        g = inst.graph
        labels = component_labels(g)
        candidates = [(u, v) for u in g.nodes for v in g.nodes if u < v and labels[u] == labels[v]]
        if not candidates:
            continue
        pairs = tuple(rng.sample(candidates, min(len(candidates), rng.randint(1, 4))))
        sti = SteinerInstance(g, pairs)
        try:
            opt, _ = steiner_forest_opt(sti)
        except ResourceLimitError:
            row.skipped += 1
            continue
        cost = g.weight_of(steiner_forest(sti))
        row.cases += 1
        bound = (2 - Fraction(1, len(pairs))) * opt
        if cost > bound:
            row.fail(f"cost {cost} above {bound}")
        if opt:
            row.max_ratio = max(row.max_ratio or Fraction(0), cost / opt)
    return SuiteResult("steiner", [row])


def suite_separators(cfg: Config, count: int, seed: int) -> SuiteResult:
    row = SuiteRow("closest size-2 separator is important")
    chains = SuiteRow("planted cut yields a chain")
    for i, inst in enumerate(_planted_batch(count, seed)):
        g = inst.graph
        s, t, _ = inst.demands[0]
        row.cases += 1
        found = closest_important_separator_2(g, {s}, t)
        if found is None:
            row.fail(f"instance {i}: no separator")
        elif not is_important_separator(g, {s}, t, found[0]):
            row.fail(f"instance {i}: separator {sorted(found[0])} not important")
        chains.cases += 1
        chain = build_chain(g, s, t)
        if chain is None or chain.p < 1:
            chains.fail(f"instance {i}: no chain")
    return SuiteResult("separators", [row, chains])


def suite_lws(cfg: Config, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    row = SuiteRow("f_F' locally weakly supermodular")
    for i in range(count):
        k = rng.choice((2, 3))
        inst = gen_random(rng.randint(3, 7), 0.6, seed=rng.randrange(1 << 30), demand_spec=f"kefts:{k}")
        g = inst.graph
        forced = forced_edges(g, k).edges
        extra = {e.id for e in g.edges if rng.random() < 0.3}
        row.cases += 1
        pair = lws_check(CutRequirement(g, k, forced | extra), max_nodes=cfg.lws_max_nodes)
        if pair is not None:
            row.fail(f"instance {i}: A={sorted(pair[0])} B={sorted(pair[1])}")
    return SuiteResult("lws", [row])


def suite_oracle_completeness(cfg: Config, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    row = SuiteRow("max-flow separation vs cut enumeration")
    for i in range(count):
        k = rng.choice((2, 3))
        g = gen_random(rng.randint(3, 7), 0.6, seed=rng.randrange(1 << 30), demand_spec=f"kefts:{k}").graph
        forced = forced_edges(g, k).edges
        req = CutRequirement(g, k, forced | {e.id for e in g.edges if rng.random() < 0.2})
        x = {e.id: Fraction(rng.randint(0, 4), 4) for e in req.free_edges}
        row.cases += 1
        fast = separate_kefts(req, x)
        slow = brute_force_violated_row(req, x)
        if (fast is None) != (slow is None):
            row.fail(f"instance {i}: oracle {'missed' if fast is None else 'invented'} a violated row")
        elif fast is not None:
            lhs = sum((x[e] for e in fast.boundary - req.forced_superset), Fraction(0))
            if lhs >= f_value(req, fast):
                row.fail(f"instance {i}: returned row is satisfied")
    return SuiteResult("oracle-completeness", [row])


def suite_feasibility_equivalence(cfg: Config, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    row = SuiteRow("cut test vs fault enumeration")
    for i in range(count):
        k = rng.randint(1, 3)
        g = gen_random(rng.randint(3, 6), 0.7, seed=rng.randrange(1 << 30), demand_spec=f"kefts:{k}").graph
        h = {e.id for e in g.edges if rng.random() < 0.75}
        row.cases += 1
        by_cuts = kefts_feasible(g, k, h)
        by_partition = verify_kefts(g, h, k, budget=cfg.verify_budget) is None
        by_demands = verify_rsnd(g, h, kefts_demands(g.node_count, k), budget=cfg.verify_budget) is None
        if not by_cuts == by_partition == by_demands:
            row.fail(f"instance {i}: cuts {by_cuts}, partition {by_partition}, demands {by_demands}")
    return SuiteResult("feasibility-equivalence", [row])


def suite_structure(cfg: Config, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    row = SuiteRow("structure conditions vs fault enumeration")
    for i, inst in enumerate(_planted_batch(count, seed)):
        g = inst.graph
        s, t, _ = inst.demands[0]
        chain = build_chain(g, s, t)
        if chain is None:
            row.skipped += 1
            continue
        candidates = [frozenset(g.edge_ids), rsnd3_single(g, s, t, max_rounds=cfg.cutting_plane_max_rounds)]
        for _ in range(4):
            candidates.append(frozenset(e.id for e in g.edges if rng.random() < 0.8) | chain.separator_edges)
        for h in candidates:
            row.cases += 1
            by_structure = check_structure(g, h, chain).ok
            by_faults = verify_rsnd(g, h, inst.demands, budget=cfg.verify_budget) is None
            if by_structure != by_faults:
                row.fail(f"instance {i}: structure {by_structure}, faults {by_faults} for {sorted(h)}")
    return SuiteResult("structure", [row])


def suite_profiles(cfg: Config, count: int, seed: int) -> SuiteResult:
    """The cut-profile counterexamples, abstract and realized as multigraphs."""
    k = fixtures.PROFILE_K
    first, second = fixtures.first_profile(), fixtures.second_profile()
    abstract = SuiteRow("abstract profiles break weak supermodularity", cases=2)
    forced_report = first.report(k)
    if forced_report.weakly_supermodular or not forced_report.locally_weakly_supermodular:
        abstract.fail(f"f_F profile values {forced_report.values}")
    if second.report(k, forced=False).weakly_supermodular:
        abstract.fail("plain min(k, |δ|) profile is weakly supermodular")

    realized = SuiteRow("realized forced set and f values match")
    for region_size in (1, 2):
        real = realize_profile(first, k, region_size=region_size)
        req = CutRequirement.initial(real.graph, k)
        realized.cases += 1
        if req.forced_superset != real.forced:
            realized.fail(f"region size {region_size}: forced_edges differs from the profile's forced pairs")
            continue
        values = {name: f_value(req, real.node_set(name)) for name in NAMED_SETS}
        if values != forced_report.values:
            realized.fail(f"region size {region_size}: f values {values}")
    return SuiteResult("profiles", [abstract, realized])


def _harness_args(cfg: Config) -> dict:
    return {
        "max_rounds": cfg.cutting_plane_max_rounds,
        "opt_max_edges": cfg.exact_opt_max_edges,
        "budget": cfg.verify_budget,
    }


SUITES: dict[str, Callable[[Config, int, int], SuiteResult]] = {
    "ratios": suite_ratios,
    "kefts-weighted": suite_kefts_weighted,
    "kefts-unweighted": suite_kefts_unweighted,
    "rsnd2": suite_rsnd2,
    "rsnd3": suite_rsnd3,
    "steiner": suite_steiner,
    "separators": suite_separators,
    "lws": suite_lws,
    "oracle-completeness": suite_oracle_completeness,
    "feasibility-equivalence": suite_feasibility_equivalence,
    "structure": suite_structure,
    "profiles": suite_profiles,
}
