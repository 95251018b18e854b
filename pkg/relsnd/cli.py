import functools
import logging
from pathlib import Path

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from relsnd import __version__, fixtures
from relsnd.bench import SUITES
from relsnd.config import Config
from relsnd.cuts import CutRequirement, separate_kefts
from relsnd.errors import (
    InfeasibleError,
    InstanceFormatError,
    InvalidArgumentError,
    ResourceLimitError,
    StructuralError,
)
from relsnd.instance import Instance, SolutionFile, kefts_demands, read_instance, read_solution
from relsnd.instance import write_instance, write_solution
from relsnd.oracle import exact_opt, gen_fixture, gen_random, verify_rsnd
from relsnd.solver import build_registry
from relsnd.theme import THEME

console = Console(theme=THEME)

EXIT_FORMAT = 1
EXIT_INPUT = 2
EXIT_VIOLATION = 3
EXIT_BUDGET = 4

LEVELS = ("WARNING", "INFO", "DEBUG")

_in_option = click.option(
    "--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path)
)


def _exit_codes(fn):
    """Map library errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InstanceFormatError as exc:
            code, text = EXIT_FORMAT, str(exc)
        except ResourceLimitError as exc:
            code, text = EXIT_BUDGET, str(exc)
        except (InvalidArgumentError, StructuralError, InfeasibleError) as exc:
            code, text = EXIT_INPUT, str(exc)
        console.print(f"[err]error:[/] {escape(text)}")
        raise SystemExit(code)

    return wrapper


def _setup_logging(level: str, verbose: int) -> None:
    if verbose:
        level = LEVELS[min(verbose, len(LEVELS) - 1)]
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _demands_for(inst: Instance, k: int | None):
    return kefts_demands(inst.graph.node_count, k) if k is not None else inst.demands


@click.group()
@click.version_option(__version__, prog_name="relsnd")
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for every round")
@click.pass_context
def main(ctx, config_path, verbose):
    """Relative fault-tolerant network design."""
    ctx.ensure_object(dict)
    cfg = Config.load(config_path)
    ctx.obj["config"] = cfg
    _setup_logging(cfg.log_level, verbose)


@main.command()
@click.option("--alg", required=True, type=click.Choice(list(build_registry())))
@click.option("--k", "k", type=int, default=None, help="Fault tolerance for the k-EFTS solvers")
@_in_option
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.pass_context
@_exit_codes
def solve(ctx, alg, k, in_path, out_path):
    """Run a solver and write its solution file."""
    cfg = ctx.obj["config"]
    inst = read_instance(in_path)
    solver = build_registry()[alg]
    if not solver.uses_k and k is not None:
        console.print(f"[dim]--k is ignored by {alg}; demands come from the instance[/]")
    outcome = solver.handler(inst, k, cfg.cutting_plane_max_rounds)
    solution = SolutionFile.build(inst.graph, outcome.edges, outcome.trace)
    write_solution(solution, out_path)
    console.print(f"[ok]{alg}[/] {len(solution.edges)} edges, cost [accent]{solution.cost}[/]")
    lower = outcome.trace.get("lower_bound")
    if lower is not None:
        console.print(f"[dim]lower bound on OPT: {lower}[/]")


def _uniform_k(inst: Instance, k: int | None) -> int:
    if k is not None:
        return k
    ks = {d.k for d in inst.demands}
    pairs = {(min(d.s, d.t), max(d.s, d.t)) for d in inst.demands if d.s != d.t}
    n = inst.graph.node_count
    if len(ks) != 1 or len(pairs) != n * (n - 1) // 2:
        raise InvalidArgumentError("cut-oracle mode needs all-pairs demands with one k, or --k")
    return ks.pop()


@main.command()
@_in_option
@click.option(
    "--solution", "solution_path", required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option("--mode", type=click.Choice(["fault-enum", "cut-oracle"]), default="fault-enum")
@click.option("--k", "k", type=int, default=None, help="Check all-pairs demands at k instead of the file's")
@click.pass_context
@_exit_codes
def verify(ctx, in_path, solution_path, mode, k):
    """Check a solution against the instance's demands."""
    cfg = ctx.obj["config"]
    inst = read_instance(in_path)
    solution = read_solution(solution_path)
    solution.check_against(inst.graph)

    if mode == "fault-enum":
        violation = verify_rsnd(inst.graph, solution.edges, _demands_for(inst, k), budget=cfg.verify_budget)
        if violation is not None:
            d = violation.demand
            console.print(
                f"[err]violation[/] demand ({d.s}, {d.t}, {d.k}), "
                f"faults {escape(str(list(violation.faults)))}, witness {violation.witness}"
            )
            console.print_json(data=violation.to_dict())
            raise SystemExit(EXIT_VIOLATION)
    else:
        req = CutRequirement(inst.graph, _uniform_k(inst, k), frozenset(solution.edges))
        side = separate_kefts(req, {})
        if side is not None:
            console.print(
                f"[err]violation[/] cut {escape(str(sorted(side.nodes)))} keeps "
                f"{len(side.boundary & req.forced_superset)} of {len(side.boundary)} edges"
            )
            raise SystemExit(EXIT_VIOLATION)
    console.print(f"[ok]feasible[/] ({mode})")


@main.command()
@_in_option
@click.option("--budget", type=int, default=None, help="Fault sets allowed per feasibility check")
@click.option("--max-edges", type=int, default=None, help="Largest graph to enumerate")
@click.option("--k", "k", type=int, default=None, help="Use all-pairs demands at k")
@click.pass_context
@_exit_codes
def oracle(ctx, in_path, budget, max_edges, k):
    """Exact optimum by subset enumeration."""
    cfg = ctx.obj["config"]
    inst = read_instance(in_path)
    cost, edges = exact_opt(
        inst.graph,
        _demands_for(inst, k),
        max_edges=max_edges or cfg.exact_opt_max_edges,
        budget=budget or cfg.verify_budget,
    )
    console.print(f"OPT cost [accent]{cost}[/] with edges {escape(str(sorted(edges)))}")


def _weight_range(ctx, param, value: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in value.split(":"))
    except ValueError:
        raise click.BadParameter("use LO:HI, e.g. 1:5") from None
    return lo, hi


@main.command()
@click.option("--n", "n", type=int, default=None, help="Node count of a random graph")
@click.option("--p", "p", type=float, default=0.5, show_default=True, help="Edge probability")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--demand-spec", default="kefts:2", show_default=True, help="kefts:K | single:K | pairs:COUNT:MAXK")
@click.option("--weights", default="1:1", show_default=True, callback=_weight_range, help="Integer range LO:HI")
@click.option("--denominator", type=int, default=1, show_default=True, help="Weights step in 1/denominator")
@click.option("--plant-two-cut", is_flag=True, help="Two 2-edge-connected halves joined by two edges")
@click.option("--fixture", type=click.Choice(list(fixtures.GRAPHS)), default=None, help="Use a named graph instead")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@_exit_codes
def gen(n, p, seed, demand_spec, weights, denominator, plant_two_cut, fixture, out_path):
    """Write a random instance, or a named graph with random demands."""
    if (n is None) == (fixture is None):
        raise click.UsageError("give exactly one of --n and --fixture")
    if fixture is not None:
        inst = gen_fixture(fixture, demand_spec, seed=seed)
    else:
        inst = gen_random(
            n, p, weights, demand_spec, seed=seed, plant_two_cut=plant_two_cut, weight_denominator=denominator
        )
    write_instance(inst, out_path)
    console.print(
        f"[ok]wrote[/] {out_path}: {inst.graph.node_count} nodes, "
        f"{len(inst.graph.edges)} edges, {len(inst.demands)} demands"
    )


@main.command()
@click.option("--suite", required=True, type=click.Choice(list(SUITES)))
@click.option("--count", type=int, default=None, help="Instances per row")
@click.option("--seed", type=int, default=None)
@click.pass_context
@_exit_codes
def bench(ctx, suite, count, seed):
    """Run an acceptance suite and print its table."""
    cfg = ctx.obj["config"]
    result = SUITES[suite](cfg, count or cfg.bench_count, cfg.bench_seed if seed is None else seed)

    table = Table(title=f"bench {result.name}", border_style="panel")
    table.add_column("check")
    table.add_column("cases", justify="right")
    table.add_column("skipped", justify="right")
    table.add_column("max ratio", justify="right")
    table.add_column("result")
    for row in result.rows:
        ratio = "-" if row.max_ratio is None else str(row.max_ratio)
        verdict = "[ok]pass[/]" if row.passed else f"[err]{row.failures} failed[/]"
        table.add_row(row.label, str(row.cases), str(row.skipped), ratio, verdict)
    console.print(table)
    for row in result.rows:
        for note in row.notes:
            console.print(f"  [err]{escape(row.label)}[/] {escape(note)}")
    if not result.passed:
        raise SystemExit(EXIT_VIOLATION)
