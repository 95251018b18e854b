"""Instances, solutions and their JSON files.

Rationals travel as strings ("3/2") or integers; a float anywhere in a weight
or cost is rejected. Edge ids are positions in the file's edge list, so
parallel edges stay distinct.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, field_validator, model_validator

from relsnd.errors import InstanceFormatError
from relsnd.graph import Multigraph, as_rational


class Demand(NamedTuple):
    s: int
    t: int
    k: int


@dataclass(frozen=True)
class Instance:
    graph: Multigraph
    demands: tuple[Demand, ...] = field(default_factory=tuple)


RATIONAL_TEXT = re.compile(r"-?\d+(/\d+)?")


def _rational_text(value: Any) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValueError(f"inexact number {value!r}; write rationals as integers or \"p/q\" strings")
    if isinstance(value, str) and not RATIONAL_TEXT.fullmatch(value.strip()):
        raise ValueError(f"not a rational: {value!r}; use an integer or \"p/q\"")
    try:
        q = Fraction(value)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {value!r}") from None
    return str(q)


class EdgeEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: StrictInt = Field(ge=0)
    v: StrictInt = Field(ge=0)
    w: str = "1"

    @field_validator("w", mode="before")
    @classmethod
    def _exact_weight(cls, value: Any) -> str:
        text = _rational_text(value)
        if Fraction(text) < 0:
            raise ValueError(f"negative weight {text}")
        return text


class DemandEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    s: StrictInt = Field(ge=0)
    t: StrictInt = Field(ge=0)
    k: StrictInt = Field(ge=0)


class InstanceFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: StrictInt = Field(ge=0)
    edges: list[EdgeEntry] = Field(default_factory=list)
    demands: list[DemandEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _endpoints_in_range(self) -> InstanceFile:
        for i, e in enumerate(self.edges):
            if e.u >= self.n or e.v >= self.n:
                raise ValueError(f"edges.{i}: endpoint outside 0..{self.n - 1}")
            if e.u == e.v:
                raise ValueError(f"edges.{i}: self-loop at {e.u}")
        for i, d in enumerate(self.demands):
            if d.s >= self.n or d.t >= self.n:
                raise ValueError(f"demands.{i}: endpoint outside 0..{self.n - 1}")
        return self

    def to_instance(self) -> Instance:
        g = Multigraph.from_edges(self.n, [(e.u, e.v, Fraction(e.w)) for e in self.edges])
        return Instance(g, tuple(Demand(d.s, d.t, d.k) for d in self.demands))

    @classmethod
    def from_instance(cls, inst: Instance) -> InstanceFile:
        g = inst.graph
        return cls(
            n=g.node_count,
            edges=[EdgeEntry(u=e.u, v=e.v, w=str(e.weight)) for e in sorted(g.edges, key=lambda e: e.id)],
            demands=[DemandEntry(s=d.s, t=d.t, k=d.k) for d in inst.demands],
        )


class SolutionFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    edges: list[StrictInt]
    cost: str
    trace: dict[str, Any] = Field(default_factory=dict)

    @field_validator("cost", mode="before")
    @classmethod
    def _exact_cost(cls, value: Any) -> str:
        return _rational_text(value)

    @classmethod
    def build(cls, g: Multigraph, edges, trace: dict | None = None) -> SolutionFile:
        ids = sorted(edges)
        return cls(edges=ids, cost=str(g.weight_of(ids)), trace=trace or {})

    def check_against(self, g: Multigraph) -> None:
        """Indices must name edges of g and the cost must match their weight exactly."""
        bad = [i for i in self.edges if i not in g.edge_ids]
        if bad:
            raise InstanceFormatError(f"solution names unknown edges {bad}")
        if len(set(self.edges)) != len(self.edges):
            raise InstanceFormatError("solution lists an edge twice")
        expected = g.weight_of(self.edges)
        if as_rational(self.cost) != expected:
            raise InstanceFormatError(f"solution cost {self.cost} differs from edge weight sum {expected}")


def _parse(model: type[BaseModel], text: str, source: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()
        )
        raise InstanceFormatError(f"{source}: {details}") from exc


def parse_instance(text: str, source: str = "<instance>") -> Instance:
    return _parse(InstanceFile, text, source).to_instance()


def read_instance(path: Path) -> Instance:
    return parse_instance(Path(path).read_text(), str(path))


def dump_model(model: BaseModel) -> str:
    return json.dumps(model.model_dump(), indent=2) + "\n"


def write_instance(inst: Instance, path: Path) -> None:
    Path(path).write_text(dump_model(InstanceFile.from_instance(inst)))


def read_solution(path: Path) -> SolutionFile:
    return _parse(SolutionFile, Path(path).read_text(), str(path))


def write_solution(solution: SolutionFile, path: Path) -> None:
    Path(path).write_text(dump_model(solution))


def kefts_demands(node_count: int, k: int) -> tuple[Demand, ...]:
    """The all-pairs demand set that makes RSND into k-EFTS."""
    return tuple(Demand(u, v, k) for u in range(node_count) for v in range(u + 1, node_count))
