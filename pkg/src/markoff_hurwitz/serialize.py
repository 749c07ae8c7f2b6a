"""JSON, CSV and DOT encodings.

Integers are written as decimal strings so arbitrarily large coordinates
survive any JSON reader.  Moves are tagged objects: ``{"vieta": i}``,
``{"dsign": [s, t]}`` or ``{"perm": [sigma(1), ..., sigma(n)]}``.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Sequence

from .core import Coords, DoubleSign, Move, Params, Permute, Stratum, StructuralError, Vieta, height
from .enumeration import (
    Component,
    Edge,
    FamilyDescriptor,
    FdSet,
    Frontier,
    OrbitGraph,
    SolutionSet,
)
from .reduction import ReductionResult
from .verification import CheckResult, Report


def _int(s: Any) -> int:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise StructuralError(f"expected a decimal integer, got {s!r}")
    return int(s)


def point_to_json(p: Sequence[int]) -> list[str]:
    return [str(x) for x in p]


def point_from_json(data: Sequence[Any]) -> Coords:
    return tuple(_int(x) for x in data)


def params_to_json(params: Params) -> dict:
    return {"a": str(params.a), "k": str(params.k), "n": params.n}


def params_from_json(data: dict) -> Params:
    return Params(_int(data["a"]), _int(data["k"]), _int(data["n"]))


def move_to_json(m: Move) -> dict:
    if isinstance(m, Vieta):
        return {"vieta": m.i}
    if isinstance(m, DoubleSign):
        return {"dsign": [m.s, m.t]}
    return {"perm": list(m.sigma)}


def move_from_json(data: dict) -> Move:
    if "vieta" in data:
        return Vieta(int(data["vieta"]))
    if "dsign" in data:
        s, t = data["dsign"]
        return DoubleSign(int(s), int(t))
    if "perm" in data:
        return Permute(tuple(int(x) for x in data["perm"]))
    raise StructuralError(f"unknown move encoding {data!r}")


def word_to_json(word: Iterable[Move]) -> list[dict]:
    return [move_to_json(m) for m in word]


def word_from_json(data: Iterable[dict]) -> tuple[Move, ...]:
    return tuple(move_from_json(m) for m in data)


def reduction_to_json(res: ReductionResult) -> dict:
    return {
        "representative": point_to_json(res.representative),
        "stratum": res.stratum.value,
        "word": word_to_json(res.word),
        "steps": res.vieta_steps,
        "initial_height": str(res.initial_height),
        "final_height": str(res.final_height),
        "trace": [{"point": point_to_json(p), "height": str(h)} for p, h in res.trace],
    }


def reduction_from_json(data: dict) -> ReductionResult:
    return ReductionResult(
        point_from_json(data["representative"]),
        Stratum(data["stratum"]),
        word_from_json(data["word"]),
        tuple((point_from_json(t["point"]), _int(t["height"])) for t in data["trace"]),
    )


def solutions_to_json(sols: SolutionSet) -> dict:
    return {
        "params": params_to_json(sols.params),
        "height_bound": str(sols.height_bound),
        "points": [point_to_json(p) for p in sols.points],
    }


def solutions_from_json(data: dict) -> SolutionSet:
    return SolutionSet(
        params_from_json(data["params"]),
        _int(data["height_bound"]),
        tuple(point_from_json(p) for p in data["points"]),
    )


def family_to_json(fam: FamilyDescriptor, cap: int) -> dict:
    return {
        "stratum": fam.stratum.value,
        "pattern": fam.pattern,
        "x_min": str(fam.x_min),
        "sample": [point_to_json(p) for p in fam.members(cap)],
    }


def fd_to_json(fd: FdSet) -> dict:
    return {
        "params": params_to_json(fd.params),
        "cap": str(fd.cap),
        "truncated": fd.truncated,
        "finite_members": [
            {"point": point_to_json(p), "stratum": tag.value} for p, tag in fd.finite_members
        ],
        "infinite_families": [family_to_json(f, fd.cap) for f in fd.infinite_families],
    }


def fd_from_json(data: dict) -> FdSet:
    params = params_from_json(data["params"])
    return FdSet(
        params,
        _int(data["cap"]),
        tuple((point_from_json(m["point"]), Stratum(m["stratum"])) for m in data["finite_members"]),
        tuple(FamilyDescriptor(params, Stratum(f["stratum"]), _int(f["x_min"]))
              for f in data["infinite_families"]),
        bool(data.get("truncated", False)),
    )


def _component_to_json(c: Component) -> dict:
    return {
        "representative": None if c.representative is None else point_to_json(c.representative),
        "stratum": c.stratum.value,
        "open": c.open,
        "vertices": [point_to_json(v) for v in c.vertices],
    }


def _component_from_json(d: dict) -> Component:
    rep = d["representative"]
    return Component(
        tuple(point_from_json(v) for v in d["vertices"]),
        None if rep is None else point_from_json(rep),
        Stratum(d["stratum"]),
        bool(d["open"]),
    )


def graph_to_json(g: OrbitGraph) -> dict:
    return {
        "params": params_to_json(g.params),
        "height_bound": str(g.height_bound),
        "vertices": [point_to_json(v) for v in g.vertices],
        "edges": [
            {"source": point_to_json(e.source), "target": point_to_json(e.target), "i": e.i}
            for e in g.edges
        ],
        "frontier": [
            {"vertex": point_to_json(f.vertex), "i": f.i, "height": str(f.neighbour_height)}
            for f in g.frontier
        ],
        "components": [_component_to_json(c) for c in g.components],
    }


def graph_from_json(data: dict) -> OrbitGraph:
    return OrbitGraph(
        params_from_json(data["params"]),
        _int(data["height_bound"]),
        tuple(point_from_json(v) for v in data["vertices"]),
        tuple(Edge(point_from_json(e["source"]), point_from_json(e["target"]), int(e["i"]))
              for e in data["edges"]),
        tuple(Frontier(point_from_json(f["vertex"]), int(f["i"]), _int(f["height"]))
              for f in data["frontier"]),
        tuple(_component_from_json(c) for c in data["components"]),
    )


def orbits_to_json(g: OrbitGraph) -> dict:
    return {
        "params": params_to_json(g.params),
        "height_bound": str(g.height_bound),
        "components": [_component_to_json(c) for c in g.components],
    }


def orbits_from_json(data: dict) -> tuple[Component, ...]:
    return tuple(_component_from_json(c) for c in data["components"])


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return str(x)


def report_to_json(r: Report) -> dict:
    return {
        "title": r.title,
        "passed": r.passed,
        "summary": dict(r.summary),
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail,
             "counterexamples": _jsonable(c.counterexamples)}
            for c in r.checks
        ],
    }


def report_from_json(data: dict) -> Report:
    return Report(
        data["title"],
        [CheckResult(c["name"], c["passed"], c["detail"], c["counterexamples"])
         for c in data["checks"]],
        data["summary"],
    )


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- CSV and DOT -------------------------------------------------------------


def rows_to_csv(rows: Iterable[tuple[Sequence[int], str]]) -> str:
    """CSV with header ``coords,height,stratum``; coords is a comma-joined field."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["coords", "height", "stratum"])
    for p, tag in rows:
        writer.writerow([",".join(str(x) for x in p), height(p), tag])
    return buf.getvalue()


_PALETTE = (
    "lightblue", "lightpink", "palegreen", "khaki", "plum",
    "lightsalmon", "paleturquoise", "wheat", "thistle", "lightgray",
)


def _label(p: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in p) + ")"


def graph_to_dot(g: OrbitGraph) -> str:
    """Vertices labelled by coordinates and height, edges by Vieta index, one colour per component."""
    p = g.params
    lines = [
        f'graph "V({p.a},{p.k},{p.n}) height<={g.height_bound}" {{',
        "  rankdir=BT;",
        "  node [shape=box, style=filled];",
    ]
    for idx, comp in enumerate(g.components):
        colour = _PALETTE[idx % len(_PALETTE)]
        lines.append(f"  subgraph cluster_{idx} {{")
        rep = "stuck" if comp.representative is None else _label(comp.representative)
        lines.append(f'    label="component {idx}: {rep}";')
        for v in comp.vertices:
            lines.append(f'    "{_label(v)}" [label="{_label(v)}\\nh={height(v)}", fillcolor={colour}];')
        lines.append("  }")
    for e in g.edges:
        lines.append(f'  "{_label(e.source)}" -- "{_label(e.target)}" [label="{e.i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
