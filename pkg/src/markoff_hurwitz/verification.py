"""Brute-force checks of the fundamental domain at small heights."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

from .core import Coords, Params, Stratum, strata_containing
from .enumeration import enumerate_fd, orbit_graph
from .reduction import ReductionStuck, reduce

MAX_COUNTEREXAMPLES = 20


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counterexamples: list = field(default_factory=list)


@dataclass
class Report:
    title: str
    checks: list[CheckResult] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, failures: list, detail: str = "") -> CheckResult:
        result = CheckResult(name, not failures, detail, failures[:MAX_COUNTEREXAMPLES])
        self.checks.append(result)
        return result

    def lines(self) -> list[str]:
        out = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}"
            if c.detail:
                line += f" ({c.detail})"
            out.append(line)
            out.extend(f"      counterexample: {ce}" for ce in c.counterexamples)
        return out


def verify_fundamental_domain(params: Params, height_bound: int, workers: int = 1) -> Report:
    """Check the fundamental-domain claims on every solution of height <= ``height_bound``."""
    report = Report(f"fundamental domain a={params.a} k={params.k} n={params.n} H={height_bound}")
    graph = orbit_graph(params, height_bound, workers)
    vertices = graph.vertices

    reps: dict[Coords, Coords] = {}
    stuck = []
    for v in vertices:
        try:
            reps[v] = reduce(v, params).representative
        except ReductionStuck as exc:
            stuck.append((v, str(exc)))
    report.add("reduce terminates", stuck, f"{len(vertices)} solutions")

    bad_strata = []
    for rep in sorted(set(reps.values())):
        found = strata_containing(rep, params)
        if len(found) != 1:
            bad_strata.append((rep, [s.value for s in found]))
    report.add("representative in exactly one stratum", bad_strata)

    fd = enumerate_fd(params, max(height_bound, 1))
    members = fd.bounded_members(height_bound)
    member_set = set(members)

    split, crowded = [], []
    for comp in graph.components:
        seen = {reps[v] for v in comp.vertices if v in reps}
        if len(seen) > 1:
            split.append((comp.vertices[0], sorted(seen)))
        inside = [v for v in comp.vertices if v in member_set]
        if len(inside) > 1:
            crowded.append(inside)
    report.add("connected vertices share representative", split)

    not_fixed = []
    for q in members:
        res = reduce(q, params)
        if res.representative != q or res.vieta_steps:
            not_fixed.append((q, res.representative))
    report.add("fundamental-domain members are reduce fixed points", not_fixed,
               f"{len(members)} members")

    by_rep: dict[Coords, list] = {}
    for q in members:
        by_rep.setdefault(reps.get(q, q), []).append(q)
    clashes = [qs for qs in by_rep.values() if len(qs) > 1]
    report.add("members pairwise inequivalent", clashes + crowded)

    missing = sorted(r for r in set(reps.values()) if r not in member_set)
    report.add("every representative is an enumerated member", missing)

    report.summary = {
        "solutions": len(vertices),
        "components": len(graph.components),
        "representatives": len(set(reps.values())),
        "fd_members": len(members),
        "families": len(fd.infinite_families),
    }
    return report


# -- the classical Markoff case a = 1, n = 3 ---------------------------------


def _markoff_sets_brute(k: int, bound: int) -> dict[Stratum, set]:
    """The four strata for (a, n) = (1, 3) straight from their closed-form descriptions.

    Plain scans over boxes; shares no code with the enumeration module.
    """
    out: dict[Stratum, set] = {s: set() for s in Stratum if s is not Stratum.NONE}
    r = range(0, bound + 1)
    for x2 in r:
        for x3 in range(x2, bound + 1):
            if x2 * x2 + x3 * x3 == k:
                out[Stratum.S0].add((0, x2, x3))
            if x2 >= 1 and (2 * x2 + x3) ** 2 + 3 * x3 * x3 == 4 * (k - 1):
                out[Stratum.S1].add((-1, x2, x3))
            if x2 >= 2 and (x2 + x3) ** 2 + 4 == k:
                out[Stratum.S2_NEG].add((-2, x2, x3))
    for x1 in range(3, bound + 1):
        for x2 in range(x1, bound + 1):
            for x3 in range(x2, bound + 1):
                if 2 * x3 <= x1 * x2 and x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 * x3 == k:
                    out[Stratum.SGT2_POS].add((x1, x2, x3))
                if x1 * x1 + x2 * x2 + x3 * x3 + x1 * x2 * x3 == k:
                    out[Stratum.SGT2_NEG].add((-x1, x2, x3))
    return out


def is_generic_markoff_level(k: int) -> bool:
    """k is none of u^2 + v^2, 4(k-1) = u^2 + 3 v^2, 4 + u^2."""
    if k < 0:
        return True
    for u in range(math.isqrt(k) + 1):
        rest = k - u * u
        if math.isqrt(rest) ** 2 == rest:
            return False
    if k >= 1:
        m = 4 * (k - 1)
        v = 0
        while 3 * v * v <= m:
            rest = m - 3 * v * v
            if math.isqrt(rest) ** 2 == rest:
                return False
            v += 1
    if k >= 4 and math.isqrt(k - 4) ** 2 == k - 4:
        return False
    return True


def markoff_compat_check(sample_count: int = 10_000, k_values: Optional[Iterable[int]] = None,
                         seed: int = 0, box: int = 40) -> Report:
    """Algebraic identities of the Markoff case and agreement of the enumerated strata."""
    rng = random.Random(seed)
    report = Report("Markoff case a=1 n=3")
    bad = []
    for _ in range(sample_count):
        x2, x3 = rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6)
        if 4 * (x2 * x2 + x3 * x3 + x2 * x3) != (2 * x2 + x3) ** 2 + 3 * x3 * x3:
            bad.append((x2, x3))
    report.add("4(y^2+z^2+yz) = (2y+z)^2 + 3z^2", bad, f"{sample_count} samples")

    bad = []
    for _ in range(sample_count):
        total = rng.randint(0, 10**6)
        k = total * total + 4 + rng.choice((0, 0, 1, -1, rng.randint(-10**6, 10**6)))
        via_root = k >= 4 and math.isqrt(k - 4) ** 2 == k - 4 and math.isqrt(k - 4) == total
        if via_root != (total * total + 4 == k):
            bad.append((total, k))
    report.add("y+z = sqrt(k-4) iff (y+z)^2 + 4 = k", bad, f"{sample_count} samples")

    ks = list(k_values) if k_values is not None else list(range(5, 31))
    mismatches, generic_bad = [], []
    for k in ks:
        params = Params(1, k, 3)
        fd = enumerate_fd(params, box)
        got: dict[Stratum, set] = {s: set() for s in Stratum if s is not Stratum.NONE}
        for q, tag in fd.finite_members:
            got[tag].add(q)
        want = _markoff_sets_brute(k, box)
        if k == 4:
            want[Stratum.S2_POS] = set()  # family, reported as a descriptor
        for tag in want:
            if got[tag] != want[tag]:
                mismatches.append((k, tag.value, sorted(got[tag]), sorted(want[tag])))
        if is_generic_markoff_level(k):
            low = [q for q, tag in fd.finite_members
                   if tag in (Stratum.S0, Stratum.S1, Stratum.S2_POS, Stratum.S2_NEG)]
            if low or fd.infinite_families:
                generic_bad.append((k, low))
    report.add("enumerated strata match closed forms", mismatches, f"k in {ks[0]}..{ks[-1]}")
    report.add("generic k has empty S0, S1, S2", generic_bad,
               f"{sum(is_generic_markoff_level(k) for k in ks)} generic levels")
    return report


def verify_many(grid: Sequence[Params], height_bound: int, workers: int = 1) -> list[Report]:
    """Run :func:`verify_fundamental_domain` over a parameter grid, one process per point."""
    if workers <= 1:
        return [verify_fundamental_domain(p, height_bound) for p in grid]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(verify_fundamental_domain, grid, [height_bound] * len(grid)))
