"""Bounded enumeration of solutions, fundamental-domain members and orbit graphs."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .core import (
    Coords,
    Params,
    Stratum,
    StructuralError,
    _vieta_unchecked,
    classify,
    height,
    normal_coords,
)
from .reduction import ReductionStuck, reduce


def _require_positive(params: Params) -> None:
    if params.a <= 0:
        raise StructuralError("enumeration needs a > 0; use negate_a_transform first")


def solve_last_coordinate(prefix: Sequence[int], params: Params) -> Tuple[int, ...]:
    """All integers ``x_n`` completing ``prefix`` to a solution, ascending.

    The equation is the monic quadratic ``x^2 - P x + (S - k) = 0`` with
    ``P = a * prod(prefix)`` and ``S = sum of squares of prefix``.
    """
    _require_positive(params)
    if len(prefix) != params.n - 1:
        raise StructuralError(f"prefix must have {params.n - 1} entries")
    return _roots(params.a * math.prod(prefix), sum(x * x for x in prefix) - params.k)


def _roots(p: int, c: int) -> Tuple[int, ...]:
    disc = p * p - 4 * c
    if disc < 0:
        return ()
    r = math.isqrt(disc)
    if r * r != disc or (p + r) % 2:
        return ()
    if r == 0:
        return (p // 2,)
    return ((p - r) // 2, (p + r) // 2)


# -- all solutions up to a height bound --------------------------------------


@dataclass(frozen=True)
class SolutionSet:
    params: Params
    height_bound: int
    points: Tuple[Coords, ...]


def _nondecreasing(length: int, lo: int, budget: int, reserve: int = 1) -> Iterator[Tuple[int, ...]]:
    """Nondecreasing tuples ``lo <= m_1 <= ... <= m_length`` with
    ``sum(m) + reserve * m_length <= budget``."""
    if length == 0:
        yield ()
        return
    v = lo
    # remaining entries are all >= v, last one counted reserve extra times
    while v * (length + reserve) <= budget:
        for rest in _nondecreasing(length - 1, v, budget - v, reserve):
            yield (v,) + rest
        v += 1


def _solutions_with_first(params: Params, bound: int, first: int) -> list[Coords]:
    """Normal solutions with ``|x_1| == first`` and height at most ``bound``."""
    n, a, k = params.n, params.a, params.k
    found = []
    if first * n > bound:
        return found
    for rest in _nondecreasing(n - 2, first, bound - first):
        mags = (first,) + rest
        used = sum(mags)
        prod_rest = math.prod(rest)
        sq = sum(m * m for m in mags) - k
        for x1 in ((first, -first) if first else (0,)):
            for xn in _roots(a * x1 * prod_rest, sq):
                if xn >= mags[-1] and used + xn <= bound:
                    found.append((x1,) + rest + (xn,))
    return found


def enumerate_solutions(params: Params, height_bound: int, workers: int = 1) -> SolutionSet:
    """Every normal solution with height at most ``height_bound``, sorted.

    Prefixes ``|x_1| <= x_2 <= ... <= x_{n-1}`` are completed through the
    quadratic in ``x_n``.  Only ``x_1`` can carry a sign in normal form, so
    each candidate is already canonical and distinct.  With ``workers > 1``
    the prefixes are split by ``|x_1|`` across processes.
    """
    _require_positive(params)
    if height_bound < 0:
        raise StructuralError("height bound must be nonnegative")
    firsts = range(height_bound // params.n + 1)
    points: list[Coords] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_solutions_with_first, [params] * len(firsts),
                                  [height_bound] * len(firsts), firsts):
                points.extend(chunk)
    else:
        for first in firsts:
            points.extend(_solutions_with_first(params, height_bound, first))
    return SolutionSet(params, height_bound, tuple(sorted(set(points))))


# -- fundamental domain ------------------------------------------------------


@dataclass(frozen=True)
class FamilyDescriptor:
    """One of the two infinite one-parameter families of the fundamental domain.

    Members are ``(1, ..., 1, 2, x, x)`` for ``a = 1`` and
    ``(1, ..., 1, x, x)`` for ``a = 2``, for every ``x >= x_min``.
    """

    params: Params
    stratum: Stratum
    x_min: int

    @property
    def pattern(self) -> str:
        n = self.params.n
        if self.params.a == 1:
            return ",".join(["1"] * (n - 3) + ["2", "x", "x"])
        return ",".join(["1"] * (n - 2) + ["x", "x"])

    def member(self, x: int) -> Coords:
        if x < self.x_min:
            raise StructuralError(f"family parameter must be at least {self.x_min}")
        n = self.params.n
        if self.params.a == 1:
            return (1,) * (n - 3) + (2, x, x)
        return (1,) * (n - 2) + (x, x)

    def members(self, cap: int) -> Tuple[Coords, ...]:
        return tuple(self.member(x) for x in range(self.x_min, cap + 1))


def family_for(params: Params) -> Optional[FamilyDescriptor]:
    if params.a == 1 and params.k == params.n + 1:
        return FamilyDescriptor(params, Stratum.S2_POS, 2)
    if params.a == 2 and params.k == params.n - 2:
        return FamilyDescriptor(params, Stratum.S2_POS, 1)
    return None


@dataclass(frozen=True)
class FdSet:
    params: Params
    cap: int
    finite_members: Tuple[Tuple[Coords, Stratum], ...]
    infinite_families: Tuple[FamilyDescriptor, ...]
    # set when the positive search hit the cap before its exact pruning closed
    truncated: bool = False

    def points(self) -> Tuple[Coords, ...]:
        return tuple(p for p, _ in self.finite_members)

    def bounded_members(self, height_bound: int) -> Tuple[Coords, ...]:
        """Finite members plus family members, all of height at most ``height_bound``."""
        pts = [p for p in self.points() if height(p) <= height_bound]
        for fam in self.infinite_families:
            pts.extend(p for p in fam.members(height_bound) if height(p) <= height_bound)
        return tuple(sorted(set(pts)))


def _sum_of_squares_sorted(length: int, lo: int, target: int) -> Iterator[Tuple[int, ...]]:
    """Nondecreasing tuples of integers ``>= lo`` whose squares sum to ``target``."""
    if length == 1:
        r = math.isqrt(target) if target >= 0 else -1
        if r >= lo and r * r == target:
            yield (r,)
        return
    v = lo
    while length * v * v <= target:
        for rest in _sum_of_squares_sorted(length - 1, v, target - v * v):
            yield (v,) + rest
        v += 1


def _s0_members(params: Params) -> list[Coords]:
    if params.k < 0:
        return []
    return [(0,) + t for t in _sum_of_squares_sorted(params.n - 1, 0, params.k)]


def _s1_members(params: Params) -> list[Coords]:
    n = params.n
    target = params.k - n + 2
    out = []
    y = 1
    while 3 * y * y <= target:
        # z^2 + y z + (y^2 - target) = 0
        for z in _roots(-y, y * y - target):
            if z >= y:
                out.append((-1,) + (1,) * (n - 3) + (y, z))
        y += 1
    return out


def _s2_negative_members(params: Params) -> list[Coords]:
    a, k, n = params.a, params.k, params.n
    if a == 1:
        m, lo = k - n - 1, 2
        head = (-2,) if n == 3 else (-1,) + (1,) * (n - 4) + (2,)
    elif a == 2:
        m, lo = k - n + 2, 1
        head = (-1,) + (1,) * (n - 3)
    else:
        return []
    if m < 0 or math.isqrt(m) ** 2 != m:
        return []
    total = math.isqrt(m)
    return [head + (y, total - y) for y in range(lo, total // 2 + 1)]


def _sgt2_negative_members(params: Params) -> list[Coords]:
    # every coordinate is at most sqrt(k): k = sum x_i^2 + a |prod x_i|
    a, k, n = params.a, params.k, params.n
    out = []
    if k <= 0:
        return out

    def prefixes(length: int, lo: int, budget: int) -> Iterator[Tuple[int, ...]]:
        if length == 0:
            yield ()
            return
        v = lo
        while (length + 1) * v * v <= budget:  # the last coordinate is >= v too
            for rest in prefixes(length - 1, v, budget - v * v):
                yield (v,) + rest
            v += 1

    for mags in prefixes(n - 1, 1, k):
        if a * math.prod(mags[:n - 2]) <= 2:
            continue
        prefix = (-mags[0],) + mags[1:]
        for xn in _roots(a * math.prod(prefix), sum(m * m for m in mags) - k):
            if xn >= mags[-1]:
                out.append(prefix + (xn,))
    return out


def _sgt2_positive_members(params: Params, cap: int) -> Tuple[list[Coords], bool]:
    """Positive branch of the >2 stratum.

    With ``x_1 <= ... <= x_{n-2}`` fixed, ``P`` their product and ``S`` their
    sum of squares, members need ``S > k`` and
    ``x_{n-1}^2 * (a P - 2) <= S - k`` (where the solution curve meets
    ``x_n = x_{n-1}``).  Since ``x_{n-1} >= x_{n-2}``, the quantity
    ``x_{n-2}^2 (a P - 2) - (S - k)`` must be <= 0; it increases in every
    prefix coordinate once ``a P > 2``, which closes the prefix loops.
    ``cap`` bounds the loops as a guard.
    """
    a, k, n = params.a, params.k, params.n
    out: list[Coords] = []
    truncated = False
    plen = n - 2

    def excess(prefix: Tuple[int, ...]) -> Optional[int]:
        ap = a * math.prod(prefix)
        if ap <= 2:
            return None
        return prefix[-1] ** 2 * (ap - 2) - (sum(x * x for x in prefix) - k)

    def walk(prefix: Tuple[int, ...]) -> None:
        nonlocal truncated
        lo = prefix[-1] if prefix else 1
        v = lo
        while True:
            if v > cap:
                truncated = True
                return
            remaining = plen - len(prefix)
            probe = prefix + (v,) * remaining
            ex = excess(probe)
            if ex is not None and ex > 0:
                return
            if remaining == 1:
                if ex is not None:
                    complete(probe)
            else:
                walk(prefix + (v,))
            v += 1

    def complete(prefix: Tuple[int, ...]) -> None:
        ap = a * math.prod(prefix)
        slack = sum(x * x for x in prefix) - k
        y = prefix[-1]
        while y * y * (ap - 2) <= slack:
            for xn in _roots(ap * y, slack + y * y):
                if y <= xn and 2 * xn <= ap * y:
                    out.append(prefix + (y, xn))
            y += 1

    walk(())
    return out, truncated


def enumerate_fd(params: Params, cap: int) -> FdSet:
    """Members of the fundamental domain.

    Every stratum is finite except the two exceptional families, which are
    returned as descriptors; ``cap`` only guards the positive search.
    """
    _require_positive(params)
    candidates: list[Coords] = []
    candidates += _s0_members(params)
    if params.a == 1:
        candidates += _s1_members(params)
    candidates += _s2_negative_members(params)
    candidates += _sgt2_negative_members(params)
    positive, truncated = _sgt2_positive_members(params, cap)
    candidates += positive

    members = {}
    for q in candidates:
        tag = classify(q, params)
        if tag is Stratum.NONE or q != normal_coords(q):
            raise AssertionError(f"generated {q} fails the stratum test for {params}")
        members[q] = tag
    fam = family_for(params)
    return FdSet(
        params,
        cap,
        tuple(sorted(members.items())),
        (fam,) if fam else (),
        truncated,
    )


# -- orbit graph -------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """``normalize(vieta(source, i)) == target``; source is the higher endpoint."""

    source: Coords
    target: Coords
    i: int


@dataclass(frozen=True)
class Frontier:
    """A Vieta neighbour of ``vertex`` above the height bound."""

    vertex: Coords
    i: int
    neighbour_height: int


@dataclass(frozen=True)
class Component:
    vertices: Tuple[Coords, ...]
    # None if the descent got stuck (reported by verification)
    representative: Optional[Coords]
    stratum: Stratum
    # True when some vertex has a neighbour beyond the bound
    open: bool


@dataclass(frozen=True)
class OrbitGraph:
    params: Params
    height_bound: int
    vertices: Tuple[Coords, ...]
    edges: Tuple[Edge, ...]
    frontier: Tuple[Frontier, ...]
    components: Tuple[Component, ...]


def _order_key(p: Coords) -> Tuple[int, Coords]:
    return (height(p), p)


def vieta_edges(u: Coords, params: Params) -> Iterator[Tuple[int, Coords, tuple]]:
    """Yield ``(i, neighbour, key)`` for every Vieta move out of ``u``.

    Moves out of coordinates with equal values are conjugate by a transposition
    and share a key, as do the two directions of one involution: the key is
    the unordered endpoint pair plus the untouched absolute values.
    """
    for j in range(params.n):
        v = normal_coords(_vieta_unchecked(u, j, params.a))
        others = tuple(sorted(abs(x) for idx, x in enumerate(u) if idx != j))
        lo, hi = sorted((u, v), key=_order_key)
        yield j + 1, v, (lo, hi, others)


def orbit_graph(params: Params, height_bound: int, workers: int = 1) -> OrbitGraph:
    """Quotient graph on normal solutions of bounded height joined by Vieta moves.

    Self-loops (moves that only permute or sign-change a vertex) are dropped.
    """
    vertices = enumerate_solutions(params, height_bound, workers).points
    index = {v: idx for idx, v in enumerate(vertices)}
    parent = list(range(len(vertices)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges: dict = {}
    frontier: list[Frontier] = []
    for u in vertices:
        for i, v, key in vieta_edges(u, params):
            hv = height(v)
            if hv > height_bound:
                frontier.append(Frontier(u, i, hv))
                continue
            if v == u:
                continue
            ru, rv = find(index[u]), find(index[v])
            if ru != rv:
                parent[ru] = rv
            # label from the higher endpoint, smallest index there
            if u == key[1] and (key not in edges or i < edges[key].i):
                edges[key] = Edge(u, v, i)

    open_vertices = {f.vertex for f in frontier}
    groups: dict = {}
    for v in vertices:
        groups.setdefault(find(index[v]), []).append(v)
    components = []
    for members in groups.values():
        members.sort()
        try:
            res = reduce(members[0], params)
            rep, tag = res.representative, res.stratum
        except ReductionStuck:
            rep, tag = None, Stratum.NONE
        components.append(Component(
            tuple(members), rep, tag, any(m in open_vertices for m in members),
        ))
    components.sort(key=lambda c: c.vertices[0])
    ordered_edges = sorted(edges.values(), key=lambda e: (e.source, e.target, e.i))
    return OrbitGraph(params, height_bound, vertices, tuple(ordered_edges),
                      tuple(frontier), tuple(components))
