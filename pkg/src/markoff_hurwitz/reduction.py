"""Height descent to the fundamental domain and orbit equivalence."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .core import (
    Coords,
    Move,
    Params,
    Stratum,
    StructuralError,
    Vieta,
    _require_canonical,
    _vieta_unchecked,
    classify,
    height,
    invert_word,
    make_point,
    normalize,
    vieta_coordinate,
)

DEFAULT_MAX_STEPS = 10**6


class ReductionStuck(Exception):
    """Descent found a point outside every stratum with no strictly lower Vieta neighbour.

    Carries the offending point, the neighbour heights and the tail of the
    trace so a counterexample can be inspected.
    """

    def __init__(self, message: str, point: Coords, params: Params,
                 neighbour_heights: Tuple[int, ...] = (), trace: tuple = ()):
        super().__init__(message)
        self.point = point
        self.params = params
        self.neighbour_heights = neighbour_heights
        self.trace = trace


@dataclass(frozen=True)
class ReductionResult:
    representative: Coords
    stratum: Stratum
    word: Tuple[Move, ...]
    trace: Tuple[Tuple[Coords, int], ...] = field(repr=False)

    @property
    def vieta_steps(self) -> int:
        return sum(1 for m in self.word if isinstance(m, Vieta))

    @property
    def initial_height(self) -> int:
        return self.trace[0][1]

    @property
    def final_height(self) -> int:
        return self.trace[-1][1]


def neighbour_heights(q: Coords, a: int) -> Tuple[int, ...]:
    h = height(q)
    return tuple(h - abs(x) + abs(vieta_coordinate(q, j, a)) for j, x in enumerate(q))


def is_last_vertex(q: Sequence[int], params: Params) -> bool:
    """True when every Vieta neighbour of ``q`` is strictly higher."""
    coords = _require_canonical(q, params)
    h = height(coords)
    return all(h < nh for nh in neighbour_heights(coords, params.a))


def reduce(p: Sequence[int], params: Params, max_steps: int = DEFAULT_MAX_STEPS) -> ReductionResult:
    """Carry ``p`` to the fundamental-domain point of its orbit.

    Normalizes, stops as soon as the normal point lies in a stratum, and
    otherwise takes the Vieta move with the strictly smallest resulting
    height (smallest index on ties).
    """
    if params.a <= 0:
        raise StructuralError("reduce needs a > 0; use negate_a_transform first")
    coords = make_point(p, params)
    q, moves = normalize(coords, params)
    word: list[Move] = list(moves)
    h = height(q)
    trace: list[Tuple[Coords, int]] = [(q, h)]
    a = params.a
    steps = 0
    while True:
        tag = classify(q, params)
        if tag is not Stratum.NONE:
            return ReductionResult(q, tag, tuple(word), tuple(trace))
        heights = neighbour_heights(q, a)
        best = min(range(params.n), key=lambda j: (heights[j], j))
        if heights[best] >= h:
            raise ReductionStuck(
                f"{q} on V({params.a}, {params.k}, {params.n}) lies in no stratum "
                f"and has no descending Vieta neighbour (heights {heights}, own {h})",
                q, params, heights, tuple(trace[-10:]),
            )
        steps += 1
        if steps > max_steps:
            raise ReductionStuck(
                f"descent exceeded {max_steps} steps at {q}", q, params, heights, tuple(trace[-10:])
            )
        word.append(Vieta(best + 1))
        q, moves = normalize(_vieta_unchecked(q, best, a), params)
        word.extend(moves)
        h = heights[best]
        trace.append((q, h))


def equivalent(p: Sequence[int], q: Sequence[int], params: Params) -> bool:
    return reduce(p, params).representative == reduce(q, params).representative


def equivalence_word(p: Sequence[int], q: Sequence[int], params: Params) -> Optional[Tuple[Move, ...]]:
    """A word carrying ``p`` to ``q``, or None when they lie in different orbits."""
    rp = reduce(p, params)
    rq = reduce(q, params)
    if rp.representative != rq.representative:
        return None
    return rp.word + invert_word(rq.word)
