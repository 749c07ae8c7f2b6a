"""Points of the Markoff-Hurwitz variety and the moves of its symmetry group.

The variety ``V(a, k, n)`` is the set of integer tuples ``(x_1, ..., x_n)``
with

    x_1^2 + ... + x_n^2 - a * x_1 * ... * x_n = k.

Points are plain tuples of Python ints, so coordinates never overflow.
Indices in moves are 1-based, matching the usual mathematical notation
and the serialized formats.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

Coords = Tuple[int, ...]


class MarkoffHurwitzError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(MarkoffHurwitzError, ValueError):
    """Malformed input: wrong length, bad index, invalid parameters."""


class NotOnVariety(StructuralError):
    """A tuple that was required to be a solution is not one."""


@dataclass(frozen=True)
class Params:
    """Coefficient ``a``, level ``k`` and number of variables ``n``."""

    a: int
    k: int
    n: int

    def __post_init__(self) -> None:
        for name in ("a", "k", "n"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise StructuralError(f"{name} must be an int")
        if self.a == 0:
            raise StructuralError("a must be nonzero")
        if self.n < 3:
            raise StructuralError(f"n must be at least 3, got {self.n}")

    @property
    def exceptional(self) -> bool:
        """True for the two parameter families with infinitely many orbits."""
        return (self.a, self.k) in ((1, self.n + 1), (2, self.n - 2))


class Stratum(str, enum.Enum):
    S0 = "S0"
    S1 = "S1"
    S2_POS = "S2_POS"
    S2_NEG = "S2_NEG"
    SGT2_POS = "SGT2_POS"
    SGT2_NEG = "SGT2_NEG"
    NONE = "NONE"

    def __str__(self) -> str:
        return self.value


# -- moves -------------------------------------------------------------------


@dataclass(frozen=True)
class Vieta:
    i: int

    def inverse(self) -> "Vieta":
        return self


@dataclass(frozen=True)
class DoubleSign:
    s: int
    t: int

    def inverse(self) -> "DoubleSign":
        return self


@dataclass(frozen=True)
class Permute:
    """Coordinate ``i`` of the image is coordinate ``sigma[i-1]`` of the source."""

    sigma: Tuple[int, ...]

    def inverse(self) -> "Permute":
        inv = [0] * len(self.sigma)
        for pos, src in enumerate(self.sigma, start=1):
            inv[src - 1] = pos
        return Permute(tuple(inv))


Move = Union[Vieta, DoubleSign, Permute]


def _as_coords(p: Iterable[int], params: Params) -> Coords:
    coords = tuple(p)
    if len(coords) != params.n:
        raise StructuralError(f"expected {params.n} coordinates, got {len(coords)}")
    return coords


def equation_value(p: Sequence[int], a: int) -> int:
    """Left-hand side ``sum x_i^2 - a * prod x_i``."""
    return sum(x * x for x in p) - a * math.prod(p)


def check_on_variety(p: Sequence[int], params: Params) -> bool:
    coords = _as_coords(p, params)
    return equation_value(coords, params.a) == params.k


def make_point(p: Iterable[int], params: Params) -> Coords:
    """Return ``p`` as a tuple, raising :class:`NotOnVariety` if it is not a solution."""
    coords = _as_coords(p, params)
    if any(not isinstance(x, int) for x in coords):
        raise StructuralError("coordinates must be integers")
    value = equation_value(coords, params.a)
    if value != params.k:
        raise NotOnVariety(
            f"{coords} is not on V({params.a}, {params.k}, {params.n}): "
            f"left-hand side is {value}"
        )
    return coords


def height(p: Sequence[int]) -> int:
    return sum(abs(x) for x in p)


def vieta_coordinate(p: Sequence[int], idx: int, a: int) -> int:
    """New value of coordinate ``idx`` (0-based) under the Vieta involution."""
    rest = math.prod(x for j, x in enumerate(p) if j != idx)
    return a * rest - p[idx]


def _vieta_unchecked(p: Coords, idx: int, a: int) -> Coords:
    return p[:idx] + (vieta_coordinate(p, idx, a),) + p[idx + 1:]


def vieta(p: Sequence[int], i: int, params: Params) -> Coords:
    """Replace ``x_i`` by the other root of the equation viewed as a quadratic in ``x_i``."""
    coords = make_point(p, params)
    if not 1 <= i <= params.n:
        raise StructuralError(f"Vieta index {i} out of range 1..{params.n}")
    return _vieta_unchecked(coords, i - 1, params.a)


def double_sign(p: Sequence[int], s: int, t: int, params: Params) -> Coords:
    coords = make_point(p, params)
    if not 1 <= s < t <= params.n:
        raise StructuralError(f"double sign change needs 1 <= s < t <= {params.n}, got ({s}, {t})")
    out = list(coords)
    out[s - 1] = -out[s - 1]
    out[t - 1] = -out[t - 1]
    return tuple(out)


def _check_permutation(sigma: Sequence[int], n: int) -> Tuple[int, ...]:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise StructuralError(f"{sigma} is not a permutation of 1..{n}")
    return sigma


def permute(p: Sequence[int], sigma: Sequence[int], params: Params) -> Coords:
    coords = make_point(p, params)
    sigma = _check_permutation(sigma, params.n)
    return tuple(coords[j - 1] for j in sigma)


def apply_move(p: Sequence[int], move: Move, params: Params) -> Coords:
    if isinstance(move, Vieta):
        return vieta(p, move.i, params)
    if isinstance(move, DoubleSign):
        return double_sign(p, move.s, move.t, params)
    if isinstance(move, Permute):
        return permute(p, move.sigma, params)
    raise StructuralError(f"unknown move {move!r}")


def apply_word(p: Sequence[int], word: Iterable[Move], params: Params) -> Coords:
    """Apply the moves of ``word`` left to right."""
    q = make_point(p, params)
    for move in word:
        q = apply_move(q, move, params)
    return q


def invert_word(word: Sequence[Move]) -> Tuple[Move, ...]:
    return tuple(m.inverse() for m in reversed(word))


# -- normal form -------------------------------------------------------------


def normal_coords(p: Sequence[int]) -> Coords:
    """Canonical representative under permutations and double sign changes.

    Sorted by absolute value; all entries nonnegative except that an odd
    number of negative entries with no zero entry leaves one minus sign on
    the first (smallest) coordinate.
    """
    mags = sorted(abs(x) for x in p)
    negatives = sum(1 for x in p if x < 0)
    if negatives % 2 == 1 and mags[0] != 0:
        mags[0] = -mags[0]
    return tuple(mags)


def is_normal(p: Sequence[int]) -> bool:
    return tuple(p) == normal_coords(p)


def normalize(p: Sequence[int], params: Params) -> Tuple[Coords, Tuple[Move, ...]]:
    """Normal form of ``p`` together with a word of sign/permutation moves reaching it."""
    coords = make_point(p, params)
    n = params.n
    order = sorted(range(n), key=lambda j: abs(coords[j]))
    moves: list[Move] = []
    sigma = tuple(j + 1 for j in order)
    if sigma != tuple(range(1, n + 1)):
        moves.append(Permute(sigma))
    q = [coords[j] for j in order]

    flips = {j for j, x in enumerate(q) if x < 0}
    if len(flips) % 2 == 1:
        # sorted, so a zero entry if any sits at position 0; otherwise the
        # leftover sign is parked there
        flips ^= {0}
    ordered = sorted(flips)
    for s, t in zip(ordered[::2], ordered[1::2]):
        q[s], q[t] = -q[s], -q[t]
        moves.append(DoubleSign(s + 1, t + 1))
    return tuple(q), tuple(moves)


# -- the a < 0 reduction -----------------------------------------------------


def flip_first(p: Sequence[int]) -> Coords:
    p = tuple(p)
    return (-p[0],) + p[1:]


def negate_a_transform(p: Sequence[int], params: Params) -> Tuple[Coords, Params]:
    """Map a solution for ``a < 0`` to a solution for ``-a > 0`` by negating ``x_1``.

    The inverse is the same coordinate map paired with ``Params(-a, k, n)``;
    see :func:`flip_first`.
    """
    if params.a >= 0:
        raise StructuralError("negate_a_transform needs a < 0")
    coords = make_point(p, params)
    target = Params(-params.a, params.k, params.n)
    return flip_first(coords), target


# -- fundamental domain strata ----------------------------------------------


def _all_ones(xs: Sequence[int]) -> bool:
    return all(x == 1 for x in xs)


def _is_square(m: int) -> bool:
    return m >= 0 and math.isqrt(m) ** 2 == m


def _in_s0(q: Coords, params: Params) -> bool:
    return q[0] == 0 and sum(x * x for x in q[1:]) == params.k


def _in_s1(q: Coords, params: Params) -> bool:
    n, k = params.n, params.k
    if params.a != 1 or q[0] != -1 or not _all_ones(q[1:n - 2]):
        return False
    y, z = q[n - 2], q[n - 1]
    return 1 <= y <= z and y * y + z * z + y * z == k - n + 2


def _in_s2_pos(q: Coords, params: Params) -> bool:
    a, k, n = params.a, params.k, params.n
    if a == 1:
        return (_all_ones(q[:n - 3]) and q[n - 3] == 2 and q[n - 2] == q[n - 1] >= 2
                and k == n + 1)
    if a == 2:
        return _all_ones(q[:n - 2]) and q[n - 2] == q[n - 1] >= 1 and k == n - 2
    return False


def _in_s2_neg(q: Coords, params: Params) -> bool:
    a, k, n = params.a, params.k, params.n
    y, z = q[n - 2], q[n - 1]
    if a == 1:
        if n == 3:
            head_ok = q[0] == -2
        else:
            head_ok = q[0] == -1 and _all_ones(q[1:n - 3]) and q[n - 3] == 2
        return head_ok and 2 <= y <= z and _is_square(k - n - 1) and (y + z) ** 2 == k - n - 1
    if a == 2:
        return (q[0] == -1 and _all_ones(q[1:n - 2]) and 1 <= y <= z
                and _is_square(k - n + 2) and (y + z) ** 2 == k - n + 2)
    return False


def _in_sgt2_pos(q: Coords, params: Params) -> bool:
    a = params.a
    return q[0] > 0 and 2 * q[-1] <= a * math.prod(q[:-1]) and a * math.prod(q[:-2]) > 2


def _in_sgt2_neg(q: Coords, params: Params) -> bool:
    return q[0] < 0 and params.a * math.prod(q[:-2]) < -2


_TESTS = (
    (Stratum.S0, _in_s0),
    (Stratum.S1, _in_s1),
    (Stratum.S2_POS, _in_s2_pos),
    (Stratum.S2_NEG, _in_s2_neg),
    (Stratum.SGT2_POS, _in_sgt2_pos),
    (Stratum.SGT2_NEG, _in_sgt2_neg),
)


def _require_canonical(q: Sequence[int], params: Params) -> Coords:
    if params.a <= 0:
        raise StructuralError("strata are defined for a > 0; use negate_a_transform first")
    coords = make_point(q, params)
    if coords != normal_coords(coords):
        raise StructuralError(f"{coords} is not in normal form")
    return coords


def stratum_member(q: Sequence[int], params: Params) -> Stratum:
    """Stratum of the fundamental domain containing the normal point ``q``, or NONE."""
    coords = _require_canonical(q, params)
    return classify(coords, params)


def classify(q: Coords, params: Params) -> Stratum:
    # no validation; callers pass canonical solutions
    for tag, test in _TESTS:
        if test(q, params):
            return tag
    return Stratum.NONE


def strata_containing(q: Sequence[int], params: Params) -> list[Stratum]:
    """Every stratum whose defining conditions ``q`` satisfies (for disjointness checks)."""
    coords = _require_canonical(q, params)
    return [tag for tag, test in _TESTS if test(coords, params)]
