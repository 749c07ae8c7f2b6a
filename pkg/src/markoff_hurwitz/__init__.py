"""Fundamental domains for the Markoff-Hurwitz equation x_1^2+...+x_n^2 - a x_1...x_n = k."""
from .core import (
    DoubleSign,
    MarkoffHurwitzError,
    Move,
    NotOnVariety,
    Params,
    Permute,
    Stratum,
    StructuralError,
    Vieta,
    apply_move,
    apply_word,
    check_on_variety,
    double_sign,
    height,
    invert_word,
    make_point,
    negate_a_transform,
    normalize,
    permute,
    stratum_member,
    vieta,
)
from .enumeration import (
    FamilyDescriptor,
    FdSet,
    OrbitGraph,
    SolutionSet,
    enumerate_fd,
    enumerate_solutions,
    orbit_graph,
    solve_last_coordinate,
)
from .reduction import (
    ReductionResult,
    ReductionStuck,
    equivalence_word,
    equivalent,
    is_last_vertex,
    reduce,
)
from .verification import markoff_compat_check, verify_fundamental_domain

__version__ = "0.1.0"
