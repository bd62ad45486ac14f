"""Exact quantized trace-of-monodromy computations on triangulated surfaces.

The package works with a quantum torus over ``Z[omega^{+-1}]`` attached to
the exchange matrix of an ideal triangulation.  Simple loops are given
combinatorially, their traces are computed by admissible juncture-state
sums, and the resulting elements can be checked against Teschner recursion
relations, strong commutativity and flip naturality.

Submodules
----------
algebra    coefficient ring, skew lattices, quantum torus elements
surface    triangulations, exchange matrices, flips
loops      loop positions, turns, classification
qtrace     juncture states and traces
teschner   strong commutativity and Teschner triples
mutation   quantum coordinate change for one flip
catalog    built-in surfaces and loops
cli        command-line front end
"""

from .algebra import (
    LatticeMismatch,
    LatticeVec,
    OmegaPoly,
    QTorusElement,
    SkewLattice,
    monomial,
    mul,
    pair,
    span_intersection_basis,
    span_intersection_in_radical,
    specialize_omega1,
    star,
    vec,
    weyl_order,
)
from .catalog import CatalogEntry, TripleSpec, UnknownEntry, get, list_entries, names
from .loops import (
    InvalidLoop,
    LoopPosition,
    Segment,
    UnsupportedSegment,
    classify,
    loop,
    total_intersection,
    turn_of,
    turns,
    validate_loop,
)
from .mutation import (
    CALIBRATED,
    LITERAL,
    FlipConvention,
    Ck_map,
    Fq_times_P,
    LocalizedElement,
    theta_apply,
    verify_flip_naturality,
)
from .qtrace import (
    RedundantStates,
    UnsupportedClosedForm,
    brute_force_states,
    enumerate_admissible,
    state_vector,
    trace,
    trace_closed_form,
    trace_with_states,
)
from .surface import (
    Diagnostic,
    InvalidTriangulation,
    Triangulation,
    UnsupportedFlip,
    exchange_matrix,
    flip,
    is_balanced,
    mutate_exchange,
    puncture_vector,
    validate,
)
from .teschner import (
    TeschnerReport,
    TeschnerWitness,
    TripleWitness,
    heisenberg_commutes,
    solve_witness,
    strongly_commute,
    verify_strong_triple,
    verify_weak_triple,
)

__version__ = "0.1.0"
