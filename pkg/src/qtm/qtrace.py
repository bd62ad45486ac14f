"""Juncture-state sums for the quantized trace of a simple loop.

A juncture-state assigns ``+1`` or ``-1`` to every juncture.  It is
admissible when no left-turn segment reads ``(-, +)`` and no right-turn
segment reads ``(+, -)`` from its initial to its terminal juncture.  Under
the non-redundancy condition (all state vectors distinct) the trace is the
sum of ``Z_{v_J}`` over admissible states ``J``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import LatticeVec, QTorusElement, SkewLattice, monomial
from .loops import LEFT, Classification, LoopPosition, classify, require_valid_loop, total_intersection, turns
from .surface import Triangulation, exchange_matrix

JunctureState = tuple[int, ...]

BRUTE_FORCE_LIMIT = 24


class RedundantStates(ValueError):
    """Two admissible states share a state vector; the state sum is not proven valid."""

    def __init__(self, collisions: list[tuple[JunctureState, JunctureState, LatticeVec]]):
        self.collisions = collisions
        first = collisions[0]
        super().__init__(
            f"{len(collisions)} colliding admissible state pair(s); e.g. "
            f"{format_state(first[0])} and {format_state(first[1])} both give {first[2]!r}"
        )


class UnsupportedClosedForm(ValueError):
    """No closed form applies to this loop."""


def format_state(j: JunctureState) -> str:
    return "".join("+" if s > 0 else "-" for s in j)


def _forbidden(turn: str) -> tuple[int, int]:
    return (-1, 1) if turn == LEFT else (1, -1)


def enumerate_admissible(t: Triangulation, lp: LoopPosition) -> list[JunctureState]:
    """All admissible states, in lexicographic order with ``+`` before ``-``.

    Depth-first over junctures ``0..N-1``.  Segment ``j`` links junctures
    ``j-1`` and ``j``, so it is checked as soon as juncture ``j`` is set;
    segment ``0`` closes the cycle and is checked at the end.
    """
    require_valid_loop(t, lp)
    forb = [_forbidden(x) for x in turns(t, lp)]
    n = len(forb)
    out: list[JunctureState] = []
    state = [0] * n

    def rec(j: int) -> None:
        if j == n:
            if (state[n - 1], state[0]) != forb[0]:
                out.append(tuple(state))
            return
        for s in (1, -1):
            if j > 0 and (state[j - 1], s) == forb[j]:
                continue
            state[j] = s
            rec(j + 1)
        state[j] = 0

    rec(0)
    return out


def brute_force_states(t: Triangulation, lp: LoopPosition) -> list[JunctureState]:
    """Exhaustive filter of all ``2^N`` assignments (oracle for the search)."""
    require_valid_loop(t, lp)
    n = len(lp.segments)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{n} junctures exceeds the brute-force limit of {BRUTE_FORCE_LIMIT}")
    forb = [_forbidden(x) for x in turns(t, lp)]
    out = []
    for cand in itertools.product((1, -1), repeat=n):
        if all((cand[j - 1], cand[j]) != forb[j] for j in range(n)):
            out.append(cand)
    return out


def state_vector(t: Triangulation, lp: LoopPosition, state: JunctureState) -> LatticeVec:
    """``v_J = sum over junctures x of J(x) ṽ_{arc(x)}``."""
    if len(state) != len(lp.segments):
        raise ValueError("state length does not match the number of junctures")
    acc: dict[str, int] = {}
    for arc, s in zip(lp.junctures, state):
        for k, c in t.tilde(arc).items():
            acc[k] = acc.get(k, 0) + s * c
    return LatticeVec(acc)


@dataclass(frozen=True)
class TraceResult:
    element: QTorusElement
    states: tuple[JunctureState, ...]
    classification: Classification
    v_gamma: LatticeVec

    def metadata(self) -> dict:
        return {
            "state_count": len(self.states),
            "classification": str(self.classification),
            "v_gamma": self.v_gamma.to_json(),
        }


def trace_with_states(t: Triangulation, lp: LoopPosition, lattice: SkewLattice | None = None) -> TraceResult:
    lattice = lattice or exchange_matrix(t)
    states = enumerate_admissible(t, lp)
    seen: dict[LatticeVec, JunctureState] = {}
    collisions = []
    for j in states:
        v = state_vector(t, lp, j)
        if v in seen:
            collisions.append((seen[v], j, v))
        else:
            seen[v] = j
    if collisions:
        raise RedundantStates(collisions)
    element = QTorusElement(lattice, {v: 1 for v in seen})
    return TraceResult(element, tuple(states), classify(t, lp), total_intersection(t, lp))


def trace(t: Triangulation, lp: LoopPosition, lattice: SkewLattice | None = None) -> QTorusElement:
    """Quantized trace via the admissible state sum; refuses on redundancy."""
    return trace_with_states(t, lp, lattice).element


def almost_peripheral_chain(t: Triangulation, lp: LoopPosition) -> list[LatticeVec]:
    """State vectors ``v_{J_0}, ..., v_{J_N}`` of an almost-peripheral loop.

    Starting from the all-plus state, junctures are switched to ``-`` one at
    a time beginning at the end of the odd segment; each switch subtracts
    ``2 ṽ`` of the juncture's arc.
    """
    c = classify(t, lp)
    if c.kind != "almost_peripheral":
        raise UnsupportedClosedForm("loop is not almost peripheral")
    if turns(t, lp)[c.index - 1] != LEFT:
        # The mirror case: reversing orientation swaps the turn types.
        return almost_peripheral_chain(t, lp.reversed())
    n = len(lp.segments)
    first = c.index - 1
    v = total_intersection(t, lp)
    chain = [v]
    for r in range(n):
        arc = lp.junctures[(first + r) % n]
        v = v - t.tilde(arc) * 2
        chain.append(v)
    return chain


def trace_closed_form(t: Triangulation, lp: LoopPosition, lattice: SkewLattice | None = None) -> QTorusElement:
    """Closed forms for peripheral, intersection-2 and almost-peripheral loops."""
    require_valid_loop(t, lp)
    lattice = lattice or exchange_matrix(t)
    c = classify(t, lp)
    vg = total_intersection(t, lp)
    if c.kind == "peripheral":
        return QTorusElement(lattice, {vg: 1, -vg: 1})
    if len(lp.segments) == 2:
        a, b = lp.junctures
        e = lattice.eps(a, b)
        if a == b or e not in (2, -2):
            raise UnsupportedClosedForm("intersection-2 form needs two arcs with eps = +-2")
        va, vb = t.tilde(a), t.tilde(b)
        sign = 1 if e > 0 else -1
        return QTorusElement(lattice, {va + vb: 1, (va - vb) * sign: 1, -va - vb: 1})
    if c.kind == "almost_peripheral":
        return QTorusElement(lattice, {v: 1 for v in almost_peripheral_chain(t, lp)})
    raise UnsupportedClosedForm("no closed form for a general loop")
