"""Simple loops in minimal position, as cyclic sequences of loop segments.

Segment ``j`` runs inside one triangle from its ``in`` arc to its ``out``
arc.  Juncture ``j`` is the crossing point at the end of segment ``j`` (on
its ``out`` arc), so segment ``j`` goes from juncture ``j-1`` to juncture
``j``, indices taken cyclically.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from .algebra import LatticeVec
from .surface import Diagnostic, Triangulation

LEFT = "L"
RIGHT = "R"


class InvalidLoop(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(d.message for d in diagnostics))


class UnsupportedSegment(ValueError):
    """A loop segment lies in a self-folded triangle."""


@dataclass(frozen=True)
class Segment:
    triangle: int
    in_arc: str
    out_arc: str

    def to_json(self) -> dict:
        return {"triangle": self.triangle, "in": self.in_arc, "out": self.out_arc}

    @classmethod
    def from_json(cls, data: Mapping) -> "Segment":
        return cls(int(data["triangle"]), str(data["in"]), str(data["out"]))


@dataclass(frozen=True)
class LoopPosition:
    segments: tuple[Segment, ...]
    name: str | None = None

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def junctures(self) -> tuple[str, ...]:
        """Arc carrying each juncture, in juncture order."""
        return tuple(s.out_arc for s in self.segments)

    def reversed(self) -> "LoopPosition":
        segs = tuple(Segment(s.triangle, s.out_arc, s.in_arc) for s in reversed(self.segments))
        return LoopPosition(segs, self.name)

    def rotated(self, n: int) -> "LoopPosition":
        n %= max(len(self.segments), 1)
        return LoopPosition(self.segments[n:] + self.segments[:n], self.name)

    def triangles(self) -> frozenset[int]:
        return frozenset(s.triangle for s in self.segments)

    def to_json(self, surface: str | None = None) -> dict:
        out: dict = {}
        if surface is not None:
            out["surface"] = surface
        out["segments"] = [s.to_json() for s in self.segments]
        return out

    @classmethod
    def from_json(cls, data: Mapping, name: str | None = None) -> "LoopPosition":
        try:
            segs = tuple(Segment.from_json(s) for s in data["segments"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed loop JSON: {exc}") from exc
        return cls(segs, name)

    @classmethod
    def load(cls, path: str | Path) -> tuple["LoopPosition", str | None]:
        """Read a loop file; also returns its ``surface`` reference if any."""
        with open(path) as fh:
            data = json.load(fh)
        return cls.from_json(data, name=str(path)), data.get("surface")


def loop(t: Triangulation, *segs: tuple[int, str, str], name: str | None = None) -> LoopPosition:
    """Build and validate a loop from ``(triangle, in, out)`` triples."""
    lp = LoopPosition(tuple(Segment(*s) for s in segs), name)
    require_valid_loop(t, lp)
    return lp


def validate_loop(t: Triangulation, lp: LoopPosition) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    n = len(lp.segments)
    if n == 0:
        return [Diagnostic("empty-loop", "loop has no segments")]
    inc = t.incidences()
    for j, s in enumerate(lp.segments):
        if not 0 <= s.triangle < len(t.triangles):
            diags.append(Diagnostic("bad-triangle", f"segment {j}: no triangle {s.triangle}", triangle=s.triangle))
            continue
        tr = t.triangles[s.triangle]
        if tr.self_folded:
            diags.append(Diagnostic("self-folded", f"segment {j}: lies in self-folded triangle {s.triangle}", triangle=s.triangle))
            continue
        for arc in (s.in_arc, s.out_arc):
            if arc not in tr.sides:
                diags.append(Diagnostic("not-a-side", f"segment {j}: arc {arc!r} is not a side of triangle {s.triangle}", arc=arc, triangle=s.triangle))
            elif arc in t.boundary_arcs:
                diags.append(Diagnostic("boundary-crossing", f"segment {j}: loops cannot cross boundary arc {arc!r}", arc=arc))
        if s.in_arc == s.out_arc:
            diags.append(Diagnostic("u-turn", f"segment {j}: enters and leaves through the same arc {s.in_arc!r}", arc=s.in_arc, triangle=s.triangle))
    if diags:
        return diags
    for j, s in enumerate(lp.segments):
        nxt = lp.segments[(j + 1) % n]
        if s.out_arc != nxt.in_arc:
            diags.append(Diagnostic("chain", f"segment {j} leaves through {s.out_arc!r} but segment {(j + 1) % n} enters through {nxt.in_arc!r}", arc=s.out_arc))
            continue
        pair = inc.get(s.out_arc, [])
        if len(pair) == 2 and sorted(pair) != sorted([s.triangle, nxt.triangle]):
            diags.append(Diagnostic("chain", f"crossing {s.out_arc!r} from triangle {s.triangle} cannot land in triangle {nxt.triangle}", arc=s.out_arc, triangle=nxt.triangle))
    return diags


def require_valid_loop(t: Triangulation, lp: LoopPosition) -> LoopPosition:
    diags = validate_loop(t, lp)
    if any(d.code == "self-folded" for d in diags):
        raise UnsupportedSegment(diags[0].message)
    if diags:
        raise InvalidLoop(diags)
    return lp


def turn_of(t: Triangulation, seg: Segment) -> str:
    """``L`` iff the out arc is the clockwise successor of the in arc."""
    tr = t.triangles[seg.triangle]
    if tr.self_folded:
        raise UnsupportedSegment(f"triangle {seg.triangle} is self-folded")
    return LEFT if tr.successor(seg.in_arc) == seg.out_arc else RIGHT


def turns(t: Triangulation, lp: LoopPosition) -> tuple[str, ...]:
    return tuple(turn_of(t, s) for s in lp.segments)


@dataclass(frozen=True)
class Classification:
    kind: str  # "peripheral", "almost_peripheral" or "general"
    index: int | None = None  # 1-based index of the odd segment when almost peripheral

    def __str__(self) -> str:
        if self.kind == "almost_peripheral":
            return f"almost_peripheral({self.index})"
        return self.kind


def classify(t: Triangulation, lp: LoopPosition) -> Classification:
    """Peripheral if all turns agree; almost peripheral if exactly one differs.

    For a two-segment loop with one turn of each kind, the left turn is taken
    as the odd one.
    """
    tt = turns(t, lp)
    nl = tt.count(LEFT)
    nr = len(tt) - nl
    if nl == 0 or nr == 0:
        return Classification("peripheral")
    if nl == 1:
        return Classification("almost_peripheral", tt.index(LEFT) + 1)
    if nr == 1:
        return Classification("almost_peripheral", tt.index(RIGHT) + 1)
    return Classification("general")


def total_intersection(t: Triangulation, lp: LoopPosition) -> LatticeVec:
    """``v_gamma = sum_i int(gamma, i) ṽ_i``."""
    out = LatticeVec()
    for arc in lp.junctures:
        out = out + t.tilde(arc)
    return out


def arcs_met(lp: LoopPosition) -> frozenset[str]:
    return frozenset(lp.junctures)


def triangle_disjoint(a: LoopPosition, b: LoopPosition) -> bool:
    """No ideal triangle meets both loops."""
    return not (a.triangles() & b.triangles())


def trace_right_turns(
    t: Triangulation, start: Segment, left_at: Sequence[tuple[int, str]] = (), limit: int = 10_000
) -> LoopPosition:
    """Follow a loop from ``start``, turning right except where told otherwise.

    ``left_at`` lists ``(triangle, in_arc)`` entries where the next segment
    turns left instead.  Stops when ``start`` recurs.
    """
    lefts = set(left_at)
    segs = [start]
    cur = start
    for _ in range(limit):
        nt = t.other_triangle(cur.out_arc, cur.triangle)
        tr = t.triangles[nt]
        if (nt, cur.out_arc) in lefts:
            out = tr.successor(cur.out_arc)
        else:
            out = tr.predecessor(cur.out_arc)
        cur = Segment(nt, cur.out_arc, out)
        if cur == start:
            return LoopPosition(tuple(segs))
        segs.append(cur)
    raise RuntimeError("loop did not close")
