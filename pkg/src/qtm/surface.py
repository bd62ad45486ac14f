"""Ideal triangulations of marked surfaces, encoded combinatorially.

A triangle is either an ordinary triangle with three sides listed in
clockwise order, or a self-folded triangle given by its inner and outer arc.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import LatticeVec, SkewLattice


class InvalidTriangulation(ValueError):
    def __init__(self, diagnostics: list["Diagnostic"]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(d.message for d in diagnostics))


class UnsupportedFlip(ValueError):
    """Flip requested at a boundary or self-folded arc."""


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    arc: str | None = None
    triangle: int | None = None

    def to_json(self) -> dict:
        out: dict = {"code": self.code, "message": self.message}
        if self.arc is not None:
            out["arc"] = self.arc
        if self.triangle is not None:
            out["triangle"] = self.triangle
        return out


@dataclass(frozen=True)
class Triangle:
    sides: tuple[str, str, str] | None = None
    inner: str | None = None
    outer: str | None = None

    @property
    def self_folded(self) -> bool:
        return self.sides is None

    def slots(self) -> tuple[str, ...]:
        """Arc incidences of this triangle (inner arc twice when self-folded)."""
        if self.sides is not None:
            return self.sides
        return (self.inner, self.inner, self.outer)

    def successor(self, arc: str) -> str:
        """Clockwise successor of ``arc`` among the sides."""
        s = self.sides
        return s[(s.index(arc) + 1) % 3]

    def predecessor(self, arc: str) -> str:
        s = self.sides
        return s[(s.index(arc) - 1) % 3]

    def to_json(self) -> dict:
        if self.sides is not None:
            return {"sides": list(self.sides)}
        return {"self_folded": {"inner": self.inner, "outer": self.outer}}

    @classmethod
    def from_json(cls, data: Mapping) -> "Triangle":
        if "sides" in data:
            sides = tuple(str(x) for x in data["sides"])
            if len(sides) != 3:
                raise ValueError("a triangle needs exactly three sides")
            return cls(sides=sides)
        sf = data.get("self_folded")
        if sf is None:
            raise ValueError("triangle record needs 'sides' or 'self_folded'")
        return cls(inner=str(sf["inner"]), outer=str(sf["outer"]))


def tri(*sides: str) -> Triangle:
    return Triangle(sides=tuple(sides))


def self_folded(inner: str, outer: str) -> Triangle:
    return Triangle(inner=inner, outer=outer)


@dataclass(frozen=True)
class Triangulation:
    arcs: tuple[str, ...]
    triangles: tuple[Triangle, ...]
    boundary_arcs: frozenset[str] = frozenset()
    punctures: Mapping[str, Mapping[str, int]] = field(default_factory=dict)
    name: str | None = None

    @property
    def internal_arcs(self) -> tuple[str, ...]:
        return tuple(a for a in self.arcs if a not in self.boundary_arcs)

    def pi(self, arc: str) -> str:
        """Outer arc of the self-folded triangle with inner ``arc``, else ``arc``."""
        for t in self.triangles:
            if t.self_folded and t.inner == arc:
                return t.outer
        return arc

    def self_folded_arcs(self) -> frozenset[str]:
        return frozenset(t.inner for t in self.triangles if t.self_folded)

    def incidences(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {a: [] for a in self.arcs}
        for n, t in enumerate(self.triangles):
            for s in t.slots():
                out.setdefault(s, []).append(n)
        return out

    def other_triangle(self, arc: str, triangle: int) -> int:
        """The triangle entered when crossing ``arc`` out of ``triangle``."""
        inc = self.incidences()[arc]
        if len(inc) != 2:
            raise ValueError(f"arc {arc!r} is not an internal arc")
        if inc[0] == triangle:
            return inc[1]
        if inc[1] == triangle:
            return inc[0]
        raise ValueError(f"arc {arc!r} is not a side of triangle {triangle}")

    def tilde(self, arc: str) -> LatticeVec:
        """``v_i - v_{pi(i)}`` for a self-folded arc, ``v_i`` otherwise."""
        p = self.pi(arc)
        if p == arc:
            return LatticeVec.basis(arc)
        return LatticeVec({arc: 1, p: -1})

    def to_json(self) -> dict:
        out: dict = {
            "arcs": list(self.arcs),
            "boundary_arcs": sorted(self.boundary_arcs),
            "triangles": [t.to_json() for t in self.triangles],
        }
        if self.punctures:
            out["punctures"] = {p: dict(v) for p, v in self.punctures.items()}
        return out

    @classmethod
    def from_json(cls, data: Mapping, name: str | None = None) -> "Triangulation":
        try:
            arcs = tuple(str(a) for a in data["arcs"])
            triangles = tuple(Triangle.from_json(t) for t in data["triangles"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed surface JSON: {exc}") from exc
        boundary = frozenset(str(a) for a in data.get("boundary_arcs", []))
        punctures = {str(p): {str(a): int(n) for a, n in v.items()} for p, v in data.get("punctures", {}).items()}
        return cls(arcs, triangles, boundary, punctures, name)

    @classmethod
    def load(cls, path: str | Path) -> "Triangulation":
        with open(path) as fh:
            return cls.from_json(json.load(fh), name=str(path))


def validate(t: Triangulation) -> list[Diagnostic]:
    """Incidence checks; an empty list means the triangulation is valid."""
    diags: list[Diagnostic] = []
    arcs = set(t.arcs)
    if len(arcs) != len(t.arcs):
        diags.append(Diagnostic("duplicate-arc", "arc list contains duplicates"))
    for b in sorted(t.boundary_arcs - arcs):
        diags.append(Diagnostic("unknown-arc", f"boundary arc {b!r} is not in the arc list", arc=b))
    counts = {a: 0 for a in t.arcs}
    for n, tr in enumerate(t.triangles):
        if tr.self_folded:
            if tr.inner == tr.outer:
                diags.append(Diagnostic("degenerate-triangle", f"triangle {n}: inner and outer arc coincide", triangle=n))
            if tr.inner in t.boundary_arcs:
                diags.append(Diagnostic("boundary-inner", f"triangle {n}: self-folded inner arc {tr.inner!r} is a boundary arc", arc=tr.inner, triangle=n))
        for s in tr.slots():
            if s not in arcs:
                diags.append(Diagnostic("unknown-arc", f"triangle {n} uses unknown arc {s!r}", arc=s, triangle=n))
            else:
                counts[s] += 1
    for a in t.arcs:
        want = 1 if a in t.boundary_arcs else 2
        got = counts.get(a, 0)
        if got > want:
            diags.append(Diagnostic("over-incident", f"arc over-incident: {a!r} has {got} triangle incidences, expected {want}", arc=a))
        elif got < want:
            diags.append(Diagnostic("under-incident", f"arc under-incident: {a!r} has {got} triangle incidences, expected {want}", arc=a))
    for p, val in t.punctures.items():
        for a, n in val.items():
            if a not in arcs:
                diags.append(Diagnostic("unknown-arc", f"puncture {p!r} references unknown arc {a!r}", arc=a))
            elif n not in (0, 1, 2):
                diags.append(Diagnostic("bad-valence", f"puncture {p!r}: valence of {a!r} must be 0, 1 or 2", arc=a))
    return diags


def require_valid(t: Triangulation) -> Triangulation:
    diags = validate(t)
    if diags:
        raise InvalidTriangulation(diags)
    return t


def exchange_matrix(t: Triangulation) -> SkewLattice:
    """Skew lattice with ``eps_ij = a_{pi(i) pi(j)} - a_{pi(j) pi(i)}``.

    ``a_xy`` counts ordinary triangles in which ``y`` is the clockwise
    successor of ``x``.
    """
    require_valid(t)
    a: dict[tuple[str, str], int] = {}
    for tr in t.triangles:
        if tr.self_folded:
            continue
        for n in range(3):
            x, y = tr.sides[n], tr.sides[(n + 1) % 3]
            a[(x, y)] = a.get((x, y), 0) + 1
    pi = {arc: t.pi(arc) for arc in t.arcs}
    eps: dict[tuple[str, str], int] = {}
    for n, i in enumerate(t.arcs):
        for j in t.arcs[n + 1 :]:
            pi_i, pi_j = pi[i], pi[j]
            e = a.get((pi_i, pi_j), 0) - a.get((pi_j, pi_i), 0)
            if e:
                eps[(i, j)] = e
    return SkewLattice(t.arcs, eps, frozen=t.boundary_arcs, self_folded=t.self_folded_arcs())


def is_balanced(t: Triangulation, v: LatticeVec) -> bool:
    """Every triangle's side-coordinate sum (self-folded side doubled) is even."""
    for tr in t.triangles:
        if sum(v[s] for s in tr.slots()) % 2:
            return False
    return True


def puncture_vector(t: Triangulation, p: str) -> LatticeVec:
    """``sum_i theta^i_p ṽ_i`` from the per-arc endpoint valences at ``p``."""
    if p not in t.punctures:
        raise KeyError(f"no valence data for puncture {p!r}")
    out = LatticeVec()
    for arc, n in t.punctures[p].items():
        out = out + t.tilde(arc) * n
    return out


def mutate_exchange(eps: SkewLattice, k: str) -> SkewLattice:
    """Matrix mutation at ``k``.

    ``eps'_ij = -eps_ij`` if ``k`` is ``i`` or ``j``, and otherwise
    ``eps_ij + (eps_ik |eps_kj| + |eps_ik| eps_kj) / 2``.
    """
    if k not in eps:
        raise KeyError(f"unknown arc {k!r}")
    if k in eps.frozen:
        raise UnsupportedFlip(f"cannot flip boundary arc {k!r}")
    if k in eps.self_folded:
        raise UnsupportedFlip(f"cannot flip self-folded arc {k!r}")
    labels = eps.labels
    out: dict[tuple[str, str], int] = {}
    for n, i in enumerate(labels):
        for j in labels[n + 1 :]:
            e = eps.eps(i, j)
            if k in (i, j):
                e = -e
            else:
                eik, ekj = eps.eps(i, k), eps.eps(k, j)
                twice = eik * abs(ekj) + abs(eik) * ekj
                e = e + twice // 2
            if e:
                out[(i, j)] = e
    return SkewLattice(labels, out, frozen=eps.frozen, self_folded=eps.self_folded)


def flip(t: Triangulation, k: str) -> Triangulation:
    """Combinatorial flip of the diagonal ``k`` of its quadrilateral.

    The new diagonal keeps the label ``k``.  With the two triangles
    ``(k, a, b)`` and ``(k, c, d)`` (clockwise), the quadrilateral reads
    ``a, b, c, d`` clockwise and the flip produces ``(k, b, c)``, ``(k, d, a)``.
    """
    require_valid(t)
    if k in t.boundary_arcs:
        raise UnsupportedFlip(f"cannot flip boundary arc {k!r}")
    if k in t.self_folded_arcs():
        raise UnsupportedFlip(f"cannot flip self-folded arc {k!r}")
    inc = t.incidences()[k]
    n1, n2 = inc
    t1, t2 = t.triangles[n1], t.triangles[n2]
    if t1.self_folded or t2.self_folded:
        raise UnsupportedFlip(f"arc {k!r} borders a self-folded triangle")
    if n1 == n2:
        raise UnsupportedFlip(f"arc {k!r} appears twice in one triangle")

    def rotate(sides: tuple[str, str, str]) -> tuple[str, str, str]:
        n = sides.index(k)
        return sides[n:] + sides[:n]

    _, a, b = rotate(t1.sides)
    _, c, d = rotate(t2.sides)
    triangles = list(t.triangles)
    triangles[n1] = tri(k, b, c)
    triangles[n2] = tri(k, d, a)
    # With a single marked point every arc has both ends there, so valence
    # data survives the flip unchanged; otherwise it would need recomputing.
    punctures = t.punctures if len(t.punctures) == 1 else {}
    return Triangulation(t.arcs, tuple(triangles), t.boundary_arcs, punctures, t.name)


def surface_json_dumps(t: Triangulation, pretty: bool = False) -> str:
    return json.dumps(t.to_json(), indent=2 if pretty else None, sort_keys=False)


def arcs_of(triangles: Iterable[Triangle]) -> list[str]:
    seen: dict[str, None] = {}
    for tr in triangles:
        for s in tr.slots():
            seen.setdefault(s, None)
    return list(seen)
