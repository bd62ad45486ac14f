"""Built-in triangulations and loops.

Each surface is an explicit list of triangles with clockwise side orders,
fixed so that the exchange matrix agrees with the matrix entries used in the
hand computations it reproduces.  Loops are either written out segment by
segment or traced with ``trace_right_turns`` and then cut and re-closed.

Entries:

* ``one-holed-torus``: arcs a, b, c, d and boundary e.
* ``one-holed-genus-G``: the 4G-gon triangulation with the hole between
  c1 and c1'.
* ``once-punctured-genus-G``: the same with the hole and c1' removed.
* ``delta-prime-G-I``: the genus-G one-holed surface cut open along the
  fan diagonal ``D_{I-1}``.
* ``once-punctured-torus`` and ``once-punctured-torus-flipped``: two
  triangulations related by the flip at arc 3.
"""

from __future__ import annotations

import re
from collections.abc import Callable
from dataclasses import dataclass, field

from .algebra import LatticeVec, vec
from .loops import LoopPosition, Segment, require_valid_loop, trace_right_turns
from .surface import Triangle, Triangulation, require_valid, tri

GENUS_RANGE = range(2, 7)


class UnknownEntry(KeyError):
    pass


@dataclass(frozen=True)
class TripleSpec:
    """A Teschner triple ``(gamma, gamma_1, gamma_2)`` named by loop names."""

    kind: str  # "strong" or "weak"
    loops: tuple[str, str, str]
    v1: LatticeVec
    v2: LatticeVec
    pairing: int
    tr5: tuple[str, str, str] | None = None  # strong triple certifying a weak one

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "loops": list(self.loops),
            "v1": self.v1.to_json(),
            "v2": self.v2.to_json(),
            "pairing": self.pairing,
        }
        if self.tr5:
            out["tr5"] = list(self.tr5)
        return out


@dataclass
class CatalogEntry:
    name: str
    surface: Triangulation
    loops: dict[str, LoopPosition]
    expected: dict = field(default_factory=dict)
    notes: str = ""

    def loop(self, name: str) -> LoopPosition:
        try:
            return self.loops[name]
        except KeyError:
            raise UnknownEntry(f"entry {self.name!r} has no loop {name!r}; loops: {sorted(self.loops)}") from None

    def triples(self) -> list[TripleSpec]:
        return list(self.expected.get("triples", []))


def _finish(entry: CatalogEntry) -> CatalogEntry:
    require_valid(entry.surface)
    for name, lp in entry.loops.items():
        require_valid_loop(entry.surface, lp)
        entry.loops[name] = LoopPosition(lp.segments, name)
    return entry


def _index(triangles: list[Triangle], sides: tuple[str, ...]) -> int:
    """Index of the triangle with exactly these clockwise sides (up to rotation)."""
    for n, t in enumerate(triangles):
        s = t.sides
        if any(s[r:] + s[:r] == tuple(sides) for r in range(3)):
            return n
    raise ValueError(f"no triangle {sides}")


def _single_puncture(t: Triangulation) -> Triangulation:
    """Attach valence data for a surface with one puncture: every arc has both ends there."""
    return Triangulation(t.arcs, t.triangles, t.boundary_arcs, {"p": {a: 2 for a in t.arcs}}, t.name)


# ---------------------------------------------------------------- one-holed torus


def one_holed_torus() -> CatalogEntry:
    triangles = [tri("b", "a", "c"), tri("b", "a", "d"), tri("d", "c", "e")]
    t = Triangulation(("a", "b", "c", "d", "e"), tuple(triangles), frozenset({"e"}), name="one-holed-torus")
    gamma = LoopPosition(
        (
            Segment(2, "d", "c"),
            Segment(0, "c", "a"),
            Segment(1, "a", "b"),
            Segment(0, "b", "c"),
            Segment(2, "c", "d"),
            Segment(1, "d", "a"),
            Segment(0, "a", "b"),
            Segment(1, "b", "d"),
        )
    )
    eta = LoopPosition((Segment(1, "a", "b"), Segment(0, "b", "a")))
    expected = {
        "term_counts": {"gamma": 9, "eta": 3},
        "gamma_support": [
            vec(a=2, b=2, c=2, d=2),
            vec(a=2, b=2, d=2),
            vec(b=2, d=2),
            vec(d=2),
            vec(c=-2, d=2),
            vec(c=-2),
            vec(a=-2, c=-2),
            vec(a=-2, b=-2, c=-2),
            vec(a=-2, b=-2, c=-2, d=-2),
        ],
        "eta_trace": [vec(a=1, b=1), vec(a=-1, b=1), vec(a=-1, b=-1)],
        "triples": [TripleSpec("strong", ("gamma", "eta", "eta"), vec(a=1, b=1, d=2), vec(a=-1, b=-1, c=-2), -4)],
    }
    return _finish(CatalogEntry("one-holed-torus", t, {"gamma": gamma, "eta": eta}, expected))


# ---------------------------------------------------------------- genus g, hole in handle 1


def _handle(j: int, base: str) -> list[Triangle]:
    a, b, c, d = (f"{x}{j}" for x in "abcd")
    return [tri(a, c, b), tri(b, a, d), tri(c, base, d)]


def _fig_arcs(g: int) -> tuple[list[Triangle], str]:
    """Triangles of the one-holed genus-g surface, hole between c1 and c1'.

    Returns the triangle list and the name of the arc closing handle 1
    (f2, or e2 when g = 2 and the central polygon is a bigon).
    """
    x = "f2" if g >= 3 else "e2"
    tris = [tri("a1", "c1", "b1"), tri("b1", "a1", "d1"), tri("c1'", x, "d1")]
    for j in range(2, g + 1):
        tris += _handle(j, f"e{j}")
    # fan from the hole vertex with f_g standing for e_g
    for j in range(2, g):
        nxt = f"f{j + 1}" if j + 1 < g else f"e{g}"
        tris.append(tri(f"f{j}", nxt, f"e{j}"))
    tris.append(tri("c1'", "c1", "e"))
    return tris, x


def _arc_order(g: int, hole: bool) -> tuple[str, ...]:
    arcs = []
    for j in range(1, g + 1):
        arcs += [f"a{j}", f"b{j}", f"c{j}"]
        if j == 1 and hole:
            arcs.append("c1'")
        arcs.append(f"d{j}")
    arcs += [f"e{j}" for j in range(2, g + 1)]
    arcs += [f"f{j}" for j in range(2, g)]
    if hole:
        arcs.append("e")
    return tuple(arcs)


def _genus_loops(t: Triangulation, x: str) -> tuple[LoopPosition, LoopPosition, LoopPosition, LoopPosition]:
    tris = list(t.triangles)
    t_c1p = _index(tris, ("c1'", x, "d1"))
    t_hole = _index(tris, ("c1'", "c1", "e"))
    gamma = trace_right_turns(t, Segment(t_c1p, x, "c1'"), left_at=[(t_hole, "c1'")])
    n = len(gamma)
    xs = gamma.junctures  # xs[j - 1] is x_j
    eta = LoopPosition((Segment(t_c1p, x, "d1"),) + gamma.segments[7:])
    sigma = LoopPosition((Segment(_index(tris, ("b1", "a1", "d1")), "a1", "b1"), Segment(_index(tris, ("a1", "c1", "b1")), "b1", "a1")))
    zeta = LoopPosition((Segment(gamma.segments[11].triangle, xs[n - 2], xs[11]),) + gamma.segments[12 : n - 1])
    return gamma, eta, sigma, zeta


def _genus_v(gamma_like: LoopPosition) -> LatticeVec:
    out = LatticeVec()
    for arc in gamma_like.junctures:
        out = out + LatticeVec.basis(arc)
    return out


def one_holed_genus(g: int) -> CatalogEntry:
    _check_genus(g)
    tris, x = _fig_arcs(g)
    name = f"one-holed-genus-{g}"
    t = Triangulation(_arc_order(g, True), tuple(tris), frozenset({"e"}), name=name)
    gamma, eta, sigma, zeta = _genus_loops(t, x)
    v_gamma, v_eta = _genus_v(gamma), _genus_v(eta)
    v1 = vec(a1=-1, b1=-1, c1=-2)
    w1 = vec(a1=-1, b1=-1, d1=-2)
    n = 12 * g - 4
    expected = {
        "N": n,
        "term_counts": {"gamma": n + 1, "eta": n - 5, "sigma": 3, "zeta": len(zeta) + 1},
        "triples": [
            TripleSpec("weak", ("gamma", "eta", "sigma"), v1, v1 + v_gamma, 4, tr5=("eta", "zeta", "sigma")),
            TripleSpec("strong", ("eta", "zeta", "sigma"), w1, w1 + v_eta, 4),
        ],
    }
    loops = {"gamma": gamma, "eta": eta, "sigma": sigma, "zeta": zeta}
    return _finish(CatalogEntry(name, t, loops, expected))


def once_punctured_genus(g: int) -> CatalogEntry:
    """Fill the hole and drop c1'; c1 takes over its place in handle 1."""
    _check_genus(g)
    tris, x = _fig_arcs(g)
    assert tris[-1].sides == ("c1'", "c1", "e")
    # the hole triangle comes last, so dropping it leaves every other index in place
    tris = [tri(*("c1" if s == "c1'" else s for s in tr.sides)) for tr in tris[:-1]]
    name = f"once-punctured-genus-{g}"
    t = _single_puncture(Triangulation(_arc_order(g, False), tuple(tris), name=name))
    # eta, sigma and zeta never enter the hole triangle, so they carry over verbatim
    holed = one_holed_genus(g)
    loops = {nm: LoopPosition(holed.loops[nm].segments) for nm in ("eta", "sigma", "zeta")}
    v_eta = _genus_v(loops["eta"])
    w1 = vec(a1=-1, b1=-1, d1=-2)
    expected = {
        "term_counts": {"eta": 12 * g - 9, "sigma": 3, "zeta": len(loops["zeta"]) + 1},
        "triples": [TripleSpec("strong", ("eta", "zeta", "sigma"), w1, w1 + v_eta, 4)],
    }
    return _finish(CatalogEntry(name, t, loops, expected))


# ---------------------------------------------------------------- delta-prime family


def _diag(m: int, g: int) -> str:
    """Fan diagonal ``D_m`` from P0 to P_m; the two extreme ones are polygon sides."""
    if m == g - 1:
        return f"e{g}"
    if m == 1:
        return "e1"
    return f"f{m}"


def _base(j: int, g: int) -> str:
    # for g = 2 the central polygon is a bigon and e1, e2 are one arc
    return "e2" if g == 2 else f"e{j}"


def delta_prime(g: int, i: int) -> CatalogEntry:
    """Genus-g one-holed surface with the hole opened along ``D_{i-1}``.

    The central g-gon has sides e1..eg and is fanned from one vertex, so the
    fan triangle ``m`` (2 <= m <= g-1) has sides ``D_{m-1}, D_m, e_m``.  The
    cut arc ``D = D_{i-1}`` keeps its label on the side of the later handles;
    its copy ``D'`` lies on the side of the earlier ones.
    """
    _check_genus(g)
    if not 2 <= i <= g:
        raise ValueError(f"need 2 <= i <= g, got i = {i}")
    tris: list[Triangle] = []
    for j in range(1, g + 1):
        tris += _handle(j, _base(j, g))
    fan = {m: tri(_diag(m - 1, g), _diag(m, g), f"e{m}") for m in range(2, g)}
    d = _diag(i - 1, g)
    dp = d + "'"
    # the triangle on the earlier-handle side of D
    if i == 2:
        early = 2  # handle 1: (c1, e1, d1)
    else:
        early = None
    fan_tris = [fan[m] for m in range(2, g)]
    if early is not None:
        tris[early] = tri(*(dp if s == d else s for s in tris[early].sides))
    else:
        fan_tris[i - 1 - 2] = tri(*(dp if s == d else s for s in fan_tris[i - 1 - 2].sides))
    tris += fan_tris
    hole = len(tris)
    tris.append(tri(d, dp, "e"))

    arcs = []
    for j in range(1, g + 1):
        arcs += [f"a{j}", f"b{j}", f"c{j}", f"d{j}"]
    arcs += sorted({_base(j, g) for j in range(1, g + 1)}, key=lambda a: int(a[1:]))
    arcs += [f"f{m}" for m in range(2, g - 1)]
    arcs += [dp, "e"]
    name = f"delta-prime-{g}-{i}"
    t = Triangulation(tuple(arcs), tuple(tris), frozenset({"e"}), name=name)

    gamma = trace_right_turns(t, Segment(hole, d, dp), left_at=[(hole, d)])
    n = len(gamma)
    xs = gamma.junctures
    k = {j: i + 9 + 11 * (j - 2) for j in range(1, g + 1)}
    ki, kp = k[i], k[i - 1]
    t_late = gamma.segments[ki].triangle  # segment k_i + 1
    t_early = gamma.segments[1].triangle  # segment 2
    zeta = LoopPosition((Segment(t_late, xs[n - 2], xs[ki]),) + gamma.segments[ki + 1 : n - 1])
    theta = LoopPosition((Segment(t_early, xs[kp + 8], xs[1]),) + gamma.segments[2 : kp + 9])
    h = lambda j: LatticeVec.basis(xs[j - 1])  # noqa: E731
    v2 = LatticeVec()
    for j in range(ki, n + 1):
        v2 = v2 + h(j)
    v1 = h(n)
    for j in range(1, ki + 1):
        v1 = v1 - h(j)
    expected = {
        "N": n,
        "k": k,
        "cut_arc": d,
        "copy_arc": dp,
        "term_counts": {"gamma": n + 1, "zeta": n - ki, "vartheta": kp + 9},
        "triples": [TripleSpec("strong", ("gamma", "zeta", "vartheta"), v1, v2, 4)],
    }
    notes = (
        "Triangles away from the three loops are not pinned by the matrix entries used in the "
        "hand computation; the central polygon is fanned from the vertex shared by e1 and eg."
    )
    loops = {"gamma": gamma, "zeta": zeta, "vartheta": theta}
    return _finish(CatalogEntry(name, t, loops, expected, notes))


# ---------------------------------------------------------------- once-punctured torus


def _opt_triangulation(flipped: bool) -> Triangulation:
    sides = ("1", "2", "3") if flipped else ("1", "3", "2")
    name = "once-punctured-torus-flipped" if flipped else "once-punctured-torus"
    return _single_puncture(Triangulation(("1", "2", "3"), (tri(*sides), tri(*sides)), name=name))


def once_punctured_torus(flipped: bool = False) -> CatalogEntry:
    t = _opt_triangulation(flipped)
    if flipped:
        peripheral = ((0, "1", "2"), (1, "2", "3"), (0, "3", "1"), (1, "1", "2"), (0, "2", "3"), (1, "3", "1"))
        nonsep_trace = [vec(**{"1": 1, "3": 1}), vec(**{"1": -1, "3": 1}), vec(**{"1": -1, "3": -1})]
    else:
        peripheral = ((0, "1", "3"), (1, "3", "2"), (0, "2", "1"), (1, "1", "3"), (0, "3", "2"), (1, "2", "1"))
        nonsep_trace = [vec(**{"1": 1, "3": 1}), vec(**{"1": 1, "3": -1}), vec(**{"1": -1, "3": -1})]
    loops = {
        "peripheral": LoopPosition(tuple(Segment(*s) for s in peripheral)),
        "nonsep": LoopPosition((Segment(0, "1", "3"), Segment(1, "3", "1"))),
    }
    expected = {
        "term_counts": {"peripheral": 2, "nonsep": 3},
        "nonsep_trace": nonsep_trace,
        "flip": {"arc": "3", "partner": "once-punctured-torus" if flipped else "once-punctured-torus-flipped"},
    }
    return _finish(CatalogEntry(t.name or "", t, loops, expected))


# ---------------------------------------------------------------- registry


def _check_genus(g: int) -> None:
    if g < 2:
        raise ValueError(f"genus must be at least 2, got {g}")


_FIXED: dict[str, Callable[[], CatalogEntry]] = {
    "one-holed-torus": one_holed_torus,
    "once-punctured-torus": lambda: once_punctured_torus(False),
    "once-punctured-torus-flipped": lambda: once_punctured_torus(True),
}

_PATTERNS: list[tuple[re.Pattern, Callable[..., CatalogEntry]]] = [
    (re.compile(r"one-holed-genus-(\d+)"), one_holed_genus),
    (re.compile(r"once-punctured-genus-(\d+)"), once_punctured_genus),
    (re.compile(r"delta-prime-(\d+)-(\d+)"), delta_prime),
]

_cache: dict[str, CatalogEntry] = {}


def get(name: str) -> CatalogEntry:
    """Build (or fetch from cache) the entry ``name``.  Entries must not be mutated."""
    if name in _cache:
        return _cache[name]
    if name in _FIXED:
        entry = _FIXED[name]()
    else:
        for pat, build in _PATTERNS:
            m = pat.fullmatch(name)
            if m:
                try:
                    entry = build(*(int(x) for x in m.groups()))
                except ValueError as exc:
                    raise UnknownEntry(f"{name!r}: {exc}") from None
                break
        else:
            raise UnknownEntry(f"unknown catalog entry {name!r}")
    _cache[name] = entry
    return entry


def names() -> list[str]:
    out = list(_FIXED)
    for g in GENUS_RANGE:
        out.append(f"one-holed-genus-{g}")
        out.append(f"once-punctured-genus-{g}")
        out += [f"delta-prime-{g}-{i}" for i in range(2, g + 1)]
    return sorted(out)


list_entries = names
