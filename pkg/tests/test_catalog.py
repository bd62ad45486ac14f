import pytest

from oracles import corner_classes, euler_characteristic
from qtm import catalog
from qtm.algebra import LatticeVec
from qtm.loops import classify, total_intersection, validate_loop
from qtm.qtrace import trace
from qtm.surface import exchange_matrix, validate
from qtm.teschner import TeschnerWitness, TripleWitness, verify_strong_triple, verify_weak_triple

NAMES = catalog.names()


def _shape(name):
    """(genus, holes, punctures) of each family."""
    if name.startswith("one-holed-torus"):
        return 1, 1, 0
    if name.startswith("once-punctured-torus"):
        return 1, 0, 1
    g = int(name.split("-")[-1] if "genus" in name else name.split("-")[2])
    if name.startswith("once-punctured-genus"):
        return g, 0, 1
    return g, 1, 0


def test_list_properties():
    assert "one-holed-torus" in NAMES
    assert NAMES == sorted(NAMES)
    assert len(NAMES) == len(set(NAMES)) == 3 + 5 * 2 + sum(g - 1 for g in range(2, 7))
    for n in NAMES:
        assert catalog.get(n).name == n


def test_unknown_entry():
    with pytest.raises(catalog.UnknownEntry):
        catalog.get("klein-bottle")
    with pytest.raises(catalog.UnknownEntry):
        catalog.get("one-holed-genus-1")
    with pytest.raises(catalog.UnknownEntry):
        catalog.get("delta-prime-3-4")
    with pytest.raises(catalog.UnknownEntry):
        catalog.get("one-holed-torus").loop("nope")


def test_one_holed_torus_entry(oht):
    t = oht.surface
    assert len(t.arcs) == 5 and len(t.triangles) == 3
    assert len(oht.loop("gamma")) == 8 and len(oht.loop("eta")) == 2


@pytest.mark.parametrize("g", [2, 3])
def test_genus_entry_sizes(g):
    e = catalog.get(f"one-holed-genus-{g}")
    n = 12 * g - 4
    assert len(e.loop("gamma")) == n
    assert len(e.loop("eta")) == n - 6
    assert len(e.loop("sigma")) == 2
    assert e.expected["N"] == n


def test_once_punctured_torus_entries(opt, opt_flipped):
    for e in (opt, opt_flipped):
        assert len(e.surface.arcs) == 3 and len(e.surface.triangles) == 2
        assert set(e.loops) == {"peripheral", "nonsep"}
    assert opt.expected["flip"] == {"arc": "3", "partner": "once-punctured-torus-flipped"}


@pytest.mark.parametrize("name", NAMES)
def test_entry_is_valid_and_topologically_right(name):
    e = catalog.get(name)
    t = e.surface
    assert validate(t) == []
    for lp in e.loops.values():
        assert validate_loop(t, lp) == []
    g, holes, punctures = _shape(name)
    # one marked point in every family
    assert corner_classes(t) == 1
    assert euler_characteristic(t) == 2 - 2 * g - holes
    assert len(t.boundary_arcs) == holes
    assert len(t.punctures) == punctures


@pytest.mark.parametrize("name", NAMES)
def test_expected_term_counts(name):
    e = catalog.get(name)
    eps = exchange_matrix(e.surface)
    for ln, n in e.expected.get("term_counts", {}).items():
        assert len(trace(e.surface, e.loop(ln), eps)) == n, ln


@pytest.mark.parametrize("name", NAMES)
def test_expected_triples(name):
    e = catalog.get(name)
    eps = exchange_matrix(e.surface)
    f = {n: trace(e.surface, lp, eps) for n, lp in e.loops.items()}

    def witness(spec):
        vg = total_intersection(e.surface, e.loop(spec.loops[0]))
        return TeschnerWitness.from_vectors(eps, spec.v1, spec.v2, vg)

    specs = {s.loops: s for s in e.triples()}
    for spec in e.triples():
        a, b, c = (f[x] for x in spec.loops)
        if spec.kind == "strong":
            rep = verify_strong_triple(eps, a, b, c, witness(spec))
            assert rep.strong
        else:
            inner = specs[spec.tr5]
            tw = TripleWitness(*(f[x] for x in inner.loops), witness(inner))
            rep = verify_weak_triple(eps, a, b, c, witness(spec), tw)
            assert rep.weak and not rep.strong
        assert rep.pairing_v1_v2 == spec.pairing


def test_genus_gamma_single_left_turn():
    for g in (2, 3, 4):
        e = catalog.get(f"one-holed-genus-{g}")
        c = classify(e.surface, e.loop("gamma"))
        assert (c.kind, c.index) == ("almost_peripheral", 2)


@pytest.mark.parametrize("name", [n for n in NAMES if n.startswith("delta-prime")])
def test_delta_prime_landmarks(name):
    e = catalog.get(name)
    g, i = (int(x) for x in name.split("-")[2:])
    xs = e.loop("gamma").junctures
    k = e.expected["k"]
    assert k == {j: i + 9 + 11 * (j - 2) for j in range(1, g + 1)}
    n = e.expected["N"]
    assert n == len(xs) == 12 * g - 4
    h = lambda j: xs[j - 1]  # noqa: E731
    d, dp = e.expected["cut_arc"], e.expected["copy_arc"]
    assert h(1) == dp == h(k[i - 1] + 10)
    assert h(n) == d == h(k[i])
    # segment k_j (j < i) or k_j + 1 (i <= j < g) is the first to end on e_j;
    # e_g doubles as the last fan diagonal here, which moves its first crossing to k_g
    for j in range(2, g + 1):
        first = xs.index(f"e{j}") + 1
        assert first == (k[j] if j < i or j == g else k[j] + 1)


def test_delta_prime_witness_formula():
    e = catalog.get("delta-prime-3-2")
    (spec,) = e.triples()
    xs = e.loop("gamma").junctures
    ki, n = e.expected["k"][2], e.expected["N"]
    h = lambda j: LatticeVec.basis(xs[j - 1])  # noqa: E731
    v2 = sum((h(j) for j in range(ki, n + 1)), start=h(ki) - h(ki))
    v1 = h(n) - sum((h(j) for j in range(1, ki + 1)), start=h(1) - h(1))
    assert (spec.v1, spec.v2) == (v1, v2)


def test_once_punctured_genus_has_no_hole():
    e = catalog.get("once-punctured-genus-2")
    assert "c1'" not in e.surface.arcs and not e.surface.boundary_arcs


def test_json_emission_round_trips(oht):
    from qtm.loops import LoopPosition
    from qtm.surface import Triangulation

    t = Triangulation.from_json(oht.surface.to_json())
    lp = LoopPosition.from_json(oht.loop("gamma").to_json("one-holed-torus"))
    assert trace(t, lp) == trace(oht.surface, oht.loop("gamma"))
