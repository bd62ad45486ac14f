import pytest

from qtm import catalog
from qtm.algebra import LatticeVec, QTorusElement, monomial, vec
from qtm.loops import total_intersection
from qtm.qtrace import trace
from qtm.surface import exchange_matrix
from qtm.teschner import (
    COINCIDE,
    UNVERIFIED,
    VERIFIED,
    WITNESS_FAILS,
    TeschnerWitness,
    TripleWitness,
    all_pairwise_commute,
    commutes_as_elements,
    heisenberg_commutes,
    recursion_rhs,
    solve_witness,
    strongly_commute,
    verify_strong_triple,
    verify_weak_triple,
)


def _traces(e):
    eps = exchange_matrix(e.surface)
    return eps, {n: trace(e.surface, lp, eps) for n, lp in e.loops.items()}


def _witness(e, eps, spec):
    vg = total_intersection(e.surface, e.loop(spec.loops[0]))
    return TeschnerWitness.from_vectors(eps, spec.v1, spec.v2, vg)


def test_heisenberg_examples(oht, oht_eps):
    f_eta = trace(oht.surface, oht.loop("eta"))
    assert heisenberg_commutes(oht_eps, vec(a=1, b=1, d=2), f_eta)
    assert heisenberg_commutes(oht_eps, LatticeVec(), f_eta)
    assert not heisenberg_commutes(oht_eps, vec(a=1), monomial(oht_eps, vec(b=1)))


def test_strongly_commute_examples(oht_eps):
    za, zb = monomial(oht_eps, vec(a=1)), monomial(oht_eps, vec(b=1))
    r = strongly_commute(oht_eps, za, zb)
    assert r.status == WITNESS_FAILS and not r.sc1
    assert not r


def test_sigma_zeta_strongly_commute():
    e = catalog.get("one-holed-genus-2")
    eps, f = _traces(e)
    r = strongly_commute(eps, f["sigma"], f["zeta"])
    assert r.status == VERIFIED and r.sc1 and r.sc2


def test_peripheral_commutes_with_everything(opt):
    eps, f = _traces(opt)
    for x in f.values():
        assert strongly_commute(eps, f["peripheral"], x).verified


def test_sc2_can_fail_alone():
    from qtm.algebra import SkewLattice

    lat = SkewLattice("abc", {("a", "b"): 1})
    x = monomial(lat, vec(a=1, c=1))
    y = monomial(lat, vec(a=1, c=1), 2)
    # supports pair to zero but share a non-radical line
    r = strongly_commute(lat, x, y)
    assert r.sc1 and not r.sc2 and r.status == WITNESS_FAILS


def test_one_holed_torus_strong_triple(oht, oht_eps):
    _, f = _traces(oht)
    w = TeschnerWitness.from_vectors(oht_eps, vec(a=1, b=1, d=2), vec(a=-1, b=-1, c=-2), vec(a=2, b=2, c=2, d=2))
    assert w.sign == -1
    rep = verify_strong_triple(oht_eps, f["gamma"], f["eta"], f["eta"], w)
    assert (rep.TR1, rep.TR2, rep.TR3, rep.TR4) == (True, True, True, COINCIDE)
    assert rep.TR5 == UNVERIFIED and rep.pairing_v1_v2 == -4 and rep.strong
    assert (f["gamma"] - recursion_rhs(oht_eps, w, f["eta"], f["eta"])).is_zero()


def test_bad_witness_fails_tr2(oht, oht_eps):
    _, f = _traces(oht)
    w = TeschnerWitness.from_vectors(oht_eps, vec(a=1), vec(b=1), vec(a=2, b=2, c=2, d=2))
    assert w.sign == 0
    rep = verify_strong_triple(oht_eps, f["gamma"], f["eta"], f["eta"], w)
    assert not rep.TR2 and not rep.strong


def test_genus2_strong_triple():
    e = catalog.get("one-holed-genus-2")
    eps, f = _traces(e)
    v1 = vec(a1=-1, b1=-1, d1=-2)
    v_eta = total_intersection(e.surface, e.loop("eta"))
    w = TeschnerWitness.from_vectors(eps, v1, v1 + v_eta, v_eta)
    rep = verify_strong_triple(eps, f["eta"], f["zeta"], f["sigma"], w)
    assert rep.strong and rep.TR4 is True and rep.pairing_v1_v2 == 4


def test_genus2_weak_triple():
    e = catalog.get("one-holed-genus-2")
    eps, f = _traces(e)
    weak, strong = e.triples()
    assert weak.v1 == vec(a1=-1, b1=-1, c1=-2)
    w = _witness(e, eps, weak)
    inner = TripleWitness(f["eta"], f["zeta"], f["sigma"], _witness(e, eps, strong))
    rep = verify_weak_triple(eps, f["gamma"], f["eta"], f["sigma"], w, inner)
    assert rep.weak and rep.TR4 is False and rep.TR5 is True
    assert rep.details["tr5_loops_match"]
    missing = verify_weak_triple(eps, f["gamma"], f["eta"], f["sigma"], w)
    assert missing.TR5 == UNVERIFIED and not missing.weak


def test_weak_triple_rejects_unrelated_witness():
    e = catalog.get("one-holed-genus-2")
    eps, f = _traces(e)
    weak, strong = e.triples()
    # a strong triple that does not contain sigma cannot certify TR5
    inner = TripleWitness(f["eta"], f["zeta"], f["zeta"], _witness(e, eps, strong))
    rep = verify_weak_triple(eps, f["gamma"], f["eta"], f["sigma"], _witness(e, eps, weak), inner)
    assert rep.TR5 is False


def test_symmetry_under_swap():
    e = catalog.get("one-holed-genus-2")
    eps, f = _traces(e)
    _, strong = e.triples()
    w = _witness(e, eps, strong)
    a = verify_strong_triple(eps, f["eta"], f["zeta"], f["sigma"], w)
    b = verify_strong_triple(eps, f["eta"], f["sigma"], f["zeta"], w.swapped())
    assert a.to_json() == dict(b.to_json(), pairing_v1_v2=-b.pairing_v1_v2)


def test_solve_one_holed_torus(oht, oht_eps):
    _, f = _traces(oht)
    found = solve_witness(oht_eps, f["gamma"], f["eta"], f["eta"], vec(a=2, b=2, c=2, d=2))
    pairs = {(w.v1, w.v2) for w in found}
    paper = (vec(a=1, b=1, d=2), vec(a=-1, b=-1, c=-2))
    assert paper in pairs or paper[::-1] in pairs
    for w in found:
        assert w.v1 - w.v2 == -w.v_gamma * w.sign


def test_solve_peripheral_empty(opt):
    eps, f = _traces(opt)
    p = f["peripheral"]
    vg = total_intersection(opt.surface, opt.loop("peripheral"))
    assert solve_witness(eps, p, p, p, vg) == []


def test_solve_genus2_primed_witness():
    e = catalog.get("one-holed-genus-2")
    eps, f = _traces(e)
    v_eta = total_intersection(e.surface, e.loop("eta"))
    found = solve_witness(eps, f["eta"], f["zeta"], f["sigma"], v_eta)
    assert vec(a1=-1, b1=-1, d1=-2) in {w.v1 for w in found}


def test_tr3_implies_commutation():
    e = catalog.get("one-holed-genus-2")
    eps, f = _traces(e)
    _, strong = e.triples()
    for v in (strong.v1, strong.v2):
        for g in (f["zeta"], f["sigma"]):
            assert commutes_as_elements(monomial(eps, v), g)


def test_all_pairwise_commute(opt):
    eps, f = _traces(opt)
    assert all_pairwise_commute([f["peripheral"], f["peripheral"] * f["peripheral"]])
    za, zb = monomial(eps, vec(**{"1": 1})), monomial(eps, vec(**{"2": 1}))
    assert not all_pairwise_commute([za, zb])


def test_lattice_mismatch(oht, opt):
    _, f = _traces(oht)
    eps2, g = _traces(opt)
    w = TeschnerWitness(LatticeVec(), LatticeVec(), LatticeVec())
    with pytest.raises(ValueError):
        verify_strong_triple(eps2, f["gamma"], g["nonsep"], g["nonsep"], w)
