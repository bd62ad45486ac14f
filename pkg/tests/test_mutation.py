import itertools

import pytest
import sympy

from qtm import catalog
from qtm.algebra import LatticeMismatch, LatticeVec, OmegaPoly, QTorusElement, monomial, vec
from qtm.mutation import (
    ALPHA_CONVENTIONS,
    CALIBRATED,
    EPS_SIDES,
    FACTOR_SIDES,
    LITERAL,
    Ck_map,
    FlipConvention,
    Fq_times_P,
    LocalizedElement,
    P_element,
    X_k,
    fq_poly,
    theta_apply,
    verify_flip_naturality,
)
from qtm.qtrace import trace
from qtm.surface import UnsupportedFlip, exchange_matrix, is_balanced, mutate_exchange

V = lambda **kw: LatticeVec({k.lstrip("_"): c for k, c in kw.items()})  # noqa: E731


@pytest.fixture(scope="module")
def pair():
    a = catalog.get("once-punctured-torus")
    b = catalog.get("once-punctured-torus-flipped")
    return a, exchange_matrix(a.surface), b, exchange_matrix(b.surface)


def _one(lat):
    return QTorusElement.one(lat)


def test_ck_examples(pair):
    _, eps, _, _ = pair
    assert Ck_map(eps, "3", V(_3=1)) == V(_3=-1)
    assert eps.eps("1", "3") == 2
    assert Ck_map(eps, "3", V(_1=1, _2=1)) == V(_1=1, _2=1, _3=2)
    # zero k-coordinate and eps_ik <= 0 for every i in the support
    assert eps.eps("2", "3") < 0
    assert Ck_map(eps, "3", V(_2=5)) == V(_2=5)


def test_ck_rejects(oht_eps):
    with pytest.raises(UnsupportedFlip):
        Ck_map(oht_eps, "e", vec(a=1))
    with pytest.raises(KeyError):
        Ck_map(oht_eps, "zz", vec(a=1))


def test_fq_examples(pair):
    _, eps, _, _ = pair
    one = _one(eps)
    X = X_k(eps, "3")
    assert Fq_times_P(eps, 1, 0, "3") == one + X.scale(OmegaPoly.q(1))
    assert Fq_times_P(eps, 0, 0, "3") == one
    assert Fq_times_P(eps, -1, 1, "3") == one
    with pytest.raises(ValueError):
        fq_poly(-2, 1)


def test_fq_matches_sympy():
    q, x = sympy.symbols("q x")
    for alpha, M in [(2, 0), (2, 3), (-2, 3), (-3, 3), (0, 2)]:
        F = sympy.Mul(*[(1 + q ** (2 * r - 1) * x) for r in range(1, alpha + 1)]) if alpha >= 0 else 1 / sympy.Mul(
            *[(1 + q ** (-(2 * r - 1)) * x) for r in range(1, -alpha + 1)]
        )
        P = sympy.Mul(*[(1 + q ** (-(2 * r - 1)) * x) for r in range(1, M + 1)])
        want = sympy.Poly(sympy.cancel(F * P), x)
        got = fq_poly(alpha, M)
        for n, c in enumerate(got):
            coeff = sum(k * q ** sympy.Rational(e, 4) for e, k in c.items())
            assert sympy.simplify(coeff - want.coeff_monomial(x**n)) == 0


def test_q_shift(pair):
    _, eps, _, _ = pair
    X = X_k(eps, "3")
    for w in (V(_1=1), V(_2=-1, _3=2), V(_1=1, _2=1, _3=1)):
        z = monomial(eps, w)
        shift = OmegaPoly.q(eps.pair(V(_3=1), w))
        assert (X * z - (z * X).scale(shift)).is_zero()


def test_theta_trivial_inputs(pair):
    _, eps, _, eps_f = pair
    for conv in (CALIBRATED, LITERAL):
        img = theta_apply(eps, "3", monomial(eps_f, V(_3=-1)), conv)
        assert img.M == 0 and img.numerator == monomial(eps, V(_3=1)) and img.is_laurent()
        img = theta_apply(eps, "3", _one(eps_f), conv)
        assert img.M == 0 and img.numerator == _one(eps)
    assert verify_flip_naturality(_one(eps), _one(eps_f), eps, "3")


def test_localized_equals(pair):
    _, eps, _, _ = pair
    x = monomial(eps, V(_1=1))
    loc = LocalizedElement(x * P_element(eps, 2, "3"), 2, "3")
    assert loc.equals(x) and not loc.is_laurent()
    left = LocalizedElement(P_element(eps, 2, "3") * x, 2, "3", side="left")
    assert left.equals(x)


def _traces(a, ea, b, eb, ln):
    return trace(a.surface, a.loop(ln), ea), trace(b.surface, b.loop(ln), eb)


@pytest.mark.parametrize("direction", [0, 1])
@pytest.mark.parametrize("ln", ["nonsep", "peripheral"])
def test_flip_naturality_calibrated(pair, direction, ln):
    a, ea, b, eb = pair if direction == 0 else (pair[2], pair[3], pair[0], pair[1])
    f, fp = _traces(a, ea, b, eb, ln)
    assert verify_flip_naturality(f, fp, ea, "3")


def test_literal_reading_fails(pair):
    a, ea, b, eb = pair
    f, fp = _traces(a, ea, b, eb, "nonsep")
    assert not verify_flip_naturality(f, fp, ea, "3", LITERAL)


def test_only_calibrated_convention_works(pair):
    a, ea, b, eb = pair
    ok = []
    for conv in itertools.product(ALPHA_CONVENTIONS, EPS_SIDES, FACTOR_SIDES):
        c = FlipConvention(*conv)
        good = True
        for x, ex, y, ey in ((a, ea, b, eb), (b, eb, a, ea)):
            f, fp = _traces(x, ex, y, ey, "nonsep")
            good = good and verify_flip_naturality(f, fp, ex, "3", c)
        if good:
            ok.append(c)
    assert ok == [CALIBRATED]


def test_perturbed_target_fails(pair):
    a, ea, b, eb = pair
    f, fp = _traces(a, ea, b, eb, "nonsep")
    assert not verify_flip_naturality(f + monomial(ea, V(_2=2)), fp, ea, "3")


def test_lattice_checks(pair):
    a, ea, b, eb = pair
    f, fp = _traces(a, ea, b, eb, "nonsep")
    with pytest.raises(LatticeMismatch):
        verify_flip_naturality(fp, fp, ea, "3")
    with pytest.raises(LatticeMismatch):
        verify_flip_naturality(f, f, ea, "3")


def test_bad_convention():
    with pytest.raises(ValueError):
        FlipConvention(alpha="third")


def test_numerator_stays_balanced(pair):
    a, ea, b, eb = pair
    for ln in ("nonsep", "peripheral"):
        _, fp = _traces(a, ea, b, eb, ln)
        img = theta_apply(ea, "3", fp)
        assert all(is_balanced(a.surface, v) for v in img.numerator.support())


def test_mutation_matches_flipped_triangulation(pair):
    _, ea, _, eb = pair
    assert mutate_exchange(ea, "3") == eb


def test_classical_naturality_oracle(pair):
    """At omega = 1 the calibrated map is z^w (1 + z_k^2)^alpha; check with sympy."""
    a, ea, b, eb = pair
    z = {k: sympy.Symbol(f"z{k}", positive=True) for k in ea.labels}
    spec = lambda x: sum(c * sympy.Mul(*[z[k] ** e for k, e in v.items()]) for v, c in x.specialize_omega1().items())  # noqa: E731
    f, fp = _traces(a, ea, b, eb, "nonsep")
    total = 0
    for v, c in fp.specialize_omega1().items():
        # C_k with [eps'_ik]_+ from the flipped matrix, alpha = <v_k, w>'/2
        w = {i: e for i, e in v.items() if i != "3"}
        w["3"] = -v["3"] + sum(e * max(eb.eps(i, "3"), 0) for i, e in v.items() if i != "3")
        alpha = sum(eb.eps("3", i) * e for i, e in w.items()) // 2
        total += c * sympy.Mul(*[z[k] ** e for k, e in w.items()]) * (1 + z["3"] ** 2) ** alpha
    assert sympy.simplify(total - spec(f)) == 0
