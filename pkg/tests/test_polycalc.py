import random

import pytest

from forge.graded import TruncationContext, rational
from forge.polycalc import (Poly, apply, chain_action, chain_diff, chain_from_polys, contract,
                            cup, de_rham, form, function, gerstenhaber, hkr_C, hkr_V,
                            hoch_diff, lie_derivative, multiplication, operator, pair,
                            parse_poly, polyvector, schouten, vector_field, wedge)
from forge.polycalc.hochschild import antisymmetrize_first_order
from forge.polycalc.poly import PolyParseError
from forge.sampling import random_element, random_poly

from conftest import sgn
from oracles import bracket_eval, evaluate, sample_monomials

CTX = TruncationContext(d=2, N_y=30)


def y(i):
    return Poly.var(2, i)


def vdeg(v):
    return {len(k[3]) - 1 + len(k[0]) for k in v.terms}.pop() if v.terms else 0


def odeg(p):
    return {len(k[3]) - 1 + len(k[0]) for k in p.terms}.pop() if p.terms else 0


# -- polynomials --------------------------------------------------------------------

def test_parse_and_arithmetic():
    p = parse_poly("x1^2 - 1/2*x2", 2)
    assert p == y(0) ** 2 - y(1) * rational(1, 2)
    assert p.deriv(0) == y(0) * 2
    assert (p * p).degree() == 4
    with pytest.raises(PolyParseError):
        parse_poly("x1 +", 2)
    with pytest.raises(PolyParseError):
        parse_poly("x3", 2)


# -- polyvectors --------------------------------------------------------------------

def test_wedge_examples():
    d1, d2 = vector_field(CTX, [1, 0]), vector_field(CTX, [0, 1])
    assert not wedge(d1, d1)
    assert wedge(d1, d2) == polyvector(CTX, 1, (0, 1))
    assert wedge(vector_field(CTX, [0, y(0)]), d1) == polyvector(CTX, -y(0), (0, 1))


def test_schouten_examples():
    d1 = vector_field(CTX, [1, 0])
    assert schouten(d1, vector_field(CTX, [0, y(0)])) == vector_field(CTX, [0, 1])
    bi = polyvector(CTX, 1, (0, 1))
    assert not schouten(bi, bi)


def lie_bracket(X, Y):
    """[X, Y]^j = X^i d_i Y^j - Y^i d_i X^j on component lists."""
    return [sum((X[i] * Y[j].deriv(i) - Y[i] * X[j].deriv(i) for i in range(2)), Poly(2, {}))
            for j in range(2)]


def test_schouten_matches_leibniz_expansion():
    # [u ^ v, w] = -([w, u] ^ v + u ^ [w, v]) for vector fields u, v, w
    zero = Poly(2, {})
    u, v, w = [y(1), zero], [zero, Poly.const(2, 1)], [y(0), zero]
    wu, wv = lie_bracket(w, u), lie_bracket(w, v)
    expected = -(wedge(vector_field(CTX, wu), vector_field(CTX, v))
                 + wedge(vector_field(CTX, u), vector_field(CTX, wv)))
    lhs = schouten(polyvector(CTX, y(1), (0, 1)), vector_field(CTX, w))
    assert lhs == expected
    assert lhs == polyvector(CTX, y(1), (0, 1))


def test_schouten_antisymmetry_and_jacobi():
    rng = random.Random(1)
    for _ in range(20):
        a, b, c = [random_element(rng, CTX, "polyvector", slots=rng.choice([0, 1, 2]), ydeg=3,
                                  dy=(rng.choice([0, 1]),)) for _ in range(3)]
        pa, pb = vdeg(a), vdeg(b)
        assert schouten(a, b) == -schouten(b, a).scale(sgn(pa * pb))
        jac = (schouten(a, schouten(b, c)) - schouten(schouten(a, b), c)
               - schouten(b, schouten(a, c)).scale(sgn(pa * pb)))
        assert not jac


# -- forms --------------------------------------------------------------------------

def test_contraction_examples():
    d1 = vector_field(CTX, [1, 0])
    assert contract(d1, form(CTX, 1, (0,))) == form(CTX, 1)
    assert not contract(d1, form(CTX, 1, (1,)))
    assert contract(polyvector(CTX, 1, (0, 1)), form(CTX, 1, (0, 1))) == form(CTX, 1)


def test_lie_derivative_examples():
    bi = polyvector(CTX, 1, (0, 1))
    assert not lie_derivative(bi, form(CTX, 1))
    assert lie_derivative(bi, form(CTX, y(0), (1,))) == form(CTX, 1)


def test_lie_derivative_cartan_formula():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.choice([1, 2])
        g = random_element(rng, CTX, "polyvector", slots=n, ydeg=3)
        w = random_element(rng, CTX, "form", slots=rng.choice([0, 1, 2]), ydeg=3)
        rev = -1 if (n * (n - 1) // 2) % 2 else 1
        expected = (de_rham(contract(g, w)) + contract(g, de_rham(w)).scale(sgn(n - 1))).scale(rev)
        assert lie_derivative(g, w) == expected


def test_lie_derivative_represents_schouten():
    ctx = TruncationContext(d=3, N_y=30)
    rng = random.Random(3)
    for _ in range(40):
        s1, s2 = rng.choice([1, 2, 3]), rng.choice([1, 2, 3])
        g1 = random_element(rng, ctx, "polyvector", slots=s1, ydeg=3)
        g2 = random_element(rng, ctx, "polyvector", slots=s2, ydeg=3)
        w = random_element(rng, ctx, "form", slots=rng.choice([0, 1, 2, 3]), ydeg=4)
        k1, k2 = s1 - 1, s2 - 1
        lhs = lie_derivative(schouten(g1, g2), w)
        rhs = (lie_derivative(g1, lie_derivative(g2, w))
               - lie_derivative(g2, lie_derivative(g1, w)).scale(sgn(k1 * k2)))
        assert lhs == rhs


# -- cochains -----------------------------------------------------------------------

def test_bracket_of_multiplication_vanishes():
    mu = multiplication(CTX)
    assert not gerstenhaber(mu, mu)
    u = hkr_V(vector_field(CTX, [y(1), y(0) ** 2]))
    assert not gerstenhaber(mu, u)


def test_gerstenhaber_matches_naive_insertion():
    rng = random.Random(4)
    tests = sample_monomials(2, 2)
    for _ in range(12):
        P = random_element(rng, CTX, "polydiffop", slots=2, ydeg=2, order=2, terms=2)
        Q = random_element(rng, CTX, "polydiffop", slots=rng.choice([1, 2]), ydeg=2, order=1,
                           terms=2)
        br = gerstenhaber(P, Q)
        n = len(next(iter(br.terms))[3]) if br.terms else 2 + len(next(iter(Q.terms))[3]) - 1
        for _ in range(6):
            args = [rng.choice(tests) for _ in range(n)]
            assert evaluate(br, args) == bracket_eval(P, Q, args) if br.terms else \
                not bracket_eval(P, Q, args)


def test_hochschild_differential_examples():
    assert not hoch_diff(hkr_V(vector_field(CTX, [y(0), 1])))
    assert not hoch_diff(function(CTX, y(0) * y(1) + 1))
    P = operator(CTX, 1, [(1, 0), (1, 0)])
    dP = hoch_diff(P)
    mu = multiplication(CTX)
    for args in [(y(0), y(0), y(1)), (y(0) ** 2, y(0), y(0) * y(1)), (y(0), y(0) ** 2, y(0))]:
        assert evaluate(dP, list(args)) == bracket_eval(mu, P, list(args))


def test_gerstenhaber_jacobi_and_nilpotency():
    rng = random.Random(5)
    for _ in range(20):
        a, b, c = [random_element(rng, CTX, "polydiffop", slots=rng.choice([0, 1, 2]), ydeg=3,
                                  order=2, dy=(rng.choice([0, 1]),)) for _ in range(3)]
        pa, pb = odeg(a), odeg(b)
        jac = (gerstenhaber(a, gerstenhaber(b, c)) - gerstenhaber(gerstenhaber(a, b), c)
               - gerstenhaber(b, gerstenhaber(a, c)).scale(sgn(pa * pb)))
        assert not jac
        assert not hoch_diff(hoch_diff(a))


def test_cup_examples():
    f, g = function(CTX, y(0) + 1), function(CTX, y(1) ** 2)
    assert cup(f, g) == function(CTX, (y(0) + 1) * y(1) ** 2)
    u = hkr_V(vector_field(CTX, [y(1), 0]))
    v = hkr_V(vector_field(CTX, [0, y(0)]))
    a, b = y(0) ** 2 * y(1), y(0) * y(1) ** 2
    assert evaluate(cup(u, v), [a, b]) == evaluate(u, [a]) * evaluate(v, [b])


def test_cup_leibniz():
    rng = random.Random(6)
    for _ in range(15):
        P = random_element(rng, CTX, "polydiffop", slots=rng.choice([0, 1, 2]), ydeg=2, order=2)
        Q = random_element(rng, CTX, "polydiffop", slots=rng.choice([0, 1, 2]), ydeg=2, order=2)
        # the sign counts the arguments of Q
        nq = len(next(iter(Q.terms))[3]) if Q.terms else 0
        lhs = hoch_diff(cup(P, Q))
        rhs = cup(P, hoch_diff(Q)) + cup(hoch_diff(P), Q).scale(sgn(nq))
        assert lhs == rhs


def test_apply_evaluates_operators():
    P = operator(CTX, y(1), [(1, 0), (0, 2)])
    a, b = y(0) ** 2, y(1) ** 3
    got = apply(P, [function(CTX, a), function(CTX, b)])
    assert got == function(CTX, evaluate(P, [a, b]))


# -- chains -------------------------------------------------------------------------

def test_chain_action_of_multiplication():
    rng = random.Random(7)
    a0, a1, a2 = [random_poly(rng, 2, 2, 2) for _ in range(3)]
    mu = multiplication(CTX)
    assert not chain_action(mu, chain_from_polys(CTX, [a0, a1]))
    expected = (chain_from_polys(CTX, [a0 * a1, a2]) - chain_from_polys(CTX, [a0, a1 * a2])
                + chain_from_polys(CTX, [a2 * a0, a1]))
    assert chain_action(mu, chain_from_polys(CTX, [a0, a1, a2])) == expected


def test_chain_differential_examples():
    rng = random.Random(8)
    assert not chain_diff(chain_from_polys(CTX, [random_poly(rng, 2, 2)]))
    for _ in range(10):
        a = random_element(rng, CTX, "chain", slots=4, ydeg=4)
        assert not chain_diff(chain_diff(a))


def test_chain_action_is_a_representation():
    rng = random.Random(9)
    for _ in range(20):
        s1, s2, n = rng.choice([0, 1, 2, 3]), rng.choice([0, 1, 2, 3]), rng.choice([1, 2, 3, 4])
        P1 = random_element(rng, CTX, "polydiffop", slots=s1, ydeg=2, order=2,
                            dy=(rng.choice([0, 1]),))
        P2 = random_element(rng, CTX, "polydiffop", slots=s2, ydeg=2, order=2,
                            dy=(rng.choice([0, 1]),))
        a = random_element(rng, CTX, "chain", slots=n, ydeg=3)
        p1, p2 = odeg(P1), odeg(P2)
        lhs = chain_action(gerstenhaber(P1, P2), a)
        rhs = chain_action(P1, chain_action(P2, a)) - \
            chain_action(P2, chain_action(P1, a)).scale(sgn(p1 * p2))
        assert lhs == rhs


def test_operator_with_too_many_slots_gives_zero():
    P = operator(CTX, 1, [(1, 0), (0, 1), (0, 0), (1, 1)])
    assert not chain_action(P, chain_from_polys(CTX, [y(0), y(1)]))


def test_pairing_on_the_diagonal():
    P = operator(CTX, 1, [(0, 0), (1, 0)])
    got = pair(P, chain_from_polys(CTX, [y(1), y(0) ** 2]))
    assert got == function(CTX, y(1) * y(0) * 2)


# -- HKR maps -----------------------------------------------------------------------

def test_vey_map_examples():
    u = vector_field(CTX, [y(1), y(0)])
    a = y(0) ** 2 * y(1)
    assert evaluate(hkr_V(u), [a]) == y(1) * a.deriv(0) + y(0) * a.deriv(1)
    V = hkr_V(polyvector(CTX, 1, (0, 1)))
    a, b = y(0) ** 2, y(0) * y(1)
    assert evaluate(V, [a, b]) == a.deriv(0) * b.deriv(1) - a.deriv(1) * b.deriv(0)


def test_vey_image_is_closed():
    rng = random.Random(10)
    for _ in range(30):
        g = random_element(rng, CTX, "polyvector", slots=rng.choice([0, 1, 2]), ydeg=3)
        assert not hoch_diff(hkr_V(g))


def test_connes_map_examples():
    a0, a1 = y(0) + y(1) ** 2, y(0) * y(1)
    assert hkr_C(chain_from_polys(CTX, [a0])) == form(CTX, a0)
    expected = form(CTX, a0 * a1.deriv(0), (0,)) + form(CTX, a0 * a1.deriv(1), (1,))
    assert hkr_C(chain_from_polys(CTX, [a0, a1])) == expected


def test_connes_map_kills_boundaries():
    rng = random.Random(11)
    for _ in range(30):
        a = random_element(rng, CTX, "chain", slots=rng.choice([2, 3, 4]), ydeg=4)
        assert not hkr_C(chain_diff(a))


def test_antisymmetrization_inverts_vey_on_polyvectors():
    rng = random.Random(12)
    for _ in range(10):
        g = random_element(rng, CTX, "polyvector", slots=rng.choice([1, 2]), ydeg=2)
        assert antisymmetrize_first_order(hkr_V(g)) == g


def test_json_round_trip():
    rng = random.Random(13)
    for kind in ("polyvector", "polydiffop", "form", "chain"):
        e = random_element(rng, CTX, kind, slots=2, dy=(0, 1), xdeg=1, ydeg=2)
        assert type(e).from_json(e.to_json(), CTX) == e
