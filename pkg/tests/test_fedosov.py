import random

import pytest

from forge.fedosov import (ConnectionData, ContractionError, FormValuedMorphism, IllPosedError,
                           TorsionError, build_A, check_relations, contract_to_flat, curvature,
                           curvature_from_connection, delta, delta_inv, fedosov_D,
                           flat_morphism, flatness_residual, hodge_defect, homotopy_step,
                           is_flat, lambda_D, lambda_D_inverse, lambda_T, nabla, nu, phi,
                           riemann, sigma, tau, varrho)
from forge.fedosov.contraction import exterior_degree, polyvector_degree
from forge.graded import TruncationContext, rational
from forge.polycalc import (Poly, PolyDiffOp, apply, chain_from_polys, cup, function,
                            multiplication, operator, polyvector, vector_field, PolyVecField)
from forge.polycalc.action import act
from forge.sampling import random_christoffel, random_element

CTX2 = TruncationContext(d=2, N_y=6)
CHART2 = TruncationContext(d=2, N_y=30)


def y(i, d=2):
    return Poly.var(d, i)


@pytest.fixture(scope="module")
def curved():
    rng = random.Random(3)
    conn = ConnectionData.symmetric(2, random_christoffel(rng, 2))
    return build_A(conn, CTX2)


# -- delta, delta_inv, sigma --------------------------------------------------------

def test_delta_examples():
    assert delta(function(CTX2, y(0) * y(1))) == \
        function(CTX2, y(1), dy=(0,)) + function(CTX2, y(0), dy=(1,))
    assert not delta(function(CTX2, y(0) ** 2, where="x"))
    v = vector_field(CTX2, [y(0) ** 2, 0])
    assert delta(v) == PolyVecField(CTX2, {((0,), (0, 0), (1, 0), (0,)): 2})


def test_delta_on_vector_fields_is_the_adjoint_action():
    from forge.fedosov import delta_field
    from forge.polycalc import schouten
    rng = random.Random(1)
    for _ in range(10):
        v = random_element(rng, CTX2, "polyvector", slots=rng.choice([1, 2]), dy=(0, 1), ydeg=3)
        assert delta(v) == schouten(delta_field(CTX2), v)


def test_delta_inverse_examples():
    assert delta_inv(function(CTX2, 1, dy=(0,))) == function(CTX2, y(0))
    assert delta_inv(function(CTX2, y(1), dy=(0,))) == function(CTX2, y(0) * y(1) * rational(1, 2))
    half = rational(1, 2)
    expected = function(CTX2, y(0) * half, dy=(1,)) - function(CTX2, y(1) * half, dy=(0,))
    assert delta_inv(function(CTX2, 1, dy=(0, 1))) == expected


def test_delta_inverse_is_not_defined_on_chains():
    with pytest.raises(TypeError):
        delta_inv(chain_from_polys(CTX2, [y(0), y(1)]))


def test_sigma_examples():
    f = function(CTX2, y(0) + 3, where="x")
    e = f + PolyDiffOp(CTX2, {((), (0, 1), (1, 0), ()): 1})
    assert sigma(e) == f
    assert not sigma(function(CTX2, 1, dy=(0,)))


def test_hodge_identity_on_mixed_pool():
    rng = random.Random(2)
    for kind, slots in (("polyvector", 1), ("polyvector", 2), ("polydiffop", 1), ("form", 1)):
        for _ in range(5):
            e = random_element(rng, CTX2, kind, slots=slots, dy=(0, 1, 2), xdeg=1, order=2)
            assert not hodge_defect(e)


# -- connection and curvature --------------------------------------------------------

def test_torsion_is_rejected():
    with pytest.raises(TorsionError, match="torsion-free violation"):
        ConnectionData.from_table(2, {(0, 0, 1): y(0)})


def test_nabla_of_chart_function_with_flat_connection():
    e = function(CTX2, y(0) ** 2 * y(1), where="x")
    expected = PolyDiffOp(CTX2, {((0,), (1, 1), (0, 0), ()): 2, ((1,), (2, 0), (0, 0), ()): 1})
    assert nabla(ConnectionData.flat(2), e) == expected


def test_nabla_of_fiber_coordinate():
    conn = ConnectionData.symmetric(2, {(0, 0, 1): y(1)})
    got = nabla(conn, function(CTX2, y(0)))
    expected = PolyDiffOp(CTX2, {((0,), (0, 1), (0, 1), ()): -1, ((1,), (0, 1), (1, 0), ()): -1})
    assert got == expected


def test_nabla_anticommutes_with_delta():
    rng = random.Random(4)
    conn = ConnectionData.symmetric(2, random_christoffel(rng, 2))
    for kind in ("polyvector", "polydiffop", "form"):
        e = random_element(rng, CTX2, kind, slots=1, dy=(0, 1), xdeg=1, ydeg=3)
        assert not (delta(nabla(conn, e)) + nabla(conn, delta(e)))


def test_curvature_vanishes_for_flat_cases():
    ctx1 = TruncationContext(d=1, N_y=4)
    assert not curvature(ConnectionData.flat(2), CTX2)
    conn = ConnectionData.symmetric(1, {(0, 0, 0): Poly(1, {(2,): 3, (0,): 1})})
    assert not curvature(conn, ctx1)


def test_curvature_squares_nabla():
    conn = ConnectionData.symmetric(2, {(1, 0, 0): y(1)})
    R = curvature(conn, CTX2)
    assert R == curvature_from_connection(conn, CTX2)
    assert riemann(conn)
    for e in (function(CTX2, y(0)), function(CTX2, y(1)), vector_field(CTX2, [1, 0]),
              vector_field(CTX2, [0, y(0)])):
        assert (nabla(conn, nabla(conn, e)) - act(R, e)).truncate(5).is_zero()


# -- Fedosov connection ----------------------------------------------------------------

def test_flat_connection_gives_zero_A():
    assert not build_A(ConnectionData.flat(2), CTX2).A


def test_pure_gauge_connection_is_flat():
    conn = ConnectionData.symmetric(2, {(1, 0, 0): y(0)})
    fd = build_A(conn, CTX2)
    assert not fd.curvature
    assert not flatness_residual(fd)


def test_leading_stratum_is_delta_inverse_of_curvature(curved):
    assert curved.A.stratum(2) == delta_inv(curved.curvature).stratum(2)
    assert not flatness_residual(curved)


def test_D_kills_flat_coordinate_lift():
    fd = build_A(ConnectionData.flat(2), CTX2)
    e = function(CTX2, y(0), where="x") + function(CTX2, y(0))
    assert not fedosov_D(fd, e)


def test_tau_examples_in_one_dimension():
    ctx = TruncationContext(d=1, N_y=4)
    fd = build_A(ConnectionData.flat(1), ctx)
    x = Poly.var(1, 0)
    assert tau(fd, function(ctx, x, where="x")) == function(ctx, x, where="x") + function(ctx, x)
    expected = function(ctx, x ** 2, where="x") + function(ctx, x ** 2) + \
        PolyDiffOp(ctx, {((), (1,), (1,), ()): 2})
    got = tau(fd, function(ctx, x ** 2, where="x"))
    assert got == expected
    assert sigma(got) == function(ctx, x ** 2, where="x")
    assert not fedosov_D(fd, got)
    assert tau(fd, function(ctx, 1)) == function(ctx, 1)


def test_tau_lift_is_flat(curved):
    rng = random.Random(5)
    a = random_element(rng, CTX2, "polydiffop", slots=0, dy=(0,), xdeg=2, ydeg=0)
    t = tau(curved, a)
    assert sigma(t) == a
    assert not fedosov_D(curved, t, CTX2.N_y - 1)


def test_phi_on_dy_free_input_is_zero(curved):
    rng = random.Random(6)
    e = random_element(rng, CTX2, "polyvector", slots=1, dy=(0,), xdeg=1, ydeg=2)
    assert not phi(curved, e)


def test_phi_is_a_contracting_homotopy(curved):
    rng = random.Random(7)
    e = random_element(rng, CTX2, "polydiffop", slots=1, dy=(1,), xdeg=1, ydeg=2, order=1)
    lim = CTX2.N_y - 3
    De = fedosov_D(curved, e)
    pe = phi(curved, e)
    assert not (fedosov_D(curved, pe) + phi(curved, De) - e).truncate(lim)
    assert not phi(curved, pe)


# -- identification maps -------------------------------------------------------------

def test_lambda_D_of_coordinate_derivative():
    ctx = TruncationContext(d=1, N_y=4)
    chart = TruncationContext(d=1, N_y=30)
    fd = build_A(ConnectionData.flat(1), ctx)
    got = lambda_D(fd, operator(chart, 1, [(1,)]))
    assert got == operator(ctx, 1, [(1,)])
    assert not fedosov_D(fd, got)
    assert nu(fd, got, chart) == operator(chart, 1, [(1,)])


def test_lambda_D_sends_chart_product_to_fiber_product(curved):
    z = (0, 0)
    assert lambda_D(curved, operator(CHART2, 1, [z, z])) == multiplication(CTX2)


def test_lambda_T_examples():
    fd = build_A(ConnectionData.flat(2), CTX2)
    assert lambda_T(fd, polyvector(CHART2, 1, (0, 1))) == polyvector(CTX2, 1, (0, 1))
    ctx1 = TruncationContext(d=1, N_y=4)
    fd1 = build_A(ConnectionData.flat(1), ctx1)
    chart1 = TruncationContext(d=1, N_y=30)
    assert lambda_T(fd1, vector_field(chart1, [1])) == vector_field(ctx1, [1])


def test_nu_rejects_non_flat_operator():
    fd = build_A(ConnectionData.flat(2), CTX2)
    with pytest.raises(IllPosedError):
        nu(fd, operator(CTX2, y(0), [(1, 0)]), CHART2)


def test_lambda_round_trip(curved):
    rng = random.Random(8)
    P = random_element(rng, CHART2, "polydiffop", slots=2, ydeg=2, order=2, terms=2)
    assert lambda_D_inverse(curved, lambda_D(curved, P), CHART2) == P


def test_varrho_in_degree_zero_differentiates_at_the_origin():
    fd = build_A(ConnectionData.flat(2), CTX2)
    p = y(0) ** 2 * y(1) * 3 + y(1) * 2 + 1
    j = varrho(fd, chain_from_polys(CTX2, [p]), CHART2, 3)
    assert j.value(((0, 0),)) == Poly.const(2, 1)
    assert j.value(((0, 1),)) == Poly.const(2, 2)
    assert j.value(((2, 1),)) == Poly.const(2, 6)
    assert not j.value(((1, 0),))


# -- contraction ------------------------------------------------------------------------

@pytest.fixture(scope="module")
def toy(curved):
    rng = random.Random(3)
    v1 = random_element(rng, CHART2, "polyvector", slots=1, ydeg=2, terms=2)
    v2 = random_element(rng, CHART2, "polyvector", slots=1, ydeg=1, terms=2)
    f = random_element(rng, CHART2, "polyvector", slots=0, ydeg=2, terms=2)
    U0 = flat_morphism(curved, [v1, v2, f])
    g = random_element(rng, CTX2, "polydiffop", slots=0, ydeg=2, xdeg=1, terms=2)
    g2 = random_element(rng, CTX2, "polydiffop", slots=0, ydeg=1, xdeg=1, terms=2)

    def h(v):
        if polyvector_degree(v) != 0:
            return g.zero()
        return cup(apply(U0.u(1, v), [g]), g2)

    return U0, homotopy_step(U0, h, 1), g


def test_flat_input_is_returned_unchanged(toy):
    U0, _, _ = toy
    assert not check_relations(U0)
    assert is_flat(U0)
    assert contract_to_flat(U0) is U0


def test_contraction_removes_exterior_components(toy):
    _, U, _ = toy
    assert not check_relations(U)
    assert not is_flat(U)
    assert any(exterior_degree(U.u(1, v)) for v in U.samples)
    V = contract_to_flat(U)
    assert is_flat(V)
    assert not check_relations(V)


def test_contraction_rejects_broken_relations(toy):
    _, U, g = toy
    broken = FormValuedMorphism(U.fd, {1: U.maps[1], 2: lambda a, b: g}, U.samples)
    with pytest.raises(ContractionError) as err:
        contract_to_flat(broken)
    assert err.value.arity == 2
