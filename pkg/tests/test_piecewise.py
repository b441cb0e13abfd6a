import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import V, series
from torfan.errors import DomainError, StructuralError, UnsupportedError
from torfan.fan import catalog_fan, projective_space
from torfan.fgl import FormalGroupLaw
from torfan.piecewise import (
    PiecewiseFunc,
    cone_params,
    courant_function,
    injectivity_rank,
    locate,
    pw_check_eval,
    to_piecewise,
    to_u_coordinates,
)
from torfan.sralgebra import SRRing, character_class, random_series

ADD = FormalGroupLaw.additive(6)
MULT1 = FormalGroupLaw.multiplicative(1, 6)
DP6 = catalog_fan("dp6")
P2 = catalog_fan("pn:2")
FANS = {"pn:2": P2, "dp6": DP6, "hirzebruch:2": catalog_fan("hirzebruch:2"),
        "pn:3": projective_space(3)}


def cone_coordinates(fan, point):
    """Oracle: solve point = sum c_rho v_rho with sympy on every maximal
    cone and keep the first nonnegative solution."""
    for tau in fan.max_cones:
        if len(tau) != fan.n:
            continue
        A = sympy.Matrix([fan.rays[i] for i in tau]).T
        c = A.solve(sympy.Matrix(point))
        if all(x >= 0 for x in c):
            return {i: int(x) for i, x in zip(tau, c)}
    return None


def box(fan, radius):
    return list(itertools.product(range(-radius, radius + 1), repeat=fan.n))


def test_courant_examples():
    phi = courant_function(DP6, "L1")
    assert phi((0, 1)) == 1
    assert phi((1, 0)) == 0
    assert phi((1, 3)) == 2  # (1,3) = E3 + 2 L1
    assert phi((0, -1)) == 0
    assert courant_function(DP6, 0) == phi


@pytest.mark.parametrize("name", sorted(FANS))
def test_courant_matches_coordinates(name):
    fan = FANS[name]
    for p in box(fan, 2):
        coords = cone_coordinates(fan, p)
        for rho in range(fan.nrays):
            assert courant_function(fan, rho)(p) == coords.get(rho, 0)


@pytest.mark.parametrize("name", sorted(FANS))
def test_locate_agrees_with_oracle(name):
    fan = FANS[name]
    for p in box(fan, 2):
        tau, coords = locate(fan, p)
        expected = cone_coordinates(fan, p)
        got = dict(zip(tau, coords))
        assert {i: c for i, c in got.items() if c} == {i: c for i, c in expected.items() if c}


def test_point_outside_support():
    cone = catalog_fan("cone:2")
    with pytest.raises(DomainError):
        locate(cone, (-1, 0))
    with pytest.raises(DomainError):
        courant_function(cone, 0)((-1, -1))
    with pytest.raises(DomainError):
        locate(P2, (1, 2, 3))


@pytest.mark.parametrize("name", ["pn:2", "dp6", "hirzebruch:2"])
@given(data=st.data())
@settings(max_examples=15)
def test_polynomial_mode_values_match_monomial_products(name, data):
    fan = FANS[name]
    ring = SRRing(fan)
    f = data.draw(series(ring, max_terms=5, max_degree=3))
    pf = to_piecewise(f, "polynomial", ADD)
    assert pf.is_compatible()
    for p in box(fan, 2):
        coords = cone_coordinates(fan, p)
        expected = 0
        for mono, c in f.items():
            term = c.as_int()
            for i, e in enumerate(mono):
                term *= coords.get(i, 0) ** e
            expected += term
        assert pf(p) == expected


@pytest.mark.parametrize("mode,F", [("polynomial", ADD), ("exponential", MULT1)])
@given(data=st.data())
@settings(max_examples=15)
def test_to_piecewise_is_ring_map(mode, F, data):
    ring = SRRing(DP6)
    f = data.draw(series(ring, max_terms=5, max_degree=3))
    g = data.draw(series(ring, max_terms=5, max_degree=3))
    pf, pg = to_piecewise(f, mode, F), to_piecewise(g, mode, F)
    assert to_piecewise(f + g, mode, F) == pf + pg
    assert to_piecewise(f * g, mode, F) == pf * pg
    assert to_piecewise(f - g, mode, F) == pf - pg
    assert to_piecewise(f, mode, F).is_compatible()


@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_additive_character_is_linear(alpha):
    pf = to_piecewise(character_class(DP6, ADD, alpha), "polynomial", ADD)
    for p in box(DP6, 2):
        assert pf(p) == alpha[0] * p[0] + alpha[1] * p[1]


@given(st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_multiplicative_character_is_exponential(alpha):
    pf = to_piecewise(character_class(DP6, MULT1, alpha), "exponential", MULT1)
    pieces = {}
    for tau in DP6.max_cones:
        spec = cone_params(DP6, tau, "exponential")
        # e^{<alpha, p>} with p = sum c_rho v_rho
        mono = spec.one()
        for i in tau:
            k = alpha[0] * DP6.rays[i][0] + alpha[1] * DP6.rays[i][1]
            mono = mono * spec.gen("t_" + DP6.labels[i]) ** k
        pieces[tau] = spec.one() - mono
    assert pf == PiecewiseFunc(DP6, "exponential", pieces, 6)


def test_u_coordinates_against_sympy():
    spec = cone_params(P2, (0, 1), "exponential")
    t1, t2 = spec.gen("t_x1"), spec.gen("t_x2")
    piece = 3 * t1**-2 * t2 - t2**3 + 2
    got = to_u_coordinates(piece, 4)
    u1, u2 = sympy.symbols("u_x1 u_x2")
    expr = 3 * (1 - u1) ** -2 * (1 - u2) - (1 - u2) ** 3 + 2
    ser = sympy.series(sympy.series(expr, u1, 0, 5).removeO(), u2, 0, 5).removeO()
    poly = sympy.Poly(sympy.expand(ser), u1, u2)
    expected = {m: int(c) for m, c in poly.terms() if sum(m) <= 4}
    assert dict(got.terms) == expected


def test_restriction_and_compatibility():
    spec_a = cone_params(P2, (0, 1), "polynomial")
    spec_b = cone_params(P2, (1, 2), "polynomial")
    spec_c = cone_params(P2, (0, 2), "polynomial")
    pieces = {
        (0, 1): spec_a.gen("a_x2") ** 2,
        (1, 2): spec_b.gen("a_x2") ** 2 + spec_b.gen("a_x3"),
        (0, 2): spec_c.gen("a_x3"),
    }
    pf = PiecewiseFunc(P2, "polynomial", pieces)
    assert pf.is_compatible()
    pieces[(0, 2)] = spec_c.gen("a_x1")
    bad = PiecewiseFunc(P2, "polynomial", pieces)
    # a_x1 on cone(x1,x3) disagrees along both of its edges
    assert bad.compatibility_failures() == [((0, 1), (0, 2)), ((0, 2), (1, 2))]
    with pytest.raises(DomainError):
        pw_check_eval(bad, (1, 0))
    assert pw_check_eval(pf, (2, 3)) == 9
    with pytest.raises(DomainError):
        pf.restrict((0, 1), (2,))


def test_exponential_compatibility_uses_t_equals_one():
    spec = {tau: cone_params(P2, tau, "exponential") for tau in P2.max_cones}
    pieces = {tau: spec[tau].one() for tau in P2.max_cones}
    pieces[(0, 1)] = spec[(0, 1)].gen("t_x1")
    pf = PiecewiseFunc(P2, "exponential", pieces)
    assert [a for a, _ in pf.compatibility_failures()] == [(0, 1)]
    with pytest.raises(UnsupportedError):
        pf((1, 0))


def test_constructor_rejects_bad_pieces():
    spec = cone_params(P2, (0, 1), "polynomial")
    with pytest.raises(DomainError):
        PiecewiseFunc(P2, "polynomial", {(0, 1): spec.one()})
    with pytest.raises(StructuralError):
        PiecewiseFunc(P2, "polynomial", {tau: spec.one() for tau in P2.max_cones})
    with pytest.raises(ValueError):
        PiecewiseFunc(P2, "sideways", {})


def test_mode_must_match_law():
    f = SRRing(P2).gen(0)
    with pytest.raises(DomainError):
        to_piecewise(f, "polynomial", MULT1)
    with pytest.raises(DomainError):
        to_piecewise(f, "exponential", ADD)
    with pytest.raises(DomainError):
        to_piecewise(f, "exponential", FormalGroupLaw.multiplicative(2, 6))
    Fv = FormalGroupLaw.multiplicative(V.gen("v"), 6)
    with pytest.raises(DomainError):
        to_piecewise(SRRing(P2, 6, V).gen(0), "exponential", Fv)


def test_exponential_image_has_no_constant_drift():
    rng = random.Random(3)
    ring = SRRing(DP6)
    f = random_series(ring, rng, 3, 6, augmented=True)
    pf = to_piecewise(f, "exponential", MULT1)
    for tau in DP6.max_cones:
        assert pf.restrict(tau, ()).is_zero()


@pytest.mark.parametrize("name,radius", [("pn:2", 3), ("dp6", 3), ("hirzebruch:2", 5)])
def test_injective_on_low_degree(name, radius):
    r, count = injectivity_rank(FANS[name], degree=3, radius=radius)
    assert r == count


def test_small_box_undercounts_narrow_cones():
    # cone(u2,u3) of F_2 holds too few points of the radius-3 box to separate cubics
    r, count = injectivity_rank(FANS["hirzebruch:2"], degree=3, radius=3)
    assert r < count


def test_str_lists_each_cone():
    text = str(courant_function(P2, 0))
    assert text.splitlines()[0] == "piecewise polynomial function on 3 maximal cones"
    assert len(text.splitlines()) == 4
