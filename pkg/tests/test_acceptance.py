"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with pytest (a summary table is printed at the end) or directly as a
script: ``python3 tests/test_acceptance.py``.
"""

import functools
import itertools
import random
import sys
import traceback

from torfan.blowup import check_push_pull, make_blowup
from torfan.coefficients import ZZ, ParamSpec
from torfan.errors import IncompatibleTupleError
from torfan.fan import (
    catalog_fan,
    minimal_nonfaces,
    picard_presentation,
    projective_space,
    star_subdivision,
)
from torfan.fgl import FormalGroupLaw, check_fgl_axioms, random_associative
from torfan.piecewise import courant_function, injectivity_rank, to_piecewise
from torfan.series import SeriesRing
from torfan.sralgebra import (
    OrdinaryModel,
    SRRing,
    character_class,
    equivariant_presentation,
    glue_tuple,
    graded_rank,
    ideal_membership,
    ordinary_presentation,
    random_series,
    restrict_to_cone,
    restriction_tuple,
)

CRITERIA = [
    (1, "P^n equivariant and ordinary presentations"),
    (2, "dP6 non-faces, character classes and Picard group"),
    (3, "dP6 ordinary model relations and graded ranks"),
    (4, "dP6 exceptional classes add without correction"),
    (5, "gluing inverts restriction and rejects incompatible tuples"),
    (6, "formal group law axioms and formal inverses"),
    (7, "blow-up of P^2 at a point: push-forward formulas and identities"),
    (8, "blow-up of P^3 at a point: push-forward table"),
    (9, "piecewise polynomial and exponential realizations"),
    (10, "specializing mult(v) agrees with additive and mult(1)"),
]
RESULTS = {}
N = 6
V = ParamSpec(("v",))
V_GEN = V.gen("v")


def criterion(number):
    title = dict(CRITERIA)[number]

    def wrap(fn):
        @functools.wraps(fn)
        def run():
            try:
                fn()
            except BaseException:
                RESULTS[number] = "FAIL"
                print(f"criterion {number:2d}: FAIL  {title}")
                raise
            RESULTS[number] = "PASS"
            print(f"criterion {number:2d}: PASS  {title}")
        return run

    return wrap


def labelled(ring):
    return {lab: ring.gen(i) for i, lab in enumerate(ring.labels)}


def dp6_checks(model, F):
    """Membership verdicts for the dP6 Picard relations in one ordinary model."""
    rels = model.presentation().relations
    x = labelled(model.source)
    ell = model.eliminate(F.formal_sum_all([x["L1"], x["E2"], x["E3"]], model.source))
    es = [model.eliminate(x[f"E{i}"]) for i in (1, 2, 3)]
    member = lambda f: ideal_membership(f.into(model.free), rels, N)
    out = {"l^3": member(ell**3), "l^2": member(ell * ell)}
    for i, e in enumerate(es, 1):
        out[f"E{i}^3"] = member(e**3)
        out[f"E{i}^2"] = member(e * e)
        out[f"l E{i}"] = member(ell * e)
        out[f"l^2 + E{i}^2"] = member(ell * ell + e * e)
        out[f"l^2 + chi(E{i})^2"] = member(ell * ell + F.formal_inverse(e) ** 2)
    for (i, a), (j, b) in itertools.combinations(enumerate(es, 1), 2):
        out[f"E{i} E{j}"] = member(a * b)
    return out


# -- 1 ------------------------------------------------------------------------


@criterion(1)
def test_criterion_01_projective_space():
    laws = [FormalGroupLaw.additive(N), FormalGroupLaw.multiplicative(1, N),
            FormalGroupLaw.multiplicative(2, N)]
    for n in (2, 3):
        fan = projective_space(n)
        (rel,) = equivariant_presentation(fan).relations
        assert dict(rel.items()) == {(1,) * (n + 1): ZZ.one()}
        for F in laws:
            pres = ordinary_presentation(fan, F)
            assert len(pres.variables) == 1
            (rel,) = pres.relations
            assert dict(rel.items()) == {(n + 1,): ZZ.one()}
            assert [graded_rank(pres, d) for d in range(n + 2)] == [1] * (n + 1) + [0]


# -- 2 ------------------------------------------------------------------------


@criterion(2)
def test_criterion_02_dp6_equivariant():
    fan = catalog_fan("dp6")
    assert fan.rays == ((0, 1), (1, 1), (1, 0), (0, -1), (-1, -1), (-1, 0))
    got = {frozenset(fan.labels[i] for i in S) for S in minimal_nonfaces(fan)}
    pairs = [("L", "L"), ("E", "E")]
    expected = {frozenset((f"{a}{i}", f"{b}{j}")) for a, b in pairs
                for i, j in itertools.combinations((1, 2, 3), 2)}
    expected |= {frozenset((f"L{i}", f"E{i}")) for i in (1, 2, 3)}
    assert len(expected) == 9 and got == expected

    R = SRRing(fan)
    x = labelled(R)
    assert character_class(R, FormalGroupLaw.additive(N), (1, 0)) == x["E3"] + x["L2"] - x["L3"] - x["E2"]
    assert character_class(R, FormalGroupLaw.additive(N), (0, 1)) == x["L1"] + x["E3"] - x["E1"] - x["L3"]
    F = FormalGroupLaw.multiplicative(V_GEN, N)
    Rv = SRRing(fan, N, V)
    y = labelled(Rv)
    chi = F.formal_inverse
    assert character_class(Rv, F, (1, 0)) == F.formal_sum_all(
        [y["E3"], y["L2"], chi(y["L3"]), chi(y["E2"])], Rv)
    assert character_class(Rv, F, (0, 1)) == F.formal_sum_all(
        [y["L1"], y["E3"], chi(y["E1"]), chi(y["L3"])], Rv)

    pic = picard_presentation(fan)
    assert pic.free_rank == 4 and pic.torsion == []


# -- 3 ------------------------------------------------------------------------


@criterion(3)
def test_criterion_03_dp6_ordinary():
    fan = catalog_fan("dp6")
    F = FormalGroupLaw.additive(N)
    for tau in fan.full_dimensional_cones():
        model = OrdinaryModel(fan, F, tau, N)
        pres = model.presentation()
        assert [graded_rank(pres, d) for d in range(4)] == [1, 4, 1, 0]
        verdicts = dp6_checks(model, F)
        nonzero = {"l^2", "E1^2", "E2^2", "E3^2"}
        assert {k for k, ok in verdicts.items() if not ok} == nonzero, (tau, verdicts)


# -- 4 ------------------------------------------------------------------------


@criterion(4)
def test_criterion_04_dp6_exceptional_sum():
    fan = catalog_fan("dp6")
    laws = [
        FormalGroupLaw.additive(N),
        FormalGroupLaw.multiplicative(V_GEN, N),
        FormalGroupLaw.from_selector("lorentz:u2", N),
        random_associative(N, random.Random(11)),
    ]
    for F in laws:
        R = SRRing(fan, N, F.params)
        x = labelled(R)
        e1, e2, e3 = x["E1"], x["E2"], x["E3"]
        assert F.formal_sum(e1, e2) == e1 + e2
        assert F.formal_sum_all([e1, e2, e3], R) == e1 + e2 + e3
        for n in range(1, 5):
            assert (e1 + e2 + e3) ** n == e1**n + e2**n + e3**n


# -- 5 ------------------------------------------------------------------------


def perturbed_compatible_tuple(ring, rng):
    fan = ring.fan
    tup = restriction_tuple(random_series(ring, rng, 4, 8))
    for tau in fan.max_cones:
        others = [set(o) for o in fan.max_cones if o != tau]
        h = restrict_to_cone(random_series(ring, rng, 4, 6), tau)
        # repair: drop every term living on a face shared with another cone
        kept = {m: c for m, c in h.items()
                if not any({i for i, e in enumerate(m) if e} <= o for o in others)}
        tup[tau] = tup[tau] + ring.from_terms(kept)
    return tup


@criterion(5)
def test_criterion_05_gluing():
    p2 = catalog_fan("pn:2")
    fans = [p2, catalog_fan("dp6"), catalog_fan("pn:3"), star_subdivision(p2, (0, 1))[0]]
    rng = random.Random(5)
    for fan in fans:
        ring = SRRing(fan, N, V)
        for _ in range(100):
            f = random_series(ring, rng, 4, 8)
            assert glue_tuple(restriction_tuple(f), ring) == f
        for _ in range(20):
            tup = perturbed_compatible_tuple(ring, rng)
            assert restriction_tuple(glue_tuple(tup, ring)) == tup
    ring = SRRing(p2)
    x1, x2, x3 = ring.gens()
    bad = {(0, 1): x1, (0, 2): 2 * x1, (1, 2): ring.zero()}
    try:
        glue_tuple(bad, ring)
    except IncompatibleTupleError as exc:
        assert exc.pair == ((0, 1), (0, 2))
    else:
        raise AssertionError("incompatible tuple was glued")


# -- 6 ------------------------------------------------------------------------


@criterion(6)
def test_criterion_06_formal_group_laws():
    laws = [
        FormalGroupLaw.additive(N),
        FormalGroupLaw.multiplicative(V_GEN, N),
        FormalGroupLaw.from_selector("lorentz:u2", N),
        random_associative(N, random.Random(6)),
    ]
    for F in laws:
        assert check_fgl_axioms(F).passed, F.variant
        ring = SeriesRing(("z",), N, F.params)
        z = ring.gen(0)
        assert F.formal_sum(z, F.formal_inverse(z)).is_zero()
    ring = SeriesRing(("z",), N, V)
    z, v = ring.gen(0), ring.const(V_GEN)
    expected = ring.zero()
    for i in range(N):
        expected = expected - v**i * z ** (i + 1)
    assert FormalGroupLaw.multiplicative(V_GEN, N).formal_inverse(z) == expected


# -- 7 ------------------------------------------------------------------------


@criterion(7)
def test_criterion_07_blowup_p2():
    F = FormalGroupLaw.multiplicative(V_GEN, N)
    ctx = make_blowup(catalog_fan("pn:2"), (0, 1), F, method="recursion")
    R = ctx.source
    x1, x2, _ = R.gens()
    v = R.const(V_GEN)
    xE = ctx.exceptional_class
    assert ctx.pushforward(xE) == v * x1 * x2
    assert ctx.pushforward(xE * xE) == v * (x1**2 * x2 + x1 * x2**2) - x1 * x2
    assert ctx.pushforward(F.formal_inverse(xE)).is_zero()
    for a, b in ((0, 1), (1, 0)):
        xa, xb = R.gen(a), R.gen(b)
        for s in range(1, N + 1):
            for t in range(0, N + 1 - s):
                exps = tuple(s if i == a else 0 for i in range(2))
                expected = xa * xb**t * F.formal_difference(xa, xb) ** (s - 1)
                assert ctx.push_monomial(exps, t) == expected, (a, s, t)
    report = check_push_pull(ctx, rng=random.Random(7), count=50)
    assert report.ok, str(report)
    assert report.checks == 102
    rng = random.Random(77)
    for value in (0, 1):
        spec = ctx.specialize({"v": value})
        for _ in range(10):
            g = random_series(ctx.target, rng, 4, 6)
            lhs = ctx.pushforward(g).specialize({"v": value}, ZZ)
            assert lhs == spec.pushforward(g.specialize({"v": value}, ZZ))


# -- 8 ------------------------------------------------------------------------


@criterion(8)
def test_criterion_08_blowup_p3():
    F = FormalGroupLaw.multiplicative(V_GEN, N)
    ctx = make_blowup(projective_space(3), (0, 1, 2), F, method="recursion")
    R = ctx.source
    x1, x2, x3, _ = R.gens()
    v = R.const(V_GEN)
    pt = x1 * x2 * x3
    xE = ctx.exceptional_class
    assert ctx.pushforward(xE) == v * v * pt
    for i in range(3):
        assert ctx.pushforward(ctx.target.gen(i) * xE) == v * pt
    for i, j in itertools.combinations(range(3), 2):
        assert ctx.pushforward(ctx.target.gen(i) * ctx.target.gen(j) * xE) == pt


# -- 9 ------------------------------------------------------------------------


@criterion(9)
def test_criterion_09_piecewise():
    rng = random.Random(9)
    add, mult1 = FormalGroupLaw.additive(N), FormalGroupLaw.multiplicative(1, N)
    for name in ("pn:2", "dp6"):
        fan = catalog_fan(name)
        ring = SRRing(fan, N)
        for _ in range(50):
            f, g = random_series(ring, rng, 3, 5), random_series(ring, rng, 3, 5)
            pf, pg = to_piecewise(f, "polynomial", add), to_piecewise(g, "polynomial", add)
            assert to_piecewise(f * g, "polynomial", add) == pf * pg
            assert to_piecewise(f + g, "polynomial", add) == pf + pg
            assert pf.is_compatible()
        for rho in range(fan.nrays):
            phi = courant_function(fan, rho)
            assert phi.is_compatible()
            for other in range(fan.nrays):
                assert phi(fan.rays[other]) == int(rho == other)
        rank, count = injectivity_rank(fan, degree=3, radius=3)
        assert rank == count
    ring = SRRing(catalog_fan("dp6"), N)
    for _ in range(50):
        f, g = random_series(ring, rng, 3, 5), random_series(ring, rng, 3, 5)
        pf, pg = to_piecewise(f, "exponential", mult1), to_piecewise(g, "exponential", mult1)
        assert to_piecewise(f * g, "exponential", mult1) == pf * pg
        assert pf.is_compatible()


# -- 10 -----------------------------------------------------------------------


@criterion(10)
def test_criterion_10_cross_law():
    fan = catalog_fan("dp6")
    Fv = FormalGroupLaw.multiplicative(V_GEN, N)
    direct = {0: FormalGroupLaw.additive(N), 1: FormalGroupLaw.multiplicative(1, N)}
    for tau in fan.full_dimensional_cones():
        for value, G in direct.items():
            spec_pres = ordinary_presentation(fan, Fv, tau).specialize({"v": value})
            G_pres = ordinary_presentation(fan, G, tau)
            assert [r.to_json() for r in spec_pres.relations] == [r.to_json() for r in G_pres.relations]
            assert all(ideal_membership(r, G_pres.relations, N) for r in spec_pres.relations)
            ranks = [graded_rank(spec_pres, d) for d in range(4)]
            assert ranks == [graded_rank(G_pres, d) for d in range(4)]
            Fs = Fv.specialize({"v": value}, ZZ)
            assert dp6_checks(OrdinaryModel(fan, Fs, tau, N), Fs) == dp6_checks(OrdinaryModel(fan, G, tau, N), G)


if __name__ == "__main__":
    failed = 0
    for number, _ in CRITERIA:
        fn = next(f for name, f in sorted(globals().items())
                  if name.startswith(f"test_criterion_{number:02d}_"))
        try:
            fn()
        except Exception:
            failed += 1
            traceback.print_exc()
    sys.exit(1 if failed else 0)
