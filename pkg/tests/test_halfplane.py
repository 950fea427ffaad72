import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from k3stab.errors import (
    CoincidentPoints,
    NegativeRankProduct,
    NonSpherical,
    NonSquareRankProduct,
    NotAnIsometry,
    OrientationReversed,
    RankZero,
)
from k3stab.halfplane import (
    MoebiusMap,
    Semicircle,
    Vertical,
    apply,
    cosh_distance,
    cross_ratio,
    geodesic_from_coefficients,
    geodesic_through,
    hyp_distance,
    induced_map_oracle,
    lemma32_closed_form,
    map_geodesic,
    translation,
    twist_moebius,
)
from k3stab.lattice import SKYSCRAPER, LatticeMap, MukaiVector, twist_on_skyscraper
from k3stab.model import HPoint, K3Context
from k3stab.spherical import enumerate_spherical, spherical_point

import oracles

degrees = st.integers(min_value=1, max_value=5)
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=24)
heights = st.fractions(min_value=Fraction(1, 24), max_value=5, max_denominator=24)
points = st.builds(HPoint, rationals, heights)


@st.composite
def spherical_pairs(draw):
    d = draw(degrees)
    ctx = K3Context(d)
    classes = enumerate_spherical(ctx, 12, -2, 2)
    return ctx, draw(st.sampled_from(classes)).delta


@st.composite
def moebius_maps(draw):
    a, b, c, e = (draw(st.fractions(min_value=-5, max_value=5, max_denominator=6)) for _ in range(4))
    det = a * e - b * c
    if det == 0:
        return MoebiusMap(1, b, 0, 1)
    if det < 0:
        # negating the top row flips the determinant sign
        a, b = -a, -b
    return MoebiusMap(a, b, c, e)


# -- MoebiusMap ------------------------------------------------------------------

def test_normalization():
    m = MoebiusMap(2, 4, 0, 2)
    assert m.entries == (1, 2, 0, 1)
    assert MoebiusMap(-2, 0, 0, -1) == MoebiusMap(2, 0, 0, 1)
    assert MoebiusMap(0, -3, 3, 0) == MoebiusMap(0, 1, -1, 0)
    with pytest.raises(ValueError):
        MoebiusMap(1, 0, 0, -1)
    assert translation(3).translation_shift == 3


@given(moebius_maps(), moebius_maps(), points, degrees)
def test_composition_and_inverse(m1, m2, p, d):
    ctx = K3Context(d)
    assert apply(m1 @ m2, p, ctx) == apply(m1, apply(m2, p, ctx), ctx)
    assert apply(m1.inverse(), apply(m1, p, ctx), ctx) == p
    assert (m1 @ m1.inverse()).is_identity()


@given(moebius_maps(), points, degrees)
def test_apply_matches_exact_field(m, p, d):
    ctx = K3Context(d)
    assert HPoint.from_complex(m(p.as_complex(ctx))) == apply(m, p, ctx)
    ref = oracles.float_moebius(m.entries, oracles.float_point(p.x, p.t, d))
    img = apply(m, p, ctx)
    got = oracles.float_point(img.x, img.t, d)
    assert abs(got - ref) <= 1e-9 * (1 + abs(ref))


def test_apply_examples(ctx1):
    p = HPoint(Fraction(1, 3), Fraction(5, 7))
    assert apply(MoebiusMap.identity(), p, ctx1) == p
    assert apply(MoebiusMap(0, -1, 1, 0), HPoint(0, 2), ctx1) == HPoint(0, Fraction(1, 2))
    assert apply(translation(3), HPoint(Fraction(1, 2), Fraction(1, 2)), ctx1) == HPoint(Fraction(7, 2), Fraction(1, 2))


# -- distances and geodesics --------------------------------------------------

def test_distance_examples():
    assert hyp_distance(HPoint(0, 1), HPoint(0, 2), K3Context(1)) == pytest.approx(math.log(2), rel=1e-14)
    assert hyp_distance(HPoint(0, 2), HPoint(0, 4), K3Context(4)) == pytest.approx(math.log(2), rel=1e-14)
    assert hyp_distance(HPoint(1, 1), HPoint(1, 1), K3Context(3)) == 0


@given(points, points, points, degrees)
def test_distance_is_a_metric(p, q, r, d):
    ctx = K3Context(d)
    pq, qp = hyp_distance(p, q, ctx), hyp_distance(q, p, ctx)
    assert pq == qp
    assert (pq == 0) == (p == q)
    assert hyp_distance(p, r, ctx) <= pq + hyp_distance(q, r, ctx) + 1e-12
    ref = oracles.float_hyp_distance(oracles.float_point(p.x, p.t, d), oracles.float_point(q.x, q.t, d))
    assert pq == pytest.approx(ref, rel=1e-9, abs=1e-9)
    assert math.cosh(pq) == pytest.approx(float(cosh_distance(p, q, ctx)), rel=1e-12)


def test_geodesic_through_examples(ctx1):
    assert geodesic_through(HPoint(0, 1), HPoint(0, 2), ctx1) == Vertical(0)
    # the center solves c^2 + 1 = (1/2 - c)^2 + 1/4, i.e. c = -1/2
    g = geodesic_through(HPoint(0, 1), HPoint(Fraction(1, 2), Fraction(1, 2)), ctx1)
    assert g == Semicircle(Fraction(-1, 2), Fraction(5, 4))
    assert g.contains(HPoint(0, 1), ctx1) and g.contains(HPoint(Fraction(1, 2), Fraction(1, 2)), ctx1)
    g2 = geodesic_through(HPoint(0, 1), HPoint(Fraction(3, 2), 1), ctx1)
    assert g2 == Semicircle(Fraction(3, 4), Fraction(25, 16))
    with pytest.raises(CoincidentPoints):
        geodesic_through(HPoint(0, 1), HPoint(0, 1), ctx1)


@given(points, points, degrees)
def test_geodesic_through_contains_both(p, q, d):
    assume(p != q)
    ctx = K3Context(d)
    g = geodesic_through(p, q, ctx)
    assert g.contains(p, ctx) and g.contains(q, ctx)


@given(moebius_maps(), points, points, degrees)
def test_maps_send_geodesics_to_geodesics(m, p, q, d):
    assume(p != q)
    ctx = K3Context(d)
    g = geodesic_through(p, q, ctx)
    img = map_geodesic(m, g)
    assert img == geodesic_through(apply(m, p, ctx), apply(m, q, ctx), ctx)


def test_geodesic_from_coefficients():
    assert geodesic_from_coefficients(0, 2, -1) == Vertical(Fraction(1, 2))
    assert geodesic_from_coefficients(1, 0, -1) == Semicircle(0, 1)
    with pytest.raises(ValueError):
        geodesic_from_coefficients(0, 0, 1)


# -- induced maps -------------------------------------------------------------

def test_oracle_examples(ctx1):
    assert induced_map_oracle(LatticeMap.reflection(MukaiVector(1, 0, 1), ctx1), ctx1) == MoebiusMap(0, -1, 1, 0)
    assert induced_map_oracle(LatticeMap.identity(), ctx1).is_identity()
    assert induced_map_oracle(LatticeMap.tensor_line(1, ctx1), ctx1).translation_shift == 1
    assert induced_map_oracle(LatticeMap.shift(), ctx1).is_identity()


def test_oracle_rejects_non_isometry(ctx1):
    bad = LatticeMap(MukaiVector(2, 0, 0), MukaiVector(0, 1, 0), SKYSCRAPER)
    with pytest.raises(NotAnIsometry):
        induced_map_oracle(bad, ctx1)


def test_oracle_rejects_orientation_reversal(ctx1):
    # dualizing (r, n, s) -> (r, -n, s) is an isometry that conjugates z
    dual = LatticeMap(MukaiVector(1, 0, 0), MukaiVector(0, -1, 0), SKYSCRAPER)
    assert dual.is_isometry(ctx1)
    with pytest.raises(OrientationReversed):
        induced_map_oracle(dual, ctx1)


def test_twist_examples(ctx1):
    m = twist_moebius(MukaiVector(1, 0, 1), ctx1)
    assert m == MoebiusMap(0, -1, 1, 0)
    assert m.fixed_point(ctx1) == HPoint(0, 1)
    m2 = twist_moebius(MukaiVector(2, 1, 1), ctx1)
    # z -> 1/2 - 1/(4 (z - 1/2))
    z = HPoint(Fraction(1, 2), 1).as_complex(ctx1)
    assert m2(z) == Fraction(1, 2) - 1 / (4 * (z - Fraction(1, 2)))
    assert apply(m2, HPoint(Fraction(1, 2), 1), ctx1) == HPoint(Fraction(1, 2), Fraction(1, 4))
    with pytest.raises(NonSpherical):
        twist_moebius(MukaiVector(1, 1, 1), ctx1)


def test_closed_form_examples(ctx1):
    v = twist_on_skyscraper(MukaiVector(1, 0, 1), ctx1)
    assert v == MukaiVector(-1, 0, 0)
    assert lemma32_closed_form(v, v, ctx1) == MoebiusMap(0, -1, 1, 0)
    w = twist_on_skyscraper(MukaiVector(2, 1, 1), ctx1)
    assert lemma32_closed_form(w, w, ctx1) == twist_moebius(MukaiVector(2, 1, 1), ctx1)
    with pytest.raises(RankZero):
        lemma32_closed_form(SKYSCRAPER, v, ctx1)
    with pytest.raises(NegativeRankProduct):
        lemma32_closed_form(MukaiVector(1, 0, 0), MukaiVector(-1, 0, 0), ctx1)
    with pytest.raises(NonSquareRankProduct):
        lemma32_closed_form(MukaiVector(1, 1, 1), MukaiVector(2, 0, 0), ctx1)


@given(spherical_pairs())
def test_three_routes_agree(cd):
    ctx, delta = cd
    iso = twist_on_skyscraper(delta, ctx)
    oracle = induced_map_oracle(LatticeMap.reflection(delta, ctx), ctx)
    assert oracle == twist_moebius(delta, ctx) == lemma32_closed_form(iso, iso, ctx)


@given(spherical_pairs(), points)
def test_twist_matches_float_pushforward(cd, p):
    ctx, delta = cd
    img = apply(twist_moebius(delta, ctx), p, ctx)
    ref = oracles.float_reflection_image(delta.as_tuple(), oracles.float_point(p.x, p.t, ctx.d), ctx.d)
    got = oracles.float_point(img.x, img.t, ctx.d)
    assert abs(got - ref) <= 1e-8 * (1 + abs(ref))


@given(spherical_pairs())
def test_involution_and_fixed_point(cd):
    ctx, delta = cd
    m = twist_moebius(delta, ctx)
    assert (m @ m).is_identity()
    assert m.fixed_point(ctx) == spherical_point(delta, ctx)


@given(spherical_pairs(), st.integers(min_value=-3, max_value=3))
def test_oracle_is_multiplicative(cd, k):
    ctx, delta = cd
    psi1 = LatticeMap.reflection(delta, ctx)
    psi2 = LatticeMap.tensor_line(k, ctx)
    for f, g in ((psi1, psi2), (psi2, psi1)):
        assert induced_map_oracle(f @ g, ctx) == induced_map_oracle(f, ctx) @ induced_map_oracle(g, ctx)


@given(spherical_pairs(), points, points, points, points)
def test_cross_ratio_invariance(cd, p1, p2, p3, p4):
    ctx, delta = cd
    pts = [p1, p2, p3, p4]
    assume(len(set(pts)) == 4)
    m = twist_moebius(delta, ctx)
    before = cross_ratio(*(p.as_complex(ctx) for p in pts))
    after = cross_ratio(*(apply(m, p, ctx).as_complex(ctx) for p in pts))
    assert before == after
    assert hyp_distance(p1, p2, ctx) == pytest.approx(
        hyp_distance(apply(m, p1, ctx), apply(m, p2, ctx), ctx), rel=1e-12)
