from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3stab.errors import NonSphericalReflection
from k3stab.exact import ModelComplex
from k3stab.lattice import (
    SKYSCRAPER,
    LatticeMap,
    MukaiVector,
    central_charge,
    central_charge_key,
    exp_class,
    is_isotropic,
    is_primitive,
    is_spherical,
    pairing,
    reflect,
    square,
    twist_on_skyscraper,
)
from k3stab.model import HPoint, K3Context

import oracles

ints = st.integers(min_value=-30, max_value=30)
vectors = st.builds(MukaiVector, ints, ints, ints)
degrees = st.integers(min_value=1, max_value=6)


@st.composite
def spherical_vectors(draw, d=None):
    d = d if d is not None else draw(degrees)
    r = draw(st.integers(min_value=1, max_value=25))
    candidates = [n for n in range(r) if (d * n * n + 1) % r == 0]
    if not candidates:
        r, candidates = 1, [0]
    n = draw(st.sampled_from(candidates)) + r * draw(st.integers(min_value=-3, max_value=3))
    sign = draw(st.sampled_from([1, -1]))
    v = MukaiVector(r, n, (d * n * n + 1) // r)
    return K3Context(d), v if sign > 0 else -v


# -- examples -----------------------------------------------------------------

def test_pairing_examples(ctx1, ctx2):
    assert pairing(SKYSCRAPER, SKYSCRAPER, ctx1) == 0
    assert pairing(MukaiVector(1, 0, 1), MukaiVector(1, 0, 1), ctx1) == -2
    assert pairing(SKYSCRAPER, MukaiVector(7, 3, 2), ctx1) == -7
    assert pairing(MukaiVector(1, 1, 1), MukaiVector(1, 1, 1), ctx2) == 2


def test_predicates(ctx1):
    assert is_spherical(MukaiVector(2, 1, 1), ctx1)
    assert is_isotropic(MukaiVector(1, 1, 1), ctx1)
    for d in range(1, 5):
        assert is_isotropic(SKYSCRAPER, K3Context(d))
    assert is_primitive(SKYSCRAPER)
    assert not is_primitive(MukaiVector(2, 0, 2))
    assert square(MukaiVector(2, 1, 1), ctx1) == -2


def test_reflect_examples(ctx1):
    delta = MukaiVector(1, 0, 1)
    assert reflect(SKYSCRAPER, delta, ctx1) == MukaiVector(-1, 0, 0)
    assert reflect(MukaiVector(-1, 0, 0), delta, ctx1) == SKYSCRAPER
    assert reflect(delta, delta, ctx1) == -delta


def test_reflect_rejects_non_spherical(ctx1):
    with pytest.raises(NonSphericalReflection):
        reflect(SKYSCRAPER, MukaiVector(1, 1, 1), ctx1)


def test_twist_on_skyscraper_examples(ctx1):
    assert twist_on_skyscraper(MukaiVector(1, 0, 1), ctx1) == MukaiVector(-1, 0, 0)
    assert twist_on_skyscraper(MukaiVector(2, 1, 1), ctx1) == MukaiVector(-4, -2, -1)


def test_exp_class_examples(ctx1, ctx2):
    e = exp_class(HPoint(0, 1), ctx1)
    assert (e.r, e.n, e.s) == (1, ModelComplex(0, 1, 1), -1)
    # 1 + i at d = 2 is x = 1, t = sqrt(2) -- outside the rational model, so use floats
    e2 = exp_class(complex(1, 1), ctx2)
    assert e2.s == pytest.approx(4j)
    assert not e2.exact


def test_central_charge_examples(ctx1):
    for d in range(1, 5):
        ctx = K3Context(d)
        assert central_charge(HPoint(Fraction(1, 3), 2), SKYSCRAPER, ctx) == -1
    assert central_charge(HPoint(0, 1), MukaiVector(1, 0, 1), ctx1) == 0
    assert central_charge(HPoint(0, 2), MukaiVector(1, 0, 1), ctx1) == 3


def test_key_form_needs_rank(ctx1):
    with pytest.raises(ValueError):
        central_charge_key(HPoint(0, 1), SKYSCRAPER, ctx1)


# -- properties ---------------------------------------------------------------

@given(degrees, vectors, vectors, vectors, ints)
def test_pairing_symmetric_bilinear(d, u, v, w, k):
    ctx = K3Context(d)
    assert pairing(u, v, ctx) == pairing(v, u, ctx)
    assert pairing(u + v, w, ctx) == pairing(u, w, ctx) + pairing(v, w, ctx)
    assert pairing(u.scale(k), w, ctx) == k * pairing(u, w, ctx)


@given(spherical_vectors(), vectors, vectors)
def test_reflection_is_involutive_isometry(cd, u, v):
    ctx, delta = cd
    assert reflect(reflect(v, delta, ctx), delta, ctx) == v
    assert pairing(reflect(u, delta, ctx), reflect(v, delta, ctx), ctx) == pairing(u, v, ctx)


@given(spherical_vectors())
def test_twist_on_skyscraper_is_reflection_of_point(cd):
    ctx, delta = cd
    img = twist_on_skyscraper(delta, ctx)
    assert img == reflect(SKYSCRAPER, delta, ctx)
    assert is_isotropic(img, ctx)


@given(spherical_vectors())
def test_reflection_map_squares_to_identity(cd):
    ctx, delta = cd
    refl = LatticeMap.reflection(delta, ctx)
    assert refl.is_isometry(ctx)
    assert refl @ refl == LatticeMap.identity()


@given(degrees, st.integers(min_value=-5, max_value=5), vectors)
def test_tensor_line_is_isometry_and_adds(d, k, v):
    ctx = K3Context(d)
    m = LatticeMap.tensor_line(k, ctx)
    assert m.is_isometry(ctx)
    assert LatticeMap.tensor_line(1, ctx) @ LatticeMap.tensor_line(k, ctx) == LatticeMap.tensor_line(k + 1, ctx)
    assert m(v).r == v.r


rationals = st.fractions(min_value=-6, max_value=6, max_denominator=30)
heights = st.fractions(min_value=Fraction(1, 30), max_value=8, max_denominator=30)


@given(degrees, rationals, heights, vectors.filter(lambda v: v.r != 0))
def test_key_form_equals_definition(d, x, t, v):
    ctx = K3Context(d)
    p = HPoint(x, t)
    assert central_charge(p, v, ctx) == central_charge_key(p, v, ctx)


@given(degrees, rationals, heights, vectors)
def test_central_charge_matches_float_oracle(d, x, t, v):
    ctx = K3Context(d)
    exact = complex(central_charge(HPoint(x, t), v, ctx))
    ref = oracles.float_central_charge(oracles.float_point(x, t, d), v.as_tuple(), d)
    assert abs(exact - ref) <= 1e-9 * (1 + abs(ref))


@given(degrees, rationals, heights)
def test_exp_class_isotropic_and_positive(d, x, t):
    ctx = K3Context(d)
    e = exp_class(HPoint(x, t), ctx)
    assert e.r == 1
    assert e.s == d * e.n * e.n
    assert pairing(e, e, ctx) == 0
    herm = pairing(e, e.conjugate(), ctx)
    assert herm.im_t == 0 and herm.re > 0


def test_parse_and_json():
    v = MukaiVector.parse("2, -1 ,3")
    assert v == MukaiVector(2, -1, 3)
    assert v.to_json() == [2, -1, 3]
    assert str(v) == "(2,-1,3)"
    with pytest.raises(ValueError):
        MukaiVector.parse("1,2")
    with pytest.raises(TypeError):
        MukaiVector(1.0, 0, 0)
