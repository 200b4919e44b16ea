import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from solenoid import lightcone as lc

pos_rat = st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=30)
pos_float = st.floats(min_value=0.05, max_value=20)


def F(*xs):
    return tuple(Fraction(x) for x in xs)


def test_pairing_examples():
    assert lc.pairing((0, 0, 1), (0, 0, 1)) == -1
    assert lc.pairing((1, 0, 1), (-1, 0, 1)) == -2
    assert lc.pairing((1, 0, 1), (1, 0, 1)) == 0


def test_lambda_length_examples():
    assert lc.lambda_length((1, 0, 1), (-1, 0, 1)) == pytest.approx(math.sqrt(2))
    r = 1 / math.sqrt(2)
    assert lc.lambda_length((r, 0, r), (-r, 0, r)) == pytest.approx(1)
    assert lc.lambda_length((1, 0, 1), (1, 0, 1)) == 0
    # exact when the result is rational
    assert lc.lambda_length(F(2, 0, 2), F(-1, 0, 1)) == 2


def test_positive_pairing_rejected():
    with pytest.raises(lc.PositivePairing):
        lc.lambda_length((1, 0, 1), (0, 1, -1))


def test_lightcone_point_validation():
    lc.LightconePoint.make(Fraction(3), Fraction(4), Fraction(5))
    with pytest.raises(ValueError):
        lc.LightconePoint.make(1, 0, 2)
    with pytest.raises(ValueError):
        lc.LightconePoint.make(1, 0, -1)


def test_realize_unity_triangle():
    v1, v2, v3 = lc.realize_triangle(1, 1, 1)
    r = 1 / math.sqrt(2)
    assert v1 == pytest.approx((-r, 0, r))
    assert v2 == pytest.approx((r, 0, r))
    assert v3 == pytest.approx((0, -math.sqrt(2), math.sqrt(2)))
    for a, b in ((v1, v2), (v1, v3), (v2, v3)):
        assert lc.pairing(a, b) == pytest.approx(-1)
    w = lc.realize_triangle(2, 2, 2)
    for p, q in zip(w, (v1, v2, v3)):
        assert p == pytest.approx(tuple(2 * c for c in q))


def test_realize_exact_is_sqrt2_scaled():
    pts = lc.realize_triangle(1, 1, 1, exact=True)
    assert pts == (F(-1, 0, 1), F(1, 0, 1), F(0, -2, 2))
    for a, b in ((0, 1), (0, 2), (1, 2)):
        assert lc.lambda_squared(pts[a], pts[b], lc.SCALED) == 1


@given(pos_rat, pos_rat, pos_rat)
def test_realize_exact_reproduces_inputs(a, b, c):
    v1, v2, v3 = lc.realize_triangle(a, b, c, exact=True)
    assert lc.lambda_squared(v1, v2, lc.SCALED) == a * a
    assert lc.lambda_squared(v1, v3, lc.SCALED) == b * b
    assert lc.lambda_squared(v2, v3, lc.SCALED) == c * c
    for v in (v1, v2, v3):
        assert lc.pairing(v, v) == 0 and v[2] > 0


@given(pos_float, pos_float, pos_float)
def test_realize_float_reproduces_inputs(a, b, c):
    v1, v2, v3 = lc.realize_triangle(a, b, c)
    for (p, q), want in (((v1, v2), a), ((v1, v3), b), ((v2, v3), c)):
        assert lc.lambda_length(p, q) == pytest.approx(want, rel=1e-12)


def test_third_point_examples():
    v1, v2, v3 = lc.realize_triangle(1, 1, 1, exact=True)
    other = lc.third_point(v1, v2, 1, 1, "left", frame=lc.SCALED)
    same = lc.third_point(v1, v2, 1, 1, "right", frame=lc.SCALED)
    assert lc.side_of(v1, v2, v3) == "right"
    assert same == v3
    assert other == F(0, 2, 2)  # sqrt(2) * (0, sqrt(2), sqrt(2))
    doubled = lc.third_point(lc.scale(2, v1), lc.scale(2, v2), 2, 2, "left", frame=lc.SCALED)
    assert doubled == lc.scale(2, other)


def test_third_point_float_example():
    v1, v2, _ = lc.realize_triangle(1.0, 1.0, 1.0)
    w = lc.third_point(v1, v2, 1.0, 1.0, "left")
    assert w == pytest.approx((0, math.sqrt(2), math.sqrt(2)))


def test_third_point_degenerate():
    v = F(1, 0, 1)
    with pytest.raises(lc.DegenerateSpan):
        lc.third_point(v, lc.scale(2, v), 1, 1)


@given(pos_rat, pos_rat, pos_rat, st.integers(1, 12), st.integers(1, 12))
def test_third_point_exact_postconditions(a, b, c, m, n):
    v1, v2, _ = lc.realize_triangle(a, b, c, exact=True)
    l13, l23 = Fraction(m, 3), Fraction(n, 3)
    w_left = lc.third_point(v1, v2, l13, l23, "left", frame=lc.SCALED)
    w_right = lc.third_point(v1, v2, l13, l23, "right", frame=lc.SCALED)
    for w in (w_left, w_right):
        assert lc.lambda_squared(w, v1, lc.SCALED) == l13 * l13
        assert lc.lambda_squared(w, v2, lc.SCALED) == l23 * l23
        assert lc.pairing(w, w) == 0
    assert w_left != w_right
    assert lc.side_of(v1, v2, w_left) == "left" and lc.side_of(v1, v2, w_right) == "right"
    # the midpoint lies in the span of v1, v2
    mid = lc.scale(Fraction(1, 2), lc.add(w_left, w_right))
    assert lc.det3(v1, v2, mid) == 0


def _normal_type(u1, u2, u3):
    """Independent oracle: the normal n with <u_i, n> = -1 inside/on/outside the cone."""
    rows = [(u[0], u[1], -u[2]) for u in (u1, u2, u3)]
    d = lc.det3(*rows)
    rhs = (-1, -1, -1)
    n = []
    for j in range(3):  # Cramer's rule
        cols = [[r[i] if i != j else rhs[k] for i in range(3)] for k, r in enumerate(rows)]
        n.append(Fraction(lc.det3(*cols)) / d)
    q = lc.pairing(n, n)
    return "elliptic" if q < 0 else "hyperbolic" if q > 0 else "parabolic"


@given(pos_rat, pos_rat, pos_rat)
def test_plane_type_matches_normal(a, b, c):
    pts = lc.realize_triangle(a, b, c, exact=True)
    got = lc.plane_type(*pts, frame=lc.SCALED)
    assert got == _normal_type(*pts)
    strict = a < b + c and b < a + c and c < a + b
    assert (got == "elliptic") == strict


def test_plane_type_examples():
    pts = lc.realize_triangle(1, 1, 1, exact=True)
    assert lc.plane_type(*pts, frame=lc.SCALED) == "elliptic"
    assert lc.plane_type_from_lengths(1, 1, 2) == "parabolic"
    assert lc.plane_type_from_lengths(1, 1, 3) == "hyperbolic"


def test_ptolemy_examples():
    assert lc.ptolemy_flip(1, 1, 1, 1, 1) == 2
    assert lc.ptolemy_flip(2, 1, 2, 1, 1) == 5


@given(pos_rat, pos_rat, pos_rat, pos_rat, pos_rat)
def test_ptolemy_involution(a, b, c, d, e):
    f = lc.ptolemy_flip(a, b, c, d, e)
    assert f * e == a * c + b * d
    assert lc.ptolemy_flip(b, c, d, a, f) == e


def test_cross_ratio_examples():
    assert lc.cross_ratio(1, 1, 1, 1) == 1
    assert lc.cross_ratio(2, 1, 1, 1) == 2


@given(st.lists(st.fractions(-9, 9, max_denominator=9), min_size=4, max_size=4, unique=True))
def test_projective_cross_ratio_on_unity(pts):
    # unity decoration: lambda between p/q and r/s is |ps - qr|
    xs = sorted(pts)
    x1, x2, x3, x4 = xs

    def lam(a, b):
        return abs(a.numerator * b.denominator - a.denominator * b.numerator)

    got = lc.projective_cross_ratio(lam(x1, x2), lam(x2, x3), lam(x3, x4), lam(x1, x4))
    # the Moebius map sending x1, x2, x4 to 1, 0, oo
    want = abs((x3 - x2) * (x1 - x4) / ((x3 - x4) * (x1 - x2)))
    assert got == want


def test_literal_cross_ratio_is_not_rescaling_invariant():
    # horocycle at vertex 3 scaled by 4: l23, l34 double, the literal formula changes
    assert lc.cross_ratio(2, 2, 1, 1) != lc.cross_ratio(1, 1, 1, 1)
    assert lc.projective_cross_ratio(1, 2, 2, 1) == lc.projective_cross_ratio(1, 1, 1, 1)


def test_simplicial_coordinate_examples():
    assert lc.simplicial_coordinate(1, 1, 1, 1, 1) == 2
    assert lc.simplicial_coordinate(1, 1, math.sqrt(2), 1, 1) == pytest.approx(0, abs=1e-15)
    assert lc.simplicial_coordinate(1, 1, 2, 1, 1) == -2


@given(pos_rat, pos_rat, pos_rat, pos_rat, pos_rat)
def test_simplicial_sign_is_convexity(l12, l23, l31, l14, l43):
    # realize triangle (1, 3, 2) and grow 4 across the diagonal 1-3
    v1, v3, v2 = lc.realize_triangle(l31, l12, l23, exact=True)
    assume(lc.side_of(v1, v3, v2) == "right")
    v4 = lc.third_point(v1, v3, l14, l43, "left", frame=lc.SCALED)
    sigma = lc.simplicial_coordinate(l12, l23, l31, l14, l43)
    # sign of the tetrahedron (v2, v1, v3, v4) against the all-ones reference
    vol = lc.det3(lc.add(v1, lc.scale(-1, v2)), lc.add(v3, lc.scale(-1, v2)),
                  lc.add(v4, lc.scale(-1, v2)))
    if sigma == 0:
        assert vol == 0
    else:
        assert (vol > 0) == ((sigma > 0) == _unity_orientation())


def _unity_orientation() -> bool:
    v1, v3, v2 = lc.realize_triangle(1, 1, 1, exact=True)
    v4 = lc.third_point(v1, v3, 1, 1, "left", frame=lc.SCALED)
    vol = lc.det3(lc.add(v1, lc.scale(-1, v2)), lc.add(v3, lc.scale(-1, v2)),
                  lc.add(v4, lc.scale(-1, v2)))
    return vol > 0  # sigma = 2 > 0 here


@given(pos_rat, pos_rat, st.integers(1, 9), st.integers(1, 9))
def test_lambda_homogeneity(a, b, s, t):
    v1, v2, _ = lc.realize_triangle(a, b, 1, exact=True)
    s2, t2 = Fraction(s * s), Fraction(t * t)
    got = lc.lambda_squared(lc.scale(s2, v1), lc.scale(t2, v2), lc.SCALED)
    assert got == s2 * t2 * a * a


def test_exact_sqrt():
    assert lc.exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    with pytest.raises(lc.NotASquare):
        lc.exact_sqrt(2)
    with pytest.raises(lc.NotASquare):
        lc.exact_sqrt(-1)


def test_lorentz_from_frames_round_trip():
    src = lc.realize_triangle(1, 1, 1, exact=True)
    dst = lc.realize_triangle(2, 3, 4, exact=True)
    m = lc.lorentz_from_frames(src, dst)
    for a, b in zip(src, dst):
        assert lc.apply_linear(m, a) == b


def test_boundary_point():
    assert lc.boundary_point(lc.farey_point(0, 1)) == (-1.0, 0.0)
    assert lc.boundary_point(lc.farey_point(1, 1)) == (0.0, -1.0)
