"""Minkowski 3-space and the positive light cone.

Vectors are plain 3-tuples; the scalar backend is whatever the entries are.
Floats give approximate coordinates; ``Fraction`` entries stay exact.

Exact work uses a *scaled frame*: every light-cone point is stored as
``sqrt(2)`` times its true coordinates.  In that frame the unity Farey
decoration has integer coordinates and every decoration with rational
lambda lengths has rational coordinates.  Functions that care take a
``frame`` argument, the factor by which pairings are inflated (1 for true
coordinates, 2 for the scaled frame).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

SCALED = 2  # pairing inflation of the sqrt(2)-scaled frame


class PositivePairing(ValueError):
    pass


class DegenerateSpan(ValueError):
    pass


class NotASquare(ValueError):
    pass


class LightconePoint(NamedTuple):
    x: object
    y: object
    z: object

    @classmethod
    def make(cls, x, y, z, tol=1e-9) -> "LightconePoint":
        p = cls(x, y, z)
        q = pairing(p, p)
        exact = _is_exact(p)
        if z <= 0 or (q != 0 if exact else abs(q) > tol * max(1.0, float(z) ** 2)):
            raise ValueError(f"{p} is not on the positive light cone")
        return p


def _is_exact(v) -> bool:
    return all(isinstance(c, Rational) for c in v)


def pairing(u, v):
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2]


def scale(t, v):
    return (t * v[0], t * v[1], t * v[2])


def add(*vs):
    return tuple(sum(c) for c in zip(*vs))


def det3(u, v, w):
    return (u[0] * (v[1] * w[2] - v[2] * w[1])
            - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]))


def _norm(v) -> float:
    return math.sqrt(sum(float(c) * float(c) for c in v))


def exact_sqrt(x) -> Fraction:
    """Square root of a non-negative rational that is a perfect square."""
    x = Fraction(x)
    if x < 0:
        raise NotASquare(f"{x} is negative")
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise NotASquare(f"{x} is not the square of a rational")
    return Fraction(n, d)


def lambda_squared(u, v, frame=1):
    q = -pairing(u, v)
    if q < 0:
        raise PositivePairing("pairing of light-cone points is positive")
    return q / frame if not _is_exact((q,)) else Fraction(q) / frame


def lambda_length(u, v, frame=1):
    """sqrt(-<u, v>) (divided by the frame factor under the root).

    Exact inputs give an exact result when it is rational and a float otherwise.
    """
    q = lambda_squared(u, v, frame)
    if isinstance(q, Fraction):
        try:
            return exact_sqrt(q)
        except NotASquare:
            return math.sqrt(q)
    return math.sqrt(q)


def realize_triangle(l12, l13, l23, exact: bool = False):
    """Three light-cone points over the circle points -1, +1, -i with the given lambda lengths.

    With ``exact=True`` the lengths must be rational and the points are
    returned in the scaled frame.
    """
    if min(l12, l13, l23) <= 0:
        raise ValueError("lambda lengths must be positive")
    if exact:
        l12, l13, l23 = Fraction(l12), Fraction(l13), Fraction(l23)
        t1 = l12 * l13 / l23
        t2 = l12 * l23 / l13
        t3 = 2 * l13 * l23 / l12
        return (LightconePoint(-t1, Fraction(0), t1),
                LightconePoint(t2, Fraction(0), t2),
                LightconePoint(Fraction(0), -t3, t3))
    # c12 = 2, c13 = c23 = 1 for the base rays
    r = 1 / math.sqrt(2)
    t1 = l12 * l13 / l23 * r
    t2 = l12 * l23 / l13 * r
    t3 = l13 * l23 / l12 * math.sqrt(2)
    return (LightconePoint(-t1, 0.0, t1), LightconePoint(t2, 0.0, t2),
            LightconePoint(0.0, -t3, t3))


def side_of(v1, v2, w) -> str:
    """Which side of the plane spanned by ``v1, v2`` the point ``w`` lies on."""
    d = det3(v1, v2, w)
    if d == 0:
        raise DegenerateSpan("point lies in the plane")
    return "left" if d > 0 else "right"


def third_point(v1, v2, l13, l23, side: str = "left", frame=1, tol=1e-9):
    """The light-cone point with lambda lengths ``l13`` to ``v1`` and ``l23`` to ``v2``.

    ``side="left"`` selects the solution with ``det(v1, v2, v3) > 0``; for
    points over the circle this is the counter-clockwise side of ``v1 -> v2``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    exact = _is_exact(v1) and _is_exact(v2) and _is_exact((l13, l23))
    p12 = pairing(v1, v2)
    if p12 == 0:
        raise DegenerateSpan("v1 and v2 are proportional")
    l12sq = -p12 / frame
    a = l13 * l13 / l12sq
    b = l23 * l23 / l12sq
    cross = (v1[1] * v2[2] - v1[2] * v2[1],
             v1[2] * v2[0] - v1[0] * v2[2],
             v1[0] * v2[1] - v1[1] * v2[0])
    n = (cross[0], cross[1], -cross[2])
    nn = pairing(n, n)
    if nn <= 0:
        raise DegenerateSpan("span of v1, v2 is not timelike")
    csq = -2 * a * b * p12 / nn
    if exact:
        c = exact_sqrt(Fraction(csq))
    else:
        c = math.sqrt(csq)
    if side == "right":
        c = -c
    v3 = LightconePoint(*add(scale(a, v2), scale(b, v1), scale(c, n)))
    # post-verify the defining pairings
    for v, l in ((v1, l13), (v2, l23)):
        got = -pairing(v3, v) / frame
        want = l * l
        if exact:
            if got != want:
                raise ArithmeticError("third_point failed its pairing check")
        elif abs(got - want) > tol * max(1.0, abs(want), _norm(v3) * _norm(v)):
            raise ArithmeticError("third_point failed its pairing check")
    return v3


def plane_type(u1, u2, u3, frame=1) -> str:
    """Classify the affine plane through three light-cone points.

    Uses the squared lambda lengths only: all strict triangle inequalities
    hold exactly when ``(a+b+c)(-a+b+c)(a-b+c)(a+b-c) > 0``.
    """
    return plane_type_from_squares(lambda_squared(u1, u2, frame),
                                   lambda_squared(u1, u3, frame),
                                   lambda_squared(u2, u3, frame))


def plane_type_from_squares(a2, b2, c2, tol=0.0) -> str:
    h = 2 * (a2 * b2 + b2 * c2 + c2 * a2) - (a2 * a2 + b2 * b2 + c2 * c2)
    if h > tol:
        return "elliptic"
    if h < -tol:
        return "hyperbolic"
    return "parabolic"


def plane_type_from_lengths(l12, l13, l23) -> str:
    return plane_type_from_squares(l12 * l12, l13 * l13, l23 * l23)


def ptolemy_flip(a, b, c, d, e):
    """Diagonal after a flip: sides ``a, b, c, d`` in cyclic order, old diagonal ``e``."""
    if isinstance(e, int):
        e = Fraction(e)
    return (a * c + b * d) / e


def cross_ratio(l23, l34, l12, l14):
    num = l23 * l34
    den = l12 * l14
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


def projective_cross_ratio(l12, l23, l34, l14):
    """|cross-ratio| of the projections when 1, 2, 4 go to 1, 0, oo.

    Each vertex appears once above and once below, so horocycle rescaling
    cancels.
    """
    num = l14 * l23
    den = l12 * l34
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


def simplicial_coordinate(l12, l23, l31, l14, l43):
    """The edge invariant of the diagonal 13 of the quadrilateral 1234."""
    if all(isinstance(x, int) for x in (l12, l23, l31, l14, l43)):
        l12, l23, l31, l14, l43 = map(Fraction, (l12, l23, l31, l14, l43))
    return ((l12 * l12 + l23 * l23 - l31 * l31) / (l12 * l23 * l31)
            + (l14 * l14 + l43 * l43 - l31 * l31) / (l14 * l43 * l31))


def farey_point(p: int, q: int, exact: bool = True):
    """Unity-decoration point over ``p/q``; scaled frame when exact."""
    w = (p * p - q * q, -2 * p * q, p * p + q * q)
    if exact:
        return LightconePoint(*(Fraction(c) for c in w))
    r = 1 / math.sqrt(2)
    return LightconePoint(*(c * r for c in w))


def boundary_point(v) -> tuple[float, float]:
    """Projection of a light-cone point to the unit circle."""
    return (float(v[0]) / float(v[2]), float(v[1]) / float(v[2]))


def lorentz_from_frames(src, dst):
    """The linear map sending the three vectors ``src`` to ``dst`` (3x3, row-major)."""
    def inv3(m):
        (a, b, c), (d, e, f), (g, h, i) = m
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        if det == 0:
            raise DegenerateSpan("frame is degenerate")
        return [[(e * i - f * h) / det, (c * h - b * i) / det, (b * f - c * e) / det],
                [(f * g - d * i) / det, (a * i - c * g) / det, (c * d - a * f) / det],
                [(d * h - e * g) / det, (b * g - a * h) / det, (a * e - b * d) / det]]

    # columns: M @ S = D with S, D having the vectors as columns
    s_cols = [[src[j][i] for j in range(3)] for i in range(3)]
    d_cols = [[dst[j][i] for j in range(3)] for i in range(3)]
    s_inv = inv3(s_cols)
    return [[sum(d_cols[r][k] * s_inv[k][c] for k in range(3)) for c in range(3)]
            for r in range(3)]


def apply_linear(m, v):
    return tuple(sum(m[r][k] * v[k] for k in range(3)) for r in range(3))
