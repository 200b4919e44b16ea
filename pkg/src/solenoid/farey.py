"""Exact combinatorics of the Farey tesselation.

Vertices are extended rationals stored as reduced integer pairs ``(p, q)``
with infinity encoded as ``1/0``.  Edges are pairs of vertices; a Farey
edge joins two Farey neighbours.  Group elements are integral unimodular
matrices modulo sign.

The distinguished oriented edge of the Farey tesselation runs from ``0/1``
to ``1/0``; the triangle ``(0/1, 1/0, 1/1)`` is the base triangle adjacent
to it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator, NamedTuple


class FareyVertex(NamedTuple):
    """A point of the extended rationals, ``p/q`` in lowest terms."""

    p: int
    q: int

    @classmethod
    def make(cls, p: int, q: int = 1) -> "FareyVertex":
        if p == 0 and q == 0:
            raise ValueError("0/0 is not an extended rational")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def parse(cls, text: str) -> "FareyVertex":
        """Parse ``"p/q"`` (or a bare integer); ``"1/0"`` is infinity."""
        text = text.strip()
        num, sep, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"malformed rational {text!r}") from None
        return cls.make(p, q)

    @property
    def is_infinity(self) -> bool:
        return self.q == 0

    def to_fraction(self) -> Fraction:
        if self.q == 0:
            raise ValueError("infinity has no finite value")
        return Fraction(self.p, self.q)

    def sort_key(self) -> tuple:
        """Key realizing the counter-clockwise order of the circle, cut at infinity."""
        if self.q == 0:
            return (1, Fraction(0))
        return (0, Fraction(self.p, self.q))

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


ZERO = FareyVertex(0, 1)
ONE = FareyVertex(1, 1)
MINUS_ONE = FareyVertex(-1, 1)
INFINITY = FareyVertex(1, 0)

Edge = tuple  # (FareyVertex, FareyVertex)

DOE: Edge = (ZERO, INFINITY)
E0: Edge = (ZERO, INFINITY)
BASE_TRIANGLE = (INFINITY, ZERO, ONE)


def vertex(x) -> FareyVertex:
    """Coerce ``x`` (FareyVertex, int, Fraction, ``"p/q"`` string, or pair) to a vertex."""
    if isinstance(x, FareyVertex):
        return x
    if isinstance(x, str):
        return FareyVertex.parse(x)
    if isinstance(x, Fraction):
        return FareyVertex.make(x.numerator, x.denominator)
    if isinstance(x, int):
        return FareyVertex.make(x, 1)
    p, q = x
    return FareyVertex.make(int(p), int(q))


def det(a: FareyVertex, b: FareyVertex) -> int:
    return a.p * b.q - a.q * b.p


def is_farey_neighbor(a: FareyVertex, b: FareyVertex) -> bool:
    return abs(det(a, b)) == 1


def _require_neighbors(a, b):
    if not is_farey_neighbor(a, b):
        raise ValueError(f"{a} and {b} are not Farey neighbours")


def mediant(a: FareyVertex, b: FareyVertex) -> FareyVertex:
    _require_neighbors(a, b)
    return FareyVertex.make(a.p + b.p, a.q + b.q)


def triangles_adjacent(edge: Edge) -> tuple[FareyVertex, FareyVertex]:
    """Third vertices of the two Farey triangles on either side of ``edge``.

    Returns ``(mediant, co-mediant)``.
    """
    a, b = edge
    _require_neighbors(a, b)
    return (FareyVertex.make(a.p + b.p, a.q + b.q),
            FareyVertex.make(a.p - b.p, a.q - b.q))


def ccw(a: FareyVertex, b: FareyVertex, c: FareyVertex) -> bool:
    """True when ``a, b, c`` are distinct and in counter-clockwise cyclic order."""
    ka, kb, kc = a.sort_key(), b.sort_key(), c.sort_key()
    return (ka < kb < kc) or (kb < kc < ka) or (kc < ka < kb)


def separates(edge: Edge, x: FareyVertex, y: FareyVertex) -> bool:
    """Whether the geodesic ``edge`` separates boundary points ``x`` and ``y``."""
    a, b = edge
    return ccw(a, b, x) != ccw(a, b, y)


def is_e0(edge: Edge) -> bool:
    return set(edge) == {ZERO, INFINITY}


def edge_label(edge: Edge) -> FareyVertex:
    """Label of a Farey edge: its adjacent third vertex lying across the edge from e0."""
    a, b = edge
    if is_e0(edge):
        raise ValueError("the edge e0 carries no label")
    m, c = triangles_adjacent(edge)
    # an endpoint of e0 off the edge lies on the e0 side (or is a third vertex there)
    ref = ZERO if ZERO not in (a, b) else INFINITY
    return m if separates(edge, m, ref) else c


# ---------------------------------------------------------------------------
# PSL(2, Z)


class Moebius(NamedTuple):
    """Element of PSL(2, Z) as ``(a, b, c, d)`` with canonical sign."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def make(cls, a: int, b: int, c: int, d: int) -> "Moebius":
        if a * d - b * c != 1:
            raise ValueError(f"determinant of ({a} {b}; {c} {d}) is not 1")
        first = a or b or c
        if first < 0:
            a, b, c, d = -a, -b, -c, -d
        return cls(a, b, c, d)

    @classmethod
    def from_rows(cls, rows) -> "Moebius":
        (a, b), (c, d) = rows
        return cls.make(int(a), int(b), int(c), int(d))

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other: "Moebius") -> "Moebius":
        a, b, c, d = self
        e, f, g, h = other
        return Moebius.make(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Moebius":
        a, b, c, d = self
        return Moebius.make(d, -b, -c, a)

    def __call__(self, v: FareyVertex) -> FareyVertex:
        return apply_moebius(self, v)

    def edge(self, e: Edge) -> Edge:
        return (apply_moebius(self, e[0]), apply_moebius(self, e[1]))

    def triangle(self, t):
        return tuple(apply_moebius(self, v) for v in t)

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Moebius.make(1, 0, 0, 1)
S = Moebius.make(0, -1, 1, 0)   # z -> -1/z, order 2
U = Moebius.make(1, -1, 1, 0)  # z -> (z-1)/z, order 3, rotates the base triangle
T = Moebius.make(1, 1, 0, 1)  # z -> z+1; T = U S


def translation(n: int) -> Moebius:
    return Moebius.make(1, n, 0, 1)


def apply_moebius(g: Moebius, v: FareyVertex) -> FareyVertex:
    return FareyVertex.make(g.a * v.p + g.b * v.q, g.c * v.p + g.d * v.q)


def oriented_edge_to_element(edge: Edge) -> Moebius:
    """The unique element carrying the DOE ``0/1 -> 1/0`` onto the oriented Farey ``edge``."""
    a, b = edge
    _require_neighbors(a, b)
    p, q = a
    r, s = b
    if r * q - p * s == 1:
        return Moebius.make(r, p, s, q)
    return Moebius.make(r, -p, s, -q)


def element_to_oriented_edge(g: Moebius) -> Edge:
    return g.edge(DOE)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def element_sending_infinity_to(v: FareyVertex) -> Moebius:
    """Some ``M`` in PSL(2, Z) with ``M(1/0) = v``."""
    r, s = v
    if s == 0:
        return IDENTITY
    # r*y - x*s = 1
    g, y, x = _egcd(r, -s)
    assert g in (1, -1)
    return Moebius.make(r, x * g, s, y * g)


@lru_cache(maxsize=1 << 18)
def geodesic_normal_form(a: FareyVertex, b: FareyVertex) -> tuple[Fraction, Moebius]:
    """Write the oriented geodesic ``a -> b`` as ``g . (x0 -> 1/0)`` with ``0 <= x0 < 1``.

    ``x0`` is a complete invariant of the PSL(2, Z)-orbit and ``g`` is unique,
    since no non-trivial element fixes two rational points.
    """
    if a == b:
        raise ValueError("degenerate geodesic")
    m = element_sending_infinity_to(b)
    p, q = a
    num = m.d * p - m.b * q
    den = -m.c * p + m.a * q
    y = Fraction(num, den)
    n = y.numerator // y.denominator
    return y - n, m @ translation(n)


def word(g: Moebius) -> list[tuple[str, int]]:
    """Decompose ``g`` as a product of powers of ``T`` and ``S``, read left to right.

    Returns ``[("T", n1), ("S", 1), ("T", n2), ...]``; continued-fraction steps.
    """
    a, b, c, d = g
    letters: list[tuple[str, int]] = []
    while c != 0:
        n = a // c
        if n:
            letters.append(("T", n))
        a, b = a - n * c, b - n * d
        letters.append(("S", 1))
        a, b, c, d = c, d, -a, -b
    n = a * b
    if n:
        letters.append(("T", n))
    return letters


def evaluate_word(letters) -> Moebius:
    g = IDENTITY
    for name, n in letters:
        if name == "S":
            g = g @ S
        elif name == "U":
            for _ in range(n % 3):
                g = g @ U
        else:
            g = g @ translation(n)
    return g


# ---------------------------------------------------------------------------
# enumeration


def farey_triangles(depth: int) -> Iterator[tuple[tuple, int]]:
    """Farey triangles (ccw vertex triples) within dual-tree distance ``depth`` of the base triangle."""
    root = BASE_TRIANGLE
    yield root, 0
    frontier = [(root[(i + 1) % 3], root[i]) for i in range(3)]
    # each entry: an oriented edge whose left... neighbour lies across it
    level = [(e, 1) for e in frontier]
    while level:
        nxt = []
        for (u, v), dist in level:
            if dist > depth:
                continue
            m, c = triangles_adjacent((u, v))
            # The unexplored triangle has ccw side u -> v.
            w = m if ccw(u, v, m) else c
            yield (u, v, w), dist
            nxt.append(((w, v), dist + 1))
            nxt.append(((u, w), dist + 1))
        level = nxt


def farey_edges(depth: int) -> set[frozenset]:
    edges = set()
    for tri, _ in farey_triangles(depth):
        for i in range(3):
            edges.add(frozenset((tri[i], tri[(i + 1) % 3])))
    return edges
