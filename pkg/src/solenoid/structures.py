"""Decorated tesselations: lambda lengths on edge orbits and what they determine.

A ``DecoratedStructure`` pairs a ``TlcTesselation`` with one positive
rational per edge orbit.  From it we get light-cone points over every
vertex (the characteristic points), the simplicial coordinate of every
edge, the Delaunay paving by flipping concave edges, and cross-ratios.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import lightcone as lc
from .subgroup import EdgeOrbit, Subgroup, intersect, principal_congruence
from .tesselation import (
    NotInvariant, TlcTesselation, _tri_key, flip, regroup, replay,
    tesselations_equal,
)


class MissingOrbit(ValueError):
    pass


class NonPositiveValue(ValueError):
    pass


class NonTermination(RuntimeError):
    pass


class IncomparableTesselations(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DecoratedStructure:
    tess: TlcTesselation
    lam: Mapping  # unoriented orbit key -> positive Fraction

    @property
    def group(self) -> Subgroup:
        return self.tess.group

    def value(self, a, b) -> Fraction:
        return self.lam[self.tess.ukey(a, b)]

    def __getitem__(self, orbit) -> Fraction:
        if isinstance(orbit, EdgeOrbit):
            return self.lam[orbit.key]
        return self.value(*self.tess.edge_of(orbit))

    def items(self):
        """``(EdgeOrbit, value)`` pairs in id order."""
        return [(o, self.lam[o.key]) for o in self.tess.orbits()]

    def __eq__(self, other):
        if not isinstance(other, DecoratedStructure):
            return NotImplemented
        if not tesselations_equal(self.tess, other.tess):
            return False
        j = intersect(self.group, other.group)
        a, b = regroup_structure(self, j), regroup_structure(other, j)
        return dict(a.lam) == dict(b.lam)

    __hash__ = None

    def __repr__(self):
        vals = ", ".join(str(v) for _, v in self.items())
        return f"<DecoratedStructure index={self.group.degree} lambda=[{vals}]>"


def _check_values(t: TlcTesselation, lam: dict) -> None:
    keys = t.edge_keys()
    missing = [k for k in keys if k not in lam]
    if missing:
        raise MissingOrbit(f"no value for orbit of {t.representative(missing[0])}")
    for k in keys:
        if not lam[k] > 0:
            raise NonPositiveValue(f"value {lam[k]} is not positive")


def from_tesselation(t: TlcTesselation, values) -> DecoratedStructure:
    """Structure on ``t``; ``values`` maps orbits, edges, keys or ids to numbers, or is a constant."""
    if not isinstance(values, (Mapping, list, tuple)):
        lam = {k: Fraction(values) for k in t.edge_keys()}
    else:
        pairs = values.items() if isinstance(values, Mapping) else values
        lam = {}
        for orbit, val in pairs:
            a, b = t.edge_of(orbit)
            lam[t.ukey(a, b)] = Fraction(val)
    extra = set(lam) - set(t.edge_keys())
    if extra:
        raise MissingOrbit("value given for an edge outside the tesselation")
    _check_values(t, lam)
    return DecoratedStructure(t, lam)


def new_structure(k: Subgroup, flips=(), values=1) -> DecoratedStructure:
    """Structure on the tesselation reached from the Farey tesselation by ``flips``."""
    return from_tesselation(replay(flips, k), values)


def unity(t: TlcTesselation) -> DecoratedStructure:
    return from_tesselation(t, 1)


def regroup_structure(s: DecoratedStructure, m: Subgroup) -> DecoratedStructure:
    """The same data presented over group ``m`` (finer, or coarser if invariant)."""
    if m == s.group:
        return s
    t = regroup(s.tess, m)
    lam = {}
    for o in t.orbits():
        lam[o.key] = s.value(*o.representative)
    if not m.is_subgroup_of(s.group):
        # every old orbit must carry the value of the new orbit containing it
        for o in s.tess.orbits():
            if lam[t.ukey(*o.representative)] != s.lam[o.key]:
                raise NotInvariant("lambda lengths are not invariant under the coarser group")
    return DecoratedStructure(t, lam)


def pinch_bounds(s: DecoratedStructure) -> tuple[Fraction, Fraction]:
    vals = list(s.lam.values())
    return min(vals), max(vals)


def pinch_constant(s: DecoratedStructure) -> Fraction:
    """A constant ``M`` with ``1/M < lambda < M`` on every edge."""
    lo, hi = pinch_bounds(s)
    return max(hi, 1 / lo) + 1


# ---------------------------------------------------------------------------
# quadrilaterals


def quadrilateral_lambdas(s: DecoratedStructure, edge):
    """Lambda lengths ``(aq, qb, bp, pa, ab)`` around the edge ``a - b``.

    ``p`` is the left vertex of ``a -> b`` and ``q`` the right one, so the
    four sides are listed in counter-clockwise order.
    """
    a, b = edge
    _, q, _, p = s.tess.quadrilateral(a, b)
    v = s.value
    return v(a, q), v(q, b), v(b, p), v(p, a), v(a, b)


def simplicial_coordinate_at(s: DecoratedStructure, edge) -> Fraction:
    aq, qb, bp, pa, ab = quadrilateral_lambdas(s, edge)
    return lc.simplicial_coordinate(pa, bp, ab, aq, qb)


def simplicial_map(s: DecoratedStructure) -> dict:
    """Simplicial coordinate of each edge orbit, keyed by orbit key."""
    return {o.key: simplicial_coordinate_at(s, o.representative) for o in s.tess.orbits()}


def cross_ratio_at(s: DecoratedStructure, edge) -> Fraction:
    aq, qb, bp, pa, _ = quadrilateral_lambdas(s, edge)
    return (aq * bp) / (qb * pa)


def cross_ratio_function(s: DecoratedStructure) -> dict:
    return {o.key: cross_ratio_at(s, o.representative) for o in s.tess.orbits()}


def flip_structure(s: DecoratedStructure, edge, k: Subgroup | None = None):
    """Equivariant flip with the Ptolemy update; returns ``(structure, new diagonal)``."""
    if k is not None and k != s.group:
        s = regroup_structure(s, k)
    aq, qb, bp, pa, ab = quadrilateral_lambdas(s, edge)
    t2, new = flip(s.tess, edge)
    lam = {key: s.lam[key] for key in t2.edge_keys() if key in s.lam}
    lam[t2.ukey(*new)] = lc.ptolemy_flip(aq, qb, bp, pa, ab)
    return DecoratedStructure(t2, lam), new


def scale_decoration(s: DecoratedStructure, factors) -> DecoratedStructure:
    """Rescale horocycles cusp by cusp: ``lambda'^2 = lambda^2 f_p f_q``.

    ``factors`` maps cusp ids (``Subgroup.cusp_of``) to positive rationals,
    or is a callable on cusp ids.  The products must be rational squares.
    """
    k = s.group
    get = factors if callable(factors) else factors.__getitem__
    lam = {}
    for o in s.tess.orbits():
        a, b = o.representative
        fa, fb = Fraction(get(k.cusp_of(a))), Fraction(get(k.cusp_of(b)))
        if fa <= 0 or fb <= 0:
            raise NonPositiveValue("cusp factors must be positive")
        lam[o.key] = lc.exact_sqrt(s.lam[o.key] ** 2 * fa * fb)
    return DecoratedStructure(s.tess, lam)


# ---------------------------------------------------------------------------
# light-cone realization


def characteristic_points(s: DecoratedStructure, depth: int, exact: bool = False, seed=None):
    """Light-cone points over the vertices within dual distance ``depth``.

    The base triangle ``(b, a, r)`` of the distinguished edge ``a -> b`` is
    realized with ``a`` over ``-1``, ``b`` over ``+1`` and ``r`` over ``-i``;
    neighbours follow from ``third_point``.  Exact mode returns points in the
    scaled frame of ``lightcone``.  Float mode computes exactly and converts
    at the end, since deep float recursion loses precision; a float seed is
    then reached by one linear map.

    ``seed = (triangle, points)`` starts the growth from another
    counter-clockwise triangle whose points are given in the output frame.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    seed_points = list(seed[1]) if seed is not None else None
    if not exact:
        # grow exactly from a canonical frame, then move it onto the seed
        if seed is not None:
            root = tuple(seed[0])
            b, a, r = root
            pa, pb, pr = lc.realize_triangle(s.value(a, b), s.value(a, r), s.value(b, r), exact=True)
            seed = (root, [pb, pa, pr])
        pts = characteristic_points(s, depth, exact=True, seed=seed)
        k = 1 / math.sqrt(2)
        out = {v: lc.LightconePoint(*(float(c) * k for c in p)) for v, p in pts.items()}
        if seed is not None:
            target = dict(zip(root, seed_points))
            m = lc.lorentz_from_frames([out[v] for v in root], [target[v] for v in root])
            out = {v: lc.LightconePoint(*lc.apply_linear(m, p)) for v, p in out.items()}
        return out
    t = s.tess
    frame = lc.SCALED if exact else 1

    def lam(a, b):
        v = s.value(a, b)
        return v if exact else float(v)

    if seed is None:
        b, a, r = root = t.base_triangle
        pa, pb, pr = lc.realize_triangle(lam(a, b), lam(a, r), lam(b, r), exact=exact)
        points = {a: pa, b: pb, r: pr}
    else:
        root, pts = seed
        root = tuple(root)
        points = dict(zip(root, pts))
    level = [((root[(i + 1) % 3], root[i]), 1) for i in range(3)]
    while level:
        nxt = []
        for (u, v), dist in level:
            if dist > depth:
                continue
            w = t.third(u, v)
            if w not in points:
                points[w] = lc.third_point(points[u], points[v], lam(u, w), lam(v, w),
                                           "left", frame=frame)
            nxt.append(((w, v), dist + 1))
            nxt.append(((u, w), dist + 1))
        level = nxt
    return points


# ---------------------------------------------------------------------------
# Delaunay paving


@dataclass
class Paving:
    tess: TlcTesselation
    removed: frozenset  # orbit keys with vanishing simplicial coordinate
    faces: list = field(default_factory=list)  # vertex counts; None for an infinite face
    flips: list = field(default_factory=list)  # (group, edge) in the order applied

    def removed_orbits(self) -> list[EdgeOrbit]:
        return [o for o in self.tess.orbits() if o.key in self.removed]

    def edges(self) -> list:
        """Representative edges of the surviving orbits."""
        return [o.representative for o in self.tess.orbits() if o.key not in self.removed]


def _faces(t: TlcTesselation, removed) -> list:
    k = t.group
    keys = [_tri_key(k, tri) for tri in t.triangles]
    parent = {key: key for key in keys}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    internal = {}
    for key in sorted(removed):
        a, b = t.representative(key)
        left = _tri_key(k, (a, b, t.third(a, b)))
        right = _tri_key(k, (b, a, t.third(b, a)))
        internal[key] = left
        parent[find(left)] = find(right)
    comps: dict = {}
    for key in keys:
        comps.setdefault(find(key), [0, 0])[0] += 1
    for key, tri in internal.items():
        comps[find(tri)][1] += 1
    out = []
    for n_tri, n_edge in sorted(comps.values()):
        out.append(n_tri + 2 if n_edge == n_tri - 1 else None)
    return out


def make_paving(s: DecoratedStructure, flips=()) -> Paving:
    sigma = simplicial_map(s)
    removed = frozenset(k for k, v in sigma.items() if v == 0)
    return Paving(s.tess, removed, _faces(s.tess, removed), list(flips))


def delaunay(s: DecoratedStructure, max_flips: int = 10_000, rng: random.Random | None = None):
    """Flip edges of negative simplicial coordinate until none is left.

    Deterministic mode flips the lowest-id concave orbit; with ``rng`` a
    random concave orbit is chosen.  An orbit that cannot be flipped
    equivariantly is skipped; if every concave orbit is like that, the data
    is presented over a finer congruence level and the loop continues.
    Returns ``(final structure, Paving)``.
    """
    cur = s
    log = []
    level = 1
    while True:
        sigma = simplicial_map(cur)
        neg = [k for k in cur.tess.edge_keys() if sigma[k] < 0]
        if not neg:
            break
        if rng is not None:
            rng.shuffle(neg)
        chosen = None
        for key in neg:
            edge = cur.tess.representative(key)
            if not cur.tess.is_self_adjacent(edge):
                chosen = edge
                break
        if chosen is None:
            level += 1
            if level > 8:
                raise NonTermination("no concave orbit can be flipped equivariantly")
            cur = regroup_structure(cur, intersect(cur.group, principal_congruence(level)))
            continue
        if len(log) >= max_flips:
            raise NonTermination(f"more than {max_flips} flips")
        log.append((cur.group, chosen))
        cur, _ = flip_structure(cur, chosen)
    return cur, make_paving(cur, log)


def paving_edges_in(p: Paving, t: TlcTesselation) -> bool:
    """Whether every surviving edge of the paving is an edge of ``t``."""
    j = intersect(p.tess.group, t.group)
    r = regroup(p.tess, j)
    for o in r.orbits():
        a, b = o.representative
        if p.tess.ukey(a, b) in p.removed:
            continue
        if not t.has_edge(a, b):
            return False
    return True


def pavings_equal(p1: Paving, p2: Paving) -> bool:
    """Same surviving edges, compared over the common group."""
    j = intersect(p1.tess.group, p2.tess.group)
    return _surviving_keys(p1, j) == _surviving_keys(p2, j)


def _surviving_keys(p: Paving, j: Subgroup) -> set:
    r = regroup(p.tess, j)
    out = set()
    for o in r.orbits():
        if p.tess.ukey(*o.representative) not in p.removed:
            out.add(o.key)
    return out


IN_OPEN_CELL = "InOpenCell"
IN_CLOSED_CELL = "InClosedCell"
OUTSIDE = "Outside"


def cell_membership(s: DecoratedStructure, t: TlcTesselation) -> str:
    _, paving = delaunay(s)
    if not paving_edges_in(paving, t):
        return OUTSIDE
    return IN_CLOSED_CELL if paving.removed else IN_OPEN_CELL


def structures_equal_projected(s1: DecoratedStructure, s2: DecoratedStructure) -> bool:
    """Equality of underlying undecorated structures through cross-ratios.

    Structures on a common tesselation are compared directly; otherwise both
    are first carried to their Delaunay tesselations, which must agree.
    """
    if not tesselations_equal(s1.tess, s2.tess, with_doe=False):
        s1, p1 = delaunay(s1)
        s2, p2 = delaunay(s2)
        if not tesselations_equal(s1.tess, s2.tess, with_doe=False):
            raise IncomparableTesselations("canonical tesselations differ")
    j = intersect(s1.group, s2.group)
    a = regroup_structure(s1, j)
    b = regroup_structure(s2, j)
    for o in a.tess.orbits():
        e = o.representative
        if cross_ratio_at(a, e) != cross_ratio_at(b, e):
            return False
    return True
