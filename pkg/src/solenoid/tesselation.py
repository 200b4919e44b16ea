"""Tesselations of the disk invariant under a finite-index subgroup.

A tesselation is stored through one counter-clockwise triangle per orbit of
its invariance group ``K``, together with an oriented distinguished edge.
Every edge, oriented or not, is identified through a ``K``-invariant key
(see ``subgroup.geodesic_key``), so that the whole infinite tesselation is
available on demand: ``third(a, b)`` returns the vertex completing the
triangle on the left of ``a -> b``.

Representatives are kept in a canonical breadth-first order starting at
the triangle containing the reversed distinguished edge, so two values
with the same group, edge set and distinguished edge compare equal.
"""

from __future__ import annotations

from collections import deque

from .farey import DOE, FareyVertex, Moebius, det, geodesic_normal_form
from .subgroup import (
    EdgeOrbit, Subgroup, full_group, geodesic_key, intersect, key_representative,
    triangle_transversal,
)


class OrbitSelfAdjacent(ValueError):
    """An orbit meets some triangle twice, so its edges cannot be flipped simultaneously."""


class NotInvariant(ValueError):
    pass


class NotAnEdge(KeyError):
    pass


def _tri_key(k: Subgroup, tri) -> tuple:
    x, y, z = tri
    return min(geodesic_key(k, x, y), geodesic_key(k, y, z), geodesic_key(k, z, x))


class TlcTesselation:
    __slots__ = ("group", "triangles", "doe", "flips", "_index", "_edge_keys")

    def __init__(self, group: Subgroup, triangles, doe, flips=(), _canonical=False):
        self.group = group
        self.doe = tuple(doe)
        self.flips = tuple(flips)
        self.triangles = tuple(tuple(t) for t in triangles)
        self._index = None
        self._edge_keys = None
        if not _canonical:
            self.triangles = tuple(_bfs(self, group))
            self._index = None

    # -- lookup -----------------------------------------------------------

    def key(self, a, b) -> tuple:
        return geodesic_key(self.group, a, b)

    def ukey(self, a, b) -> tuple:
        return min(self.key(a, b), self.key(b, a))

    @property
    def index(self) -> dict:
        if self._index is None:
            idx = {}
            for ti, tri in enumerate(self.triangles):
                for si in range(3):
                    idx[self.key(tri[si], tri[(si + 1) % 3])] = (ti, si)
            self._index = idx
        return self._index

    def has_edge(self, a, b) -> bool:
        return a != b and self.key(a, b) in self.index

    def third(self, a: FareyVertex, b: FareyVertex) -> FareyVertex:
        """Third vertex of the triangle having ``a -> b`` as a counter-clockwise side."""
        x0, g = geodesic_normal_form(a, b)
        try:
            ti, si = self.index[(x0, self.group.coset_of(g))]
        except KeyError:
            raise NotAnEdge(f"{a}->{b} is not an edge") from None
        tri = self.triangles[ti]
        _, h = geodesic_normal_form(tri[si], tri[(si + 1) % 3])
        gamma = g @ h.inverse()
        return gamma(tri[(si + 2) % 3])

    def has_triangle(self, tri) -> bool:
        x, y, z = tri
        return self.has_edge(x, y) and self.third(x, y) == z

    def quadrilateral(self, a, b):
        """Vertices ``(a, q, b, p)`` in counter-clockwise order around the edge ``a - b``."""
        p = self.third(a, b)
        q = self.third(b, a)
        return a, q, b, p

    @property
    def base_triangle(self):
        a, b = self.doe
        return (b, a, self.third(b, a))

    # -- orbits -----------------------------------------------------------

    def edge_keys(self) -> list:
        """Sorted unoriented orbit keys; an orbit's id is its position here."""
        if self._edge_keys is None:
            keys = set()
            for tri in self.triangles:
                for i in range(3):
                    keys.add(self.ukey(tri[i], tri[(i + 1) % 3]))
            self._edge_keys = sorted(keys)
        return list(self._edge_keys)

    def representative(self, key):
        return key_representative(self.group, key)

    def orbits(self) -> list[EdgeOrbit]:
        return [EdgeOrbit(self.group, self.representative(k), i, k)
                for i, k in enumerate(self.edge_keys())]

    def orbit_of(self, edge) -> EdgeOrbit:
        a, b = edge
        if not self.has_edge(a, b):
            raise NotAnEdge(f"{a}->{b} is not an edge")
        k = self.ukey(a, b)
        return EdgeOrbit(self.group, self.representative(k), self.edge_keys().index(k), k)

    def edge_of(self, orbit):
        """Representative edge for an ``EdgeOrbit``, a key, an id or an edge."""
        if isinstance(orbit, EdgeOrbit):
            return orbit.representative
        if isinstance(orbit, int):
            return self.representative(self.edge_keys()[orbit])
        first = orbit[0]
        if isinstance(first, FareyVertex):
            return tuple(orbit)
        return self.representative(tuple(orbit))

    def side_counts(self, key) -> list[int]:
        """How many sides of each representative triangle lie in the orbit ``key``."""
        out = []
        for tri in self.triangles:
            out.append(sum(self.ukey(tri[i], tri[(i + 1) % 3]) == key for i in range(3)))
        return out

    def is_self_adjacent(self, edge) -> bool:
        a, b = edge
        key = self.ukey(a, b)
        if max(self.side_counts(key)) >= 2:
            return True
        p, q = self.third(a, b), self.third(b, a)
        return _tri_key(self.group, (a, b, p)) == _tri_key(self.group, (b, a, q))

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        return tesselations_equal(self, other)

    def __hash__(self):
        return hash(self.doe)

    def __repr__(self):
        a, b = self.doe
        return (f"<TlcTesselation index={self.group.degree} "
                f"triangles={len(self.triangles)} doe={a}->{b}>")

    def edges_to_depth(self, depth: int) -> list[tuple]:
        """Unoriented edges of triangles within dual distance ``depth`` of the base triangle."""
        out = {}
        for tri, _ in self.triangles_to_depth(depth):
            for i in range(3):
                a, b = tri[i], tri[(i + 1) % 3]
                out.setdefault(frozenset((a, b)), (a, b))
        return list(out.values())

    def triangles_to_depth(self, depth: int):
        root = self.base_triangle
        yield root, 0
        level = [((root[(i + 1) % 3], root[i]), 1) for i in range(3)]
        while level:
            nxt = []
            for (u, v), dist in level:
                if dist > depth:
                    continue
                w = self.third(u, v)
                yield (u, v, w), dist
                nxt.append(((w, v), dist + 1))
                nxt.append(((u, w), dist + 1))
            level = nxt


def _bfs(t: TlcTesselation, k: Subgroup) -> list[tuple]:
    """One triangle per ``k``-orbit, breadth-first from the base triangle."""
    root = t.base_triangle
    out = [root]
    seen = {_tri_key(k, root)}
    queue = deque(out)
    while queue:
        tri = queue.popleft()
        for i in range(3):
            x, y = tri[i], tri[(i + 1) % 3]
            nb = (y, x, t.third(y, x))
            key = _tri_key(k, nb)
            if key not in seen:
                seen.add(key)
                out.append(nb)
                queue.append(nb)
    return out


def tau_star(k: Subgroup | None = None, doe=DOE) -> TlcTesselation:
    """The Farey tesselation viewed as a ``k``-invariant tesselation."""
    k = k or full_group()
    t = TlcTesselation(k, triangle_transversal(k), DOE, _canonical=True)
    if tuple(doe) != DOE:
        t = remark(t, doe)
    return TlcTesselation(k, t.triangles, t.doe)


def remark(t: TlcTesselation, doe) -> TlcTesselation:
    """Same edges, new distinguished oriented edge."""
    a, b = doe
    if not t.has_edge(a, b):
        raise NotAnEdge(f"{a}->{b} is not an edge")
    out = TlcTesselation(t.group, t.triangles, (a, b), t.flips, _canonical=True)
    return TlcTesselation(t.group, _bfs(out, t.group), (a, b), t.flips, _canonical=True)


def regroup(t: TlcTesselation, m: Subgroup) -> TlcTesselation:
    """The same tesselation presented with invariance group ``m``.

    Finer groups are always allowed; coarser ones require invariance, which
    is checked generator by generator.
    """
    if m == t.group:
        return t
    k = t.group
    if not is_farey(t):
        for g in m.generators():
            if not k.contains(g):
                _check_invariant(t, g)
    # third() uses the old group's index while the new transversal grows
    tris = _bfs(t, m)
    return TlcTesselation(m, tris, t.doe, t.flips, _canonical=True)


def is_farey(t: TlcTesselation) -> bool:
    """Whether ``t`` is the Farey tesselation (invariant under every group)."""
    return all(abs(det(tri[i], tri[(i + 1) % 3])) == 1 for tri in t.triangles for i in range(3))


def _check_invariant(t: TlcTesselation, g: Moebius) -> None:
    k = t.group
    j = intersect(k, k.conjugate(g))
    ginv = g.inverse()
    for tri in _bfs(t, j):
        if not t.has_triangle(ginv.triangle(tri)):
            raise NotInvariant(f"tesselation is not invariant under {g}")


def is_invariant(t: TlcTesselation, g: Moebius) -> bool:
    if is_farey(t):
        return True
    try:
        _check_invariant(t, g)
    except NotInvariant:
        return False
    return True


def refine(t: TlcTesselation, m: Subgroup) -> TlcTesselation:
    return regroup(t, m)


def act(g: Moebius, t: TlcTesselation) -> TlcTesselation:
    """Image of ``t`` (and its distinguished edge) under a Moebius element."""
    k = t.group.conjugate(g)
    tris = [g.triangle(tri) for tri in t.triangles]
    flips = tuple((h.conjugate(g), g.edge(e)) for h, e in t.flips)
    return TlcTesselation(k, tris, g.edge(t.doe), flips)


def flip(t: TlcTesselation, edge, k: Subgroup | None = None):
    """Equivariant diagonal exchange along every ``k``-translate of ``edge``.

    Returns ``(new tesselation, new diagonal)``.  The new diagonal is
    oriented from the right vertex to the left vertex of ``edge``, which is
    also how the distinguished edge moves when it is flipped.  The result is
    presented with group ``k`` (default: the group of ``t``).
    """
    if k is not None and k != t.group:
        t = regroup(t, k)
    a, b = edge
    if not t.has_edge(a, b):
        raise NotAnEdge(f"{a}->{b} is not an edge")
    if t.is_self_adjacent((a, b)):
        raise OrbitSelfAdjacent(f"orbit of {a}-{b} is self-adjacent")
    grp = t.group
    p, q = t.third(a, b), t.third(b, a)
    gone = {_tri_key(grp, (a, b, p)), _tri_key(grp, (b, a, q))}
    tris = [tri for tri in t.triangles if _tri_key(grp, tri) not in gone]
    tris += [(p, a, q), (q, b, p)]
    doe = t.doe
    if t.ukey(*doe) == t.ukey(a, b):
        x, y = doe
        doe = (t.third(y, x), t.third(x, y))
    raw = TlcTesselation(grp, tris, doe, t.flips + ((grp, (a, b)),), _canonical=True)
    return TlcTesselation(grp, _bfs(raw, grp), doe, raw.flips, _canonical=True), (q, p)


def unflip_doe(t_before: TlcTesselation, edge, doe_after):
    """The distinguished edge before a flip of ``edge`` that is carried to ``doe_after``."""
    a, b = edge
    p, q = t_before.third(a, b), t_before.third(b, a)
    grp = t_before.group
    x, y = doe_after
    key = geodesic_key(grp, x, y)
    # after the flip d' = (right(d) -> left(d)), so d = (left(d') -> right(d'));
    # left of q -> p is a and right is b
    for (u, v), (l, r) in (((q, p), (a, b)), ((p, q), (b, a))):
        if geodesic_key(grp, u, v) == key:
            _, g1 = geodesic_normal_form(x, y)
            _, g0 = geodesic_normal_form(u, v)
            gamma = g1 @ g0.inverse()
            return (gamma(l), gamma(r))
    return tuple(doe_after)


def tesselations_equal(t1: TlcTesselation, t2: TlcTesselation, with_doe: bool = True) -> bool:
    if not isinstance(t2, TlcTesselation) or not isinstance(t1, TlcTesselation):
        return NotImplemented
    if with_doe and t1.doe != t2.doe:
        return False
    j = intersect(t1.group, t2.group)
    r1, r2 = regroup(t1, j), regroup(t2, j)
    if with_doe:
        return r1.triangles == r2.triangles
    return ({_tri_key(j, tri) for tri in r1.triangles}
            == {_tri_key(j, tri) for tri in r2.triangles})


def split_orbit(t: TlcTesselation, fine: Subgroup, edge) -> list[tuple]:
    """Representatives of the ``fine``-orbits making up the orbit of ``edge`` under ``t.group``."""
    a, b = edge
    key = t.ukey(a, b)
    r = regroup(t, fine)
    out = []
    for o in r.orbits():
        x, y = o.representative
        if t.ukey(x, y) == key:
            out.append(o.representative)
    return out


def replay(flips, k: Subgroup | None = None, base: TlcTesselation | None = None) -> TlcTesselation:
    """Apply a sequence of flips; items are edges or ``(group, edge)`` pairs."""
    t = base if base is not None else tau_star(k)
    for item in flips:
        if len(item) == 2 and isinstance(item[0], Subgroup):
            grp, e = item
        else:
            grp, e = None, item
        t, _ = flip(t, e, grp)
    return t


def history_over(t: TlcTesselation, j: Subgroup) -> list[tuple]:
    """Rewrite the flip history of ``t`` as single-edge flips over one group ``j``.

    ``j`` must lie in every group of the history.  Each recorded flip becomes
    the flips of the ``j``-orbits it contains; the result replays from the
    Farey tesselation to ``t``.
    """
    cur = tau_star(j)
    out = []
    for grp, e in t.flips:
        for piece in _pieces(cur, grp, e):
            cur, _ = flip(cur, piece, j)
            out.append(piece)
    return out


def _pieces(cur: TlcTesselation, grp: Subgroup, e) -> list:
    a, b = e
    target = min(geodesic_key(grp, a, b), geodesic_key(grp, b, a))
    out = []
    for o in cur.orbits():
        x, y = o.representative
        if min(geodesic_key(grp, x, y), geodesic_key(grp, y, x)) == target:
            out.append(o.representative)
    return out
