"""Finite-index subgroups of PSL(2, Z) as permutation actions on right cosets.

A subgroup ``K`` of index ``n`` is stored as the right action of the two
generators ``S`` (order 2) and ``U`` (order 3) on the cosets ``K g``,
labelled ``0 .. n-1`` with ``0 = K``.  Labels are always put in a canonical
breadth-first order so that equal subgroups have equal permutations.

Oriented Farey edges correspond to group elements (``g <-> g . DOE``), so
the ``K``-orbits of oriented edges are the cosets; the ``K``-orbits of
triangles are the ``U``-cycles on cosets and the cusps are ``T``-cycles.
"""

from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from math import factorial
from typing import NamedTuple

from .farey import (
    BASE_TRIANGLE, DOE, IDENTITY, INFINITY, S, U, Edge, FareyVertex, Moebius,
    element_sending_infinity_to, geodesic_normal_form, oriented_edge_to_element, word,
)


class SubgroupError(ValueError):
    pass


class Order2Violation(SubgroupError):
    pass


class Order3Violation(SubgroupError):
    pass


class NotTransitive(SubgroupError):
    pass


def _canonical(perm_s, perm_u, base=0):
    """Relabel a transitive action breadth-first from ``base``."""
    n = len(perm_s)
    label = {base: 0}
    order = [base]
    for i in order:
        for j in (perm_s[i], perm_u[i]):
            if j not in label:
                label[j] = len(order)
                order.append(j)
    if len(order) != n:
        raise NotTransitive(f"action on {n} points is not transitive")
    s = tuple(label[perm_s[i]] for i in order)
    u = tuple(label[perm_u[i]] for i in order)
    return s, u


class Subgroup:
    """A finite-index subgroup of PSL(2, Z), immutable."""

    __slots__ = ("perm_s", "perm_u", "perm_t", "_cycle", "_cache", "_reps", "name")

    def __init__(self, perm_s, perm_u, name: str | None = None):
        self.perm_s, self.perm_u = _canonical(tuple(perm_s), tuple(perm_u))
        s, u = self.perm_s, self.perm_u
        # i.T = (i.U).S since T = U S
        self.perm_t = tuple(s[u[i]] for i in range(len(s)))
        self._cycle = self._cycles(self.perm_t)
        self._cache: dict = {}
        self._reps = None
        self.name = name

    @staticmethod
    def _cycles(perm):
        where = {}
        cycles = []
        for i in range(len(perm)):
            if i in where:
                continue
            cyc = [i]
            j = perm[i]
            while j != i:
                cyc.append(j)
                j = perm[j]
            for k, x in enumerate(cyc):
                where[x] = (len(cycles), k)
            cycles.append(cyc)
        return where, cycles

    # -- basics -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.perm_s)

    index = degree

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.perm_s == other.perm_s
                and self.perm_u == other.perm_u)

    def __hash__(self):
        return hash((self.perm_s, self.perm_u))

    def __repr__(self):
        label = self.name or "Subgroup"
        return f"<{label} index={self.degree}>"

    @property
    def is_torsion_free(self) -> bool:
        n = self.degree
        return all(self.perm_s[i] != i for i in range(n)) and all(
            self.perm_u[i] != i for i in range(n))

    # -- action -----------------------------------------------------------

    def act_t(self, i: int, n: int) -> int:
        where, cycles = self._cycle
        c, k = where[i]
        cyc = cycles[c]
        return cyc[(k + n) % len(cyc)]

    def act(self, i: int, g: Moebius) -> int:
        """Right action of ``g`` on coset ``i``."""
        for name, n in word(g):
            if name == "S":
                i = self.perm_s[i]
            else:
                i = self.act_t(i, n)
        return i

    def coset_of(self, g: Moebius) -> int:
        """Label of the coset ``K g``."""
        c = self._cache.get(g)
        if c is None:
            c = self.act(0, g)
            if len(self._cache) > 200_000:
                self._cache.clear()
            self._cache[g] = c
        return c

    def contains(self, g: Moebius) -> bool:
        return self.coset_of(g) == 0

    __contains__ = contains

    def coset_representatives(self) -> list[Moebius]:
        """``reps[i]`` is an element with ``K reps[i]`` = coset ``i``."""
        if self._reps is None:
            reps = [None] * self.degree
            reps[0] = IDENTITY
            queue = deque([0])
            while queue:
                i = queue.popleft()
                for perm, gen in ((self.perm_s, S), (self.perm_u, U)):
                    j = perm[i]
                    if reps[j] is None:
                        reps[j] = reps[i] @ gen
                        queue.append(j)
            self._reps = reps
        return list(self._reps)

    def generators(self) -> list[Moebius]:
        """Schreier generators of ``K``."""
        reps = self.coset_representatives()
        gens = set()
        for i in range(self.degree):
            for perm, gen in ((self.perm_s, S), (self.perm_u, U)):
                g = reps[i] @ gen @ reps[perm[i]].inverse()
                if g != IDENTITY:
                    gens.add(g)
        return sorted(gens)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators())

    def conjugate(self, g: Moebius) -> "Subgroup":
        """The subgroup ``g K g^-1``: the stabilizer of coset ``0 . g^-1``."""
        c = self.coset_of(g.inverse())
        s, u = _canonical(self.perm_s, self.perm_u, base=c)
        return Subgroup(s, u)

    def is_normal(self) -> bool:
        return all(self.conjugate(g) == self for g in (S, U))

    # -- cusps ------------------------------------------------------------

    def cusp_of(self, v: FareyVertex) -> int:
        """Canonical id of the ``K``-orbit of the cusp ``v``: the least coset of its T-cycle."""
        i = self.coset_of(element_sending_infinity_to(v))
        where, cycles = self._cycle
        return min(cycles[where[i][0]])

    def cusp_count(self) -> int:
        return len(self._cycle[1])

    def cusp_ids(self) -> list[int]:
        return sorted(min(c) for c in self._cycle[1])


# ---------------------------------------------------------------------------
# constructors


def from_permutations(perm_s, perm_u, name=None) -> Subgroup:
    perm_s, perm_u = list(perm_s), list(perm_u)
    n = len(perm_s)
    if n == 0 or len(perm_u) != n:
        raise SubgroupError("permutations must be non-empty and of equal degree")
    for p in (perm_s, perm_u):
        if sorted(p) != list(range(n)):
            raise SubgroupError(f"{p} is not a permutation of 0..{n - 1}")
    if any(perm_s[perm_s[i]] != i for i in range(n)):
        raise Order2Violation("perm_s does not square to the identity")
    if any(perm_u[perm_u[perm_u[i]]] != i for i in range(n)):
        raise Order3Violation("perm_u does not cube to the identity")
    return Subgroup(perm_s, perm_u, name=name)


def full_group() -> Subgroup:
    return Subgroup((0,), (0,), name="PSL2Z")


def commutator_subgroup() -> Subgroup:
    """The once-punctured torus group: kernel of PSL(2, Z) -> Z/2 x Z/3."""
    s = [(i + 3) % 6 for i in range(6)]
    u = [(i + 2) % 6 for i in range(6)]
    return Subgroup(s, u, name="G")


def _mod_canonical(m, n):
    a, b, c, d = (x % n for x in m)
    neg = tuple((-x) % n for x in (a, b, c, d))
    return min((a, b, c, d), neg)


def principal_congruence(n: int) -> Subgroup:
    """Gamma(n), via its coset action = right multiplication on PSL(2, Z/n)."""
    if n < 1:
        raise ValueError("level must be positive")
    if n == 1:
        return full_group()
    start = _mod_canonical(IDENTITY, n)
    label = {start: 0}
    order = [start]
    perm_s, perm_u = {}, {}

    def mul(m, g):
        a, b, c, d = m
        return _mod_canonical((a * g.a + b * g.c, a * g.b + b * g.d,
                               c * g.a + d * g.c, c * g.b + d * g.d), n)

    for m in order:
        for gen, table in ((S, perm_s), (U, perm_u)):
            x = mul(m, gen)
            if x not in label:
                label[x] = len(order)
                order.append(x)
            table[label[m]] = label[x]
    size = len(order)
    return Subgroup([perm_s[i] for i in range(size)],
                    [perm_u[i] for i in range(size)], name=f"Gamma({n})")


def intersect(k1: Subgroup, k2: Subgroup) -> Subgroup:
    """Diagonal action on pairs of cosets, restricted to the orbit of ``(0, 0)``."""
    if k1 == k2:
        return k1
    label = {(0, 0): 0}
    order = [(0, 0)]
    ps, pu = {}, {}
    for x in order:
        i, j = x
        for table, a, b in ((ps, k1.perm_s, k2.perm_s), (pu, k1.perm_u, k2.perm_u)):
            y = (a[i], b[j])
            if y not in label:
                label[y] = len(order)
                order.append(y)
            table[label[x]] = label[y]
    n = len(order)
    return Subgroup([ps[i] for i in range(n)], [pu[i] for i in range(n)])


def level_subgroup(n: int, base: Subgroup | None = None) -> Subgroup:
    """``G ∩ Gamma(n!)``: a nested co-final family standing in for characteristic subgroups."""
    base = base or commutator_subgroup()
    return intersect(base, principal_congruence(factorial(n)))


def random_torsion_free(index: int, rng: random.Random) -> Subgroup:
    """A random torsion-free subgroup of the given index (a multiple of 6)."""
    if index % 6:
        raise ValueError("torsion-free subgroups have index divisible by 6")
    while True:
        pts = list(range(index))
        rng.shuffle(pts)
        s = [0] * index
        for a, b in zip(pts[0::2], pts[1::2]):
            s[a], s[b] = b, a
        rng.shuffle(pts)
        u = [0] * index
        for a, b, c in zip(pts[0::3], pts[1::3], pts[2::3]):
            u[a], u[b], u[c] = b, c, a
        try:
            return Subgroup(s, u)
        except NotTransitive:
            continue


# ---------------------------------------------------------------------------
# orbits of Farey edges and triangles


class EdgeOrbit(NamedTuple):
    """A ``K``-orbit of unoriented edges.

    ``key`` is ``(x0, coset)`` for the orientation with the smaller key (see
    ``geodesic_key``); Farey edges have ``x0 = 0``.  ``id`` ranks the key
    among all orbits of the owning tesselation.
    """

    owner: "Subgroup"
    representative: tuple
    id: int
    key: tuple

    def __repr__(self):
        a, b = self.representative
        return f"EdgeOrbit(id={self.id}, rep={a}->{b})"


def geodesic_key(k: Subgroup, a: FareyVertex, b: FareyVertex) -> tuple:
    """Complete invariant of the oriented geodesic ``a -> b`` under ``K``."""
    x0, g = geodesic_normal_form(a, b)
    return (x0, k.coset_of(g))


def unoriented_key(k: Subgroup, a: FareyVertex, b: FareyVertex) -> tuple:
    return min(geodesic_key(k, a, b), geodesic_key(k, b, a))


def key_representative(k: Subgroup, key: tuple) -> Edge:
    """The geodesic ``rep . (x0 -> 1/0)`` for the coset representative ``rep``."""
    x0, c = key
    g = k.coset_representatives()[c]
    return (g(FareyVertex.make(x0.numerator, x0.denominator)), g(INFINITY))


def _orbit_mins(k: Subgroup) -> list[int]:
    return sorted({min(i, k.perm_s[i]) for i in range(k.degree)})


def edge_orbits(k: Subgroup) -> list[EdgeOrbit]:
    """Orbits of Farey edges, ordered by id."""
    reps = k.coset_representatives()
    return [EdgeOrbit(k, reps[c].edge(DOE), n, (Fraction(0), c))
            for n, c in enumerate(_orbit_mins(k))]


def edge_orbit(k: Subgroup, e: Edge) -> EdgeOrbit:
    """Orbit of the Farey edge ``e``; canonical rep is the least coset of either orientation."""
    i = k.coset_of(oriented_edge_to_element(e))
    c = min(i, k.perm_s[i])
    mins = _orbit_mins(k)
    reps = k.coset_representatives()
    return EdgeOrbit(k, reps[c].edge(DOE), mins.index(c), (Fraction(0), c))


def triangle_orbit_count(k: Subgroup) -> int:
    seen = set()
    for i in range(k.degree):
        seen.add(min(i, k.perm_u[i], k.perm_u[k.perm_u[i]]))
    return len(seen)


def triangle_transversal(k: Subgroup) -> list[tuple]:
    """One Farey triangle per ``K``-orbit, grown breadth-first from the base triangle.

    Triangle ``g . BASE_TRIANGLE`` has oriented sides ``g . DOE^-1``,
    ``g U . DOE^-1``... and its orbit is the ``U``-cycle of the coset of ``g``.
    Returned triangles are ccw vertex triples.
    """
    u = k.perm_u

    def tri_id(i):
        return min(i, u[i], u[u[i]])

    start = IDENTITY
    found = [(start, BASE_TRIANGLE)]
    seen = {tri_id(k.coset_of(start))}
    queue = deque(found)
    while queue:
        g, tri = queue.popleft()
        # sides of g.BASE are g.(inf->0), g.(0->1), g.(1->inf); crossing side
        # h.(inf->0) for h in {g, gU^2, gU} leads to triangle h S . BASE
        for h in (g, g @ U @ U, g @ U):
            nb = h @ S
            t = tri_id(k.coset_of(nb))
            if t not in seen:
                seen.add(t)
                item = (nb, nb.triangle(BASE_TRIANGLE))
                found.append(item)
                queue.append(item)
    return [tri for _, tri in found]
