"""Equivariant Whitehead moves, geometric words and their normal forms.

A ``ModularWord`` is a Moebius element ``base`` followed by a chain of
equivariant flips.  It acts on the marked Farey tesselation: first ``base``
moves the distinguished edge, then each generator flips one orbit of the
current tesselation.  Two words are the same element exactly when they
send the marked Farey tesselation to the same marked tesselation, so
``equals`` compares images.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import lightcone as lc
from .farey import (
    IDENTITY, S, T, Moebius, ccw, oriented_edge_to_element, geodesic_normal_form,
)
from .structures import (
    DecoratedStructure, NonTermination, delaunay, flip_structure, from_tesselation,
)
from .subgroup import (
    Subgroup, commutator_subgroup, full_group, intersect, principal_congruence,
    random_torsion_free,
)
from .tesselation import (
    OrbitSelfAdjacent, TlcTesselation, _pieces, _tri_key, act, flip, is_invariant,
    regroup, tau_star, tesselations_equal, unflip_doe,
)


class MalformedInstance(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WhiteheadGenerator:
    """Flip of the ``group``-orbit of ``edge`` in the marked tesselation ``tess``."""

    tess: TlcTesselation
    group: Subgroup
    edge: tuple

    @property
    def orbit(self):
        return regroup(self.tess, self.group).orbit_of(self.edge)

    def apply(self):
        """``(target tesselation, new diagonal)``."""
        return flip(self.tess, self.edge, self.group)

    @property
    def target(self) -> TlcTesselation:
        return self.apply()[0]

    def inverse(self) -> "WhiteheadGenerator":
        t, new = self.apply()
        return WhiteheadGenerator(t, self.group, new)


@dataclass(frozen=True, eq=False)
class ModularWord:
    base: Moebius
    word: tuple = ()

    def __len__(self):
        return len(self.word)

    @property
    def groups(self) -> list[Subgroup]:
        return [g.group for g in self.word]

    def steps(self) -> list[tuple]:
        return [(g.group, g.edge) for g in self.word]

    def __repr__(self):
        return f"<ModularWord base={self.base} length={len(self.word)}>"


def whitehead_move(t: TlcTesselation, k: Subgroup, orbit) -> TlcTesselation:
    """Flip the ``k``-orbit of an edge; the result is presented over ``k``."""
    edge = regroup(t, k).edge_of(orbit)
    return flip(t, edge, k)[0]


def source_of(base: Moebius, k: Subgroup | None = None) -> TlcTesselation:
    return act(base, tau_star(k or full_group()))


def build_word(base: Moebius, steps) -> ModularWord:
    """Chain ``(group, edge)`` steps starting from the Farey tesselation marked by ``base``."""
    steps = list(steps)
    cur = source_of(base, steps[0][0] if steps else None)
    gens = []
    for grp, edge in steps:
        gen = WhiteheadGenerator(cur, grp, tuple(edge))
        cur, _ = gen.apply()
        gens.append(gen)
    return ModularWord(base, tuple(gens))


def extend(w: ModularWord, steps) -> ModularWord:
    return build_word(w.base, w.steps() + list(steps))


def image(w: ModularWord) -> TlcTesselation:
    """Image of the marked Farey tesselation."""
    if not w.word:
        return source_of(w.base)
    return w.word[-1].target


def equals(w1: ModularWord, w2: ModularWord) -> bool:
    return tesselations_equal(image(w1), image(w2))


def is_geometric(gens) -> bool:
    """Consecutive generators chain: each source is the previous target, invariance included."""
    gens = list(gens)
    for g in gens:
        try:
            regroup(g.tess, g.group)
        except ValueError:
            return False
    for g1, g2 in zip(gens, gens[1:]):
        if not tesselations_equal(g1.target, g2.tess):
            return False
    return True


def reverse_dual(w: ModularWord) -> list[tuple]:
    """Steps undoing the flips of ``w``, in order."""
    return [(g.group, g.inverse().edge) for g in reversed(w.word)]


def word_from_flips(steps, end_doe) -> ModularWord:
    """The word replaying ``steps`` from the Farey tesselation and ending at ``end_doe``.

    The base is found by carrying ``end_doe`` backwards through the flips.
    """
    steps = list(steps)
    chain = [tau_star(steps[0][0] if steps else None)]
    for grp, edge in steps:
        chain.append(flip(chain[-1], edge, grp)[0])
    d = tuple(end_doe)
    if not chain[-1].has_edge(*d):
        raise ValueError("end edge is not an edge of the final tesselation")
    for (grp, edge), before in zip(reversed(steps), reversed(chain[:-1])):
        d = unflip_doe(regroup(before, grp), edge, d)
    return build_word(oriented_edge_to_element(d), steps)


def remark_word(w: ModularWord, doe) -> ModularWord:
    """Same flips, base changed so that the image carries ``doe``."""
    return word_from_flips(w.steps(), doe)


# ---------------------------------------------------------------------------
# action on decorated structures


def act_structure(g: Moebius, s: DecoratedStructure) -> DecoratedStructure:
    t = act(g, s.tess)
    lam = {}
    for o in s.tess.orbits():
        a, b = g.edge(o.representative)
        lam[t.ukey(a, b)] = s.lam[o.key]
    return DecoratedStructure(t, lam)


def apply_word(w: ModularWord, s: DecoratedStructure) -> DecoratedStructure:
    """Carry lambda lengths along the word: re-mark by ``base``, then Ptolemy per flip."""
    cur = act_structure(w.base, s)
    for gen in w.word:
        if not tesselations_equal(cur.tess, gen.tess, with_doe=False):
            raise ValueError("structure does not sit on the generator's source")
        cur, _ = flip_structure(cur, gen.edge, _common(cur.group, gen.group))
    return cur


def _common(a: Subgroup, b: Subgroup) -> Subgroup:
    return b if b.is_subgroup_of(a) else intersect(a, b)


# ---------------------------------------------------------------------------
# relations


def _participating_remark(prefix: ModularWord, k: Subgroup, keys) -> ModularWord:
    """Move the distinguished edge off the participating orbits (the moves do not depend on it)."""
    t = regroup(image(prefix), k)
    if t.ukey(*t.doe) not in keys:
        return prefix
    for o in t.orbits():
        if o.key not in keys:
            return remark_word(prefix, o.representative)
    raise MalformedInstance("every orbit participates")


def _flip_chain(t, k, edges):
    out = []
    for e in edges:
        try:
            t, new = flip(t, e, k)
        except OrbitSelfAdjacent as exc:
            raise MalformedInstance(str(exc)) from None
        out.append(new)
    return t, out


def _check_edge(t: TlcTesselation, e):
    a, b = e
    if not t.has_edge(a, b):
        raise MalformedInstance(f"{a}-{b} is not an edge")


def relation_words(name: str, inst: dict):
    """The two sides of a relation as words; raises ``MalformedInstance``."""
    prefix = inst.get("prefix") or ModularWord(IDENTITY)
    k = inst["group"]
    try:
        t = regroup(image(prefix), k)
    except ValueError as exc:
        raise MalformedInstance(str(exc)) from None
    if name == "involutivity":
        e = tuple(inst["edge"])
        _check_edge(t, e)
        prefix = _participating_remark(prefix, k, {t.ukey(*e)})
        t = regroup(image(prefix), k)
        t1, (new,) = _flip_chain(t, k, [e])
        lhs = extend(prefix, [(k, e), (k, new)])
        return lhs, prefix
    if name == "commutativity":
        e, f = (tuple(x) for x in inst["edges"])
        _check_edge(t, e)
        _check_edge(t, f)
        if len(_quad_triangles(t, e) | _quad_triangles(t, f)) != 4:
            raise MalformedInstance("quadrilaterals overlap")
        prefix = _participating_remark(prefix, k, {t.ukey(*e), t.ukey(*f)})
        t = regroup(image(prefix), k)
        _flip_chain(t, k, [e, f])
        return extend(prefix, [(k, e), (k, f)]), extend(prefix, [(k, f), (k, e)])
    if name == "pentagon":
        e, f = (tuple(x) for x in inst["edges"])
        _check_edge(t, e)
        _check_edge(t, f)
        tris = _quad_triangles(t, e) | _quad_triangles(t, f)
        if len(tris) != 3 or t.ukey(*e) == t.ukey(*f):
            raise MalformedInstance("edges do not span a pentagon of distinct triangles")
        prefix = _participating_remark(prefix, k, {t.ukey(*e), t.ukey(*f)})
        t = regroup(image(prefix), k)
        cur = [e, f]
        steps = []
        for _ in range(5):
            try:
                t, new = flip(t, cur[0], k)
            except OrbitSelfAdjacent as exc:
                raise MalformedInstance(str(exc)) from None
            steps.append((k, cur[0]))
            cur = [cur[1], new]
        return extend(prefix, steps), prefix
    if name == "coset":
        e = tuple(inst["edge"])
        h = inst["subgroup"]
        _check_edge(t, e)
        if not h.is_subgroup_of(k):
            raise MalformedInstance("subgroup is not contained in the group")
        if t.is_self_adjacent(e):
            raise MalformedInstance("orbit is self-adjacent")
        prefix = _participating_remark(prefix, k, {t.ukey(*e)})
        t = regroup(image(prefix), k)
        lhs = extend(prefix, [(k, e)])
        cur = regroup(t, h)
        steps = []
        for piece in _pieces(cur, k, e):
            steps.append((h, piece))
        return lhs, extend(prefix, steps)
    raise MalformedInstance(f"unknown relation {name!r}")


def _quad_triangles(t: TlcTesselation, e) -> set:
    a, b = e
    k = t.group
    return {_tri_key(k, (a, b, t.third(a, b))), _tri_key(k, (b, a, t.third(b, a)))}


def verify_relation(name: str, inst: dict) -> bool:
    lhs, rhs = relation_words(name, inst)
    return equals(lhs, rhs)


RELATIONS = ("involutivity", "commutativity", "pentagon", "coset")


def group_pool(rng: random.Random, max_index: int = 24) -> Subgroup:
    """A random torsion-free group of index at most ``max_index``."""
    choice = rng.randrange(5)
    if choice == 0:
        return commutator_subgroup()
    if choice == 1:
        return principal_congruence(2)
    if choice == 2 and max_index >= 12:
        return principal_congruence(3)
    return random_torsion_free(6 * rng.randint(1, max(1, max_index // 6)), rng)


def random_base(rng: random.Random, length: int = 4) -> Moebius:
    g = IDENTITY
    for _ in range(length):
        g = g @ (S if rng.random() < 0.4 else (T if rng.random() < 0.5 else T.inverse()))
    return g


def random_steps(t: TlcTesselation, k: Subgroup, n: int, rng: random.Random) -> list:
    """Up to ``n`` random non-self-adjacent flips over ``k`` starting at ``t``."""
    t = regroup(t, k)
    steps = []
    for _ in range(n):
        keys = t.edge_keys()
        rng.shuffle(keys)
        for key in keys:
            e = t.representative(key)
            if not t.is_self_adjacent(e):
                steps.append((k, e))
                t, _ = flip(t, e)
                break
    return steps


def random_instance(name: str, rng: random.Random, max_index: int = 24, tries: int = 200) -> dict:
    for _ in range(tries):
        k = group_pool(rng, max_index)
        base = random_base(rng)
        prefix = build_word(base, random_steps(source_of(base, k), k, rng.randint(0, 3), rng))
        t = regroup(image(prefix), k)
        orbits = t.orbits()
        if name == "involutivity":
            e = rng.choice(orbits).representative
            inst = {"prefix": prefix, "group": k, "edge": e}
        elif name == "commutativity":
            e, f = (o.representative for o in rng.sample(orbits, 2))
            inst = {"prefix": prefix, "group": k, "edges": (e, f)}
        elif name == "pentagon":
            tri = rng.choice(t.triangles)
            i = rng.randrange(3)
            e = (tri[i], tri[(i + 1) % 3])
            f = (tri[(i + 1) % 3], tri[(i + 2) % 3])
            inst = {"prefix": prefix, "group": k, "edges": (e, f)}
        elif name == "coset":
            other = group_pool(rng, max_index)
            h = intersect(k, other)
            if h == k or h.degree > max_index:
                h = intersect(k, principal_congruence(2))
            if h == k or h.degree > max_index:
                continue
            e = rng.choice(orbits).representative
            inst = {"prefix": prefix, "group": k, "subgroup": h, "edge": e}
        else:
            raise MalformedInstance(f"unknown relation {name!r}")
        try:
            relation_words(name, inst)
        except MalformedInstance:
            continue
        return inst
    raise MalformedInstance(f"no valid {name} instance found")


# ---------------------------------------------------------------------------
# flip paths and normal forms


def locate(t: TlcTesselation, v):
    """Walk from the base triangle to a triangle having ``v`` as a vertex.

    Yields the counter-clockwise triangles visited; consecutive ones share the
    side crossed.
    """
    tri = t.base_triangle
    while True:
        yield tri
        if v in tri:
            return
        for i in range(3):
            x, y = tri[i], tri[(i + 1) % 3]
            if ccw(x, v, y):
                tri = (y, x, t.third(y, x))
                break
        else:  # pragma: no cover - the arcs cover the circle minus vertices
            raise ArithmeticError("vertex not located")


def point_at(s: DecoratedStructure, v, points: dict | None = None):
    """Exact scaled-frame point over ``v``, growing ``points`` along the walk to ``v``."""
    if points is None:
        points = {}
    if v in points:
        return points[v]
    walk = locate(s.tess, v)
    b, a, r = root = next(walk)
    if not all(x in points for x in root):
        pa, pb, pr = lc.realize_triangle(s.value(a, b), s.value(a, r), s.value(b, r), exact=True)
        points.update({a: pa, b: pb, r: pr})
    for tri in walk:
        x, y, w = tri
        if w not in points:
            points[w] = lc.third_point(points[x], points[y], s.value(x, w), s.value(y, w),
                                       "left", frame=lc.SCALED)
    return points[v]


def _transport(t1: TlcTesselation, t2: TlcTesselation) -> DecoratedStructure:
    """Lambda lengths on ``t1`` of the unity decoration of ``t2`` (same group)."""
    u2 = from_tesselation(t2, 1)
    points: dict = {}
    values = {}
    for o in t1.orbits():
        a, b = o.representative
        pa, pb = point_at(u2, a, points), point_at(u2, b, points)
        values[o.key] = lc.exact_sqrt(lc.lambda_squared(pa, pb, lc.SCALED))
    return DecoratedStructure(t1, values)


def flip_path(t1: TlcTesselation, t2: TlcTesselation, max_flips: int = 10_000) -> ModularWord:
    """A geometric word from the marked ``t1`` to the marked ``t2``.

    Put lambda length one on every edge of ``t2``, read off the same
    decorated structure on ``t1`` and run Delaunay flips; the canonical
    tesselation of that structure is ``t2``.  The word replays the history of
    ``t1`` first, so it acts on the marked Farey tesselation.
    """
    k = intersect(t1.group, t2.group)
    r1, r2 = regroup(t1, k), regroup(t2, k)
    s1 = _transport(r1, r2)
    final, paving = delaunay(s1, max_flips=max_flips)
    if not tesselations_equal(final.tess, r2, with_doe=False):
        raise NonTermination("Delaunay flips did not reach the target")
    return word_from_flips(list(t1.flips) + list(paving.flips), t2.doe)


def normalize(w: ModularWord) -> ModularWord:
    """Rewrite ``w`` over the intersection of its groups by splitting each flip."""
    if not w.word:
        return w
    j = w.word[0].group
    for g in w.word[1:]:
        j = intersect(j, g.group)
    if all(g.group == j for g in w.word):
        return w
    cur = source_of(w.base, j)
    steps = []
    for gen in w.word:
        for piece in _pieces(cur, gen.group, gen.edge):
            steps.append((j, piece))
            cur, _ = flip(cur, piece, j)
    return build_word(w.base, steps)


# ---------------------------------------------------------------------------
# rigidity


def quotient_automorphisms(t: TlcTesselation, k: Subgroup | None = None) -> list[Moebius]:
    """Moebius symmetries of ``t`` normalizing ``k``, one per class modulo ``k``.

    A symmetry is determined by where it sends the distinguished edge, so
    the candidates are the elements sending it to a representative of each
    oriented edge orbit.
    """
    k = k or t.group
    t = regroup(t, k)
    x0, g0 = geodesic_normal_form(*t.doe)
    g0inv = g0.inverse()
    out = []
    seen = set()
    for tri in t.triangles:
        for i in range(3):
            f = (tri[i], tri[(i + 1) % 3])
            y0, g = geodesic_normal_form(*f)
            if y0 != x0:
                continue
            gamma = g @ g0inv
            c = k.coset_of(gamma)
            if c in seen:
                continue
            seen.add(c)
            if k.conjugate(gamma) != k:
                continue
            if is_invariant(t, gamma):
                out.append(gamma)
    return out


def characteristic_map(t: TlcTesselation, x):
    """Image of the Farey vertex ``x`` under the combinatorial map of the marked Farey tesselation onto ``t``."""
    farey = tau_star()
    walk = locate(farey, x)
    root = next(walk)
    img = dict(zip(root, t.base_triangle))
    for tri in walk:
        u, v, w = tri
        if w not in img:
            img[w] = t.third(img[u], img[v])
    return img[x]


def characteristic_maps(t: TlcTesselation, depth: int) -> dict:
    """The same map on all Farey vertices within dual distance ``depth``."""
    farey = tau_star()
    img = dict(zip(farey.base_triangle, t.base_triangle))
    for tri, _ in farey.triangles_to_depth(depth):
        u, v, w = tri
        if w not in img:
            img[w] = t.third(img[u], img[v])
    return img


def random_scramble(k: Subgroup, n: int, rng: random.Random) -> ModularWord:
    return build_word(IDENTITY, random_steps(tau_star(k), k, n, rng))


def mixed_word(rng: random.Random, n: int = 4, pool=None) -> ModularWord:
    """A geometric word whose generators use a nested chain of different groups."""
    pool = pool or [commutator_subgroup(), principal_congruence(2)]
    cur = tau_star(full_group())
    steps = []
    grp = None
    for i in range(n):
        other = pool[i % len(pool)]
        grp = other if grp is None else intersect(grp, other)
        more = random_steps(cur, grp, 1, rng)
        if not more:
            continue
        steps += more
        cur, _ = flip(cur, more[0][1], grp)
    return build_word(IDENTITY, steps)
