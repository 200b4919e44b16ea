"""The Weil-Petersson two-form on lambda-length coordinates.

Tangent vectors are dictionaries from orbit keys to rationals (missing keys
mean zero).  The form is a per-triangle wedge of logarithmic
differentials averaged over one triangle per orbit, so everything is exact.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Mapping

from .structures import (
    DecoratedStructure, flip_structure, quadrilateral_lambdas, regroup_structure,
)
from .subgroup import Subgroup, commutator_subgroup, intersect
from .tesselation import regroup


class IsKernelVector(ValueError):
    pass


def tangent(s: DecoratedStructure, values=None) -> dict:
    """A tangent vector at ``s``; ``values`` maps orbits, edges, keys or ids to numbers."""
    out = {k: Fraction(0) for k in s.tess.edge_keys()}
    if values:
        pairs = values.items() if isinstance(values, Mapping) else values
        for orbit, val in pairs:
            out[s.tess.ukey(*s.tess.edge_of(orbit))] = Fraction(val)
    return out


def indicator(s: DecoratedStructure, orbit) -> dict:
    return tangent(s, [(orbit, 1)])


def _get(u, key):
    return u.get(key, 0)


def eta_triangle(lam, u, v) -> Fraction:
    """Wedge of log-differentials on a triangle with counter-clockwise edges ``(a, b, c)``."""
    la, lb, lc_ = (Fraction(x) for x in lam)
    ua, ub, uc = u
    va, vb, vc = v
    return -2 * ((ua * vb - ub * va) / (la * lb)
                 + (ub * vc - uc * vb) / (lb * lc_)
                 + (uc * va - ua * vc) / (lc_ * la))


def _torsion_free_level(s: DecoratedStructure, *vectors):
    g = commutator_subgroup()
    if s.group.is_subgroup_of(g):
        return (s, *vectors)
    k = intersect(s.group, g)
    fine = regroup_structure(s, k)
    return (fine, *(regroup_vector(s, u, k) for u in vectors))


def regroup_vector(s: DecoratedStructure, u, m: Subgroup) -> dict:
    """The vector ``u`` at ``s`` presented over a finer group ``m``."""
    t = regroup(s.tess, m)
    return {o.key: _get(u, s.tess.ukey(*o.representative)) for o in t.orbits()}


def wp_sum(s: DecoratedStructure, u, v) -> tuple[Fraction, int]:
    """Sum of the triangle wedges over the transversal, and the number of triangles."""
    t = s.tess
    total = Fraction(0)
    for tri in t.triangles:
        keys = [t.ukey(tri[i], tri[(i + 1) % 3]) for i in range(3)]
        total += eta_triangle([s.lam[k] for k in keys],
                              [_get(u, k) for k in keys], [_get(v, k) for k in keys])
    return total, len(t.triangles)


def wp_form(s: DecoratedStructure, u, v) -> Fraction:
    """Normalized sum ``(2/k) * sum of wedges`` over one triangle per orbit.

    Data over a group not contained in the punctured-torus group is first
    presented over the intersection, which is torsion-free.
    """
    s, u, v = _torsion_free_level(s, u, v)
    total, k = wp_sum(s, u, v)
    return 2 * total / k


def flip_tangent(s: DecoratedStructure, u, edge):
    """Push ``u`` through the flip of ``edge``; returns ``(flipped structure, new vector)``.

    The new diagonal gets the differential of the Ptolemy map; other orbits
    keep their components.
    """
    s2, new = flip_structure(s, edge)
    return s2, _push(s, s2, u, edge, new)


def flip_with_tangents(s: DecoratedStructure, edge, *vectors):
    s2, new = flip_structure(s, edge)
    return s2, [_push(s, s2, u, edge, new) for u in vectors]


def _push(s, s2, u, edge, new) -> dict:
    t = s.tess
    a, b = edge
    _, q, _, p = t.quadrilateral(a, b)
    la, lb, lc_, ld, le = quadrilateral_lambdas(s, edge)
    ua, ub, uc, ud, ue = (_get(u, t.ukey(x, y)) for x, y in ((a, q), (q, b), (b, p), (p, a), (a, b)))
    out = {k: _get(u, k) for k in s2.tess.edge_keys() if k in s.lam}
    out[s2.tess.ukey(*new)] = ((ua * lc_ + la * uc + ub * ld + lb * ud) / le
                               - (la * lc_ + lb * ld) * ue / (le * le))
    return out


def kernel_expression(s: DecoratedStructure, v, edge) -> Fraction:
    """Derivative of the log cross-ratio across ``edge`` in the direction ``v``."""
    t = s.tess
    a, b = edge
    _, q, _, p = t.quadrilateral(a, b)
    sides = ((a, q), (q, b), (b, p), (p, a))
    r = [_get(v, t.ukey(x, y)) / s.value(x, y) for x, y in sides]
    return r[0] + r[2] - r[1] - r[3]


def kernel_test(s: DecoratedStructure, v) -> bool:
    return all(kernel_expression(s, v, o.representative) == 0 for o in s.tess.orbits())


def uniform_vector(s: DecoratedStructure) -> dict:
    return dict(s.lam)


def scaling_vector(s: DecoratedStructure, weights) -> dict:
    """Infinitesimal cusp rescaling: ``v_e = lambda_e (f_p + f_q) / 2``."""
    get = weights if callable(weights) else weights.__getitem__
    k = s.group
    out = {}
    for o in s.tess.orbits():
        a, b = o.representative
        out[o.key] = s.lam[o.key] * (Fraction(get(k.cusp_of(a))) + Fraction(get(k.cusp_of(b)))) / 2
    return out


def nondegenerate_partner(s: DecoratedStructure, v) -> dict:
    """An indicator vector pairing non-trivially with ``v``."""
    if kernel_test(s, v):
        raise IsKernelVector("vector lies in the kernel")
    orbits = s.tess.orbits()
    ranked = sorted(orbits, key=lambda o: kernel_expression(s, v, o.representative) == 0)
    for o in ranked:
        u = indicator(s, o)
        if wp_form(s, u, v) != 0:
            return u
    raise IsKernelVector("no indicator vector pairs non-trivially")


# ---------------------------------------------------------------------------
# averaging


def _coset_elements(fine: Subgroup, coarse: Subgroup) -> list:
    """Elements ``g_i`` of ``coarse`` with ``coarse`` the disjoint union of ``fine g_i``."""
    from .farey import IDENTITY
    gens = coarse.generators()
    gens = gens + [g.inverse() for g in gens]
    reps = [IDENTITY]
    seen = {fine.coset_of(IDENTITY)}
    for r in reps:
        for g in gens:
            h = r @ g
            c = fine.coset_of(h)
            if c not in seen:
                seen.add(c)
                reps.append(h)
    return reps


def _iroot(m: int, n: int) -> int | None:
    """The exact integer ``n``-th root of ``m``, if there is one."""
    with localcontext() as ctx:
        ctx.prec = len(str(m)) // n + 20
        guess = int((Decimal(m).ln() / n).exp().to_integral_value()) if m > 1 else m
    for c in (guess - 1, guess, guess + 1):
        if c >= 0 and c ** n == m:
            return c
    return None


def _root(x: Fraction, n: int, digits: int) -> Fraction:
    num, den = _iroot(x.numerator, n), _iroot(x.denominator, n)
    if num is not None and den is not None:
        return Fraction(num, den)
    with localcontext() as ctx:
        ctx.prec = digits + 10
        r = ((Decimal(x.numerator) / Decimal(x.denominator)).ln() / n).exp()
    return Fraction(r).limit_denominator(10 ** digits)


def tlc_average(s: DecoratedStructure, coarse: Subgroup, digits: int = 30) -> DecoratedStructure:
    """Geometric mean of lambda over the translates by ``coarse``, giving ``coarse``-invariant data.

    Values that are not exact roots are re-rationalized with denominators
    below ``10**digits``.
    """
    fine = s.group
    if not fine.is_subgroup_of(coarse):
        fine = intersect(fine, coarse)
        s = regroup_structure(s, fine)
    t = regroup(s.tess, coarse)
    elems = _coset_elements(fine, coarse)
    lam = {}
    for o in t.orbits():
        prod = Fraction(1)
        for g in elems:
            prod *= s.value(*g.edge(o.representative))
        lam[o.key] = _root(prod, len(elems), digits)
    return DecoratedStructure(t, lam)
