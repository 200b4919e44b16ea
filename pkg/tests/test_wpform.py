import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from solenoid.farey import DOE, vertex
from solenoid.structures import (
    cross_ratio_at, from_tesselation, new_structure, quadrilateral_lambdas, regroup_structure,
)
from solenoid.subgroup import intersect, principal_congruence
from solenoid.tesselation import flip, regroup, tau_star
from solenoid.modgroup import group_pool, random_steps
from solenoid.wpform import (
    IsKernelVector, eta_triangle, flip_tangent, flip_with_tangents, indicator, kernel_test,
    nondegenerate_partner, regroup_vector, scaling_vector, tangent, tlc_average,
    uniform_vector, wp_form, wp_sum,
)


def random_structure(rng, max_index=24, flips=3):
    k = group_pool(rng, max_index)
    t = tau_star(k)
    for _, e in random_steps(t, k, rng.randint(0, flips), rng):
        t, _ = flip(t, e)
    return from_tesselation(t, {o.key: Fraction(rng.randint(1, 12), rng.randint(1, 4))
                                for o in t.orbits()})


def random_vector(s, rng, lo=-5, hi=5):
    return tangent(s, [(o.key, rng.randint(lo, hi)) for o in s.tess.orbits()])


def e(a, b):
    return (vertex(a), vertex(b))


# --- per-triangle wedge -----------------------------------------------------

def test_eta_examples():
    assert eta_triangle((1, 1, 1), (1, 0, 0), (0, 1, 0)) == -2
    assert eta_triangle((1, 1, 1), (1, 2, 3), (1, 2, 3)) == 0
    assert eta_triangle((1, 2, 3), (0, 1, 0), (1, 0, 0)) == -eta_triangle((1, 2, 3), (1, 0, 0), (0, 1, 0))


def _eta_oracle(lam, u, v):
    # -2 * sum over cyclic pairs of the 2x2 minors of the log-differentials
    du = [Fraction(x) / y for x, y in zip(u, lam)]
    dv = [Fraction(x) / y for x, y in zip(v, lam)]
    return -2 * sum(du[i] * dv[(i + 1) % 3] - du[(i + 1) % 3] * dv[i] for i in range(3))


small = st.integers(-6, 6)
pos = st.integers(1, 9)


@given(st.tuples(pos, pos, pos), st.tuples(small, small, small), st.tuples(small, small, small))
def test_eta_matches_minor_oracle(lam, u, v):
    assert eta_triangle(lam, u, v) == _eta_oracle(lam, u, v)
    # cyclic rotation of the triangle does not change the wedge
    r = lambda x: x[1:] + x[:1]  # noqa: E731
    assert eta_triangle(r(lam), r(u), r(v)) == eta_triangle(lam, u, v)


# --- the two-form -----------------------------------------------------------

def test_wp_punctured_torus_instance(G):
    s = new_structure(G)
    u = indicator(s, s.tess.orbit_of(DOE))
    v = indicator(s, s.tess.orbit_of(e("0/1", "1/1")))
    assert s.tess.orbit_of(e("0/1", "1/1")) == s.tess.orbit_of(e("1/0", "-1/1"))
    assert wp_form(s, u, v) == -4
    assert wp_form(s, u, u) == 0
    assert wp_form(s, v, u) == 4


def test_wp_instance_by_enumeration(G):
    # the two triangles of the transversal both see e0 followed by the e_{1/2} orbit
    s = new_structure(G)
    total, k = wp_sum(s, indicator(s, 0), indicator(s, 2))
    assert (total, k) == (-4, 2)


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_bilinear_antisymmetric(seed):
    rng = random.Random(seed)
    s = random_structure(rng)
    u, u2, v = (random_vector(s, rng) for _ in range(3))
    both = {k: u[k] + u2[k] for k in u}
    assert wp_form(s, both, v) == wp_form(s, u, v) + wp_form(s, u2, v)
    assert wp_form(s, u, v) == -wp_form(s, v, u)
    assert wp_form(s, u, u) == 0
    three = {k: 3 * x for k, x in u.items()}
    assert wp_form(s, three, v) == 3 * wp_form(s, u, v)


def test_wp_over_torsion_group(full, gamma2):
    # data over a group with torsion is presented over its torsion-free part
    s = new_structure(full, values=3)
    u = indicator(s, 0)
    assert wp_form(s, u, u) == 0
    s2 = new_structure(gamma2)
    k = s2.tess.edge_keys()
    assert wp_form(s2, indicator(s2, 0), indicator(s2, 1)) == -wp_form(s2, indicator(s2, 1), indicator(s2, 0))
    assert len(k) == 3


# --- flips ------------------------------------------------------------------

def test_flip_tangent_examples(G, gamma3):
    s = new_structure(G)
    _, zero = flip_tangent(s, tangent(s), DOE)
    assert set(zero.values()) == {0}
    s2, u2 = flip_tangent(s, indicator(s, s.tess.orbit_of(DOE)), DOE)
    new = [k for k in s2.lam if k not in s.lam]
    assert [u2[k] for k in new] == [-2]
    # over Gamma(3) the four sides lie in four different orbits
    s = new_structure(gamma3)
    a, b = DOE
    q = s.tess.third(a, b)
    s2, u2 = flip_tangent(s, indicator(s, s.tess.orbit_of((a, q))), DOE)
    new = [k for k in s2.lam if k not in s.lam]
    assert [u2[k] for k in new] == [1]


def test_flip_tangent_side_over_G_counts_both_sides(G):
    # over G sides a and c share an orbit, so both terms fire
    s = new_structure(G)
    a, b = DOE
    s2, u2 = flip_tangent(s, indicator(s, s.tess.orbit_of((a, s.tess.third(a, b)))), DOE)
    new = [k for k in s2.lam if k not in s.lam]
    assert [u2[k] for k in new] == [2]


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_flip_tangent_is_ptolemy_derivative(seed):
    # finite-difference oracle on the Ptolemy map itself
    rng = random.Random(seed)
    s = random_structure(rng)
    edges = [o.representative for o in s.tess.orbits() if not s.tess.is_self_adjacent(o.representative)]
    edge = rng.choice(edges)
    u = random_vector(s, rng)
    s2, u2 = flip_tangent(s, u, edge)
    newkey = next(k for k in s2.lam if k not in s.lam)
    aq, qb, bp, pa, ab = quadrilateral_lambdas(s, edge)
    h1, h2 = Fraction(1, 10**6), Fraction(1, 2 * 10**6)

    def moved(h):
        st_ = from_tesselation(s.tess, {k: s.lam[k] + h * u[k] for k in s.lam})
        return quadrilateral_lambdas(st_, edge)

    def ptolemy(q):
        a, b, c, d, e_ = q
        return (a * c + b * d) / e_

    d1 = (ptolemy(moved(h1)) - ptolemy(moved(0))) / h1
    d2 = (ptolemy(moved(h2)) - ptolemy(moved(0))) / h2
    # Richardson extrapolation removes the first-order error
    assert abs((2 * d2 - d1) - u2[newkey]) < Fraction(1, 10**4)


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_wp_flip_invariance(seed):
    rng = random.Random(seed)
    s = random_structure(rng)
    u, v = random_vector(s, rng), random_vector(s, rng)
    edges = [o.representative for o in s.tess.orbits() if not s.tess.is_self_adjacent(o.representative)]
    s2, (u2, v2) = flip_with_tangents(s, rng.choice(edges), u, v)
    assert wp_form(s2, u2, v2) == wp_form(s, u, v)


# --- kernel and partners ----------------------------------------------------

def test_kernel_examples(G, gamma3):
    s = new_structure(G, values=[(0, 2), (1, 3), (2, 5)])
    assert kernel_test(s, uniform_vector(s))
    assert not kernel_test(s, indicator(s, 0))
    s3 = new_structure(gamma3)
    w = {c: i + 1 for i, c in enumerate(sorted(set(gamma3.cusp_ids())))}
    assert kernel_test(s3, scaling_vector(s3, w))
    with pytest.raises(IsKernelVector):
        nondegenerate_partner(s, uniform_vector(s))


def test_partner_on_unity(G):
    s = new_structure(G)
    v = indicator(s, s.tess.orbit_of(DOE))
    u = nondegenerate_partner(s, v)
    assert wp_form(s, u, v) != 0


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_kernel_vectors_pair_to_zero(seed):
    rng = random.Random(seed)
    s = random_structure(rng)
    w = {c: Fraction(rng.randint(1, 9), rng.randint(1, 4)) for c in set(s.group.cusp_ids())}
    for v in (uniform_vector(s), scaling_vector(s, w)):
        assert kernel_test(s, v)
        assert wp_form(s, random_vector(s, rng), v) == 0


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_partner_is_nondegenerate(seed):
    rng = random.Random(seed)
    s = random_structure(rng)
    v = random_vector(s, rng)
    if kernel_test(s, v):
        return
    u = nondegenerate_partner(s, v)
    assert set(u.values()) <= {0, 1} and sum(u.values()) == 1
    assert wp_form(s, u, v) != 0


# --- level stability --------------------------------------------------------

@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_level_stability(seed):
    rng = random.Random(seed)
    s = random_structure(rng, max_index=12)
    u, v = random_vector(s, rng), random_vector(s, rng)
    want = wp_form(s, u, v)
    for n in (2, 3):
        m = intersect(s.group, principal_congruence(n))
        if m == s.group:
            continue
        fine = regroup_structure(s, m)
        assert wp_form(fine, regroup_vector(s, u, m), regroup_vector(s, v, m)) == want


# --- averaging --------------------------------------------------------------

def test_tlc_average_examples(G, full):
    s = new_structure(G)
    assert tlc_average(s, G).lam == s.lam
    s = new_structure(G, values=[(0, 1), (1, 4), (2, 2)])
    avg = tlc_average(s, full)
    assert list(avg.lam.values()) == [2]


def test_tlc_average_merges_finer_orbits(G):
    j = intersect(G, principal_congruence(2))
    fine = regroup(tau_star(G), j)
    coarse_key = tau_star(G).ukey(*DOE)
    parts = [k for k in fine.edge_keys() if fine.ukey(*fine.representative(k)) == k
             and regroup(fine, G).ukey(*fine.representative(k)) == coarse_key]
    assert len(parts) == j.index // G.index == 3
    vals = {k: 2 for k in fine.edge_keys()}
    vals.update(zip(parts, (1, 4, 16)))
    avg = tlc_average(from_tesselation(fine, vals), G)
    assert avg.value(*DOE) == 4
    assert set(avg.lam.values()) == {2, 4}


def test_tlc_average_irrational_is_rounded(G, full):
    s = new_structure(G, values=[(0, 1), (1, 2), (2, 3)])
    got = tlc_average(s, full, digits=20).value(*DOE)
    assert abs(float(got) - 6 ** (1 / 3)) < 1e-15
    assert got.denominator <= 10**20


@pytest.mark.parametrize("seed", range(5))
def test_tlc_average_keeps_cross_ratio_pairs(seed):
    # two structures in the same fibre keep equal cross-ratios after averaging
    rng = random.Random(seed)
    k = principal_congruence(2)
    fine = intersect(k, principal_congruence(3))
    t = regroup(tau_star(k), fine)
    s1 = from_tesselation(t, {o.key: rng.randint(1, 6) for o in t.orbits()})
    f = {c: rng.randint(1, 4) ** 2 for c in set(fine.cusp_ids())}
    from solenoid.structures import scale_decoration
    s2 = scale_decoration(s1, f)
    a1, a2 = tlc_average(s1, k), tlc_average(s2, k)
    for o in a1.tess.orbits():
        x = cross_ratio_at(a1, o.representative)
        y = cross_ratio_at(a2, o.representative)
        assert abs(float(x) - float(y)) < 1e-12
