"""Evaluate the WP two-form on the punctured torus and check it survives a flip."""

import random

from solenoid.farey import DOE, vertex
from solenoid.structures import new_structure
from solenoid.subgroup import commutator_subgroup
from solenoid.wpform import (
    flip_with_tangents, indicator, nondegenerate_partner, tangent, uniform_vector, wp_form,
)

G = commutator_subgroup()
s = new_structure(G)
u = indicator(s, s.tess.orbit_of(DOE))
v = indicator(s, s.tess.orbit_of((vertex("0/1"), vertex("1/1"))))
print("omega(e0, e_1/2) =", wp_form(s, u, v))

rng = random.Random(0)
s = new_structure(G, values=[(0, 3), (1, 2), (2, 5)])
u = tangent(s, [(o.key, rng.randint(-4, 4)) for o in s.tess.orbits()])
v = tangent(s, [(o.key, rng.randint(-4, 4)) for o in s.tess.orbits()])
s2, (u2, v2) = flip_with_tangents(s, DOE, u, v)
print("before flip:", wp_form(s, u, v), " after flip:", wp_form(s2, u2, v2))
print("against the scaling direction:", wp_form(s, u, uniform_vector(s)))
w = nondegenerate_partner(s, v)
print("partner pairing:", wp_form(s, w, v))
