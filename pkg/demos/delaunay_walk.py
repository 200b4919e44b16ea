"""Carry the unity structure through random flips, flip it back to its
convex-hull paving and write before/after pictures."""

import random
import sys
from pathlib import Path

from solenoid.modgroup import random_steps
from solenoid.render import render_svg
from solenoid.structures import delaunay, flip_structure, new_structure, simplicial_map
from solenoid.subgroup import commutator_subgroup, principal_congruence
from solenoid.tesselation import tau_star


def main(out="demo_out", seed=11):
    rng = random.Random(seed)
    k = principal_congruence(3)
    s = new_structure(k)
    for _, e in random_steps(tau_star(k), k, 4, rng):
        s, _ = flip_structure(s, e)  # same decorated surface, new tesselation
    print("sigma before:", sorted(map(str, simplicial_map(s).values())))
    final, paving = delaunay(s)
    print(f"{len(paving.flips)} flips back, all lambda one again:", set(final.lam.values()) == {1})
    d = Path(out)
    d.mkdir(exist_ok=True)
    (d / "scrambled.svg").write_text(render_svg(s.tess, 5, title="scrambled"))
    (d / "canonical.svg").write_text(render_svg(final.tess, 5, title="canonical"))

    # 3^2 + 4^2 = 5^2 makes the e0 orbit flat: the paving has square faces
    flat = new_structure(commutator_subgroup(), values=[(0, 5), (1, 3), (2, 4)])
    final, paving = delaunay(flat)
    print("removed orbits:", len(paving.removed), "face sizes:", paving.faces)
    (d / "paving.svg").write_text(render_svg(final.tess, 5, paving.removed, title="paving"))
    print("pictures in", d.resolve())


if __name__ == "__main__":
    main(*sys.argv[1:2])
