"""Build a word mixing two groups, rewrite it over their intersection and
recover a geometric word by flip-path search."""

import random

from solenoid.modgroup import equals, flip_path, image, mixed_word, normalize
from solenoid.tesselation import tau_star

rng = random.Random(5)
w = mixed_word(rng, n=4)
print("mixed word:", [g.group.index for g in w.word])
n = normalize(w)
print("normalized:", len(n), "flips over index", n.word[0].group.index if n.word else "-")
geo = flip_path(tau_star(image(n).group), image(n))
print("flip path:", len(geo), "flips, same element:", equals(geo, w))
