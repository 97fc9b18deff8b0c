"""
R-equivalence on norm-one tori
==============================

For a torus split by a local extension with group G, the number of
R-equivalence classes on its points is the order of H^-1(G, dual S), where S
is the flasque lattice in a resolution of the character lattice.
"""

from flasquekit.groups import by_name
from flasquekit.tori import TorusSpec, norm_one_lattice, r_equivalence_local

for name in ("C2", "C3", "C4", "C6", "V4", "S3"):
    G = by_name(name)
    rep = r_equivalence_local(TorusSpec(G, norm_one_lattice(G)))
    print(f"{name:>3}: flasque part of rank {rep.flasque_part.rank:>2}, "
          f"count group {rep.count_group}, count {rep.count}")

# %%
# Only the biquadratic case is not R-trivial. The count does not depend on the
# resolution chosen.
V4 = by_name("V4")
print({seed: r_equivalence_local(TorusSpec(V4, norm_one_lattice(V4)), seed=seed).count
       for seed in (None, 7, 8, 9)})
