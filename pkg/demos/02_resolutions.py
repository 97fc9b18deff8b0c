"""
Flasque and coflasque resolutions
=================================

Every lattice sits in 0 -> P -> E -> N -> 0 with P permutation and E
flasque. E is not unique, but its H^1 profile over the subgroups is. We
rebuild the resolution with several seeds and compare, taking N to be the
augmentation ideal of the Klein four-group.
"""

from flasquekit.groups import by_name
from flasquekit.lattice import dual
from flasquekit.resolutions import (
    coflasque_resolution,
    compare_flasque_resolutions,
    flasque_resolution,
    similarity_fingerprint,
)
from flasquekit.tori import norm_one_lattice

G = by_name("V4")
N = dual(norm_one_lattice(G))

co = coflasque_resolution(N)
print("coflasque:", co.sub.rank, "->", co.mid.rank, "->", co.quot.rank, "certified:", co.certified)
print("fixed points of P surject onto those of N:", co.certificates["fixed_point_surjectivity"])

# %%
# Seeds change the order in which summands are chosen, and so the middle...
runs = [flasque_resolution(N, seed=s) for s in (None, 1, 2, 3)]
for r in runs:
    print("P rank", r.sub.rank, " E rank", r.mid.rank, " certified", r.certified)


def show(fp):
    return {H.members: str(A) for H, A in fp.items()}


# %%
# ...with the same fingerprint (Z/2 over the whole group, 0 elsewhere), and the fibre product over N witnesses the
# rank identity rank(E1) + rank(P2) = rank(E2) + rank(P1).
print(show(similarity_fingerprint(runs[0].mid)))
for r in runs[1:]:
    print(compare_flasque_resolutions(runs[0], r))
