"""
Tate cohomology of small lattices
=================================

Three warm-up computations: the sign character of C2, the permutation
lattices of a non-abelian group, and the norm-one lattice of the Klein
four-group.
"""

from flasquekit.cohomology import is_coflasque, is_flasque, tate_cohomology
from flasquekit.groups import by_name
from flasquekit.lattice import character_lattice, dual, permutation_lattice
from flasquekit.tori import norm_one_lattice

# C2 acting on Z by -1. Its cohomology is 2-periodic: Z/2 in odd degrees.
C2 = by_name("C2")
sign = character_lattice(C2, [-1])
for n in range(-2, 3):
    print(f"H^{n}(C2, Z-) = {tate_cohomology(n, C2.whole(), sign)}")

# %%
# Permutation lattices have no H^1 over any subgroup, and neither do their
# duals. The two class checks report this directly.
S3 = by_name("S3")
for K in S3.subgroups:
    P = permutation_lattice(S3, K)
    print(f"Z[S3/{list(K.members)}]: rank {P.rank}, "
          f"flasque={bool(is_flasque(P))}, coflasque={bool(is_coflasque(P))}")

# %%
# The sign lattice is neither: the check returns the subgroup that fails.
chk = is_coflasque(sign)
print("Z- coflasque?", bool(chk), "witness:", chk.witness_subgroup.members, chk.witness_group)

# %%
# J = Z[V4]/Z, the character lattice of the norm-one torus of a biquadratic
# extension. Its dual is the augmentation ideal.
V4 = by_name("V4")
J = norm_one_lattice(V4)
for n in (-1, 0, 1, 2):
    print(f"H^{n}(V4, J) = {tate_cohomology(n, V4.whole(), J)}"
          f"    H^{n}(V4, dual J) = {tate_cohomology(n, V4.whole(), dual(J))}")
