"""
Homogeneous spaces G/H with multiplicative H
============================================

The character data of X = G/H is a restriction map Ghat -> Mhat. Its kernel
is the unit lattice U(X) and its cokernel is Pic(X). A second construction
replaces X by a space Y0 whose units form a permutation lattice.
"""

from flasquekit.groups import by_name
from flasquekit.homspace import HomSpaceSpec, quotient_invariants, second_construction
from flasquekit.lattice import GMap, permutation_lattice, permutation_sum, validate_module, zmat

C2 = by_name("C2")
mu2 = validate_module(C2, [[[1]]], [[2]], rank=1)          # characters of mu_2

# SL2 has no characters, so every character of mu_2 survives in Pic.
zero = permutation_sum(C2, [])
inv = quotient_invariants(HomSpaceSpec(C2, zero, mu2, GMap(zero, mu2, zmat([], (1, 0)))))
print("SL2/mu2:  U rank", inv.u_x.rank, " Pic", inv.pic_x.abelian_invariants)

# Gm -> Gm, t -> t^2: restriction Z -> Z/2 is onto, and U = 2Z.
Z = permutation_lattice(C2, C2.whole())
inv = quotient_invariants(HomSpaceSpec(C2, Z, mu2, GMap(Z, mu2, zmat([[1]]))))
print("Gm/mu2:   U rank", inv.u_x.rank, " Pic", inv.pic_x.abelian_invariants,
      " inclusion", inv.u_inclusion.matrix.tolist())

# %%
# A Weil restriction of Gm along a quadratic extension, modulo mu_2.
ZG = permutation_lattice(C2, C2.trivial())
rep = second_construction(HomSpaceSpec(C2, ZG, mu2, GMap(ZG, mu2, zmat([[1, 1]]))))
print("U(Y0) rank", rep.u_y0.rank, " permutation:", rep.permutation_verdict.value.value,
      " Pic(Y0)", rep.pic_y0.abelian_invariants)
print("basis in which the action permutes:", rep.permutation_verdict.certificate["basis"])
