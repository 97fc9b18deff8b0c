import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flasquekit.corpus import corpus, random_unimodular
from flasquekit.errors import GroupMismatch, NotARepresentation, NotUnimodular, TorsionInput
from flasquekit.groups import by_name
from flasquekit.lattice import (
    FinAbGroup,
    GMap,
    as_lattice,
    certified_map,
    character_lattice,
    cokernel_of_map,
    conjugate_lattice,
    detect_permutation_structure,
    direct_sum,
    dual,
    fixed_rank_profile,
    fixed_sublattice,
    inverse_unimodular,
    kernel_of_map,
    norm_endomorphism,
    permutation_lattice,
    permutation_sum,
    validate_lattice,
    validate_module,
    zmat,
    zmul,
)

from oracles import fixed_rank

CORPUS = corpus(("C2", "V4", "S3", "C4"))


def test_validate_lattice_rejects_bad_actions():
    G = by_name("C2")
    with pytest.raises(NotUnimodular):
        validate_lattice(G, [[[2]]])
    with pytest.raises(NotARepresentation):
        validate_lattice(G, [[[1, 1], [0, 1]]])       # infinite order
    with pytest.raises(NotARepresentation):
        validate_lattice(G, [[[1]], [[1]]])           # wrong number of matrices
    S3 = by_name("S3")
    # -1 on every generator is not a character when some generator has order 3
    with pytest.raises(NotARepresentation):
        validate_lattice(S3, [[[-1]] for _ in S3.generators])


def test_validate_module_checks_relations():
    G = by_name("C2")
    M = validate_module(G, [[[1]]], [[2]], rank=1)
    assert M.abelian_invariants == FinAbGroup(0, (2,))
    with pytest.raises(NotARepresentation):
        validate_module(G, [[[0, 1], [1, 0]]], [[1, 0]], rank=2)   # swap does not preserve <e1>


def test_character_and_permutation_lattices():
    G = by_name("C2")
    L = character_lattice(G, [-1])
    assert L.rank == 1 and L.matrices[1].tolist() == [[-1]]
    P = permutation_lattice(G, G.trivial())
    assert P.rank == 2 and P.permutation.verify(P)
    assert detect_permutation_structure(P) is not None
    assert detect_permutation_structure(L) is None


@pytest.mark.parametrize("label,L", CORPUS[:40], ids=[c[0] for c in CORPUS[:40]])
def test_dual_is_an_involution_and_action(label, L):
    G = L.group
    D = dual(L)
    DD = dual(D)
    assert all((a == b).all() for a, b in zip(DD.matrices, L.matrices))
    for g in range(G.order):
        for h in range(G.order):
            assert (zmul(D.matrices[g], D.matrices[h]) == D.matrices[G.mult[g][h]]).all()


@pytest.mark.parametrize("label,L", CORPUS, ids=[c[0] for c in CORPUS])
def test_fixed_sublattice_rank_and_saturation(label, L):
    for H in L.group.subgroups:
        F = fixed_sublattice(L, H)
        assert F.shape[1] == fixed_rank(L, H.members)
        for h in H.members:
            assert (zmul(L.matrices[h], F) == F).all()


def test_fixed_rank_profile_of_regular_lattice():
    G = by_name("V4")
    P = permutation_lattice(G, G.trivial())
    # rank of Z[G]^H is |G| / |H|
    assert fixed_rank_profile(P) == tuple(G.order // H.order for H in G.subgroups)


def test_norm_endomorphism_lands_in_fixed_points():
    G = by_name("S3")
    L = permutation_lattice(G, [H for H in G.subgroups if H.order == 2][0])
    N = norm_endomorphism(L, G.whole())
    assert (N == 2).all()       # three cosets, each fixed by two elements


def test_kernel_cokernel_of_augmentation():
    G = by_name("C3")
    P = permutation_lattice(G, G.trivial())
    Z = permutation_lattice(G, G.whole())
    aug = certified_map(P, Z, [[1, 1, 1]])
    K, inc = kernel_of_map(aug)
    assert K.rank == 2 and inc.is_equivariant()
    assert cokernel_of_map(aug).is_zero()
    times3 = certified_map(Z, Z, [[3]])
    C = cokernel_of_map(times3)
    assert C.abelian_invariants == FinAbGroup(0, (3,))


def test_as_lattice_of_torsion_free_quotient():
    G = by_name("C2")
    P = permutation_lattice(G, G.trivial())
    norm = certified_map(permutation_lattice(G, G.whole()), P, [[1], [1]])
    Q = cokernel_of_map(norm)
    L, pi, sigma = as_lattice(Q)
    assert L.rank == 1 and L.matrices[1].tolist() == [[-1]]
    assert (zmul(pi, sigma) == np.eye(1, dtype=np.int64)).all()
    with pytest.raises(TorsionInput):
        as_lattice(validate_module(G, [[[1]]], [[2]], rank=1))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_conjugate_lattice_roundtrip(n, seed):
    X = random_unimodular(n, np.random.default_rng(seed))
    Xinv = inverse_unimodular(X)
    assert (zmul(X, Xinv) == np.eye(n, dtype=np.int64)).all()
    G = by_name("C2")
    L = permutation_sum(G, [G.whole()] * n)
    C = conjugate_lattice(L, X)
    assert all((m == np.eye(n, dtype=np.int64)).all() for m in C.matrices)


def test_direct_sum_and_group_mismatch():
    C2, C3 = by_name("C2"), by_name("C3")
    A = permutation_lattice(C2, C2.trivial())
    S = direct_sum(A, A)
    assert S.rank == 4 and S.permutation is not None and S.permutation.verify(S)
    with pytest.raises(GroupMismatch):
        direct_sum(A, permutation_lattice(C3, C3.trivial()))


def test_gmap_shape_and_equivariance():
    G = by_name("C2")
    P = permutation_lattice(G, G.trivial())
    Z = permutation_lattice(G, G.whole())
    with pytest.raises(ValueError):
        GMap(P, Z, zmat([[1, 1, 1]]))
    assert not GMap(P, Z, zmat([[1, 0]])).is_equivariant()
    with pytest.raises(NotARepresentation):
        certified_map(P, Z, [[1, 0]])


def test_finabgroup_arithmetic():
    a = FinAbGroup(0, (2,))
    b = FinAbGroup(1, (3,))
    s = a + b
    assert s == FinAbGroup(1, (6,))
    assert str(s) == "Z x Z/6"
    assert FinAbGroup().order == 1 and s.order is None
    assert FinAbGroup.from_diagonal([1, 2, 0, 4]) == FinAbGroup(1, (2, 4))
    with pytest.raises(ValueError):
        FinAbGroup(0, (2, 3))
