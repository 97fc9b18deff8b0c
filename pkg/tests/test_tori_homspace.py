import numpy as np
import pytest

from flasquekit.errors import ConstructionFailure, TorsionInput
from flasquekit.groups import by_name
from flasquekit.homspace import (
    HomSpaceSpec,
    coflasque_tower,
    homspace_r_count,
    quotient_invariants,
    second_construction,
)
from flasquekit.lattice import (
    FinAbGroup,
    GMap,
    character_lattice,
    permutation_lattice,
    permutation_sum,
    validate_module,
    zmat,
)
from flasquekit.resolutions import Verdict, similarity_fingerprint
from flasquekit.tori import TorusSpec, norm_one_lattice, r_equivalence_local


def z_mod(G, m):
    return validate_module(G, [[[1]] for _ in G.generators], [[m]], rank=1)


@pytest.mark.parametrize("name,count", [("C2", 1), ("C3", 1), ("C4", 1), ("C6", 1), ("V4", 2)])
def test_norm_one_torus_counts(name, count):
    G = by_name(name)
    rep = r_equivalence_local(TorusSpec(G, norm_one_lattice(G)))
    assert rep.count == count
    assert rep.resolution.certified


@pytest.mark.parametrize("seed", [None, 1, 2, 3])
def test_torus_count_does_not_depend_on_the_resolution(seed):
    G = by_name("V4")
    assert r_equivalence_local(TorusSpec(G, norm_one_lattice(G)), seed=seed).count == 2


def test_split_and_quasi_split_tori_have_one_class():
    G = by_name("S3")
    for L in (permutation_lattice(G, G.whole()), permutation_lattice(G, G.trivial())):
        assert r_equivalence_local(TorusSpec(G, L)).count == 1


def test_torus_spec_rejects_torsion():
    with pytest.raises(TorsionInput):
        TorusSpec(by_name("C2"), z_mod(by_name("C2"), 2))


def test_quotient_invariants_sl2_and_gm():
    G = by_name("C2")
    M = z_mod(G, 2)
    zero = permutation_sum(G, [])
    inv = quotient_invariants(HomSpaceSpec(G, zero, M, GMap(zero, M, zmat([], (1, 0)))))
    assert inv.u_x.rank == 0 and inv.pic_x.abelian_invariants == FinAbGroup(0, (2,))
    Z = permutation_lattice(G, G.whole())
    inv = quotient_invariants(HomSpaceSpec(G, Z, M, GMap(Z, M, zmat([[1]]))))
    assert inv.u_x.rank == 1 and inv.pic_x.is_zero()
    assert inv.u_inclusion.matrix.tolist() == [[2]]


def test_second_construction_on_c2():
    G = by_name("C2")
    ZG = permutation_lattice(G, G.trivial())
    M = z_mod(G, 2)
    rep = second_construction(HomSpaceSpec(G, ZG, M, GMap(ZG, M, zmat([[1, 1]]))))
    assert rep.permutation_verdict.value is Verdict.YES
    assert rep.pic_y0.is_zero()
    assert rep.certificates["exactness"] and rep.certificates["u_flasque"]
    assert rep.u_y0.rank == ZG.rank + rep.s0.rank


def test_second_construction_rejects_bad_specs():
    G = by_name("C2")
    M = z_mod(G, 2)
    minus = character_lattice(G, [-1])
    # Ghat without a permutation certificate
    with pytest.raises(ConstructionFailure):
        second_construction(HomSpaceSpec(G, minus, M, GMap(minus, M, zmat([[1]]))))
    ZG = permutation_lattice(G, G.trivial())
    # non-equivariant restriction
    with pytest.raises(ConstructionFailure):
        second_construction(HomSpaceSpec(G, ZG, M, GMap(ZG, M, zmat([[1, 0]]))))
    problems = HomSpaceSpec(G, ZG, M, GMap(ZG, M, zmat([[1, 0]]))).problems()
    assert problems == ["restriction is not equivariant"]


def test_homspace_count_on_c2_and_argument_check():
    G = by_name("C2")
    ZG = permutation_lattice(G, G.trivial())
    M = z_mod(G, 2)
    spec = HomSpaceSpec(G, ZG, M, GMap(ZG, M, zmat([[1, 1]])))
    out = homspace_r_count(spec, g_classes=3)
    assert out["h1_factor"].order == 1 and out["total_lower_bound"] == 3
    with pytest.raises(ValueError):
        homspace_r_count(spec, g_classes=0)


@pytest.mark.parametrize("name", ["C2", "V4", "S3"])
def test_tower_certificates(name):
    G = by_name(name)
    T = coflasque_tower(norm_one_lattice(G))
    c = T.certificates
    assert c["p0_f0_s0_exact"] and c["e0_f0_m_exact"] and c["fingerprint_f0_equals_s0"]
    assert c["s0_flasque"] and c["q0_coflasque"]
    assert T.f0.rank == T.p0.rank + T.e0.rank - T.q0.rank


def test_tower_on_the_klein_norm_one_lattice_has_trivial_fingerprint():
    # J_V4 has the coflasque resolution 0 -> Z -> Z[G] -> J -> 0, so the
    # flasque lattice in the tower is permutation-like in cohomology.
    G = by_name("V4")
    T = coflasque_tower(norm_one_lattice(G))
    assert all(A.is_trivial for A in similarity_fingerprint(T.s0).values())


def test_tower_requires_a_lattice():
    with pytest.raises(TorsionInput):
        coflasque_tower(z_mod(by_name("C2"), 2))


def test_identity_restriction_gives_trivial_invariants():
    G = by_name("V4")
    P = permutation_lattice(G, G.trivial())
    inv = quotient_invariants(HomSpaceSpec(G, P, P, GMap(P, P, zmat(np.eye(4, dtype=np.int64)))))
    assert inv.u_x.rank == 0 and inv.pic_x.is_zero()
