import pytest

from flasquekit.cohomology import (
    _h1_exact,
    _spanning_tree,
    h1_full_table,
    invariants,
    is_coflasque,
    is_flasque,
    tate_cohomology,
)
from flasquekit.corpus import corpus
from flasquekit.errors import ShiftBoundExceeded, TorsionInput, TorsionUnsupportedDegree
from flasquekit.groups import by_name
from flasquekit.lattice import (
    FinAbGroup,
    character_lattice,
    dual,
    permutation_lattice,
    validate_module,
)
from flasquekit.tori import norm_one_lattice

CORPUS = corpus(("C2", "C3", "C4", "V4", "S3", "C6"))
Z2 = FinAbGroup(0, (2,))
ZERO = FinAbGroup()


def test_sign_and_trivial_characters_of_c2():
    G = by_name("C2")
    minus = character_lattice(G, [-1])
    triv = permutation_lattice(G, G.whole())
    W = G.whole()
    for n in range(-3, 4):
        odd = n % 2 == 1
        assert tate_cohomology(n, W, minus) == (Z2 if odd else ZERO)
        assert tate_cohomology(n, W, triv) == (ZERO if odd else Z2)


def test_norm_one_torus_of_klein_four():
    # DERIVED by hand: J = Z[G]/Z and I = ker(Z[G] -> Z) shift the cohomology
    # of Z by one in opposite directions; H^0(V4, Z) = Z/4, H^1 = 0,
    # H^2 = Hom(V4, Q/Z) = (Z/2)^2, H^3 = Z/2, H^-2 = V4.
    G = by_name("V4")
    W = G.whole()
    J = norm_one_lattice(G)
    assert tate_cohomology(-1, W, J) == FinAbGroup(0, (4,))
    assert tate_cohomology(0, W, J) == ZERO
    assert tate_cohomology(1, W, J) == FinAbGroup(0, (2, 2))
    assert tate_cohomology(2, W, J) == Z2
    I = dual(J)
    assert tate_cohomology(-1, W, I) == FinAbGroup(0, (2, 2))
    assert tate_cohomology(0, W, I) == ZERO
    assert tate_cohomology(1, W, I) == FinAbGroup(0, (4,))


def test_trivial_subgroup_and_zero_lattice():
    G = by_name("S3")
    P = permutation_lattice(G, G.trivial())
    for n in range(-2, 3):
        assert tate_cohomology(n, G.trivial(), P).is_trivial


def test_torsion_module_degrees():
    G = by_name("C2")
    M = validate_module(G, [[[1]]], [[2]], rank=1)
    assert tate_cohomology(0, G.whole(), M) == Z2
    assert tate_cohomology(1, G.whole(), M) == Z2
    assert invariants(M, G.whole()) == Z2
    with pytest.raises(TorsionUnsupportedDegree):
        tate_cohomology(-1, G.whole(), M)
    with pytest.raises(TorsionUnsupportedDegree):
        tate_cohomology(2, G.whole(), M)
    with pytest.raises(TorsionInput):
        is_flasque(M)


def test_shift_bound():
    G = by_name("C2")
    L = character_lattice(G, [-1])
    with pytest.raises(ShiftBoundExceeded):
        tate_cohomology(4, G.whole(), L)
    assert tate_cohomology(5, G.whole(), L, shift_bound=5) == Z2


def test_invariants_are_ordinary_h0():
    G = by_name("C3")
    P = permutation_lattice(G, G.trivial())
    assert invariants(P, G.whole()) == FinAbGroup(1)
    assert tate_cohomology(0, G.whole(), P) == ZERO


@pytest.mark.parametrize("label,L", CORPUS[::3], ids=[c[0] for c in CORPUS[::3]])
def test_cyclic_periodicity(label, L):
    for H in L.group.subgroups:
        gens, _ = _spanning_tree(L.group, H)
        if len(gens) != 1:
            continue
        for n in (-1, 0):
            assert tate_cohomology(n, H, L) == tate_cohomology(n + 2, H, L)


@pytest.mark.parametrize("label,L", CORPUS[::2], ids=[c[0] for c in CORPUS[::2]])
def test_tate_duality_orders(label, L):
    D = dual(L)
    for H in L.group.subgroups:
        for n in (0, 1, 2):
            assert tate_cohomology(n, H, D).order == tate_cohomology(-n, H, L).order


@pytest.mark.parametrize("label,L", CORPUS[::4], ids=[c[0] for c in CORPUS[::4]])
def test_certified_path_agrees_with_exact_solver(label, L):
    G = L.group
    for H in G.subgroups:
        if H.order == 1:
            continue
        gens, steps = _spanning_tree(G, H)
        assert h1_full_table(L, H) == _h1_exact(L, H, gens, steps)


def test_cohomology_is_killed_by_the_group_order():
    for label, L in CORPUS:
        for H in L.group.subgroups:
            for n in (-1, 0, 1):
                A = tate_cohomology(n, H, L)
                assert A.is_finite
                assert all(H.order % d == 0 for d in A.invariant_factors), (label, n)


def test_class_checks_report_witnesses():
    G = by_name("C2")
    minus = character_lattice(G, [-1])
    chk = is_coflasque(minus)
    assert not chk and chk.witness_subgroup == G.whole() and chk.witness_group == Z2
    assert not is_flasque(minus)
    P = permutation_lattice(G, G.trivial())
    assert is_flasque(P) and is_coflasque(P)
