import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flasquekit.errors import GroupTooLarge, NotAPermutation, NotASubgroup
from flasquekit.groups import Subgroup, all_subgroups, by_name, close_generators, coset_action

from oracles import brute_closure, brute_subgroup_count

NAMES = ["C2", "C3", "C4", "C6", "V4", "S3", "D4", "Q8", "A4"]


@pytest.mark.parametrize("degree,gens,order", [
    (2, [[1, 0]], 2),
    (3, [[1, 2, 0], [1, 0, 2]], 6),
    (4, [[1, 0, 2, 3], [0, 1, 3, 2]], 4),
])
def test_close_generators_orders(degree, gens, order):
    assert close_generators(degree, gens).order == order
    assert len(brute_closure(gens, degree)) == order


def test_close_generators_rejects_bad_input(monkeypatch):
    with pytest.raises(NotAPermutation):
        close_generators(3, [[0, 0, 1]])
    with pytest.raises(NotAPermutation):
        close_generators(3, [[0, 1]])
    with pytest.raises(GroupTooLarge):
        close_generators(5, [[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]], max_order=64)
    monkeypatch.setenv("FLASQUEKIT_MAX_GROUP_ORDER", "5")
    with pytest.raises(GroupTooLarge):
        close_generators(3, [[1, 2, 0], [1, 0, 2]])


def test_multiplication_table_is_composition():
    G = by_name("S3")
    for i, a in enumerate(G.elements):
        for j, b in enumerate(G.elements):
            assert G.elements[G.mult[i][j]] == tuple(a[x] for x in b)
    assert G.elements[G.identity_index] == (0, 1, 2)


@pytest.mark.parametrize("name,count", [("C2", 2), ("V4", 5), ("S3", 6)])
def test_subgroup_counts_spec(name, count):
    assert len(all_subgroups(by_name(name))) == count


@pytest.mark.parametrize("name", ["C4", "C6", "D4", "Q8", "S3", "V4"])
def test_subgroup_counts_match_subset_oracle(name):
    G = by_name(name)
    assert len(G.subgroups) == brute_subgroup_count(G.elements)


@pytest.mark.parametrize("name", NAMES)
def test_subgroups_sorted_lagrange_and_conjugation_closed(name):
    G = by_name(name)
    subs = G.subgroups
    assert len(set(subs)) == len(subs)
    assert list(subs) == sorted(subs, key=Subgroup.sort_key)
    assert subs[0].order == 1 and subs[-1].order == G.order
    for H in subs:
        assert G.order % H.order == 0
        assert G.is_subgroup(H)
        for g in range(G.order):
            assert G.conjugate(H, g) in subs


@pytest.mark.parametrize("name", NAMES)
def test_coset_action_is_homomorphism(name):
    G = by_name(name)
    for H in G.subgroups:
        act = coset_action(G, H)
        assert act.size == G.order // H.order
        for a in range(G.order):
            for b in range(G.order):
                lhs = tuple(act.perms[a][act.perms[b][i]] for i in range(act.size))
                assert lhs == act.perms[G.mult[a][b]]


def test_coset_action_examples():
    G = by_name("S3")
    whole = coset_action(G, G.whole())
    assert whole.size == 1 and all(p == (0,) for p in whole.perms)
    regular = coset_action(G, G.trivial())
    assert regular.size == 6
    assert sorted(len({p[i] for p in regular.perms}) for i in range(6)) == [6] * 6
    order_two = [H for H in G.subgroups if H.order == 2][0]
    natural = coset_action(G, order_two)
    assert natural.size == 3
    assert len(set(natural.perms)) == 6      # faithful on three points, so isomorphic to S3
    with pytest.raises(NotASubgroup):
        coset_action(G, Subgroup((0, 1, 2)))


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(5)), st.permutations(range(5)))
def test_closure_matches_brute_force(p, q):
    try:
        G = close_generators(5, [list(p), list(q)])
    except GroupTooLarge:
        return
    assert set(G.elements) == brute_closure([p, q], 5)
