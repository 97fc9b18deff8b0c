"""Finite permutation groups with full multiplication tables.

Elements are stored as image tuples on ``{0, ..., degree-1}``; the product
``elements[i] * elements[j]`` is the composition ``i after j``.  Every
"for all subgroups" sweep in the package runs over :func:`all_subgroups`.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

from .errors import GroupTooLarge, NotAPermutation, NotASubgroup

DEFAULT_MAX_ORDER = 64


def max_group_order() -> int:
    value = os.environ.get("FLASQUEKIT_MAX_GROUP_ORDER")
    return int(value) if value else DEFAULT_MAX_ORDER


def _compose(p, q):
    return tuple(p[x] for x in q)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    degree: int
    elements: tuple
    mult: tuple
    generators: tuple
    # word[i] = (j, s): elements[i] = elements[j] * elements[generators[s]]
    words: tuple
    identity_index: int = 0

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, degree={self.degree})"

    @cached_property
    def inverse(self) -> tuple:
        e = self.identity_index
        inv = [None] * self.order
        for i, row in enumerate(self.mult):
            inv[i] = row.index(e)
        return tuple(inv)

    def index(self, perm) -> int:
        return self._lookup[tuple(perm)]

    @cached_property
    def _lookup(self):
        return {p: i for i, p in enumerate(self.elements)}

    @cached_property
    def subgroups(self) -> tuple:
        return tuple(all_subgroups(self))

    def whole(self) -> "Subgroup":
        return Subgroup(tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup((self.identity_index,))

    def generated(self, indices) -> "Subgroup":
        return Subgroup(tuple(sorted(_closure(self, set(indices)))))

    def conjugate(self, H: "Subgroup", g: int) -> "Subgroup":
        gi = self.inverse[g]
        m = self.mult
        return Subgroup(tuple(sorted(m[m[g][h]][gi] for h in H.members)))

    @cached_property
    def subgroup_classes(self) -> tuple:
        """Conjugacy classes of subgroups, as tuples of Subgroups (sorted)."""
        seen = set()
        classes = []
        for H in self.subgroups:
            if H in seen:
                continue
            cls = sorted({self.conjugate(H, g) for g in range(self.order)})
            seen.update(cls)
            classes.append(tuple(cls))
        return tuple(classes)

    def is_subgroup(self, H: "Subgroup") -> bool:
        mem = set(H.members)
        if self.identity_index not in mem or not mem <= set(range(self.order)):
            return False
        m = self.mult
        return all(m[a][b] in mem for a in mem for b in mem)


@dataclass(frozen=True, order=True)
class Subgroup:
    members: tuple

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self._set

    @cached_property
    def _set(self):
        return frozenset(self.members)

    def sort_key(self):
        return (len(self.members), self.members)


def _closure(G, gens) -> set:
    m = G.mult
    found = {G.identity_index}
    frontier = [G.identity_index]
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = m[a][s]
                if b not in found:
                    found.add(b)
                    nxt.append(b)
        frontier = nxt
    return found


def close_generators(degree: int, gens, max_order: int | None = None) -> FiniteGroup:
    """Group generated by permutations given as 0-based image lists."""
    cap = max_order if max_order is not None else max_group_order()
    gens = [tuple(int(x) for x in g) for g in gens]
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise NotAPermutation(f"{list(g)} is not a permutation of 0..{degree - 1}")
    identity = tuple(range(degree))
    elements = [identity]
    lookup = {identity: 0}
    words = [(0, -1)]
    gen_idx = []
    # breadth-first over right multiplication by generators
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for s, g in enumerate(gens):
                p = _compose(elements[i], g)
                if p not in lookup:
                    if len(elements) >= cap:
                        raise GroupTooLarge(f"closure exceeds the order cap {cap}")
                    lookup[p] = len(elements)
                    elements.append(p)
                    words.append((i, s))
                    nxt.append(lookup[p])
        frontier = nxt
    for g in gens:
        gen_idx.append(lookup[g])
    n = len(elements)
    mult = tuple(tuple(lookup[_compose(elements[i], elements[j])] for j in range(n))
                 for i in range(n))
    return FiniteGroup(degree, tuple(elements), mult, tuple(gen_idx), tuple(words))


def all_subgroups(G: FiniteGroup) -> list:
    """Every subgroup exactly once, sorted by order then member indices."""
    cyclic = {frozenset(_closure(G, [g])) for g in range(G.order)}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for A in frontier:
            for C in cyclic:
                if C <= A:
                    continue
                J = frozenset(_closure(G, A | C))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    subs = [Subgroup(tuple(sorted(s))) for s in found]
    subs.sort(key=Subgroup.sort_key)
    return subs


def subgroup_generators(G: FiniteGroup, H: Subgroup) -> list:
    """A small generating set of H, chosen greedily in index order."""
    gens = []
    span = {G.identity_index}
    for h in H.members:
        if h not in span:
            gens.append(h)
            span = _closure(G, gens)
    return gens


@dataclass(frozen=True)
class CosetAction:
    subgroup: Subgroup
    representatives: tuple
    # perms[g][i] = index of coset g * representatives[i] * H
    perms: tuple
    coset_of: tuple = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.representatives)


def coset_action(G: FiniteGroup, H: Subgroup) -> CosetAction:
    """Left multiplication action of G on the left cosets gH."""
    if not G.is_subgroup(H):
        raise NotASubgroup(f"{H.members} is not a subgroup")
    m = G.mult
    coset_of = [None] * G.order
    reps = []
    for g in range(G.order):
        if coset_of[g] is None:
            c = len(reps)
            reps.append(g)
            for h in H.members:
                coset_of[m[g][h]] = c
    perms = tuple(tuple(coset_of[m[g][r]] for r in reps) for g in range(G.order))
    return CosetAction(H, tuple(reps), perms, tuple(coset_of))


# -- standard groups used by the corpus, the demos and the tests --

def cyclic(n: int) -> FiniteGroup:
    return close_generators(n, [[(i + 1) % n for i in range(n)]] if n > 1 else [[0]])


def trivial_group() -> FiniteGroup:
    return close_generators(1, [])


def klein_four() -> FiniteGroup:
    return close_generators(4, [[1, 0, 3, 2], [2, 3, 0, 1]])


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        return close_generators(max(n, 1), [])
    cycle = [(i + 1) % n for i in range(n)]
    swap = [1, 0] + list(range(2, n))
    return close_generators(n, [cycle, swap])


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return close_generators(n, [rot, ref])


def alternating(n: int) -> FiniteGroup:
    """Generated by the 3-cycles (0 1 i)."""
    gens = []
    for i in range(2, n):
        p = list(range(n))
        p[0], p[1], p[i] = 1, i, 0
        gens.append(p)
    return close_generators(n, gens)


def quaternion() -> FiniteGroup:
    """Q8 in its regular representation on 8 points."""
    # elements 1, i, j, k, -1, -i, -j, -k labelled 0..7
    table = {}
    units = ["1", "i", "j", "k"]
    prod = {("1", x): (1, x) for x in units}
    prod.update({(x, "1"): (1, x) for x in units})
    prod.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})

    def label(sign, u):
        return units.index(u) + (0 if sign == 1 else 4)

    for a in range(8):
        for b in range(8):
            sa, ua = (1 if a < 4 else -1), units[a % 4]
            sb, ub = (1 if b < 4 else -1), units[b % 4]
            s, u = prod[(ua, ub)]
            table[a, b] = label(sa * sb * s, u)
    # left multiplication by i and j
    gi = [table[1, x] for x in range(8)]
    gj = [table[2, x] for x in range(8)]
    return close_generators(8, [gi, gj])


def by_name(name: str) -> FiniteGroup:
    """Small named groups: C<n>, V4, S<n>, D<n> (order 2n), Q8, A4."""
    name = name.strip().upper()
    if name == "V4":
        return klein_four()
    if name == "Q8":
        return quaternion()
    if name in ("C1", "1", "TRIVIAL"):
        return trivial_group()
    kind, n = name[0], int(name[1:])
    if kind == "C":
        return cyclic(n)
    if kind == "S":
        return symmetric(n)
    if kind == "D":
        return dihedral(n)
    if kind == "A":
        return alternating(n)
    raise ValueError(f"unknown group name {name!r}")
