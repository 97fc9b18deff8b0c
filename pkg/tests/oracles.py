"""Independent reference implementations used to freeze expected values.

None of these touch flasquekit's normal forms or cohomology code: groups
are closed by brute force over permutation tuples, subgroups are found by
testing every subset, and H^1 is counted through the sequence
0 -> L^H / q^j -> (L / q^j L)^H -> H^1[q^j] -> 0.
"""
from __future__ import annotations

import itertools
import math

import numpy as np
import sympy


def compose(p, q):
    return tuple(p[x] for x in q)


def brute_closure(gens, degree):
    identity = tuple(range(degree))
    found = {identity}
    changed = True
    while changed:
        changed = False
        for a in list(found):
            for g in gens:
                b = compose(a, tuple(g))
                if b not in found:
                    found.add(b)
                    changed = True
    return found


def brute_subgroup_count(elements):
    """Number of subsets containing the identity that are closed under composition."""
    elements = sorted(elements)
    identity = tuple(range(len(elements[0])))
    others = [e for e in elements if e != identity]
    count = 0
    for mask in range(1 << len(others)):
        subset = {identity} | {others[i] for i in range(len(others)) if mask >> i & 1}
        if all(compose(a, b) in subset for a in subset for b in subset):
            count += 1
    return count


def _matrices(L, members):
    return [np.array(L.matrices[h].tolist(), dtype=np.int64) for h in members]


def fixed_rank(L, members):
    n = L.rank
    if n == 0:
        return 0
    M = sympy.Matrix.vstack(*[sympy.Matrix(m.tolist()) - sympy.eye(n) for m in _matrices(L, members)])
    return n - M.rank()


def fixed_count_mod(L, members, modulus):
    """|(L / modulus L)^H| by enumerating every residue vector."""
    n = L.rank
    if n == 0:
        return 1
    mats = [m % modulus for m in _matrices(L, members)]
    grid = np.array(list(itertools.product(range(modulus), repeat=n)), dtype=np.int64).T
    keep = np.ones(grid.shape[1], dtype=bool)
    for m in mats:
        keep &= (((m @ grid) - grid) % modulus == 0).all(axis=0)
    return int(keep.sum())


def h1_invariant_factors(L, members):
    """Invariant factors of H^1(H, L) for a lattice L (rank <= 6, |H| <= 8)."""
    k = len(members)
    if k == 1 or L.rank == 0:
        return ()
    r = fixed_rank(L, members)
    # number of cyclic factors of order >= p^j, for each prime p and j
    factors = []
    for p, e in sympy.factorint(k).items():
        sizes = [1]
        for j in range(1, e + 1):
            q = p**j
            total = fixed_count_mod(L, members, q)
            torsion = total // q**r
            assert total % q**r == 0
            sizes.append(torsion)
        at_least = [round(math.log(sizes[j] // sizes[j - 1], p)) for j in range(1, e + 1)]
        # at_least[j-1] = number of cyclic p-factors of order >= p^j
        exps = []
        for j in range(e, 0, -1):
            more = at_least[j - 1] - (at_least[j] if j < e else 0)
            exps += [j] * more
        factors.append((p, sorted(exps)))
    length = max((len(x) for _, x in factors), default=0)
    inv = [1] * length
    for p, exps in factors:
        exps = [0] * (length - len(exps)) + exps
        for i, x in enumerate(exps):
            inv[i] *= p**x
    return tuple(d for d in inv if d > 1)


def determinantal_invariants(rows, ncols):
    """Nonunit invariant factors of coker(A) from gcds of minors (A given by rows)."""
    A = sympy.Matrix(rows) if rows else sympy.zeros(0, ncols)
    m, n = A.shape
    prev = 1
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in itertools.combinations(range(m), k):
            for c in itertools.combinations(range(n), k):
                g = math.gcd(g, int(A.extract(list(r), list(c)).det()))
                if g == prev:
                    break
            if g == prev:
                break
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(d for d in out if d > 1)
