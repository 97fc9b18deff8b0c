"""A fixed corpus of small lattices used by the self-test and the test suite."""
from __future__ import annotations

import itertools

import numpy as np

from .errors import FlasqueKitError
from .groups import by_name
from .lattice import (
    GMap,
    as_lattice,
    character_lattice,
    cokernel_of_map,
    conjugate_lattice,
    direct_sum,
    kernel_of_map,
    permutation_lattice,
    trivial_lattice,
)

CORPUS_GROUPS = ("C2", "C3", "C4", "V4", "S3", "C6", "D4", "Q8")
MAX_RANK = 6


def augmentation_kernel(G, H):
    P = permutation_lattice(G, H)
    K, _ = kernel_of_map(GMap(P, trivial_lattice(G), np.ones((1, P.rank), dtype=np.int64)))
    return K


def norm_quotient(G, H):
    P = permutation_lattice(G, H)
    L, _, _ = as_lattice(cokernel_of_map(GMap(trivial_lattice(G), P, np.ones((P.rank, 1), dtype=np.int64))))
    return L


def sign_characters(G):
    """Every rank-one lattice, one per homomorphism G -> {+1, -1}."""
    out = []
    for signs in itertools.product((1, -1), repeat=len(G.generators)):
        if all(s == 1 for s in signs):
            continue
        try:
            out.append((signs, character_lattice(G, signs)))
        except FlasqueKitError:
            continue
    return out


def random_unimodular(n, rng, steps=6):
    X = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        X[:, j] += int(rng.choice((-1, 1))) * X[:, i]
    return X


def group_corpus(name, rng):
    G = by_name(name)
    items = []
    reps = [cls[0] for cls in G.subgroup_classes]
    for H in reps:
        index = G.order // H.order
        tag = f"{name}/{'x'.join(map(str, H.members))}"
        if index <= MAX_RANK:
            items.append((f"Z[{tag}]", permutation_lattice(G, H)))
        if 2 <= index <= MAX_RANK + 1:
            items.append((f"I[{tag}]", augmentation_kernel(G, H)))
            items.append((f"J[{tag}]", norm_quotient(G, H)))
    for signs, L in sign_characters(G):
        items.append((f"sign{list(signs)}[{name}]", L))
    base = list(items)
    for (na, A), (nb, B) in itertools.combinations(base[:6], 2):
        if A.rank + B.rank <= MAX_RANK and A.rank and B.rank:
            items.append((f"{na}+{nb}", direct_sum(A, B)))
    for label, L in base:
        if L.rank >= 2:
            items.append((f"conj({label})", conjugate_lattice(L, random_unimodular(L.rank, rng))))
    return items


def corpus(groups=CORPUS_GROUPS, seed=20240607):
    """List of (label, lattice) pairs, deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    out = []
    for name in groups:
        out.extend(group_corpus(name, rng))
    return out
