"""Algebraic tori through their character lattices.

A torus split by a finite Galois group G is described by its character
lattice; the flasque part S of a resolution 0 -> T^ -> E^ -> S^ -> 0 carries
the R-equivalence invariant.  Over a p-adic field with splitting group G the
number of R-equivalence classes is the order of H^-1(G, dual(S^)).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cohomology import tate_cohomology
from .errors import TorsionInput
from .groups import FiniteGroup
from .lattice import FinAbGroup, GLattice, GMap, as_lattice, cokernel_of_map, dual, permutation_lattice, trivial_lattice
from .resolutions import Resolution, permutation_embedding, similarity_fingerprint


@dataclass(frozen=True, eq=False)
class TorusSpec:
    group: FiniteGroup
    characters: GLattice

    def __post_init__(self):
        if not self.characters.is_lattice:
            raise TorsionInput("a character lattice must be torsion-free")


@dataclass(frozen=True, eq=False)
class REquivReport:
    flasque_part: GLattice
    count_group: FinAbGroup
    fingerprint: dict
    resolution: Resolution

    @property
    def count(self) -> int:
        return self.count_group.order


def norm_one_lattice(G: FiniteGroup) -> GLattice:
    """Z[G] / Z(sum of all g): characters of the norm-one torus."""
    ZG = permutation_lattice(G, G.trivial())
    norm = GMap(trivial_lattice(G), ZG, np.ones((G.order, 1), dtype=np.int64))
    L, _, _ = as_lattice(cokernel_of_map(norm))
    return L


def torus_flasque_resolution(T: TorusSpec, seed: int | None = None) -> Resolution:
    return permutation_embedding(T.characters, seed=seed)


def r_equivalence_local(T: TorusSpec, seed: int | None = None) -> REquivReport:
    res = torus_flasque_resolution(T, seed=seed)
    S = res.quot
    count = tate_cohomology(-1, T.group.whole(), dual(S))
    return REquivReport(S, count, similarity_fingerprint(S), res)
