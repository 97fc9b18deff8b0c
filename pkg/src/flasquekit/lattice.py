"""G-lattices, finitely generated G-modules and equivariant maps.

Conventions: column vectors, left action.  ``rho(g)`` left-multiplies the
coordinate vectors of the free cover Z^m; a module is ``Z^m / R`` where R is
spanned by the columns of ``relations``.  Duals use ``rho(g^-1)^T``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GroupMismatch, NotARepresentation, NotUnimodular, TorsionInput
from .groups import FiniteGroup, Subgroup, coset_action, subgroup_generators
from .normal_forms import (
    Sublattice,
    determinant,
    hermite_rows,
    kernel_basis,
    smith_form,
    smith_invariants,
)

_I31 = 2**31
_I62 = 2**62


# -- integer matrix helpers ---------------------------------------------------

def zmat(a, shape=None) -> np.ndarray:
    """Integer matrix as int64 when entries are small, else as Python ints."""
    if isinstance(a, np.ndarray) and a.dtype == np.int64:
        arr = a
    else:
        arr = np.array(a, dtype=object)
        if shape is not None and arr.size == 0:
            arr = np.zeros(shape, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    if arr.dtype == object and arr.size:
        mx = max(abs(int(x)) for x in arr.flat)
        if mx < _I31:
            arr = arr.astype(np.int64)
    elif arr.dtype == object:
        arr = arr.astype(np.int64)
    return arr


def _maxabs(a):
    if a.size == 0:
        return 0
    if a.dtype == np.int64:
        return int(np.abs(a).max())
    return max(abs(int(x)) for x in a.flat)


def zmul(a, b) -> np.ndarray:
    """Exact product of integer matrices."""
    inner = a.shape[1]
    if a.dtype == np.int64 and b.dtype == np.int64:
        if _maxabs(a) * _maxabs(b) * max(inner, 1) < _I62:
            return zmat(a @ b)
    return zmat(a.astype(object) @ b.astype(object))


def zeye(n) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rows_of(a) -> list:
    """Matrix rows as lists of Python ints."""
    return [[int(x) for x in r] for r in a.tolist()]


def cols_of(a) -> list:
    return rows_of(a.T)


def block_diag(*mats) -> np.ndarray:
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    obj = any(m.dtype == object for m in mats)
    out = np.zeros((r, c), dtype=object if obj else np.int64)
    i = j = 0
    for m in mats:
        out[i:i + m.shape[0], j:j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return zmat(out)


def hstack(mats, nrows) -> np.ndarray:
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return np.zeros((nrows, 0), dtype=np.int64)
    if any(m.dtype == object for m in mats):
        mats = [m.astype(object) for m in mats]
    return zmat(np.hstack(mats))


def vstack(mats, ncols) -> np.ndarray:
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return np.zeros((0, ncols), dtype=np.int64)
    if any(m.dtype == object for m in mats):
        mats = [m.astype(object) for m in mats]
    return zmat(np.vstack(mats))


def from_cols(cols, nrows) -> np.ndarray:
    if not cols:
        return np.zeros((nrows, 0), dtype=np.int64)
    return zmat(np.array(cols, dtype=object).T.copy())


# -- finitely generated abelian groups -----------------------------------------

@dataclass(frozen=True)
class FinAbGroup:
    free_rank: int = 0
    invariant_factors: tuple = ()

    def __post_init__(self):
        d = self.invariant_factors
        for a, b in zip(d, d[1:]):
            if b % a:
                raise ValueError(f"invariant factors {d} do not form a divisibility chain")
        if any(x < 2 for x in d):
            raise ValueError("invariant factors must be at least 2")

    @classmethod
    def from_diagonal(cls, diag, free_rank=0):
        """Build from a Smith diagonal; units are dropped, zeros count as free."""
        diag = [abs(int(x)) for x in diag]
        free = free_rank + sum(1 for x in diag if x == 0)
        return cls(free, tuple(sorted(x for x in diag if x > 1)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self):
        if self.free_rank:
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def __add__(self, other):
        # direct sum: merge elementary divisors back into invariant factors
        from sympy import factorint

        powers = {}
        for d in self.invariant_factors + other.invariant_factors:
            for p, e in factorint(d).items():
                powers.setdefault(p, []).append(p**e)
        length = max((len(v) for v in powers.values()), default=0)
        factors = [1] * length
        for p, vals in powers.items():
            vals.sort(reverse=True)
            for i, v in enumerate(vals):
                factors[length - 1 - i] *= v
        return FinAbGroup(self.free_rank + other.free_rank, tuple(factors))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " x ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}


def subquotient(big_gens, small_gens, n) -> FinAbGroup:
    """The group Lambda_big / Lambda_small for sublattices of Z^n (small inside big)."""
    big = Sublattice(big_gens, n)
    coords = []
    for v in small_gens:
        c = big.coords(v)
        if c is None:
            raise ValueError("subquotient: small lattice is not contained in big lattice")
        coords.append(c)
    diag = smith_invariants(coords, big.rank) if coords and big.rank else []
    return FinAbGroup.from_diagonal(diag, free_rank=big.rank - len(diag))


# -- permutation certificates --------------------------------------------------

@dataclass(frozen=True)
class PermutationStructure:
    """Blocks Z[G/H] in order; each entry is (Subgroup, multiplicity)."""

    summands: tuple

    @property
    def blocks(self):
        for H, mult in self.summands:
            for _ in range(mult):
                yield H

    def matrices(self, G: FiniteGroup):
        blocks = [_coset_matrices(G, H) for H in self.blocks]
        return [block_diag(*(b[g] for b in blocks)) if blocks else zmat(np.zeros((0, 0), dtype=np.int64))
                for g in range(G.order)]

    def rank(self, G: FiniteGroup):
        return sum(G.order // H.order for H in self.blocks)

    def verify(self, L: "GModule") -> bool:
        if L.relations.shape[1] or self.rank(L.group) != L.rank:
            return False
        return all(np.array_equal(a, b) for a, b in zip(self.matrices(L.group), L.matrices))


def _coset_matrices(G, H):
    act = coset_action(G, H)
    n = act.size
    mats = []
    for g in range(G.order):
        m = np.zeros((n, n), dtype=np.int64)
        for i, j in enumerate(act.perms[g]):
            m[j, i] = 1
        mats.append(m)
    return mats


# -- modules -------------------------------------------------------------------

def _close_action(G: FiniteGroup, gen_mats, n):
    mats = [None] * G.order
    mats[G.identity_index] = zeye(n)
    for i in range(1, G.order):
        j, s = G.words[i]
        mats[i] = zmul(mats[j], gen_mats[s])
    return mats


def _is_hom(G, mats, n):
    if not np.array_equal(mats[G.identity_index], zeye(n)):
        return False
    for g in range(G.order):
        for s in G.generators:
            if not np.array_equal(zmul(mats[g], mats[s]), mats[G.mult[g][s]]):
                return False
    return True


def _canonical_relations(rel_cols, n):
    rows = hermite_rows(rel_cols, n)
    return from_cols(rows, n)


@dataclass(frozen=True, eq=False)
class GModule:
    """Z^rank / (column span of ``relations``) with a G-action on the cover."""

    group: FiniteGroup
    matrices: tuple
    relations: np.ndarray
    permutation: PermutationStructure | None = None

    @property
    def rank(self) -> int:
        """Rank of the free cover."""
        return self.relations.shape[0]

    @property
    def is_lattice(self) -> bool:
        return self.relations.shape[1] == 0

    def action(self, g: int) -> np.ndarray:
        return self.matrices[g]

    @cached_property
    def relation_lattice(self) -> Sublattice:
        return Sublattice(cols_of(self.relations), self.rank)

    @cached_property
    def abelian_invariants(self) -> FinAbGroup:
        """The underlying abelian group Z^m / R."""
        if self.is_lattice:
            return FinAbGroup(self.rank)
        diag = smith_invariants(cols_of(self.relations), self.rank)
        return FinAbGroup.from_diagonal(diag, free_rank=self.rank - len(diag))

    @property
    def is_torsion_free(self) -> bool:
        return not self.abelian_invariants.invariant_factors

    def is_zero(self) -> bool:
        return self.abelian_invariants.is_trivial

    def __repr__(self):
        kind = "GLattice" if self.is_lattice else "GModule"
        return f"{kind}(rank={self.rank}, |G|={self.group.order}, Z-structure={self.abelian_invariants})"


class GLattice(GModule):
    """A G-module whose underlying group is Z^rank."""


def _make(G, mats, relations=None, permutation=None):
    n = mats[0].shape[0] if mats else 0
    if relations is None or relations.shape[1] == 0:
        return GLattice(G, tuple(mats), np.zeros((n, 0), dtype=np.int64), permutation)
    return GModule(G, tuple(mats), relations, None)


def validate_lattice(G: FiniteGroup, gen_matrices, rank=None) -> GLattice:
    """Certified lattice from one matrix per generator of G."""
    gens = [zmat(m) for m in gen_matrices]
    if len(gens) != len(G.generators):
        raise NotARepresentation(f"expected {len(G.generators)} generator matrices, got {len(gens)}")
    n = rank if rank is not None else (gens[0].shape[0] if gens else 0)
    for s, m in enumerate(gens):
        if m.shape != (n, n):
            raise NotARepresentation(f"generator {s}: matrix is not {n}x{n}")
        if abs(determinant(rows_of(m))) != 1:
            raise NotUnimodular(f"generator {s}: determinant is not +-1")
    mats = _close_action(G, [m.reshape(n, n) for m in gens], n)
    if not _is_hom(G, mats, n):
        raise NotARepresentation("matrices do not define a homomorphism")
    return _make(G, mats)


def validate_module(G: FiniteGroup, gen_matrices, relation_cols, rank=None) -> GModule:
    """Certified module Z^m / R; R given by generating vectors."""
    gens = [zmat(m, (rank, rank)) if rank is not None else zmat(m) for m in gen_matrices]
    n = rank if rank is not None else (gens[0].shape[0] if gens else 0)
    rel = _canonical_relations([list(map(int, c)) for c in relation_cols], n)
    if len(gens) != len(G.generators):
        raise NotARepresentation(f"expected {len(G.generators)} generator matrices, got {len(gens)}")
    for s, m in enumerate(gens):
        if m.shape != (n, n):
            raise NotARepresentation(f"generator {s}: matrix is not {n}x{n}")
    mats = _close_action(G, gens, n)
    M = _make(G, mats, rel)
    lat = M.relation_lattice
    for s, m in enumerate(gens):
        if not lat.contains_all(cols_of(zmul(m, rel))):
            raise NotARepresentation(f"generator {s} does not preserve the relations")
    if not _is_hom_mod(G, mats, M):
        raise NotARepresentation("matrices do not define a homomorphism on the quotient")
    # invertibility on the quotient: rho(g) rho(g^-1) = 1 follows from the
    # homomorphism check modulo relations
    return M


def _is_hom_mod(G, mats, M):
    lat = M.relation_lattice
    n = M.rank
    if not lat.contains_all(cols_of(mats[G.identity_index] - zeye(n))):
        return False
    for g in range(G.order):
        for s in G.generators:
            diff = zmul(mats[g], mats[s]) - mats[G.mult[g][s]]
            if not lat.contains_all(cols_of(diff)):
                return False
    return True


def trivial_lattice(G: FiniteGroup, rank: int = 1) -> GLattice:
    return permutation_sum(G, [G.whole()] * rank) if rank else zero_lattice(G)


def zero_lattice(G: FiniteGroup) -> GLattice:
    z = np.zeros((0, 0), dtype=np.int64)
    return GLattice(G, tuple(z for _ in range(G.order)), np.zeros((0, 0), dtype=np.int64),
                    PermutationStructure(()))


def character_lattice(G: FiniteGroup, signs) -> GLattice:
    """Rank-one lattice with generator s acting by signs[s] (each +-1)."""
    return validate_lattice(G, [[[int(x)]] for x in signs])


def permutation_lattice(G: FiniteGroup, H: Subgroup) -> GLattice:
    """Z[G/H] on the basis of left cosets."""
    mats = _coset_matrices(G, H)
    return GLattice(G, tuple(mats), np.zeros((len(mats[0]), 0), dtype=np.int64),
                    PermutationStructure(((H, 1),)))


def permutation_sum(G: FiniteGroup, subgroups) -> GLattice:
    """Direct sum of Z[G/H] over the given subgroups, in order."""
    summands = []
    for H in subgroups:
        if summands and summands[-1][0] == H:
            summands[-1] = (H, summands[-1][1] + 1)
        else:
            summands.append((H, 1))
    ps = PermutationStructure(tuple(summands))
    mats = ps.matrices(G)
    n = ps.rank(G)
    return GLattice(G, tuple(mats), np.zeros((n, 0), dtype=np.int64), ps)


def detect_permutation_structure(L: GModule) -> PermutationStructure | None:
    """Recover a PermutationStructure when all matrices permute the standard basis.

    The basis is reordered only if it already comes in coset blocks; otherwise
    None is returned even for monomial 0/1 actions.
    """
    if not L.is_lattice:
        return None
    G = L.group
    for m in L.matrices:
        if m.size and (not ((m == 0) | (m == 1)).all() or not (m.sum(axis=0) == 1).all()):
            return None
    summands = []
    pos = 0
    n = L.rank
    while pos < n:
        orbit = sorted({int(np.nonzero(L.matrices[g][:, pos])[0][0]) for g in range(G.order)})
        if orbit != list(range(pos, pos + len(orbit))):
            return None
        stab = Subgroup(tuple(g for g in range(G.order) if L.matrices[g][pos, pos] == 1))
        summands.append((stab, 1))
        pos += len(orbit)
    ps = PermutationStructure(tuple(summands))
    return ps if ps.verify(L) else None


def with_permutation(L: GLattice, ps: PermutationStructure) -> GLattice:
    if not ps.verify(L):
        raise ValueError("permutation certificate does not match the action")
    return GLattice(L.group, L.matrices, L.relations, ps)


def dual(L: GModule) -> GLattice:
    """The dual lattice, rho0(g) = rho(g^-1)^T."""
    if not L.is_lattice:
        raise TorsionInput("dual requires a torsion-free lattice")
    G = L.group
    mats = [zmat(L.matrices[G.inverse[g]].T.copy()) for g in range(G.order)]
    return GLattice(G, tuple(mats), L.relations, L.permutation)


def direct_sum(A: GModule, B: GModule) -> GModule:
    if A.group is not B.group:
        raise GroupMismatch("direct sum of modules over different groups")
    mats = [block_diag(a, b) for a, b in zip(A.matrices, B.matrices)]
    rel = block_diag(A.relations, B.relations)
    if rel.shape[1] == 0:
        ps = None
        if A.permutation is not None and B.permutation is not None:
            ps = PermutationStructure(A.permutation.summands + B.permutation.summands)
        return GLattice(A.group, tuple(mats), rel, ps)
    return GModule(A.group, tuple(mats), rel)


def direct_sum_all(mods, G=None) -> GModule:
    mods = list(mods)
    if not mods:
        return zero_lattice(G)
    out = mods[0]
    for m in mods[1:]:
        out = direct_sum(out, m)
    return out


def conjugate_lattice(L: GLattice, X) -> GLattice:
    """The same lattice written in the basis given by the columns of unimodular X."""
    X = zmat(X)
    Xinv = inverse_unimodular(X)
    mats = [zmul(zmul(Xinv, m), X) for m in L.matrices]
    return GLattice(L.group, tuple(mats), L.relations, None)


def inverse_unimodular(X) -> np.ndarray:
    n = X.shape[0]
    diag, U, _, V = smith_form(rows_of(X), n, n)
    if len(diag) != n or any(d != 1 for d in diag):
        raise NotUnimodular("matrix is not invertible over Z")
    # U X V = I  =>  X^-1 = V U
    return zmul(zmat(V, (n, n)), zmat(U, (n, n)))


# -- maps ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GMap:
    """Equivariant map given by an integer matrix between free covers."""

    source: GModule
    target: GModule
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise ValueError(f"map matrix has shape {self.matrix.shape}, expected "
                             f"{(self.target.rank, self.source.rank)}")

    def is_equivariant(self) -> bool:
        lat = self.target.relation_lattice
        G = self.source.group
        f = self.matrix
        if self.source.relations.shape[1]:
            if not lat.contains_all(cols_of(zmul(f, self.source.relations))):
                return False
        for g in range(G.order):
            diff = zmul(f, self.source.matrices[g]) - zmul(self.target.matrices[g], f)
            if self.target.is_lattice:
                if diff.any():
                    return False
            elif not lat.contains_all(cols_of(diff)):
                return False
        return True

    def compose(self, other: "GMap") -> "GMap":
        """self after other."""
        return GMap(other.source, self.target, zmul(self.matrix, other.matrix))


def certified_map(source, target, matrix) -> GMap:
    f = GMap(source, target, zmat(matrix, (target.rank, source.rank)))
    if not f.is_equivariant():
        raise NotARepresentation("map is not equivariant")
    return f


def _induced_action(G, basis_rows, mats, n):
    """Action on the sublattice with the given Hermite basis (rows)."""
    sub = Sublattice(basis_rows, n)
    r = sub.rank
    B = from_cols(sub.rows, n)
    gens = []
    for s in G.generators:
        img = zmul(mats[s], B)
        cols = []
        for v in cols_of(img):
            c = sub.coords(v)
            if c is None:
                raise NotARepresentation("sublattice is not stable under the action")
            cols.append(c)
        gens.append(from_cols(cols, r))
    return B, _close_action(G, gens, r)


def preimage_basis(A, rel_cols, nrows_target, n):
    """Hermite basis (rows) of {v in Z^n : A v in span(rel_cols)}."""
    A_rows = rows_of(A)
    if not rel_cols:
        return kernel_basis(A_rows, n)
    # SNF of the relations: only the coordinates with non-unit divisors constrain v
    k = len(rel_cols)
    R = [[c[i] for c in rel_cols] for i in range(nrows_target)]
    diag, U, _, _ = smith_form(R, nrows_target, k)
    UA = [[sum(u * a for u, a in zip(urow, col)) for col in zip(*A_rows)] if A_rows else [0] * n
          for urow in U]
    eq_rows = []
    mod_rows = []
    for i, row in enumerate(UA):
        d = diag[i] if i < len(diag) else 0
        if d == 1:
            continue
        if d == 0:
            eq_rows.append(row)
        else:
            mod_rows.append((row, d))
    system = [list(r) + [0] * len(mod_rows) for r in eq_rows]
    for t, (row, d) in enumerate(mod_rows):
        system.append(list(row) + [d if u == t else 0 for u in range(len(mod_rows))])
    ker = kernel_basis(system, n + len(mod_rows))
    return hermite_rows([v[:n] for v in ker], n)


def kernel_of_map(f: GMap):
    """(kernel lattice, inclusion map); the kernel is saturated when the target is a lattice."""
    src, tgt = f.source, f.target
    if not src.is_lattice:
        raise TorsionInput("kernel_of_map requires a torsion-free source")
    n = src.rank
    rows = preimage_basis(f.matrix, cols_of(tgt.relations), tgt.rank, n)
    B, mats = _induced_action(src.group, rows, src.matrices, n)
    K = _make(src.group, mats)
    inc = GMap(K, src, B)
    return K, inc


def cokernel_of_map(f: GMap) -> GModule:
    tgt = f.target
    rel = _canonical_relations(cols_of(tgt.relations) + cols_of(f.matrix), tgt.rank)
    return _make(tgt.group, list(tgt.matrices), rel)


def as_lattice(M: GModule):
    """Torsion-free module -> (lattice L, quotient matrix pi, section matrix sigma).

    ``pi`` maps the cover of M onto L with kernel the relations; ``sigma`` is
    a right inverse of ``pi``.
    """
    m = M.rank
    if M.is_lattice:
        return M, zeye(m), zeye(m)
    k = M.relations.shape[1]
    diag, U, Uinv, _ = smith_form(rows_of(M.relations), m, k)
    if any(d != 1 for d in diag):
        raise TorsionInput(f"module has torsion {M.abelian_invariants}")
    r = len(diag)
    pi = zmat([row for row in U[r:]], (m - r, m))
    sigma = zmat([row[r:] for row in Uinv], (m, m - r))
    mats = [zmul(zmul(pi, a), sigma) for a in M.matrices]
    return _make(M.group, mats), pi, sigma


def fixed_sublattice(L: GModule, H: Subgroup) -> np.ndarray:
    """Columns form a Z-basis of the vectors fixed by H (modulo relations for modules)."""
    G = L.group
    n = L.rank
    gens = subgroup_generators(G, H)
    if not gens:
        return zeye(n)
    A = vstack([L.matrices[s] - zeye(n) for s in gens], n)
    rel = cols_of(L.relations)
    rel_big = []
    for b in range(len(gens)):
        for c in rel:
            v = [0] * (n * len(gens))
            v[b * n:(b + 1) * n] = c
            rel_big.append(v)
    rows = preimage_basis(A, rel_big, n * len(gens), n)
    return from_cols(rows, n)


def norm_endomorphism(L: GModule, H: Subgroup) -> np.ndarray:
    n = L.rank
    total = np.zeros((n, n), dtype=object)
    for h in H.members:
        total = total + L.matrices[h].astype(object)
    return zmat(total, (n, n))


def fixed_rank_profile(L: GModule):
    """Rank of L^H for every subgroup H (in group.subgroups order)."""
    return tuple(fixed_sublattice(L, H).shape[1] for H in L.group.subgroups)
