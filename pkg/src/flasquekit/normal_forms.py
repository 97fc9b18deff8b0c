"""Exact Hermite / Smith normal forms over Z with Python integers.

Matrices are lists of rows.  Sublattices of Z^n are carried around as
row-style Hermite bases: rows in echelon form, positive pivots, entries
above each pivot reduced into ``[0, pivot)``.
"""
from __future__ import annotations


def xgcd(a, b):
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _leading(vec, start, limit):
    for j in range(start, limit):
        if vec[j]:
            return j
    return limit


def _insert(basis, vec, limit):
    """Reduce ``vec`` into the echelon dict ``basis`` (pivot column -> row).

    Only columns below ``limit`` may carry pivots.  Row operations are
    unimodular on the pair (basis row, vec).  Returns the residue if its
    first ``limit`` entries vanish, otherwise None (vec was absorbed).
    """
    j = _leading(vec, 0, limit)
    while j < limit:
        row = basis.get(j)
        if row is None:
            if vec[j] < 0:
                vec = [-v for v in vec]
            basis[j] = vec
            return None
        a, b = row[j], vec[j]
        if b % a == 0:
            q = b // a
            vec = vec[:j] + [v - q * r for v, r in zip(vec[j:], row[j:])]
        else:
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            head = row[:j]
            new_row = head + [x * r + y * v for r, v in zip(row[j:], vec[j:])]
            vec = vec[:j] + [ag * v - bg * r for r, v in zip(row[j:], vec[j:])]
            basis[j] = new_row
        j = _leading(vec, j + 1, limit)
    return vec


def _reduce_above(rows, pivots):
    for i in range(len(rows)):
        p = pivots[i]
        piv = rows[i][p]
        for k in range(i):
            c = rows[k][p]
            if c < 0 or c >= piv:
                q = c // piv
                rows[k] = [a - q * b for a, b in zip(rows[k], rows[i])]
    return rows


def hermite_rows(gens, ncols):
    """Row-style Hermite basis of the lattice spanned by ``gens``."""
    basis = {}
    for g in gens:
        g = [int(x) for x in g]
        if any(g):
            _insert(basis, g, ncols)
    pivots = sorted(basis)
    rows = [basis[p] for p in pivots]
    return _reduce_above(rows, pivots)


def pivots_of(rows):
    return [_leading(r, 0, len(r)) for r in rows]


def kernel_basis(A, ncols):
    """Z-basis (rows) of {x in Z^ncols : A x = 0}; always saturated."""
    A = hermite_rows(A, ncols)
    r = len(A)
    if r == 0:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    basis = {}
    kernel = []
    for i in range(ncols):
        aug = [row[i] for row in A] + [int(i == j) for j in range(ncols)]
        res = _insert(basis, aug, r)
        if res is not None:
            kernel.append(res[r:])
    return hermite_rows(kernel, ncols)


def express(rows, pivots, vec):
    """Coordinates of ``vec`` in the echelon basis ``rows`` or None."""
    vec = list(vec)
    coords = []
    for row, p in zip(rows, pivots):
        a = row[p]
        b = vec[p]
        if b % a:
            return None
        q = b // a
        coords.append(q)
        if q:
            vec = [v - q * w for v, w in zip(vec, row)]
    if any(vec):
        return None
    return coords


class Sublattice:
    """A sublattice of Z^n held in Hermite form."""

    __slots__ = ("n", "rows", "pivots")

    def __init__(self, gens, n):
        self.n = n
        self.rows = hermite_rows(gens, n)
        self.pivots = pivots_of(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def __contains__(self, vec):
        return express(self.rows, self.pivots, vec) is not None

    def coords(self, vec):
        return express(self.rows, self.pivots, vec)

    def contains_all(self, vecs):
        return all(v in self for v in vecs)

    def __eq__(self, other):
        return self.n == other.n and self.rows == other.rows

    def __repr__(self):
        return f"Sublattice(rank={self.rank}, n={self.n})"


def _snf_core(M, U=None, Uinv=None, V=None):
    """In-place Smith reduction of a dense matrix; optional transform tracking."""
    nr = len(M)
    nc = len(M[0]) if nr else 0

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        if U is not None:
            U[i], U[k] = U[k], U[i]
            for row in Uinv:
                row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in M:
            row[j], row[k] = row[k], row[j]
        if V is not None:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
        if U is not None:
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
            for row in Uinv:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        for row in M:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            row = M[i]
            for j in range(t, nc):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, nr):
                v = M[i][t]
                if v:
                    add_row(i, t, -(v // p))
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                v = M[t][j]
                if v:
                    add_col(j, t, -(v // p))
                    if M[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder onto the diagonal and retry
                best = None
                for i in range(t + 1, nr):
                    v = M[i][t]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), "r", i)
                for j in range(t + 1, nc):
                    v = M[t][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), "c", j)
                if best[1] == "r":
                    swap_rows(t, best[2])
                else:
                    swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, nr):
                row = M[i]
                for j in range(t + 1, nc):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-a for a in M[t]]
            if U is not None:
                U[t] = [-a for a in U[t]]
                for row in Uinv:
                    row[t] = -row[t]
        t += 1
    return [M[i][i] for i in range(t)]


def smith_invariants(rows, ncols):
    """Nonzero diagonal of the Smith form (units included), ascending."""
    core = hermite_rows(rows, ncols)
    if not core:
        return []
    M = [list(r) for r in core]
    diag = _snf_core(M)
    return [d for d in diag if d]


def smith_form(A, nrows, ncols):
    """Return (diag, U, Uinv, V) with U A V = diag(diag) padded with zeros."""
    M = [list(map(int, r)) for r in A] if nrows else []
    U = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    Uinv = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    if nrows == 0 or ncols == 0:
        return [], U, Uinv, V
    diag = _snf_core(M, U, Uinv, V)
    while diag and diag[-1] == 0:
        diag.pop()
    return diag, U, Uinv, V


def determinant(A):
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(map(int, r)) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        rk = M[k]
        for i in range(k + 1, n):
            ri = M[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - a * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return sign * M[n - 1][n - 1]


def solve_integer(A, b, nrows, ncols):
    """An integer x with A x = b, or None."""
    diag, U, _, V = smith_form(A, nrows, ncols)
    ub = [sum(u * v for u, v in zip(row, b)) for row in U]
    y = [0] * ncols
    for i, d in enumerate(diag):
        if ub[i] % d:
            return None
        y[i] = ub[i] // d
    if any(ub[len(diag):]):
        return None
    return [sum(v * w for v, w in zip(row, y)) for row in V]
