"""Equitable partitions: color refinement, Delta_u, quotient matrices, and a
brute-force automorphism stabilizer search for small graphs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

BRUTE_FORCE_CAP_DEFAULT = 10


@dataclass(frozen=True)
class Partition:
    """Ordered vertex partition; cells sorted by their minimum vertex."""

    cells: tuple  # tuple of tuples of sorted vertex indices
    n: int

    @classmethod
    def from_cells(cls, cells, n):
        norm = []
        seen = set()
        for cell in cells:
            cell = tuple(sorted(int(v) for v in cell))
            if not cell:
                raise ValueError("empty cell")
            for v in cell:
                if not 0 <= v < n:
                    raise ValueError(f"vertex {v} out of range")
                if v in seen:
                    raise ValueError(f"vertex {v} in two cells")
                seen.add(v)
            norm.append(cell)
        if len(seen) != n:
            raise ValueError("cells do not cover the vertex set")
        norm.sort(key=lambda c: c[0])
        return cls(cells=tuple(norm), n=n)

    @classmethod
    def trivial(cls, n):
        return cls.from_cells([range(n)], n)

    @classmethod
    def discrete(cls, n):
        return cls.from_cells([[v] for v in range(n)], n)

    @property
    def num_cells(self):
        return len(self.cells)

    def cell_of(self):
        idx = np.empty(self.n, dtype=int)
        for i, cell in enumerate(self.cells):
            for v in cell:
                idx[v] = i
        return idx

    def refines(self, other):
        other_of = other.cell_of()
        return all(len({other_of[v] for v in cell}) == 1 for cell in self.cells)

    def as_lists(self):
        return [list(c) for c in self.cells]


def coarsest_equitable_refinement(g, pi0):
    """Unique coarsest equitable partition refining ``pi0``.

    Iteratively splits cells by the vector of neighbor counts into every
    current cell until stable.
    """
    if pi0.n != g.n:
        raise ValueError("partition does not match the graph")
    adj = g.adjacency
    cells = [list(c) for c in pi0.cells]
    while True:
        cell_of = np.empty(g.n, dtype=int)
        for i, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = i
        # signature of v: neighbor counts into each current cell
        counts = np.zeros((g.n, len(cells)), dtype=int)
        for v in range(g.n):
            for w in np.flatnonzero(adj[v]):
                counts[v, cell_of[w]] += 1
        new_cells = []
        changed = False
        for cell in cells:
            groups = {}
            for v in cell:
                groups.setdefault(tuple(counts[v]), []).append(v)
            if len(groups) > 1:
                changed = True
            for key in sorted(groups):
                new_cells.append(groups[key])
        cells = new_cells
        if not changed:
            break
    return Partition.from_cells(cells, g.n)


def delta_u(g, u):
    """Coarsest equitable refinement of {{u}, V \\ {u}}."""
    if not 0 <= u < g.n:
        raise ValueError(f"vertex {u} out of range")
    if g.n == 1:
        return Partition.discrete(1)
    rest = [v for v in range(g.n) if v != u]
    return coarsest_equitable_refinement(g, Partition.from_cells([[u], rest], g.n))


def quotient_matrix(g, pi):
    """Integer matrix B with B[i][j] = neighbors in cell j of a cell-i vertex.

    Returns None when ``pi`` is not equitable.
    """
    adj = g.adjacency
    cell_of = pi.cell_of()
    k = pi.num_cells
    b = np.zeros((k, k), dtype=object)
    for i, cell in enumerate(pi.cells):
        ref = None
        for v in cell:
            row = [0] * k
            for w in np.flatnonzero(adj[v]):
                row[cell_of[w]] += 1
            if ref is None:
                ref = row
                b[i] = row
            elif row != ref:
                return None
    return b


def is_equitable(g, pi):
    """(True, B) when every cell has constant neighbor counts, else (False, None)."""
    b = quotient_matrix(g, pi)
    return (b is not None), b


def characteristic_matrix(pi):
    """0/1 matrix whose columns are the cell characteristic vectors."""
    p = np.zeros((pi.n, pi.num_cells), dtype=object)
    for i, cell in enumerate(pi.cells):
        for v in cell:
            p[v, i] = 1
    return p


def normalized_char_matrix(pi):
    """Float matrix Q with unit-scaled cell columns; Q^T Q = I."""
    q = np.zeros((pi.n, pi.num_cells))
    for i, cell in enumerate(pi.cells):
        q[list(cell), i] = 1.0 / np.sqrt(len(cell))
    return q


def projection_matrix_exact(pi):
    """QQ^T as exact rationals: block diagonal with (1/r) J_r blocks."""
    m = np.full((pi.n, pi.n), Fraction(0), dtype=object)
    for cell in pi.cells:
        w = Fraction(1, len(cell))
        for v in cell:
            for u in cell:
                m[v, u] = w
    return m


def equitable_quotient_checks(g, pi):
    """Exact verification of the equitable-partition equivalences.

    Returns a dict with: 'equitable', and when equitable 'AP_eq_PB' (A P = P B
    with P the characteristic matrix) and 'A_commutes_QQt' (A QQ^T = QQ^T A
    over exact rationals).
    """
    ok, b = is_equitable(g, pi)
    out = {"equitable": ok}
    if not ok:
        return out
    a = np.array(g.adjacency, dtype=object)
    p = characteristic_matrix(pi)
    out["AP_eq_PB"] = np.array_equal(a @ p, p @ b)
    qqt = projection_matrix_exact(pi)
    out["A_commutes_QQt"] = np.array_equal(a @ qqt, qqt @ a)
    return out


def check_delta_equality(g, u, v):
    """True iff Delta_u and Delta_v are identical as partitions."""
    if u == v:
        raise ValueError("vertices must be distinct")
    return delta_u(g, u) == delta_u(g, v)


# ---------------------------------------------------------------------------
# Brute-force automorphisms (small n only)

def automorphisms(g, n_cap=BRUTE_FORCE_CAP_DEFAULT, colors=None):
    """All automorphisms of ``g`` by backtracking, as image tuples.

    ``colors`` (vertex -> int) restricts images to same-colored vertices; by
    default the coarsest equitable refinement of the trivial partition is used
    as the pruning invariant.
    """
    n = g.n
    if n > n_cap:
        raise ValueError(f"brute-force cap exceeded: {n} > {n_cap}")
    if n == 0:
        return [()]
    adj = g.adjacency
    if colors is None:
        colors = coarsest_equitable_refinement(g, Partition.trivial(n)).cell_of()
    out = []
    image = [-1] * n
    used = [False] * n

    def extend(v):
        if v == n:
            out.append(tuple(image))
            return
        for w in range(n):
            if used[w] or colors[w] != colors[v]:
                continue
            if any(adj[v, x] != adj[w, image[x]] for x in range(v)):
                continue
            image[v] = w
            used[w] = True
            extend(v + 1)
            used[w] = False
        image[v] = -1

    extend(0)
    return out


def stabilizer_orbits_bruteforce(g, u, n_cap=BRUTE_FORCE_CAP_DEFAULT):
    """Orbit partition of the automorphisms fixing ``u``, pruned by Delta_u."""
    n = g.n
    if n > n_cap:
        raise ValueError(f"brute-force cap exceeded: {n} > {n_cap}")
    colors = delta_u(g, u).cell_of()
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in automorphisms(g, n_cap=n_cap, colors=colors):
        if perm[u] != u:
            continue
        for v, w in enumerate(perm):
            rv, rw = find(v), find(w)
            if rv != rw:
                parent[rw] = rv
    groups = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return Partition.from_cells(groups.values(), n)


def stabilizers_equal(g, u, v, n_cap=BRUTE_FORCE_CAP_DEFAULT):
    """True iff every automorphism fixes u exactly when it fixes v."""
    if g.n > n_cap:
        raise ValueError(f"brute-force cap exceeded: {g.n} > {n_cap}")
    return all((p[u] == u) == (p[v] == v) for p in automorphisms(g, n_cap=n_cap))
