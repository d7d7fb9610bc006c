"""Sparse integer homology of glued triangulations.

The chain complex is that of the identified pseudo-manifold: cells are
the vertex/edge/face classes of the triangulation, with ideal vertices
kept as cone points.  Coning each cusp torus kills exactly the image of
the boundary homology, so H1 of this complex is the boundary quotient
H1(M)/i_*(H1(dM)); H1(M) itself is that quotient plus one Z per cusp.

Smith normal form runs a sparse phase that pivots only on +-1 entries,
chosen by lowest Markowitz fill count, and hands the residual block to a
dense reduction with divisor correction.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import InconsistentGluing, NotOrientable
from .triangulation import EDGE_INDEX, EDGE_PAIRS


class SparseIntMatrix:
    """Integer matrix stored as per-row {column: value} dicts."""

    def __init__(self, nrows, ncols, entries=()):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [dict() for _ in range(nrows)]
        for r, c, v in entries:
            self.add(r, c, v)

    def add(self, r, c, v):
        if not 0 <= r < self.nrows or not 0 <= c < self.ncols:
            raise IndexError("entry (%d, %d) out of range" % (r, c))
        row = self.rows[r]
        v = row.get(c, 0) + v
        if v:
            row[c] = v
        else:
            row.pop(c, None)

    def get(self, r, c):
        return self.rows[r].get(c, 0)

    def entries(self):
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                yield r, c, v

    def nnz(self):
        return sum(len(row) for row in self.rows)

    @classmethod
    def from_dense(cls, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        out = cls(nrows, ncols)
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                if v:
                    out.rows[r][c] = int(v)
        return out

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        out = SparseIntMatrix(self.nrows, other.ncols)
        for r, row in enumerate(self.rows):
            acc = {}
            for k, v in row.items():
                for c, w in other.rows[k].items():
                    acc[c] = acc.get(c, 0) + v * w
            out.rows[r] = {c: v for c, v in acc.items() if v}
        return out


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: free rank plus divisor chain."""

    rank: int
    divisors: tuple = ()

    def __post_init__(self):
        for i, d in enumerate(self.divisors):
            if d <= 1:
                raise ValueError("divisors must exceed 1")
            if i and d % self.divisors[i - 1]:
                raise ValueError("divisor chain broken")

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.divisors

    @property
    def order(self):
        """Group order, or None when infinite."""
        if self.rank:
            return None
        n = 1
        for d in self.divisors:
            n *= d
        return n

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank:
            parts.append("Z^%d" % self.rank)
        parts.extend("Z/%d" % d for d in self.divisors)
        return " + ".join(parts) if parts else "0"


def _markowitz(rows, cols, r, c):
    return (len(rows[r]) - 1) * (len(cols[c]) - 1)


def smith_normal_form(mat):
    """Rank and elementary divisors (> 1) of an integer matrix."""
    rows = {r: dict(row) for r, row in enumerate(mat.rows) if row}
    cols = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)

    heap = []
    for r, row in rows.items():
        for c, v in row.items():
            if v in (1, -1):
                heapq.heappush(heap, (_markowitz(rows, cols, r, c), r, c))

    rank = 0
    while heap:
        cost, r, c = heapq.heappop(heap)
        if r not in rows or c not in rows[r] or rows[r][c] not in (1, -1):
            continue
        if cost != _markowitz(rows, cols, r, c):
            heapq.heappush(heap, (_markowitz(rows, cols, r, c), r, c))
            continue
        piv = rows[r][c]
        for r2 in list(cols[c]):
            if r2 == r:
                continue
            factor = rows[r2][c] * piv
            row2 = rows[r2]
            for c2, v in rows[r].items():
                w = row2.get(c2, 0) - factor * v
                if w:
                    row2[c2] = w
                    cols.setdefault(c2, set()).add(r2)
                    if w in (1, -1):
                        heapq.heappush(
                            heap, (_markowitz(rows, cols, r2, c2), r2, c2))
                else:
                    row2.pop(c2, None)
                    cols[c2].discard(r2)
            if not row2:
                del rows[r2]
        # the pivot row and column now intersect the rest trivially
        for c2 in rows[r]:
            cols[c2].discard(r)
        del rows[r]
        rank += 1

    # dense residual block
    rindex = {r: i for i, r in enumerate(sorted(rows))}
    live_cols = sorted({c for row in rows.values() for c in row})
    cindex = {c: i for i, c in enumerate(live_cols)}
    dense = [[0] * len(live_cols) for _ in rindex]
    for r, row in rows.items():
        for c, v in row.items():
            dense[rindex[r]][cindex[c]] = v
    diag = _dense_snf(dense)
    rank += len(diag)
    return rank, tuple(d for d in diag if d > 1)


def _dense_snf(mat):
    """Diagonal of the Smith normal form of a dense integer matrix."""
    nr = len(mat)
    nc = len(mat[0]) if nr else 0
    diag = []
    t = 0
    while t < nr and t < nc:
        # move a minimal-magnitude nonzero entry to the pivot slot
        best = None
        for r in range(t, nr):
            for c in range(t, nc):
                v = mat[r][c]
                if v and (best is None or abs(v) < abs(mat[best[0]][best[1]])):
                    best = (r, c)
        if best is None:
            break
        r0, c0 = best
        mat[t], mat[r0] = mat[r0], mat[t]
        for row in mat:
            row[t], row[c0] = row[c0], row[t]
        piv = mat[t][t]
        dirty = False
        for r in range(t + 1, nr):
            if mat[r][t]:
                q = mat[r][t] // piv
                for c in range(t, nc):
                    mat[r][c] -= q * mat[t][c]
                dirty = dirty or mat[r][t] != 0
        for c in range(t + 1, nc):
            if mat[t][c]:
                q = mat[t][c] // piv
                for r in range(t, nr):
                    mat[r][c] -= q * mat[r][t]
                dirty = dirty or mat[t][c] != 0
        if dirty:
            continue
        # divisor correction: fold in any entry the pivot misses
        offender = None
        for r in range(t + 1, nr):
            for c in range(t + 1, nc):
                if mat[r][c] % piv:
                    offender = r
                    break
            if offender is not None:
                break
        if offender is not None:
            for c in range(t, nc):
                mat[t][c] += mat[offender][c]
            continue
        diag.append(abs(piv))
        t += 1
    return diag


def boundary_matrices(tri):
    """Boundary maps (d2, d1) of the identified chain complex."""
    if tri.orient() is None:
        raise NotOrientable("complex admits no consistent orientation")
    cells = tri.cells()
    if cells["e_flipped"] or cells["f_flipped"]:
        raise InconsistentGluing("self-reversed cell class")
    vindex = {root: i for i, root in enumerate(sorted(cells["v"]))}
    eindex = {root: i for i, root in enumerate(sorted(cells["e"]))}
    findex = {root: i for i, root in enumerate(sorted(cells["f"]))}
    vuf, euf = cells["vuf"], cells["euf"]

    d1 = SparseIntMatrix(len(vindex), len(eindex))
    for root, col in eindex.items():
        t, e = divmod(root, 6)
        i, j = EDGE_PAIRS[e]
        d1.add(vindex[vuf.find(4 * t + j)], col, 1)
        d1.add(vindex[vuf.find(4 * t + i)], col, -1)

    d2 = SparseIntMatrix(len(eindex), len(findex))
    for root, col in findex.items():
        t, f = divmod(root, 4)
        a, b, c = [i for i in range(4) if i != f]
        for (i, j), sgn in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
            eroot, rel = euf.find_signed(6 * t + EDGE_INDEX[(i, j)])
            d2.add(eindex[eroot], col, sgn * rel)
    return d2, d1


def h1_with_quotient(tri):
    """Boundary quotient, H1 of the manifold, and the cusp count.

    The quotient is H1 of the complex itself (cusps coned off); H1 of
    the cusped manifold adds one free factor per cusp.
    """
    d2, d1 = boundary_matrices(tri)
    rank1, _ = smith_normal_form(d1)
    rank2, divisors = smith_normal_form(d2)
    free = d1.ncols - rank1 - rank2
    quotient = AbelianGroup(free, divisors)
    cusps, _ = tri.classify_vertices()
    h1 = AbelianGroup(free + cusps.count, divisors)
    return quotient, h1, cusps.count


_OBSTRUCTION_KINDS = ("min-cover-degree", "gamma1-degree", "principal-cover")


def cover_obstruction(kind, data):
    """Degree-versus-quotient exclusion test for link covers.

    data carries the order of the boundary quotient (None meaning
    infinite) and the degree of the relevant cover.  The verdict is
    "excluded" when the quotient is strictly larger than the degree,
    "inconclusive" otherwise.
    """
    if kind not in _OBSTRUCTION_KINDS:
        raise ValueError("unknown obstruction kind %r" % (kind,))
    order = data["quotient_order"]
    degree = data["degree"]
    if order is None or order > degree:
        return "excluded"
    return "inconclusive"


def homology_report(quotient, h1):
    return "H1 = %s, quotient = %s" % (h1, quotient)
