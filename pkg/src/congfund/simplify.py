"""Triangulation reduction: coarsen the barycentric subdivision, then
collapse edges until nothing collapsible remains.

Coarsening undoes half of the barycentric subdivision: the four
simplices around each (edge-center, face-center) edge merge into one
tetrahedron spanning the two polyhedron-edge endpoints and the two cell
centers.  Edge collapsing then shrinks the complex further; validity of
each collapse is decided by local link tests so the underlying space
never changes, and for the congruence covers treated here it removes
all finite vertices.
"""

from __future__ import annotations

import heapq

from .errors import InconsistentGluing, NotBarycentric
from .triangulation import EDGE_INDEX, EDGE_PAIRS, IDENTITY_PERM, \
    Triangulation

_OPP_EDGE = {  # edge index -> the disjoint edge's index
    EDGE_INDEX[(0, 1)]: EDGE_INDEX[(2, 3)],
    EDGE_INDEX[(0, 2)]: EDGE_INDEX[(1, 3)],
    EDGE_INDEX[(0, 3)]: EDGE_INDEX[(1, 2)],
    EDGE_INDEX[(1, 2)]: EDGE_INDEX[(0, 3)],
    EDGE_INDEX[(1, 3)]: EDGE_INDEX[(0, 2)],
    EDGE_INDEX[(2, 3)]: EDGE_INDEX[(0, 1)],
}


def _compose(p, q):
    """Permutation doing q after p."""
    return tuple(q[p[i]] for i in range(4))


def _invert(p):
    out = [0] * 4
    for i in range(4):
        out[p[i]] = i
    return tuple(out)


# ---------------------------------------------------------------------
# coarsening


def coarsen_barycentric(tri):
    """Merge the 4-simplex groups of a glued barycentric triangulation.

    Each group sits around one (edge-center, face-center) edge: two
    flag simplices of one domain copy and their two face-3 mates.  The
    merged tetrahedron has vertices (endpoint, other endpoint, cell
    center of this copy, cell center of the mate copy).
    """
    n = tri.size
    for t in range(n):
        for g in tri.glue[t]:
            if g is None or g[1] != IDENTITY_PERM:
                raise NotBarycentric("gluings are not identity permutations")

    group_of = [-1] * n
    groups = []
    for t in range(n):
        if group_of[t] >= 0:
            continue
        a1 = t
        a2 = tri.glue[a1][0][0]
        b1 = tri.glue[a1][3][0]
        b2 = tri.glue[a2][3][0]
        quad = [a1, a2, b1, b2]
        if len(set(quad)) != 4 or tri.glue[b1][0][0] != b2:
            raise NotBarycentric("no 4-simplex group at %d" % t)
        if min(quad) != t:
            # roles are assigned from the least member
            a1 = min(quad)
            a2 = tri.glue[a1][0][0]
            b1 = tri.glue[a1][3][0]
            b2 = tri.glue[a2][3][0]
        for x in (a1, a2, b1, b2):
            if group_of[x] >= 0:
                raise NotBarycentric("overlapping 4-simplex groups")
            group_of[x] = len(groups)
        groups.append((a1, a2, b1, b2))

    # Each new face consists of two old external faces; for each old
    # half-face record (new face index, old-vertex-0 target, old-vertex-3
    # target, remaining new-vertex index).
    halves = {}
    for k, (a1, a2, b1, b2) in enumerate(groups):
        halves[(a2, 1)] = (k, 0, 1, 2, 3)
        halves[(b2, 1)] = (k, 0, 1, 3, 2)
        halves[(a1, 1)] = (k, 1, 0, 2, 3)
        halves[(b1, 1)] = (k, 1, 0, 3, 2)
        halves[(b1, 2)] = (k, 2, 0, 3, 1)
        halves[(b2, 2)] = (k, 2, 1, 3, 0)
        halves[(a1, 2)] = (k, 3, 0, 2, 1)
        halves[(a2, 2)] = (k, 3, 1, 2, 0)

    glue = [[None] * 4 for _ in groups]
    for (t, f), (k, newf, v0, v3, vrest) in halves.items():
        t2 = tri.glue[t][f][0]
        if (t2, f) not in halves:
            raise NotBarycentric("external face leads outside any group")
        k2, newf2, w0, w3, wrest = halves[(t2, f)]
        perm = [None] * 4
        perm[v0] = w0
        perm[v3] = w3
        perm[vrest] = wrest
        perm[newf] = newf2
        perm = tuple(perm)
        if glue[k][newf] is not None:
            if glue[k][newf] != (k2, perm):
                raise NotBarycentric("incoherent merged face gluing")
        else:
            glue[k][newf] = (k2, perm)

    ideal = []
    for (a1, a2, b1, b2) in groups:
        ideal.append([tri.ideal[a1][0], tri.ideal[a2][0], False, False])
    out = Triangulation(tri.d, glue, ideal)
    out.check_complete()
    return out


# ---------------------------------------------------------------------
# edge collapsing


class _Cells:
    """Mutable vertex/edge/face class bookkeeping over live tetrahedra."""

    def __init__(self, tri):
        self.tri = tri
        self.alive = [True] * tri.size
        c = tri.cells()
        self.vroot = {}
        self.vmembers = {}
        self.eroot = {}
        self.emembers = {}
        self.froot = {}
        self.fmembers = {}
        for root, members in c["v"].items():
            key = min(members)
            self.vmembers[key] = set(members)
            for s in members:
                self.vroot[s] = key
        for root, members in c["e"].items():
            key = min(members)
            self.emembers[key] = set(members)
            for s in members:
                self.eroot[s] = key
        for root, members in c["f"].items():
            key = min(members)
            self.fmembers[key] = set(members)
            for s in members:
                self.froot[s] = key
        self.videal = {}
        for key, members in self.vmembers.items():
            self.videal[key] = any(
                tri.ideal[s // 4][s % 4] for s in members)

    def merge(self, rootmap, members, a, b, log, vertexlike=False):
        ra, rb = rootmap[a], rootmap[b]
        if ra == rb:
            return ra
        if len(members[ra]) < len(members[rb]):
            ra, rb = rb, ra
        for s in members[rb]:
            rootmap[s] = ra
        members[ra] |= members[rb]
        del members[rb]
        log.add(ra)
        log.add(rb)
        if vertexlike:
            self.videal[ra] = self.videal[ra] or self.videal.pop(rb)
        return ra

    def drop_slot(self, rootmap, members, s, log, vertexlike=False):
        r = rootmap.pop(s)
        members[r].discard(s)
        log.add(r)
        if not members[r]:
            del members[r]
            if vertexlike:
                del self.videal[r]
            return
        if r == s:
            nr = min(members[r])
            members[nr] = members.pop(r)
            for x in members[nr]:
                rootmap[x] = nr
            if vertexlike:
                self.videal[nr] = self.videal.pop(r)
            log.add(nr)

    def glue_face(self, t, f, t2, perm, vlog, elog, flog):
        on_face = [i for i in range(4) if i != f]
        for i in on_face:
            self.merge(self.vroot, self.vmembers, 4 * t + i,
                       4 * t2 + perm[i], vlog, vertexlike=True)
        for ai in range(3):
            for bi in range(ai + 1, 3):
                i, j = on_face[ai], on_face[bi]
                a, b = min(i, j), max(i, j)
                pa, pb = min(perm[i], perm[j]), max(perm[i], perm[j])
                self.merge(self.eroot, self.emembers,
                           6 * t + EDGE_INDEX[(a, b)],
                           6 * t2 + EDGE_INDEX[(pa, pb)], elog)
        self.merge(self.froot, self.fmembers, 4 * t + f,
                   4 * t2 + perm[f], flog)


def _edge_star(tri, cells, eclass):
    """Walk the cycle of tetrahedra around an edge class.

    Returns a list of (tet, edge-index) in cycle order, or None when the
    star is not a single closed embedded cycle.
    """
    members = cells.emembers[eclass]
    tets = {}
    for s in members:
        t = s // 6
        if t in tets:
            return None  # edge appears twice in one tetrahedron
        tets[t] = s % 6
    start_t = min(tets)
    i, j = EDGE_PAIRS[tets[start_t]]
    cycle = []
    t, cur_edge = start_t, (i, j)
    leave = [x for x in range(4) if x not in (i, j)][0]
    while True:
        ei = EDGE_INDEX[(min(cur_edge), max(cur_edge))]
        if t not in tets or tets[t] != ei:
            return None
        cycle.append((t, ei))
        if len(cycle) > len(tets):
            return None
        g = tri.glue[t][leave]
        if g is None:
            return None
        t2, perm = g
        new_edge = (perm[cur_edge[0]], perm[cur_edge[1]])
        enter = perm[leave]
        t, cur_edge = t2, new_edge
        leave = [x for x in range(4)
                 if x not in (cur_edge[0], cur_edge[1], enter)][0]
        if t == start_t and \
                EDGE_INDEX[(min(cur_edge), max(cur_edge))] == tets[start_t]:
            break
    if len(cycle) != len(tets):
        return None
    return cycle


def _collapse_valid(tri, cells, eclass, star):
    rep = min(cells.emembers[eclass])
    t0 = rep // 6
    i0, j0 = EDGE_PAIRS[rep % 6]
    va = cells.vroot[4 * t0 + i0]
    vb = cells.vroot[4 * t0 + j0]
    if va == vb:
        return False
    if cells.videal[va] and cells.videal[vb]:
        return False
    # temporary union-finds over current edge and face classes
    eparent = {}
    fparent = {}

    def find(parent, x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    def union(parent, x, y):
        rx, ry = find(parent, x), find(parent, y)
        if rx == ry:
            return False
        parent[rx] = ry
        return True

    seen_faces = set()
    for (t, ei) in star:
        a, b = EDGE_PAIRS[ei]
        c, dd = [x for x in range(4) if x not in (a, b)]
        for x, other in ((c, dd), (dd, c)):
            # the pair (a,x), (b,x) comes from the star-interior face
            # {a,b,x}; that face is shared by two star tetrahedra, so
            # process each face class only once
            fr = cells.froot[4 * t + other]
            if fr in seen_faces:
                continue
            seen_faces.add(fr)
            e1 = cells.eroot[6 * t + EDGE_INDEX[(min(a, x), max(a, x))]]
            e2 = cells.eroot[6 * t + EDGE_INDEX[(min(b, x), max(b, x))]]
            if not union(eparent, e1, e2):
                return False
        f1 = cells.froot[4 * t + a]
        f2 = cells.froot[4 * t + b]
        if not union(fparent, f1, f2):
            return False
    return True


def _hop_out(tri, dead_info, t, f, visited):
    """From half-face (t, f) on a dead tetrahedron, hop through dead
    tetrahedra to the live half-face this chain ends at.  Interior dead
    half-faces are recorded in visited."""
    perm = IDENTITY_PERM
    while True:
        visited.add((t, f))
        t2, q = tri.glue[t][f]
        perm = _compose(perm, q)
        f = q[f]
        if t2 not in dead_info:
            return t2, f, perm
        visited.add((t2, f))
        a, b = dead_info[t2]
        swap = list(range(4))
        swap[a], swap[b] = b, a
        swap = tuple(swap)
        perm = _compose(perm, swap)
        f = swap[f]
        t = t2


def collapse_edges(tri, check_locality=False):
    """Collapse collapsible edges, highest-degree first.

    Returns a new triangulation; the input is not modified.  With
    check_locality, every collapse is cross-checked against a fresh
    recomputation to confirm that only classes adjacent to the collapsed
    star changed.
    """
    work = Triangulation(
        tri.d, [list(fs) for fs in tri.glue],
        [list(b) for b in tri.ideal])
    cells = _Cells(work)
    heap = []
    for key, members in cells.emembers.items():
        heapq.heappush(heap, (-len(members), key))

    while heap:
        negdeg, key = heapq.heappop(heap)
        if key not in cells.emembers or -negdeg != len(cells.emembers[key]):
            continue
        star = _edge_star(work, cells, key)
        if star is None or not _collapse_valid(work, cells, key, star):
            continue
        snapshot = None
        if check_locality:
            snapshot = {k: set(v) for k, v in cells.emembers.items()}

        dead_info = {t: EDGE_PAIRS[ei] for (t, ei) in star}
        rep = min(cells.emembers[key])
        t0 = rep // 6
        i0, j0 = EDGE_PAIRS[rep % 6]

        vlog, elog, flog = set(), set(), set()
        # merge endpoint vertex classes (the collapse identifies them)
        cells.merge(cells.vroot, cells.vmembers, 4 * t0 + i0, 4 * t0 + j0,
                    vlog, vertexlike=True)
        # merge the classes identified by squashing each dead tet
        for (t, ei) in star:
            a, b = EDGE_PAIRS[ei]
            c, dd = [x for x in range(4) if x not in (a, b)]
            for x in (c, dd):
                cells.merge(
                    cells.eroot, cells.emembers,
                    6 * t + EDGE_INDEX[(min(a, x), max(a, x))],
                    6 * t + EDGE_INDEX[(min(b, x), max(b, x))], elog)
            cells.merge(cells.froot, cells.fmembers, 4 * t + a, 4 * t + b,
                        flog)

        # rewire the boundary of the star
        done = set()
        rewired = set()
        for (t, ei) in star:
            a, b = EDGE_PAIRS[ei]
            for f in (a, b):
                if (t, f) in done:
                    continue
                swap = list(range(4))
                swap[a], swap[b] = b, a
                other = b if f == a else a
                ta, fa, pa = _hop_out(work, dead_info, t, f, done)
                tb, fb, pb = _hop_out(work, dead_info, t, other, done)
                # glue (ta, fa) to (tb, fb): map = pb . swap . pa^-1
                m = _compose(_compose(_invert(pa), tuple(swap)), pb)
                work.glue[ta][fa] = (tb, m)
                work.glue[tb][fb] = (ta, _invert(m))
                rewired.add(ta)
                rewired.add(tb)
                cells.glue_face(ta, fa, tb, m, vlog, elog, flog)

        # retire dead tetrahedra
        for t in dead_info:
            cells.alive[t] = False
            for i in range(4):
                cells.drop_slot(cells.vroot, cells.vmembers, 4 * t + i, vlog,
                                vertexlike=True)
                cells.drop_slot(cells.froot, cells.fmembers, 4 * t + i, flog)
            for e in range(6):
                cells.drop_slot(cells.eroot, cells.emembers, 6 * t + e, elog)
            work.glue[t] = [None] * 4

        if check_locality:
            _assert_local(work, cells, snapshot, elog, dead_info)

        for r in elog:
            if r in cells.emembers:
                heapq.heappush(heap, (-len(cells.emembers[r]), r))
        for t in rewired:
            for e in range(6):
                r = cells.eroot.get(6 * t + e)
                if r is not None:
                    heapq.heappush(heap, (-len(cells.emembers[r]), r))

    return _compact(work, cells)


def _assert_local(work, cells, snapshot, elog, dead_info):
    dead_slots = {6 * t + e for t in dead_info for e in range(6)}
    for key, members in snapshot.items():
        if key in elog or key in dead_slots:
            continue
        assert key in cells.emembers and \
            cells.emembers[key] == members - dead_slots, \
            "edge class %r changed without being touched" % key


def _compact(work, cells):
    mapping = {}
    for t in range(work.size):
        if cells.alive[t]:
            mapping[t] = len(mapping)
    glue = []
    ideal = []
    for t in range(work.size):
        if not cells.alive[t]:
            continue
        row = []
        for f, g in enumerate(work.glue[t]):
            t2, perm = g
            row.append((mapping[t2], perm))
        glue.append(row)
        ideal.append([cells.videal[cells.vroot[4 * t + i]]
                      for i in range(4)])
    out = Triangulation(work.d, glue, ideal)
    out.check_complete()
    return out
