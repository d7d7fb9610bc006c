"""Triangulations of congruence covers glued from fundamental domains.

A triangulation is a list of tetrahedra with face gluings (neighbor,
vertex permutation).  The builders glue one copy of the barycentric
domain per residue class: principal congruence covers are labeled by
canonical matrix residues, the Gamma_1 variant by projective row
vectors.  Within a copy the barycentric gluings are identity
permutations; across copies face 3 carries the mating matrix, which
also acts on the labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import BudgetExceeded, InconsistentGluing, NotOrientable
from .ring import ProjMatrix, QuadInt, proj_canonicalize, psl_order, \
    reduce_mod_ideal

EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {p: i for i, p in enumerate(EDGE_PAIRS)}
IDENTITY_PERM = (0, 1, 2, 3)
DEFAULT_BUDGET = 2_000_000


class _SignedUnionFind:
    """Union-find tracking a relative sign to the root; records classes
    that get identified with themselves under a sign flip."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.sign = [1] * n
        self.flipped = set()

    def find_signed(self, x):
        root, s = x, 1
        while self.parent[root] != root:
            s *= self.sign[root]
            root = self.parent[root]
        node, sn = x, s
        while self.parent[node] != root:
            nxt = self.parent[node]
            ns = self.sign[node]
            self.parent[node] = root
            self.sign[node] = sn
            node = nxt
            sn *= ns
        return root, s

    def union(self, x, y, rel):
        rx, sx = self.find_signed(x)
        ry, sy = self.find_signed(y)
        if rx == ry:
            if sx * sy != rel:
                self.flipped.add(rx)
            return
        # attach ry under rx with sign so that sign(y->rx) = rel*sx... keep
        # the convention sign(node) = sign relative to its parent
        self.parent[ry] = rx
        self.sign[ry] = rel * sx * sy
        if ry in self.flipped:
            self.flipped.discard(ry)
            self.flipped.add(rx)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


@dataclass
class CuspInfo:
    count: int
    members: list  # per cusp, list of (tet, vertex) pairs


class Triangulation:
    """Tetrahedra with face gluings (neighbor, permutation of 4)."""

    def __init__(self, d, glue, ideal, labels=None, flag_of=None,
                 domain=None):
        self.d = d
        self.glue = glue          # per tet: 4 entries (nbr, perm) or None
        self.ideal = ideal        # per tet: 4 booleans
        self.labels = labels
        self.flag_of = flag_of
        self.domain = domain
        self._cells = None

    @property
    def size(self):
        return len(self.glue)

    def check_complete(self):
        for t, faces in enumerate(self.glue):
            for f, g in enumerate(faces):
                if g is None:
                    raise InconsistentGluing("face %d of %d unglued" % (f, t))
                t2, perm = g
                back = self.glue[t2][perm[f]]
                if back is None or back[0] != t or \
                        tuple(back[1][perm[i]] for i in range(4)) != \
                        IDENTITY_PERM:
                    raise InconsistentGluing(
                        "gluing of (%d,%d) is not involutive" % (t, f))

    # -- cell classes -------------------------------------------------

    def _compute_cells(self):
        n = self.size
        vuf = _UnionFind(4 * n)
        euf = _SignedUnionFind(6 * n)
        fuf = _SignedUnionFind(4 * n)
        for t, faces in enumerate(self.glue):
            for f, g in enumerate(faces):
                if g is None:
                    continue
                t2, perm = g
                on_face = [i for i in range(4) if i != f]
                for i in on_face:
                    vuf.union(4 * t + i, 4 * t2 + perm[i])
                for ai in range(3):
                    for bi in range(ai + 1, 3):
                        i, j = on_face[ai], on_face[bi]
                        pi, pj = perm[i], perm[j]
                        rel = 1 if (pi < pj) else -1
                        a, b = min(i, j), max(i, j)
                        pa, pb = min(pi, pj), max(pi, pj)
                        euf.union(6 * t + EDGE_INDEX[(a, b)],
                                  6 * t2 + EDGE_INDEX[(pa, pb)], rel)
                # parity of the map sorted(on_face) -> their perm images
                seq = [perm[i] for i in on_face]
                inv = sum(1 for x in range(3) for y in range(x + 1, 3)
                          if seq[x] > seq[y])
                rel = -1 if inv % 2 else 1
                fuf.union(4 * t + f, 4 * t2 + perm[f], rel)
        cells = {"v": self._collect(vuf, 4), "e": self._collect(euf, 6),
                 "f": self._collect(fuf, 4),
                 "e_flipped": euf.flipped, "f_flipped": fuf.flipped,
                 "vuf": vuf, "euf": euf, "fuf": fuf}
        self._cells = cells
        return cells

    def _collect(self, uf, per):
        classes = {}
        for x in range(per * self.size):
            classes.setdefault(uf.find(x) if isinstance(uf, _UnionFind)
                               else uf.find_signed(x)[0], []).append(x)
        return classes

    def cells(self):
        if self._cells is None:
            self._compute_cells()
        return self._cells

    def invalidate(self):
        self._cells = None

    def vertex_classes(self):
        return self.cells()["v"]

    def edge_classes(self):
        return self.cells()["e"]

    def face_classes(self):
        return self.cells()["f"]

    def euler_characteristic(self):
        c = self.cells()
        return len(c["v"]) - len(c["e"]) + len(c["f"]) - self.size

    def vertex_is_ideal(self, slot):
        return self.ideal[slot // 4][slot % 4]

    # -- vertex links -------------------------------------------------

    def classify_vertices(self):
        """Cusp info plus per-class link Euler characteristics.

        Returns (CuspInfo, chi) where chi maps each vertex-class root to
        the Euler characteristic of its link surface.
        """
        c = self.cells()
        vuf = c["vuf"]
        chi = {}
        incid = {}
        for root, members in c["v"].items():
            incid[root] = len(members)
            chi[root] = 0
        # link vertices: one per incident edge-class end
        for root, members in c["e"].items():
            t, ei = members[0] // 6, members[0] % 6
            i, j = EDGE_PAIRS[ei]
            va = vuf.find(4 * t + i)
            vb = vuf.find(4 * t + j)
            if root in c["e_flipped"]:
                chi[va] += 1
            else:
                chi[va] += 1
                chi[vb] += 1
        for root in chi:
            if incid[root] % 2:
                raise InconsistentGluing("odd vertex incidence")
            chi[root] -= incid[root] // 2
        ideal_roots = []
        for root, members in c["v"].items():
            if any(self.vertex_is_ideal(s) for s in members):
                ideal_roots.append(root)
        ideal_roots.sort(key=lambda r: min(c["v"][r]))
        info = CuspInfo(
            count=len(ideal_roots),
            members=[[(s // 4, s % 4) for s in c["v"][r]]
                     for r in ideal_roots])
        return info, chi

    def orient(self):
        """Propagated tetrahedron signs; raises NotOrientable on conflict."""
        signs = [0] * self.size
        for start in range(self.size):
            if signs[start]:
                continue
            signs[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for f, g in enumerate(self.glue[t]):
                    if g is None:
                        continue
                    t2, perm = g
                    inv = sum(1 for x in range(4) for y in range(x + 1, 4)
                              if perm[x] > perm[y])
                    want = -signs[t] * (1 if inv % 2 == 0 else -1)
                    if signs[t2] == 0:
                        signs[t2] = want
                        stack.append(t2)
                    elif signs[t2] != want:
                        raise NotOrientable(
                            "orientation conflict at tetrahedron %d" % t2)
        return signs

    # -- serialization ------------------------------------------------

    def to_json_dict(self):
        tets = []
        for t in range(self.size):
            tets.append({
                "glue": [[g[0], list(g[1])] if g else None
                         for g in self.glue[t]],
                "ideal": list(self.ideal[t]),
            })
        out = {"d": self.d, "tetrahedra": tets}
        if self.labels is not None:
            out["labels"] = self.labels
        if self.flag_of is not None:
            out["flag_of"] = self.flag_of
        return out

    @classmethod
    def from_json_dict(cls, data):
        glue = []
        ideal = []
        for rec in data["tetrahedra"]:
            glue.append([(g[0], tuple(g[1])) if g else None
                         for g in rec["glue"]])
            ideal.append([bool(b) for b in rec["ideal"]])
        return cls(data["d"], glue, ideal, labels=data.get("labels"),
                   flag_of=data.get("flag_of"))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def _build_cover(domain, start_label, step, expected, budget, serialize):
    """Shared BFS over copies: step(label, matrix) -> next label."""
    simplices = domain.simplices
    S = len(simplices)
    matrices = []
    mat_index = {}
    flag_mat = []
    for s in simplices:
        key = s.matrix
        if key not in mat_index:
            mat_index[key] = len(matrices)
            matrices.append(key)
        flag_mat.append(mat_index[key])

    labels = {start_label: 0}
    reps = [start_label]
    transitions = []  # per copy, per unique matrix: target copy
    i = 0
    while i < len(reps):
        lab = reps[i]
        row = []
        for g in matrices:
            nxt = step(lab, g)
            if nxt not in labels:
                if (len(reps) + 1) * S > budget:
                    raise BudgetExceeded(
                        "budget of %d tetrahedra exceeded" % budget,
                        lower_bound=len(reps) * S)
                labels[nxt] = len(reps)
                reps.append(nxt)
            row.append(labels[nxt])
        transitions.append(row)
        i += 1
    copies = len(reps)
    if expected is not None and copies != expected:
        raise InconsistentGluing(
            "built %d copies, expected %d" % (copies, expected))

    glue = []
    ideal = []
    flag_of = []
    for c in range(copies):
        for s, simp in enumerate(simplices):
            t = c * S + s
            n0, n1, n2 = simp.neighbors
            c2 = transitions[c][flag_mat[s]]
            glue.append([
                (c * S + n0, IDENTITY_PERM),
                (c * S + n1, IDENTITY_PERM),
                (c * S + n2, IDENTITY_PERM),
                (c2 * S + simp.mate, IDENTITY_PERM),
            ])
            ideal.append([simp.ideal_vertex, False, False, False])
            flag_of.append(s)
    tri = Triangulation(domain.d, glue, ideal,
                        labels=[serialize(r) for r in reps],
                        flag_of=flag_of, domain=domain)
    tri.check_complete()
    return tri


def build_principal(domain, ideal, budget=DEFAULT_BUDGET):
    """Triangulation of the principal congruence cover for the ideal:
    one domain copy per residue in PSL(2, O_d/I)."""
    order = psl_order(ideal)
    if order * len(domain.simplices) > budget:
        raise BudgetExceeded(
            "%d copies of %d simplices exceed budget %d"
            % (order, len(domain.simplices), budget),
            lower_bound=order * len(domain.simplices))
    def canon(entries):
        both = []
        for sign in (1, -1):
            red = tuple(reduce_mod_ideal(x if sign == 1 else -x, ideal)
                        for x in entries)
            both.append(red)
        return min(both, key=lambda r: tuple((x.a, x.b) for x in r))

    ident = ProjMatrix.identity(domain.d)
    start = canon((ident.a, ident.b, ident.c, ident.d))

    def step(label, g):
        a, b, c, dd = label
        return canon((a * g.a + b * g.c, a * g.b + b * g.d,
                      c * g.a + dd * g.c, c * g.b + dd * g.d))

    def serialize(entries):
        return [[e.a, e.b] for e in entries]

    return _build_cover(domain, start, step, order, budget, serialize)


def _canon_row(ideal, a, b):
    a = reduce_mod_ideal(a, ideal)
    b = reduce_mod_ideal(b, ideal)
    na = reduce_mod_ideal(-a, ideal)
    nb = reduce_mod_ideal(-b, ideal)
    k1 = (a.a, a.b, b.a, b.b)
    k2 = (na.a, na.b, nb.a, nb.b)
    return (a, b) if k1 <= k2 else (na, nb)


def build_gamma1(domain, ideal, budget=DEFAULT_BUDGET):
    """Triangulation of the Gamma_1 cover: copies labeled by projective
    row vectors modulo the ideal, one per coset of the unit-triangular
    subgroup."""
    d = domain.d
    expected = psl_order(ideal) // ideal.norm()
    if expected * len(domain.simplices) > budget:
        raise BudgetExceeded(
            "%d copies of %d simplices exceed budget %d"
            % (expected, len(domain.simplices), budget),
            lower_bound=expected * len(domain.simplices))
    one = QuadInt(d, 1, 0)
    zero = QuadInt(d, 0, 0)
    start = _canon_row(ideal, one, zero)

    def step(label, g):
        a, b = label
        return _canon_row(ideal, a * g.a + b * g.c, a * g.b + b * g.d)

    def serialize(row):
        return [[row[0].a, row[0].b], [row[1].a, row[1].b]]

    return _build_cover(domain, start, step, expected, budget, serialize)


def detect_orbifold(tri, domain):
    """True when some edge degree of the cover differs from the degree
    it would have in a torsion-free cover: base degree times the
    singular order attached to the barycentric edge type."""
    base = _build_cover(domain, 0, lambda lab, g: 0, 1, DEFAULT_BUDGET,
                        lambda lab: lab)
    base_cells = base.cells()
    base_root = {}
    expected = {}
    for root, members in base_cells["e"].items():
        slot = members[0]
        t, ei = slot // 6, slot % 6
        pair = EDGE_PAIRS[ei]
        mult = 1
        if pair == (0, 1):
            mult = domain.simplices[t].singular[0]
        elif pair == (0, 2):
            mult = domain.simplices[t].singular[1]
        elif pair == (1, 2):
            mult = domain.simplices[t].singular[2]
        expected[root] = len(members) * mult
        for s in members:
            base_root[s] = root
    for root, members in tri.cells()["e"].items():
        slot = members[0]
        t, ei = slot // 6, slot % 6
        b = base_root[6 * tri.flag_of[t] + ei]
        if len(members) != expected[b]:
            return True
    return False
