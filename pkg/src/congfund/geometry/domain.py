"""Fundamental domain container and its barycentric triangulation.

A certified Dirichlet domain is turned into a triangulation by
barycentric flags: one tetrahedron per (face, edge, endpoint) triple,
with vertices (endpoint, edge midpoint, face center, domain center).
Tetrahedron faces 0, 1, 2 glue to the flags differing in the endpoint,
edge, and face respectively, with matching vertex labels; face 3 lies on
the domain boundary and carries the face-pairing group element.  This is
the exchangeable form: together with the residue labels of a congruence
subgroup it assembles into a triangulation of the cover.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..ring import ProjMatrix, QuadInt
from .lorentz import lorentz_apply


@dataclass(frozen=True)
class FlagSimplex:
    """One barycentric tetrahedron of a fundamental domain."""

    mate: int
    matrix: ProjMatrix
    singular: tuple
    ideal_vertex: bool
    neighbors: tuple


class BarycentricDomain:
    """Flag triangulation of a fundamental domain, with pairing data."""

    def __init__(self, d, simplices):
        self.d = d
        self.simplices = simplices

    def __len__(self):
        return len(self.simplices)

    def to_json_dict(self):
        convention = "(1+sqrt(-%d))/2" % self.d if self.d % 4 == 3 \
            else "sqrt(-%d)" % self.d
        out = []
        for s in self.simplices:
            m = s.matrix
            out.append({
                "mate": s.mate,
                "matrix": [[e.a, e.b] for e in (m.a, m.b, m.c, m.d)],
                "singular": list(s.singular),
                "ideal_vertex": s.ideal_vertex,
                "neighbors": list(s.neighbors),
            })
        return {"d": self.d, "omega_convention": convention,
                "simplices": out}

    @classmethod
    def from_json_dict(cls, data):
        d = data["d"]
        simplices = []
        for rec in data["simplices"]:
            rows = rec["matrix"]
            m = ProjMatrix(*(QuadInt(d, a, b) for (a, b) in rows))
            simplices.append(FlagSimplex(
                mate=rec["mate"], matrix=m,
                singular=tuple(rec["singular"]),
                ideal_vertex=bool(rec["ideal_vertex"]),
                neighbors=tuple(rec["neighbors"])))
        return cls(d, simplices)

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass
class FundamentalDomain:
    """Certified Dirichlet domain with its pairing and cycle data."""

    d: int
    polytope: object
    mates: list
    lam_pairs: list
    edge_orders: dict
    cusp_classes: list
    covolume: float
    conjugator: object

    @property
    def num_cusps(self):
        return len(self.cusp_classes)

    def face_element(self, i):
        return self.polytope.faces[i][0].elem

    def _pair_vertex(self, i, v):
        from fractions import Fraction
        w = lorentz_apply(self.lam_pairs[i], (Fraction(1), v[0], v[1], v[2]))
        return (w[1] / w[0], w[2] / w[0], w[3] / w[0])

    def barycentric_export(self):
        poly = self.polytope
        d = self.d

        def quadric(v):
            return v[0] * v[0] + v[1] * v[1] + d * v[2] * v[2]

        flag_id = {}
        flags = []
        for fi, (_, verts) in enumerate(poly.faces):
            n = len(verts)
            for j in range(n):
                for s in (0, 1):
                    flag_id[(fi, j, s)] = len(flags)
                    flags.append((fi, j, s))

        def vertex_of(fi, j, s):
            verts = poly.faces[fi][1]
            return verts[(j + s) % len(verts)]

        def edge_of(fi, j):
            verts = poly.faces[fi][1]
            return frozenset((verts[j], verts[(j + 1) % len(verts)]))

        lookup = {}
        for (fi, j, s) in flags:
            lookup[(fi, edge_of(fi, j), vertex_of(fi, j, s))] = \
                flag_id[(fi, j, s)]

        edge_faces = {}
        for fi, (_, verts) in enumerate(poly.faces):
            for j in range(len(verts)):
                edge_faces.setdefault(edge_of(fi, j), []).append(fi)

        simplices = []
        for (fi, j, s) in flags:
            verts = poly.faces[fi][1]
            n = len(verts)
            v = vertex_of(fi, j, s)
            e = edge_of(fi, j)
            n0 = flag_id[(fi, j, 1 - s)]
            if s == 0:
                n1 = flag_id[(fi, (j - 1) % n, 1)]
            else:
                n1 = flag_id[(fi, (j + 1) % n, 0)]
            fa, fb = edge_faces[e]
            other = fb if fa == fi else fa
            n2 = lookup[(other, e, v)]
            g = poly.faces[fi][0].elem
            mate_face = self.mates[fi]
            iv = self._pair_vertex(fi, v)
            ie = frozenset(self._pair_vertex(fi, w) for w in e)
            mate = lookup[(mate_face, ie, iv)]
            self_paired = mate_face == fi
            singular = (
                self.edge_orders[e],
                2 if self_paired and iv == v else 1,
                2 if self_paired and ie == e else 1,
            )
            simplices.append(FlagSimplex(
                mate=mate, matrix=g, singular=singular,
                ideal_vertex=quadric(v) == 1,
                neighbors=(n0, n1, n2)))
        return BarycentricDomain(d, simplices)
