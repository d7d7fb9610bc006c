"""Exact Dirichlet fundamental domains for Bianchi groups.

The domain is computed around a generic base point (the standard base
point j is moved by a small parabolic conjugator so that no sampled
group element fixes it).  Half-space bisectors are exact rational data
in scaled Klein coordinates, so the face lattice of the clipped polytope
is combinatorially certain, and completeness is certified by face
pairings, edge cycles, ideal vertex classes, and a covolume cross-check
against the classical closed-form value.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import BadEdgeCycle, IncompleteSample
from ..presentations import bianchi_data
from ..ring import ProjMatrix
from .domain import FundamentalDomain
from .lorentz import (
    HalfSpacePoint, QuadRat, RatMatrix, bisector_halfspace, halfspace_action,
    lorentz_apply, psl_to_lorentz, rat_matrix_from_proj)
from .polytope import initial_box
from .volume import class_number, orbifold_covolume_oracle, polyhedron_covolume

COVOLUME_TOL = 1e-6
MAX_EDGE_ORDER = 3


def sample_group(data, radius):
    """Group elements reachable as generator products with every entry of
    norm at most radius^2, by pruned breadth-first search."""
    bound = radius * radius
    gens = []
    for g in data.generator_matrices:
        gens.append(g)
        gens.append(g.inv())
    ident = ProjMatrix.identity(data.d)
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                p = m * g
                if p in seen or p.max_entry_norm() > bound:
                    continue
                seen.add(p)
                new.append(p)
        frontier = new
    seen.discard(ident)
    return sorted(seen, key=lambda m: (m.max_entry_norm(), m._key))


_RHO_CANDIDATES = [
    (Fraction(1, 8), Fraction(0)),
    (Fraction(1, 7), Fraction(0)),
    (Fraction(1, 8), Fraction(1, 9)),
    (Fraction(2, 11), Fraction(1, 13)),
    (Fraction(3, 13), Fraction(2, 17)),
    (Fraction(1, 5), Fraction(1, 7)),
]


def _find_conjugator(d, elems):
    """Parabolic conjugator moving the base point so the sampled elements
    send it to pairwise distinct points, none equal to the base point."""
    one = QuadRat.of(d, 1)
    zero = QuadRat.of(d, 0)
    for (x, y) in _RHO_CANDIDATES:
        rho = QuadRat(d, x, y)
        p = HalfSpacePoint(rho, Fraction(1))
        images = {p}
        ok = True
        for m in elems:
            q = halfspace_action(m, p)
            if q in images:
                ok = False
                break
            images.add(q)
        if ok:
            return RatMatrix(one, rho, zero * one, one, check=False)
    raise IncompleteSample("no suitable base point found")


def _klein_apply(lam, v):
    w = lorentz_apply(lam, (Fraction(1), v[0], v[1], v[2]))
    return (w[1] / w[0], w[2] / w[0], w[3] / w[0])


def _quadric(d, v):
    return v[0] * v[0] + v[1] * v[1] + d * v[2] * v[2]


def dirichlet_domain(d, radius, data=None):
    """Compute and certify a Dirichlet domain for PSL(2, O_d).

    Raises IncompleteSample when the element sample out to the given
    radius does not pin the domain down.
    """
    if data is None:
        data = bianchi_data(d)
    elems = sample_group(data, radius)
    if not elems:
        raise IncompleteSample("empty sample")
    conj = _find_conjugator(d, elems)
    planes = []
    for m in elems:
        hs, v0 = bisector_halfspace(m, conjugator=conj)
        planes.append((v0, hs))
    planes.sort(key=lambda p: (p[0], p[1].normal, p[1].b))
    poly = initial_box()
    for _, hs in planes:
        poly.clip(hs)

    for hs, _ in poly.faces:
        if hs.elem is None:
            raise IncompleteSample("domain not bounded by bisectors")
    for v in poly.vertices():
        if _quadric(d, v) > 1:
            raise IncompleteSample("vertex outside the ideal boundary")

    face_index = {}
    for i, (hs, _) in enumerate(poly.faces):
        face_index[hs.elem] = i
    mates = []
    lam_pairs = []
    for hs, verts in poly.faces:
        ginv = hs.elem.inv()
        if ginv not in face_index:
            raise IncompleteSample("face with unmatched pairing element")
        mates.append(face_index[ginv])
        lam_pairs.append(
            psl_to_lorentz(conj.conjugate(rat_matrix_from_proj(ginv))))
    for i, (hs, verts) in enumerate(poly.faces):
        image = {_klein_apply(lam_pairs[i], v) for v in verts}
        if image != set(poly.faces[mates[i]][1]):
            raise IncompleteSample("face pairing does not match vertices")

    edge_faces = {}
    for i, (_, verts) in enumerate(poly.faces):
        n = len(verts)
        for j in range(n):
            key = frozenset((verts[j], verts[(j + 1) % n]))
            edge_faces.setdefault(key, []).append(i)
    for key, fs in edge_faces.items():
        if len(fs) != 2:
            raise IncompleteSample("edge not shared by exactly two faces")

    edge_orders = _edge_cycles(d, poly, mates, lam_pairs, edge_faces)
    cusp_classes = _ideal_classes(d, poly, mates, lam_pairs)
    if len(cusp_classes) != class_number(d):
        raise IncompleteSample(
            "ideal vertex classes do not match the class number")

    vol = polyhedron_covolume(poly, d)
    oracle = orbifold_covolume_oracle(d)
    if abs(vol - oracle) > COVOLUME_TOL:
        raise IncompleteSample(
            "covolume %.9f differs from expected %.9f" % (vol, oracle))

    return FundamentalDomain(
        d=d, polytope=poly, mates=mates, lam_pairs=lam_pairs,
        edge_orders=edge_orders, cusp_classes=cusp_classes,
        covolume=vol, conjugator=conj)


def _edge_cycles(d, poly, mates, lam_pairs, edge_faces):
    """Follow each edge around its cycle of face pairings and return the
    singular order of every edge (1 for regular edges)."""
    ident = ProjMatrix.identity(d)
    visited = set()
    orders = {}
    for start_edge, fs in edge_faces.items():
        for start_face in fs:
            if (start_edge, start_face) in visited:
                continue
            cycle = []
            cur_edge, cur_face = start_edge, start_face
            h = ident
            while True:
                visited.add((cur_edge, cur_face))
                cycle.append(cur_edge)
                g = poly.faces[cur_face][0].elem
                image = frozenset(
                    _klein_apply(lam_pairs[cur_face], v) for v in cur_edge)
                if image not in edge_faces:
                    raise IncompleteSample("edge cycle leaves the domain")
                h = g.inv() * h
                mate = mates[cur_face]
                pair = edge_faces[image]
                if mate not in pair:
                    raise IncompleteSample("edge cycle misses the mate face")
                nxt = pair[0] if pair[1] == mate else pair[1]
                if image == start_edge and nxt == start_face:
                    break
                cur_edge, cur_face = image, nxt
            order = None
            p = h
            for k in range(1, MAX_EDGE_ORDER + 1):
                if p.is_identity():
                    order = k
                    break
                p = p * h
            if order is None:
                raise BadEdgeCycle("edge cycle word has no small order")
            for e in cycle:
                orders[e] = order
    return orders


def _ideal_classes(d, poly, mates, lam_pairs):
    """Orbits of ideal vertices under the face pairings."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    ideal = [v for v in poly.vertices() if _quadric(d, v) == 1]
    for v in ideal:
        parent[v] = v
    for i, (_, verts) in enumerate(poly.faces):
        for v in verts:
            if _quadric(d, v) == 1:
                union(v, _klein_apply(lam_pairs[i], v))
    classes = {}
    for v in ideal:
        classes.setdefault(find(v), set()).add(v)
    return list(classes.values())


def edge_singular_orders(domain):
    return dict(domain.edge_orders)


def compute_domain(d, radii=(2, 3, 4, 5, 6, 8), data=None):
    """Try increasing sample radii until a certified domain is found."""
    if data is None:
        data = bianchi_data(d)
    last = None
    for r in radii:
        try:
            return dirichlet_domain(d, r, data=data)
        except IncompleteSample as exc:
            last = exc
    raise IncompleteSample(
        "no certified domain up to radius %s: %s" % (radii[-1], last))
