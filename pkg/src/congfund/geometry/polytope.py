"""Exact convex polytope clipping over the rationals.

A polytope is kept as a list of faces, each a convex polygon with
vertices ordered counterclockwise as seen from outside.  Clipping by a
rational half-space is exact, so degeneracies (vertices on the cutting
plane, coplanar faces) are decided correctly rather than by tolerance.
"""

from __future__ import annotations

from fractions import Fraction

from .lorentz import HalfSpace


class Polytope:
    """Bounded convex polytope given by oriented face polygons."""

    def __init__(self, faces):
        # faces: list of (HalfSpace, [vertex, ...]) with vertices as
        # 3-tuples of Fractions, counterclockwise from outside
        self.faces = faces

    def vertices(self):
        seen = set()
        out = []
        for _, poly in self.faces:
            for v in poly:
                if v not in seen:
                    seen.add(v)
                    out.append(v)
        return out

    def contains(self, point, strict=False):
        for hs, _ in self.faces:
            val = hs.eval_at(point)
            if val > 0 or (strict and val == 0):
                return False
        return True

    def clip(self, hs):
        """Intersect with a half-space in place.

        Returns True when the half-space actually cut the polytope,
        False when it was redundant.
        """
        new_faces = []
        changed = False
        for face_hs, poly in self.faces:
            clipped, cut = _clip_polygon(poly, hs)
            changed = changed or cut
            if len(_dedup(clipped)) >= 3:
                new_faces.append((face_hs, clipped))
        if not changed:
            return False
        boundary = _dedup(
            v for _, poly in new_faces for v in poly if hs.eval_at(v) == 0)
        if len(boundary) >= 3:
            new_faces.append((hs, _hull_on_plane(boundary, hs.normal)))
        self.faces = new_faces
        return True


def initial_box(bound=2):
    """Axis-aligned cube [-bound, bound]^3 with outward-oriented faces."""
    b = Fraction(bound)
    faces = []
    for axis in range(3):
        for sign in (1, -1):
            normal = [0, 0, 0]
            normal[axis] = sign
            hs = HalfSpace(normal[0], normal[1], normal[2], bound)
            corners = []
            i, j = (axis + 1) % 3, (axis + 2) % 3
            order = [(b, b), (-b, b), (-b, -b), (b, -b)]
            if sign < 0:
                order.reverse()
            for (u, w) in order:
                v = [Fraction(0)] * 3
                v[axis] = sign * b
                v[i], v[j] = u, w
                corners.append(tuple(v))
            faces.append((hs, corners))
    return Polytope(faces)


def _dedup(points):
    seen = set()
    out = []
    for p in points:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _clip_polygon(poly, hs):
    vals = [hs.eval_at(v) for v in poly]
    if all(v <= 0 for v in vals):
        return poly, False
    out = []
    n = len(poly)
    for i in range(n):
        a, va = poly[i], vals[i]
        b, vb = poly[(i + 1) % n], vals[(i + 1) % n]
        if va <= 0:
            out.append(a)
        if (va < 0 < vb) or (vb < 0 < va):
            t = va / (va - vb)
            out.append(tuple(a[k] + t * (b[k] - a[k]) for k in range(3)))
    return out, True


def _hull_on_plane(points, normal):
    """Convex hull of coplanar points, counterclockwise for the given
    outward normal."""
    k = max(range(3), key=lambda i: abs(normal[i]))
    i, j = (k + 1) % 3, (k + 2) % 3
    pts = sorted(set((p[i], p[j], p) for p in points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(seq):
        h = []
        for p in seq:
            while len(h) >= 2 and cross(h[-2], h[-1], p) <= 0:
                h.pop()
            h.append(p)
        return h

    lower = half(pts)
    upper = half(reversed(pts))
    hull = [p[2] for p in lower[:-1] + upper[:-1]]
    if normal[k] < 0:
        hull.reverse()
    return hull
