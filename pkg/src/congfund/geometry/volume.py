"""Hyperbolic covolumes: exact-series oracle and numeric polytope volume.

The oracle evaluates the classical closed form for the covolume of
PSL(2, O_d) acting on hyperbolic 3-space,

    vol = |D|^(3/2) zeta(2) L(2, chi_D) / (4 pi^2),

with D the field discriminant and chi_D the Kronecker character.  The
numeric routine integrates the volume of a Klein-model polytope
containing the origin and is used to cross-check computed domains.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath

from ..ring import check_d, discriminant


def kronecker_symbol(a, n):
    if n == 0:
        return 1 if a in (1, -1) else 0
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker_symbol(a, -n)
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@lru_cache(maxsize=None)
def class_number(d):
    """Class number of Q(sqrt(-d)), counted via reduced binary quadratic
    forms of the field discriminant."""
    check_d(d)
    disc = discriminant(d)
    h = 0
    bound = math.isqrt(-disc // 3)
    for a in range(1, bound + 1):
        for b in range(-a + 1, a + 1):
            rem = b * b - disc
            if rem % (4 * a):
                continue
            c = rem // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            h += 1
    return h


@lru_cache(maxsize=None)
def orbifld_lvalue(disc, prec=30):
    """L(2, chi_D) as a finite sum of Hurwitz zeta values."""
    q = -disc
    with mpmath.workdps(prec):
        total = mpmath.mpf(0)
        for r in range(1, q + 1):
            chi = kronecker_symbol(disc, r)
            if chi:
                total += chi * mpmath.zeta(2, mpmath.mpf(r) / q)
        return total / q ** 2


def orbifold_covolume_oracle(d):
    """Covolume of the full Bianchi orbifold for O_d, as a float."""
    check_d(d)
    disc = discriminant(d)
    with mpmath.workdps(30):
        val = (mpmath.mpf(-disc) ** mpmath.mpf("1.5")
               * mpmath.zeta(2) * orbifld_lvalue(disc)
               / (4 * mpmath.pi ** 2))
        return float(val)


def _ray_volume(r):
    """Hyperbolic volume per unit solid angle out to Klein radius r."""
    return r / (2 * (1 - r * r)) - 0.25 * math.log((1 + r) / (1 - r))


def _triangle_points(a, b, c):
    mids = []
    for (p, q) in ((a, b), (b, c), (c, a)):
        mids.append(tuple((p[k] + q[k]) / 2 for k in range(3)))
    return mids


def _tri_area(a, b, c):
    u = [b[k] - a[k] for k in range(3)]
    v = [c[k] - a[k] for k in range(3)]
    w = (u[1] * v[2] - u[2] * v[1],
         u[2] * v[0] - u[0] * v[2],
         u[0] * v[1] - u[1] * v[0])
    return 0.5 * math.sqrt(w[0] ** 2 + w[1] ** 2 + w[2] ** 2)


def _cone_density(p, h):
    rho = math.sqrt(p[0] ** 2 + p[1] ** 2 + p[2] ** 2)
    if rho >= 1:
        # evaluation points are interior unless the face leaves the ball;
        # clamp so stray roundoff at ideal points stays finite
        rho = 1 - 1e-15
    return _ray_volume(rho) * h / max(rho, 1e-300) ** 3


def _tri_estimate(a, b, c, h):
    mids = _triangle_points(a, b, c)
    return _tri_area(a, b, c) * sum(_cone_density(m, h) for m in mids) / 3


def _tri_integrate(a, b, c, h, tol, depth):
    coarse = _tri_estimate(a, b, c, h)
    m = _triangle_points(a, b, c)
    parts = ((a, m[0], m[2]), (m[0], b, m[1]),
             (m[2], m[1], c), (m[0], m[1], m[2]))
    fine = sum(_tri_estimate(*t, h) for t in parts)
    if depth <= 0 or abs(fine - coarse) <= 3 * tol:
        return fine + (fine - coarse) / 3
    return sum(
        _tri_integrate(*t, h, tol / 2, depth - 1) for t in parts)


def _lerp(a, b, s):
    return tuple(a[k] + s * (b[k] - a[k]) for k in range(3))


def _tri_ideal_corner(a, b, c, h, tol, depth, strips=48):
    """Integrate over a triangle whose corner a lies on the unit sphere.

    The cone density blows up like 1/(1 - |p|) at a, which grows
    linearly along chords into the ball, so geometric strips toward the
    corner converge geometrically and the tail past the last strip is
    negligible.
    """
    total = 0.0
    s_hi = 1.0
    for _ in range(strips):
        s_lo = s_hi / 2
        p1, p2 = _lerp(a, b, s_hi), _lerp(a, c, s_hi)
        p3, p4 = _lerp(a, b, s_lo), _lerp(a, c, s_lo)
        total += _tri_integrate(p3, p1, p2, h, tol / 2, depth)
        total += _tri_integrate(p3, p2, p4, h, tol / 2, depth)
        s_hi = s_lo
    return total


def polyhedron_covolume(polytope, d, tol=1e-9, max_depth=22):
    """Hyperbolic volume of a Klein-model polytope containing the origin.

    The polytope lives in scaled coordinates (third axis divided by
    sqrt(d)); faces are integrated as cones from the origin with
    adaptive midpoint quadrature.  Ideal vertices, known exactly from
    the rational data, get geometric refinement and are never sampled.
    """
    sd = math.sqrt(d)
    total = 0.0
    for hs, poly in polytope.faces:
        ideal = [v[0] * v[0] + v[1] * v[1] + d * v[2] * v[2] == 1
                 for v in poly]
        pts = [(float(v[0]), float(v[1]), float(v[2]) * sd) for v in poly]
        # plane a1 x + a2 y + (a3/sqrt(d)) z = b; h = dist from origin
        nx, ny, nz = float(hs.a1), float(hs.a2), float(hs.a3) / sd
        nlen = math.sqrt(nx * nx + ny * ny + nz * nz)
        h = float(hs.b) / nlen
        if h <= 0:
            raise ValueError("polytope does not contain the origin")
        n = len(pts)
        centroid = tuple(sum(p[k] for p in pts) / n for k in range(3))
        tris = []
        for i in range(n):
            u, v = pts[i], pts[(i + 1) % n]
            iu, iv = ideal[i], ideal[(i + 1) % n]
            if iu and iv:
                m = _lerp(u, v, 0.5)
                tris.append((u, m, centroid, True))
                tris.append((v, m, centroid, True))
            elif iu:
                tris.append((u, v, centroid, True))
            elif iv:
                tris.append((v, centroid, u, True))
            else:
                tris.append((centroid, u, v, False))
        face_tol = tol / max(len(tris), 1)
        for (p, q, r, has_ideal) in tris:
            if has_ideal:
                total += _tri_ideal_corner(p, q, r, h, face_tol, max_depth)
            else:
                total += _tri_integrate(p, q, r, h, face_tol, max_depth)
    return total
