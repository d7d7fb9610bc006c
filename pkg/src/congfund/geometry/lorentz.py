"""Exact models of hyperbolic 3-space for the groups PSL(2, O_d).

Upper half-space points are z + t*j with z in Q(sqrt(-d)) and t^2
rational; such points stay in this class under the Moebius action.  All
later geometry happens in scaled Klein/Lorentz coordinates: the third
coordinate is divided by sqrt(d), which turns bisector planes and the
whole adjoint action into rational data preserving the quadratic form
diag(1, -1, -1, -d).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DegenerateBisector
from ..ring import ProjMatrix


@dataclass(frozen=True)
class QuadRat:
    """Element x + y*sqrt(-d) of Q(sqrt(-d)) with rational x, y."""

    d: int
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, d, x, y=0):
        return cls(d, Fraction(x), Fraction(y))

    def __add__(self, other):
        return QuadRat(self.d, self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return QuadRat(self.d, self.x - other.x, self.y - other.y)

    def __neg__(self):
        return QuadRat(self.d, -self.x, -self.y)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadRat(self.d, self.x * other, self.y * other)
        return QuadRat(
            self.d,
            self.x * other.x - self.d * self.y * other.y,
            self.x * other.y + self.y * other.x,
        )

    __rmul__ = __mul__

    def conj(self):
        return QuadRat(self.d, self.x, -self.y)

    def norm(self):
        """|z|^2 = x^2 + d y^2, a rational number."""
        return self.x * self.x + self.d * self.y * self.y

    def inv(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadRat(self.d, self.x / n, -self.y / n)

    def is_zero(self):
        return self.x == 0 and self.y == 0


def quadrat_from_quadint(q):
    x, y = q.to_sqrt_basis()
    return QuadRat(q.d, x, y)


class RatMatrix:
    """2x2 matrix over Q(sqrt(-d)) with determinant 1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, check=True):
        self.a, self.b, self.c, self.d = a, b, c, d
        if check:
            det = a * d - b * c
            if det.x != 1 or det.y != 0:
                raise ValueError("determinant is not 1")

    @property
    def field_d(self):
        return self.a.d

    def __mul__(self, other):
        return RatMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            check=False,
        )

    def inv(self):
        return RatMatrix(self.d, -self.b, -self.c, self.a, check=False)

    def conjugate(self, m):
        """l^-1 m l for l = self."""
        return self.inv() * m * self


def rat_matrix_from_proj(m):
    return RatMatrix(
        quadrat_from_quadint(m.a), quadrat_from_quadint(m.b),
        quadrat_from_quadint(m.c), quadrat_from_quadint(m.d))


@dataclass(frozen=True)
class HalfSpacePoint:
    """Upper half-space point z + t*j stored as (z, t^2)."""

    z: QuadRat
    tsq: Fraction

    def __post_init__(self):
        if self.tsq <= 0:
            raise ValueError("point not in the open upper half space")


def base_point(d):
    return HalfSpacePoint(QuadRat.of(d, 0, 0), Fraction(1))


def halfspace_action(m, p):
    """Moebius action of a determinant one matrix on z + t*j.

    The image is ((az+b)(conj(cz+d)) + a conj(c) t^2 + t j) divided by
    |c(z+tj)+d|^2; only z and t^2 are needed, both staying in the exact
    coordinate class.
    """
    if isinstance(m, ProjMatrix):
        m = rat_matrix_from_proj(m)
    z, tsq = p.z, p.tsq
    czd = m.c * z + m.d
    denom = czd.norm() + m.c.norm() * tsq
    num = (m.a * z + m.b) * czd.conj() + (m.a * m.c.conj()) * tsq
    return HalfSpacePoint(num * (Fraction(1) / denom), tsq / (denom * denom))


def klein_coords(p):
    """Scaled Klein ball coordinates of an upper half-space point.

    Returns rational (X, Y, Z') with the true Klein point (X, Y, sqrt(d) Z').
    The map sends j to the origin.
    """
    nz = p.z.norm()
    denom = nz + p.tsq + 1
    return (
        (nz + p.tsq - 1) / denom,
        2 * p.z.x / denom,
        2 * p.z.y / denom,
    )


# Hermitian basis used for the adjoint action:
#   E0 = [[1,0],[0,1]], E1 = [[1,0],[0,-1]], E2 = [[0,1],[1,0]],
#   E3' = [[0, sqrt(-d)], [-sqrt(-d), 0]]
# A point with coordinates (x0, x1, x2, x3') has Hermitian form
# [[x0+x1, x2 + x3' sqrt(-d)], [x2 - x3' sqrt(-d), x0-x1]] and
# det = x0^2 - x1^2 - x2^2 - d x3'^2, the preserved quadratic form.


def _herm_basis(d):
    one = QuadRat.of(d, 1)
    zero = QuadRat.of(d, 0)
    s = QuadRat.of(d, 0, 1)
    return [
        (one, zero, zero, one),
        (one, zero, zero, -one),
        (zero, one, one, zero),
        (zero, s, -s, zero),
    ]


def psl_to_lorentz(m):
    """4x4 rational matrix of the adjoint action H -> m H m* in the scaled
    Hermitian basis.  Columns are the images of the basis forms.  The
    result preserves diag(1, -1, -1, -d) and is shared by m and -m."""
    if isinstance(m, ProjMatrix):
        m = rat_matrix_from_proj(m)
    d = m.field_d
    ac, bc, cc, dc = m.a.conj(), m.b.conj(), m.c.conj(), m.d.conj()
    cols = []
    for (A, Z, Zb, B) in _herm_basis(d):
        # m [[A, Z], [Zb, B]] m*
        # first m H:
        r11 = m.a * A + m.b * Zb
        r12 = m.a * Z + m.b * B
        r21 = m.c * A + m.d * Zb
        r22 = m.c * Z + m.d * B
        # then (m H) m*:
        h11 = r11 * ac + r12 * bc
        h12 = r11 * cc + r12 * dc
        h22 = r21 * cc + r22 * dc
        if h11.y != 0 or h22.y != 0:
            raise ArithmeticError("image form is not Hermitian")
        x0 = (h11.x + h22.x) / 2
        x1 = (h11.x - h22.x) / 2
        x2 = h12.x
        x3 = h12.y
        cols.append((x0, x1, x2, x3))
    return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))


def lorentz_apply(lam, v):
    return tuple(sum(lam[i][j] * v[j] for j in range(4)) for i in range(4))


def lorentz_mul(l1, l2):
    return tuple(
        tuple(sum(l1[i][k] * l2[k][j] for k in range(4)) for j in range(4))
        for i in range(4))


def minkowski_product(d, u, v):
    return u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - d * u[3] * v[3]


BASE_VECTOR = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))


@dataclass(frozen=True)
class HalfSpace:
    """Rational half-space a1 X + a2 Y + a3 Z' <= b in scaled Klein
    coordinates, with the group element whose bisector it is."""

    a1: int
    a2: int
    a3: int
    b: int
    elem: object = None

    @property
    def normal(self):
        return (self.a1, self.a2, self.a3)

    def eval_at(self, v):
        return self.a1 * v[0] + self.a2 * v[1] + self.a3 * v[2] - self.b


def _primitive(fracs):
    from math import gcd
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def bisector_halfspace(m, conjugator=None, lam=None):
    """Half-space of points at least as close to the scaled-Klein origin as
    to its image under m' = conjugator^-1 m conjugator.

    A Lorentz matrix may be passed directly via lam to avoid recomputing.
    Raises DegenerateBisector when m' fixes the base point.
    """
    if lam is None:
        mm = m if not isinstance(m, ProjMatrix) else rat_matrix_from_proj(m)
        if conjugator is not None:
            mm = conjugator.conjugate(mm)
        lam = psl_to_lorentz(mm)
        d = mm.field_d
    else:
        d = m.field_d if isinstance(m, (RatMatrix, ProjMatrix)) else m
    v = lorentz_apply(lam, BASE_VECTOR)
    if v == BASE_VECTOR:
        raise DegenerateBisector("element fixes the base point")
    # closer to e0 than to v: <x, e0 - v> <= 0 in the Lorentz pairing,
    # in Klein coordinates v1 X + v2 Y + d v3 Z' <= v0 - 1
    a1, a2, a3, b = _primitive([v[1], v[2], d * v[3], v[0] - 1])
    elem = m if isinstance(m, ProjMatrix) else None
    return HalfSpace(a1, a2, a3, b, elem), v[0]
