"""Exact arithmetic in imaginary quadratic orders O_d and their finite
projective quotients.

Elements are written over the integral basis {1, w} where w = (1+sqrt(-d))/2
for d = 3 mod 4 and w = sqrt(-d) otherwise.  Ideals are stored as canonical
lattice triples (n, k, l) meaning I = n*Z + (k + l*w)*Z with 0 <= k < n,
l > 0, l | n and l | k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    BudgetExceeded,
    FactorizationFailed,
    NotSquareFree,
    ZeroIdeal,
)


def check_d(d):
    """Validate that d is a squarefree positive integer."""
    if not isinstance(d, int) or d <= 0:
        raise NotSquareFree("d must be a positive integer, got %r" % (d,))
    for p in range(2, math.isqrt(d) + 1):
        if d % (p * p) == 0:
            raise NotSquareFree("d = %d is not squarefree" % d)
    return d


def discriminant(d):
    """Field discriminant of Q(sqrt(-d))."""
    return -d if d % 4 == 3 else -4 * d


@dataclass(frozen=True)
class QuadInt:
    """An element a + b*w of O_d."""

    d: int
    a: int
    b: int

    def __post_init__(self):
        check_d(self.d)

    # w^2 = w - (1+d)/4   when d = 3 mod 4
    # w^2 = -d            otherwise
    def _wsq(self):
        if self.d % 4 == 3:
            return (1, -(1 + self.d) // 4)  # coefficients (w, 1)
        return (0, -self.d)

    def __add__(self, other):
        self._check(other)
        return QuadInt(self.d, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        self._check(other)
        return QuadInt(self.d, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QuadInt(self.d, -self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadInt(self.d, self.a * other, self.b * other)
        self._check(other)
        cw, c1 = self._wsq()
        # (a1 + b1 w)(a2 + b2 w) = a1 a2 + (a1 b2 + a2 b1) w + b1 b2 w^2
        bb = self.b * other.b
        return QuadInt(
            self.d,
            self.a * other.a + bb * c1,
            self.a * other.b + self.b * other.a + bb * cw,
        )

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, QuadInt) or other.d != self.d:
            raise TypeError("mixed or invalid operands: %r, %r" % (self, other))

    def conj(self):
        if self.d % 4 == 3:
            return QuadInt(self.d, self.a + self.b, -self.b)
        return QuadInt(self.d, self.a, -self.b)

    def norm(self):
        if self.d % 4 == 3:
            return self.a * self.a + self.a * self.b + self.b * self.b * (1 + self.d) // 4
        return self.a * self.a + self.d * self.b * self.b

    def trace(self):
        if self.d % 4 == 3:
            return 2 * self.a + self.b
        return 2 * self.a

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def to_sqrt_basis(self):
        """Coordinates (x, y) with value x + y*sqrt(-d), exact rationals."""
        if self.d % 4 == 3:
            return (Fraction(2 * self.a + self.b, 2), Fraction(self.b, 2))
        return (Fraction(self.a), Fraction(self.b))

    def __repr__(self):
        return "QuadInt(d=%d, %d%+d*w)" % (self.d, self.a, self.b)


def quad_one(d):
    return QuadInt(d, 1, 0)


def quad_zero(d):
    return QuadInt(d, 0, 0)


def quad_omega(d):
    return QuadInt(d, 0, 1)


def quad_sqrt(d):
    """The element sqrt(-d) of O_d."""
    if d % 4 == 3:
        return QuadInt(d, -1, 2)
    return QuadInt(d, 0, 1)


def _lattice_basis(rows):
    """Hermite basis [(n, 0), (k, l)] of the lattice spanned by integer
    pairs, with n > 0, l > 0, 0 <= k < n."""
    v2 = None  # (k, l) with minimal positive l achievable
    firsts = []
    for (a, b) in rows:
        if a == 0 and b == 0:
            continue
        if b == 0:
            firsts.append(a)
            continue
        if v2 is None:
            v2 = (a, b) if b > 0 else (-a, -b)
            continue
        k, l = v2
        g, x, y = _xgcd(l, b)
        # x*l + y*b = g; new second vector with l-coordinate g
        nk = x * k + y * a
        # the eliminated combination has second coordinate 0
        firsts.append((b // g) * k - (l // g) * a)
        v2 = (nk, g)
    if v2 is None:
        if not firsts:
            raise ZeroIdeal("zero lattice")
        # rank one lattice along Z; not an ideal lattice
        return (abs(math.gcd(*firsts)) if len(firsts) > 1 else abs(firsts[0]), 0), None
    n = 0
    for a in firsts:
        n = math.gcd(n, a)
    if n == 0:
        raise ZeroIdeal("lattice has rank one, not an ideal lattice")
    k, l = v2
    k %= n
    return (n, 0), (k, l)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class QuadIdeal:
    """Nonzero ideal of O_d as a canonical lattice triple (n, k, l)."""

    d: int
    n: int
    k: int
    l: int

    def __post_init__(self):
        check_d(self.d)
        n, k, l = self.n, self.k, self.l
        if n <= 0 or l <= 0 or not (0 <= k < n) or n % l or k % l:
            raise ValueError("non-canonical ideal triple (%d, %d, %d)" % (n, k, l))

    @classmethod
    def from_triple(cls, d, n, k, l):
        """Build from a possibly non-canonical triple; negative l flips the
        sign of both k and l, then k is reduced mod n."""
        if l < 0:
            k, l = -k, -l
        if n < 0:
            n = -n
        if n == 0 or l == 0:
            raise ZeroIdeal("degenerate triple")
        k %= n
        ideal = cls(d, n, k, l)
        if not ideal._is_ideal():
            raise ValueError("triple (%d, %d, %d) is not an ideal of O_%d" % (n, k, l, d))
        return ideal

    def _is_ideal(self):
        w = quad_omega(self.d)
        g1 = QuadInt(self.d, self.n, 0)
        g2 = QuadInt(self.d, self.k, self.l)
        return self.contains(g1 * w) and self.contains(g2 * w)

    def norm(self):
        return self.n * self.l

    def contains(self, x):
        if x.d != self.d:
            raise TypeError("element of wrong field")
        if x.b % self.l:
            return False
        return (x.a - (x.b // self.l) * self.k) % self.n == 0

    def contains_ideal(self, other):
        g1 = QuadInt(self.d, other.n, 0)
        g2 = QuadInt(self.d, other.k, other.l)
        return self.contains(g1) and self.contains(g2)

    def generators(self):
        return [QuadInt(self.d, self.n, 0), QuadInt(self.d, self.k, self.l)]

    def __mul__(self, other):
        if isinstance(other, QuadIdeal):
            gens = [x * y for x in self.generators() for y in other.generators()]
            return ideal_from_generators(self.d, gens)
        raise TypeError(other)

    def __repr__(self):
        return "QuadIdeal(d=%d, (%d, %d, %d))" % (self.d, self.n, self.k, self.l)


def ideal_from_generators(d, gens):
    """Smallest ideal of O_d containing the given elements.

    The lattice spanned by the x_i and x_i*w is reduced to a two-element
    Hermite basis; that lattice is automatically closed under
    multiplication by w.
    """
    check_d(d)
    w = quad_omega(d)
    rows = []
    for x in gens:
        if isinstance(x, int):
            x = QuadInt(d, x, 0)
        if x.d != d:
            raise TypeError("generator in wrong field: %r" % (x,))
        if x.is_zero():
            continue
        rows.append((x.a, x.b))
        xw = x * w
        rows.append((xw.a, xw.b))
    if not rows:
        raise ZeroIdeal("all generators are zero")
    (n, _), v2 = _lattice_basis(rows)
    if v2 is None:
        raise ZeroIdeal("generators span a rank one lattice")
    k, l = v2
    return QuadIdeal(d, n, k, l)


def reduce_mod_ideal(x, ideal):
    """Unique representative of x mod the ideal lattice, lying in the
    half-open fundamental parallelogram of the basis (n, 0), (k, l)."""
    if x.d != ideal.d:
        raise TypeError("element of wrong field")
    t = x.b // ideal.l
    a = x.a - t * ideal.k
    b = x.b - t * ideal.l
    # coordinate along (n, 0) is (a - (b/l) k) / n; bring it into [0, 1)
    s = (a * ideal.l - b * ideal.k) // (ideal.n * ideal.l)
    a -= s * ideal.n
    return QuadInt(x.d, a, b)


def _sqrt_mod(a, p):
    """All square roots of a mod p, by direct scan (p stays small here)."""
    a %= p
    return [r for r in range(p) if (r * r - a) % p == 0]


@lru_cache(maxsize=None)
def primes_above(d, p):
    """Prime ideals of O_d over the rational prime p, with their norms.

    Returns a list of (QuadIdeal, norm) entries; one entry of norm p^2 for
    inert p, one of norm p for ramified p, two of norm p for split p.
    """
    check_d(d)
    disc = discriminant(d)
    pi = QuadInt(d, p, 0)
    if disc % p == 0:
        if p == 2:
            if d % 4 == 1:
                g = QuadInt(d, 1, 1)  # 1 + sqrt(-d)
            else:
                g = quad_sqrt(d)
        else:
            g = quad_sqrt(d)
        return [(ideal_from_generators(d, [pi, g]), p)]
    if d % 4 == 3:
        # roots of x^2 - x + (1+d)/4, the minimal polynomial of w
        c = (1 + d) // 4
        roots = [r for r in range(p) if (r * r - r + c) % p == 0]
    else:
        roots = _sqrt_mod(-d, p)
        roots = [(-r) % p for r in roots]  # roots of x^2 + d as values of w
    if not roots:
        return [(ideal_from_generators(d, [pi]), p * p)]
    out = []
    for r in sorted(set(roots)):
        g = QuadInt(d, -r, 1)  # w - r
        out.append((ideal_from_generators(d, [pi, g]), p))
    return out


def _rational_prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def factor_ideal(ideal):
    """Factor a nonzero ideal into prime ideals.

    Returns a list of (prime, norm, exponent) sorted by (norm, k), and
    verifies the product reconstructs the ideal exactly.
    """
    d = ideal.d
    nrm = ideal.norm()
    if nrm == 1:
        return []
    out = []
    for p in _rational_prime_factors(nrm):
        for prime, pn in primes_above(d, p):
            e = 0
            power = None
            while True:
                power = prime if power is None else power * prime
                if power.contains_ideal(ideal):
                    e += 1
                else:
                    break
            if e:
                out.append((prime, pn, e))
    prod = None
    for prime, _, e in out:
        for _ in range(e):
            prod = prime if prod is None else prod * prime
    if prod != ideal:
        raise FactorizationFailed("prime power product does not match %r" % (ideal,))
    return sorted(out, key=lambda t: (t[1], t[0].n, t[0].k, t[0].l))


def psl_order(ideal):
    """Order of PSL(2, O_d / I) for a nonzero ideal I.

    N(I)^3 / tau times the product of (1 - 1/N(P)^2) over the distinct
    prime divisors P of I, where tau is 1 when 2 lies in I and 2 otherwise.
    """
    nrm = ideal.norm()
    if nrm == 1:
        return 1
    tau = 1 if ideal.contains(QuadInt(ideal.d, 2, 0)) else 2
    order = Fraction(nrm ** 3, tau)
    for _, pn, _ in factor_ideal(ideal):
        order *= 1 - Fraction(1, pn * pn)
    if order.denominator != 1:
        raise FactorizationFailed("non-integral order for %r" % (ideal,))
    return int(order)


class ProjMatrix:
    """Determinant one 2x2 matrix over O_d, considered up to sign.

    The stored representative is sign-canonical: the first nonzero
    coefficient in the entry order a, b, c, d (basis coordinates first)
    is positive.
    """

    __slots__ = ("a", "b", "c", "d", "_key")

    def __init__(self, a, b, c, d):
        det = a * d - b * c
        if not (det.a == 1 and det.b == 0):
            raise ValueError("determinant is not 1: %r" % (det,))
        for x in (a, b, c, d):
            coeffs = (x.a, x.b)
            flip = None
            for v in coeffs:
                if v:
                    flip = v < 0
                    break
            if flip is not None:
                if flip:
                    a, b, c, d = -a, -b, -c, -d
                break
        self.a, self.b, self.c, self.d = a, b, c, d
        self._key = (a.a, a.b, b.a, b.b, c.a, c.b, d.a, d.b)

    @classmethod
    def identity(cls, d):
        return cls(quad_one(d), quad_zero(d), quad_zero(d), quad_one(d))

    @classmethod
    def from_rows(cls, d, rows):
        (aa, ab), (ba, bb), (ca, cb), (da, db) = (
            rows[0][0], rows[0][1], rows[1][0], rows[1][1])
        return cls(QuadInt(d, *aa), QuadInt(d, *ab), QuadInt(d, *ba), QuadInt(d, *bb))

    @property
    def field_d(self):
        return self.a.d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other):
        return ProjMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self):
        return ProjMatrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        out = ProjMatrix.identity(self.field_d)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_identity(self):
        return (self.a.a == 1 and self.a.b == 0 and self.b.is_zero()
                and self.c.is_zero() and self.d.a == 1 and self.d.b == 0)

    def max_entry_norm(self):
        return max(x.norm() for x in self.entries())

    def __eq__(self, other):
        return isinstance(other, ProjMatrix) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "ProjMatrix(%r, %r, %r, %r)" % (self.a, self.b, self.c, self.d)


def proj_canonicalize(m, ideal):
    """Canonical key for the class of m in PSL(2, O_d / I).

    Both sign representatives are entry-reduced into the fundamental
    parallelogram of I and the lexicographically smaller tuple is used.
    """
    keys = []
    for sign in (1, -1):
        entries = []
        for x in m.entries():
            r = reduce_mod_ideal(x if sign == 1 else -x, ideal)
            entries.append((r.a, r.b))
        keys.append(tuple(entries))
    return min(keys)


class FiniteProjGroup:
    """Enumerated finite group PSL(2, O_d / I) with canonical residue keys."""

    def __init__(self, ideal, elements, generator_keys):
        self.ideal = ideal
        self.elements = elements  # key -> ProjMatrix representative
        self.generator_keys = generator_keys

    @property
    def order(self):
        return len(self.elements)

    def key(self, m):
        return proj_canonicalize(m, self.ideal)

    def subgroup_closure(self, mats):
        """Keys of the subgroup generated by the images of the given
        matrices."""
        I = self.ideal
        ident = ProjMatrix.identity(I.d)
        seen = {proj_canonicalize(ident, I): ident}
        gens = []
        for m in mats:
            gens.append(m)
            gens.append(m.inv())
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x * g
                    k = proj_canonicalize(y, I)
                    if k not in seen:
                        seen[k] = y
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def coset_key(self, m, subgroup_keys_mats):
        """Canonical key of the left coset m * H, H given by matrices."""
        I = self.ideal
        return min(proj_canonicalize(m * h, I) for h in subgroup_keys_mats)


def enumerate_psl(ideal, generators, budget=None, check_order=True):
    """Enumerate PSL(2, O_d / I) as the closure of the generator images.

    generators: matrices generating PSL(2, O_d).  Raises BudgetExceeded
    if the closure grows past the budget; verifies the final count against
    the order formula unless check_order is False.
    """
    d = ideal.d
    ident = ProjMatrix.identity(d)
    gens = []
    for g in generators:
        gens.append(g)
        gens.append(g.inv())
    seen = {proj_canonicalize(ident, ideal): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                k = proj_canonicalize(y, ideal)
                if k not in seen:
                    seen[k] = y
                    nxt.append(y)
                    if budget is not None and len(seen) > budget:
                        raise BudgetExceeded(
                            "projective group exceeds budget %d" % budget,
                            lower_bound=len(seen))
        frontier = nxt
    group = FiniteProjGroup(ideal, seen, [proj_canonicalize(g, ideal) for g in generators])
    if check_order and group.order != psl_order(ideal):
        raise FactorizationFailed(
            "enumerated order %d does not match formula %d for %r"
            % (group.order, psl_order(ideal), ideal))
    return group


def ideals_up_to_norm(d, max_norm, include_unit=False):
    """All ideals of O_d with norm at most max_norm, sorted by norm."""
    check_d(d)
    out = []
    for n in range(1, max_norm + 1):
        for l in range(1, max_norm // n + 1):
            for k in range(0, n, l):
                if n % l:
                    continue
                try:
                    ideal = QuadIdeal(d, n, k, l)
                except ValueError:
                    continue
                if ideal._is_ideal():
                    if ideal.norm() == 1 and not include_unit:
                        continue
                    out.append(ideal)
    return sorted(out, key=lambda i: (i.norm(), i.n, i.k, i.l))


def peripheral_triple(ideal):
    """Lattice triple of the ideal in the basis used by the bundled
    parabolic generators: {1, w} in general, {1, w^2} for d = 3."""
    if ideal.d == 3:
        # k + l*w = (k + l) + l*w^2
        return (ideal.n, (ideal.k + ideal.l) % ideal.n, ideal.l)
    return (ideal.n, ideal.k, ideal.l)
