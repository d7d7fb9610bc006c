"""Coset enumeration and the link-certificate pipeline.

Provides an HLT-style Todd-Coxeter enumerator with coincidence
handling, Reidemeister-Schreier subgroup presentations, the quotient
groups B(I) of the Bianchi groups by the normal closure of peripheral
lattice relators, peripheral-triple validation, and the certificate
checks that verify a congruence quotient is a link complement.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from importlib import resources

from .errors import BudgetExceeded, IncompleteTable, MalformedShorthand, \
    OrderMismatch, Test1Failed, Test2Failed, Test3Failed, UnsupportedD, \
    ValidationError
from .homology import AbelianGroup, SparseIntMatrix, smith_normal_form
from .literals import parse_ideal
from .presentations import bianchi_data
from .ring import QuadInt, enumerate_psl, proj_canonicalize, psl_order, \
    reduce_mod_ideal
from .words import Presentation, parse_word, word_inverse, word_mul, \
    word_power

DEFAULT_BUDGET = 500_000


class CosetTable:
    """Complete coset table: rows are cosets, columns generator columns
    (generator i forward at 2i, inverse at 2i+1)."""

    def __init__(self, generators, rows):
        self.generators = list(generators)
        self.rows = rows
        self.index = len(rows)
        self.complete = all(all(e is not None for e in row) for row in rows)

    def apply(self, coset, word):
        for x in word:
            c = 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1
            coset = self.rows[coset][c]
        return coset

    def verify(self, relators=(), subgroup=()):
        """Assert the defining coset-table properties."""
        if not self.complete:
            raise IncompleteTable("table has undefined entries")
        n = self.index
        for g in range(len(self.generators)):
            fwd = [row[2 * g] for row in self.rows]
            if sorted(fwd) != list(range(n)):
                raise IncompleteTable(
                    "column %s is not a permutation" % self.generators[g])
            for a, b in enumerate(fwd):
                if self.rows[b][2 * g + 1] != a:
                    raise IncompleteTable("inverse column mismatch")
        for r in relators:
            for a in range(n):
                if self.apply(a, r) != a:
                    raise IncompleteTable("relator does not act trivially")
        for w in subgroup:
            if self.apply(0, w) != 0:
                raise IncompleteTable("subgroup generator moves coset 1")


def todd_coxeter(pres, subgroup=(), budget=DEFAULT_BUDGET):
    """HLT coset enumeration of the subgroup's cosets in the presented
    group.  Definitions are made at the first undefined entry in
    row-major order, so tables are reproducible.  Exhausting the budget
    of live cosets raises BudgetExceeded; no infiniteness is ever
    concluded from enumeration.
    """
    ngens = len(pres.generators)
    ncols = 2 * ngens
    relators = [r for r in pres.relators if r]
    table = [[None] * ncols]
    p = [0]
    queue = deque()
    nalive = 1

    def rep(k):
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def col(x):
        return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1

    def define(a, c):
        nonlocal nalive
        if nalive >= budget:
            raise BudgetExceeded(
                "coset budget %d exhausted; order not determined" % budget)
        b = len(table)
        table.append([None] * ncols)
        p.append(b)
        table[a][c] = b
        table[b][c ^ 1] = a
        nalive += 1
        return b

    def merge(a, b):
        nonlocal nalive
        a, b = rep(a), rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        p[b] = a
        nalive -= 1
        queue.append(b)

    def coincidence(a, b):
        merge(a, b)
        while queue:
            y = queue.popleft()
            for c in range(ncols):
                delta = table[y][c]
                if delta is None:
                    continue
                if table[delta][c ^ 1] == y:
                    table[delta][c ^ 1] = None
                mu, nu = rep(y), rep(delta)
                if table[mu][c] is not None:
                    merge(nu, table[mu][c])
                elif table[nu][c ^ 1] is not None:
                    merge(mu, table[nu][c ^ 1])
                else:
                    table[mu][c] = nu
                    table[nu][c ^ 1] = mu

    def scan_and_fill(a, w):
        f, i = a, 0
        b, j = a, len(w) - 1
        while True:
            while i <= j and table[f][col(w[i])] is not None:
                f = table[f][col(w[i])]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][col(w[j]) ^ 1] is not None:
                b = table[b][col(w[j]) ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                c = col(w[i])
                table[f][c] = b
                table[b][c ^ 1] = f
                return
            define(f, col(w[i]))

    for w in subgroup:
        if w:
            scan_and_fill(0, w)
    a = 0
    while a < len(table):
        if rep(a) != a:
            a += 1
            continue
        for w in relators:
            scan_and_fill(a, w)
            if rep(a) != a:
                break
        if rep(a) == a:
            for c in range(ncols):
                if table[a][c] is None:
                    define(a, c)
        a += 1

    live = [k for k in range(len(table)) if rep(k) == k]
    number = {k: i for i, k in enumerate(live)}
    rows = [[number[rep(e)] for e in table[k]] for k in live]
    out = CosetTable(pres.generators, rows)
    out.verify(relators, [w for w in subgroup if w])
    return out


def abelian_invariants(pres):
    """Abelianization of a presented group."""
    ngens = len(pres.generators)
    mat = SparseIntMatrix(len(pres.relators), ngens)
    for i, r in enumerate(pres.relators):
        for x in r:
            mat.add(i, abs(x) - 1, 1 if x > 0 else -1)
    rank, divisors = smith_normal_form(mat)
    return AbelianGroup(ngens - rank, divisors)


class SchreierSystem:
    """Reidemeister-Schreier data for a subgroup given by a complete
    coset table over an ambient presentation."""

    def __init__(self, pres, table):
        if not table.complete:
            raise IncompleteTable("Schreier rewriting needs a complete table")
        self.ambient = pres
        self.table = table
        ngens = len(pres.generators)
        n = table.index
        tree = set()
        seen = [False] * n
        seen[0] = True
        dq = deque([0])
        while dq:
            a = dq.popleft()
            for c in range(2 * ngens):
                b = table.rows[a][c]
                if not seen[b]:
                    seen[b] = True
                    tree.add((a, c))
                    tree.add((b, c ^ 1))
                    dq.append(b)
        self.gen_of = {}
        names = []
        for a in range(n):
            for g in range(ngens):
                if (a, 2 * g) in tree:
                    continue
                self.gen_of[(a, g)] = len(names) + 1
                names.append("x%d" % (len(names) + 1))
        relators = []
        for a in range(n):
            for r in pres.relators:
                w = self._trace(a, r)
                if w:
                    relators.append(w)
        self.presentation = Presentation(names, relators)

    def _trace(self, start, word):
        out = []
        a = start
        for x in word:
            g = abs(x) - 1
            if x > 0:
                s = self.gen_of.get((a, g))
                b = self.table.rows[a][2 * g]
                if s is not None:
                    out.append(s)
            else:
                b = self.table.rows[a][2 * g + 1]
                s = self.gen_of.get((b, g))
                if s is not None:
                    out.append(-s)
            a = b
        if a != start:
            raise ValueError("word does not stabilize the start coset")
        reduced = []
        for x in out:
            if reduced and reduced[-1] == -x:
                reduced.pop()
            else:
                reduced.append(x)
        return tuple(reduced)

    def rewrite(self, word):
        """Rewrite an ambient word lying in the subgroup into the
        Schreier generators."""
        return self._trace(0, word)


def reidemeister_schreier(pres, table):
    """Presentation of the subgroup whose cosets the table enumerates."""
    return SchreierSystem(pres, table).presentation


# ---------------------------------------------------------------------
# peripheral lattices and B(I)


def _residue_identity(d):
    one = QuadInt(d, 1, 0)
    zero = QuadInt(d, 0, 0)
    return (one, zero, zero, one)


def _residue_of(m):
    return (m.a, m.b, m.c, m.d)


def _residue_mul(u, v, ideal):
    a = reduce_mod_ideal(u[0] * v[0] + u[1] * v[2], ideal)
    b = reduce_mod_ideal(u[0] * v[1] + u[1] * v[3], ideal)
    c = reduce_mod_ideal(u[2] * v[0] + u[3] * v[2], ideal)
    dd = reduce_mod_ideal(u[2] * v[1] + u[3] * v[3], ideal)
    return (a, b, c, dd)


def _is_pm_identity(u, ideal):
    one = QuadInt(ideal.d, 1, 0)
    for sign in (1, -1):
        tgt = (one * QuadInt(ideal.d, sign, 0),
               QuadInt(ideal.d, 0, 0),
               QuadInt(ideal.d, 0, 0),
               one * QuadInt(ideal.d, sign, 0))
        if all(reduce_mod_ideal(x - y, ideal).is_zero()
               for x, y in zip(u, tgt)):
            return True
    return False


def _residue_power(base, e, ideal):
    if e < 0:
        base, e = base.inv(), -e
    u = _residue_identity(ideal.d)
    b = tuple(reduce_mod_ideal(x, ideal) for x in _residue_of(base))
    for _ in range(e):
        u = _residue_mul(u, b, ideal)
    return u


def validate_peripheral_triple(d, ideal, cusp, triple):
    """Check that (n, k, l) is the canonical basis of the lattice of
    peripheral translations lying in +-Gamma(I) at the given cusp
    class.  A negative l is normalized by flipping the signs of k and l.
    """
    data = bianchi_data(d)
    p1w, p2w = data.peripheral_words[cusp]
    p1 = data.evaluate(p1w)
    p2 = data.evaluate(p2w)
    n, k, l = triple
    if l < 0:
        k, l = -k, -l
    if n <= 0 or l <= 0:
        return False
    if not _is_pm_identity(_residue_power(p1, n, ideal), ideal):
        return False
    kl = _residue_mul(_residue_power(p1, k, ideal),
                      _residue_power(p2, l, ideal), ideal)
    if not _is_pm_identity(kl, ideal):
        return False
    # minimality: no lattice point below the row l or strictly inside
    # the first period of row 0
    p1r = _residue_power(p1, 1, ideal)
    p2r = _residue_power(p2, 1, ideal)
    row = _residue_identity(d)
    for t in range(l):
        u = row
        for s in range(n):
            if (s, t) != (0, 0) and _is_pm_identity(u, ideal):
                return False
            u = _residue_mul(u, p1r, ideal)
        row = _residue_mul(row, p2r, ideal)
    return True


def find_peripheral_triple(d, ideal, cusp):
    """Canonical lattice triple (n, k, l) of the peripheral translations
    lying in +-Gamma(I) at the given cusp class."""
    data = bianchi_data(d)
    p1w, p2w = data.peripheral_words[cusp]
    p1 = data.evaluate(p1w)
    p2 = data.evaluate(p2w)
    bound = 2 * ideal.norm() + 2
    q1 = _residue_power(p1, 1, ideal)
    n = None
    u = _residue_identity(d)
    for s in range(1, bound + 1):
        u = _residue_mul(u, q1, ideal)
        if _is_pm_identity(u, ideal):
            n = s
            break
    if n is None:
        raise ValidationError(
            "no peripheral period at cusp class %d up to %d" % (cusp, bound))
    q2 = _residue_power(p2, 1, ideal)
    row = _residue_identity(d)
    for t in range(1, bound + 1):
        row = _residue_mul(row, q2, ideal)
        u = row
        for s in range(n):
            if _is_pm_identity(u, ideal):
                k = s if s <= n // 2 else s - n
                return (n, k, t)
            u = _residue_mul(u, q1, ideal)
    raise ValidationError(
        "no second peripheral period at cusp class %d up to %d"
        % (cusp, bound))


def build_BI(d, triples):
    """Quotient presentation B(I): the Bianchi presentation plus the
    peripheral lattice relators p1^n and p1^k p2^l per cusp class."""
    data = bianchi_data(d)
    if len(triples) == 3 and all(isinstance(x, int) for x in triples):
        triples = [tuple(triples)] * data.num_cusps
    if len(triples) != data.num_cusps:
        raise ValidationError(
            "expected %d triples, got %d" % (data.num_cusps, len(triples)))
    extra = []
    for (p1w, p2w), (n, k, l) in zip(data.peripheral_words, triples):
        extra.append(word_power(p1w, n))
        extra.append(word_mul(word_power(p1w, k), word_power(p2w, l)))
    return data.presentation.with_relators([r for r in extra if r])


# ---------------------------------------------------------------------
# certificates


@dataclass
class LinkCertificate:
    """Data certifying that a principal congruence quotient is a link
    complement: the ideal, peripheral triples, expected group order and
    the Dehn-filling elements, possibly given in shorthand."""

    d: int
    ideal_gens: list
    triples: list
    expected_order: int
    fillings: list = field(default_factory=list)
    expand: dict = None
    symmetry: dict = None

    @classmethod
    def from_json_dict(cls, data):
        return cls(
            d=int(data["d"]),
            ideal_gens=list(data["ideal_gens"]),
            triples=[tuple(t) for t in data["triples"]],
            expected_order=int(data["expected_order"]),
            fillings=data.get("fillings", []),
            expand=data.get("expand"),
            symmetry=data.get("symmetry"))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))

    def ideal(self):
        return parse_ideal(self.d, self.ideal_gens)


def _parse_entries(entries, gens):
    out = []
    for e in entries:
        try:
            g = parse_word(e["g"], gens)
            p, q = e["pq"]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedShorthand("bad filling entry %r" % (e,)) from exc
        out.append((g, (int(p), int(q))))
    return out


def expand_certificate(cert):
    """Explicit per-cusp-class filling lists of a certificate."""
    gens = bianchi_data(cert.d).presentation.generators
    nclasses = len(cert.triples)
    if cert.expand is not None:
        try:
            gs = [parse_word(s, gens) for s in cert.expand["gs"]]
            tables = cert.expand["pq"]
        except (KeyError, TypeError) as exc:
            raise MalformedShorthand("bad expand shorthand") from exc
        if len(tables) != nclasses or \
                any(len(tbl) != len(gs) for tbl in tables):
            raise MalformedShorthand("expand tables do not match g-list")
        return [[(g, (int(p), int(q))) for g, (p, q) in zip(gs, tbl)]
                for tbl in tables]
    if cert.symmetry is not None:
        sym = cert.symmetry
        try:
            s = parse_word(sym["g"], gens)
            order = int(sym["order"])
            fixed = [_parse_entries(lst, gens) for lst in sym["fixed"]]
            moved = [_parse_entries(lst, gens) for lst in sym["moved"]]
        except (KeyError, TypeError) as exc:
            raise MalformedShorthand("bad symmetry shorthand") from exc
        if len(fixed) != nclasses or len(moved) != nclasses:
            raise MalformedShorthand("symmetry lists do not match classes")
        out = []
        for fl, ml in zip(fixed, moved):
            entries = list(fl)
            for j in range(order):
                sj = word_power(s, j)
                entries.extend((word_mul(sj, g), pq) for g, pq in ml)
            out.append(entries)
        return out
    if len(cert.fillings) != nclasses:
        raise MalformedShorthand("need one filling list per cusp class")
    return [_parse_entries(lst, gens) for lst in cert.fillings]


def filling_element(data, triple, g, pq):
    """The word g (p1^n)^p (p1^k p2^l)^q g^-1 at one cusp class."""
    p1w, p2w = data
    n, k, l = triple
    p, q = pq
    return word_mul(
        g,
        word_power(word_power(p1w, n), p),
        word_power(word_mul(word_power(p1w, k), word_power(p2w, l)), q),
        word_inverse(g))


def verify_link(cert, budget=DEFAULT_BUDGET):
    """Run the three certificate tests; returns "c-Link" on success.

    Test 1: the quotient B(I) has order |PSL(2, O_d/I)|, so the normal
    closure N(I) of the peripheral lattice is the congruence subgroup.
    Test 2: the quotient of N(I) by the normal closure of the filling
    elements is trivial, so the fillings trivialize the manifold group.
    Test 3: the filling conjugators hit every cusp exactly once.
    """
    data = bianchi_data(cert.d)
    ideal = cert.ideal()
    fillings = expand_certificate(cert)
    for i, triple in enumerate(cert.triples):
        if not validate_peripheral_triple(cert.d, ideal, i, triple):
            raise ValidationError(
                "triple %r invalid at cusp class %d" % (triple, i))

    expected = psl_order(ideal)
    if cert.expected_order != expected:
        raise Test1Failed(
            "expected order %d but |PSL(2,O_d/I)| = %d"
            % (cert.expected_order, expected))
    table = todd_coxeter(build_BI(cert.d, cert.triples), (), budget)
    if table.index != expected:
        raise Test1Failed(
            "|B(I)| = %d differs from |PSL(2,O_d/I)| = %d"
            % (table.index, expected))

    system = SchreierSystem(data.presentation, table)
    extra = []
    for i, (words, triple) in enumerate(
            zip(data.peripheral_words, cert.triples)):
        for g, pq in fillings[i]:
            w = filling_element(words, triple, g, pq)
            try:
                extra.append(system.rewrite(w))
            except ValueError:
                raise Test2Failed(
                    "filling element %r at class %d is not in N(I)"
                    % (pq, i))
    quotient = system.presentation.with_relators(
        [r for r in extra if r])
    qtable = todd_coxeter(quotient, (), budget)
    if qtable.index != 1:
        raise Test2Failed(
            "fillings leave a quotient of order %d" % qtable.index)

    group = enumerate_psl(ideal, data.generator_matrices)
    total = 0
    for i in range(data.num_cusps):
        if cert.d in (1, 3):
            stab = data.cusp_stabilizer_words
        else:
            stab = list(data.peripheral_words[i])
        subgroup = group.subgroup_closure(
            [data.evaluate(w) for w in stab])
        count = group.order // len(subgroup)
        entries = fillings[i]
        if len(entries) != count:
            raise Test3Failed(
                "class %d has %d fillings for %d cusps"
                % (i, len(entries), count))
        mats = [data.evaluate(g) for g, _ in entries]
        for x in range(len(mats)):
            for y in range(x + 1, len(mats)):
                k = proj_canonicalize(mats[x].inv() * mats[y], ideal)
                if k in subgroup:
                    raise Test3Failed(
                        "fillings %d and %d of class %d share a cusp"
                        % (x, y, i))
        total += count
    return "%d-Link" % total


def verify_link2(d, pqs, expected_order, budget=DEFAULT_BUDGET):
    """Fully symmetric variant: quotient the Bianchi presentation by
    one relator p1^p p2^q per cusp class and compare the order."""
    if d in (1, 3):
        raise UnsupportedD(
            "the symmetric check is unavailable for d = %d" % d)
    data = bianchi_data(d)
    if len(pqs) != data.num_cusps:
        raise ValidationError(
            "expected %d Dehn-filling pairs, got %d"
            % (data.num_cusps, len(pqs)))
    rels = [word_mul(word_power(p1, p), word_power(p2, q))
            for (p1, p2), (p, q) in zip(data.peripheral_words, pqs)]
    table = todd_coxeter(
        data.presentation.with_relators([r for r in rels if r]), (), budget)
    if table.index != expected_order:
        raise OrderMismatch(
            "quotient order %d differs from expected %d"
            % (table.index, expected_order))
    return table.index


_CERTIFICATE_FILES = (
    "d2_4link.json",
    "d15_6link.json",
    "d11_12link.json",
    "d15_12link.json",
    "d7_3link.json",
)


def bundled_certificates():
    """The certificates shipped with the package, keyed by file stem."""
    out = {}
    base = resources.files("congfund.data.certificates")
    for name in _CERTIFICATE_FILES:
        with base.joinpath(name).open() as fh:
            out[name[:-5]] = LinkCertificate.from_json_dict(json.load(fh))
    return out
