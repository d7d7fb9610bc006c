"""Quadratic order arithmetic, ideal lattices, factorization and the
finite projective quotients."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congfund.errors import NotSquareFree, ZeroIdeal
from congfund.presentations import SUPPORTED_D, bianchi_data
from congfund.ring import (
    ProjMatrix,
    QuadIdeal,
    QuadInt,
    enumerate_psl,
    factor_ideal,
    ideal_from_generators,
    ideals_up_to_norm,
    peripheral_triple,
    proj_canonicalize,
    psl_order,
    quad_omega,
    quad_sqrt,
    reduce_mod_ideal,
)

SMALL_D = st.sampled_from([1, 2, 3, 5, 6, 7, 11, 15, 19, 23])
COEFF = st.integers(min_value=-30, max_value=30)


def qi(d, a, b):
    return QuadInt(d, a, b)


class TestQuadInt:
    @given(SMALL_D, COEFF, COEFF, COEFF, COEFF)
    def test_norm_multiplicative(self, d, a1, b1, a2, b2):
        x, y = qi(d, a1, b1), qi(d, a2, b2)
        assert (x * y).norm() == x.norm() * y.norm()

    @given(SMALL_D, COEFF, COEFF)
    def test_conj_norm_trace(self, d, a, b):
        x = qi(d, a, b)
        prod = x * x.conj()
        assert prod.b == 0 and prod.a == x.norm()
        s = x + x.conj()
        assert s.b == 0 and s.a == x.trace()

    @given(SMALL_D, COEFF, COEFF, COEFF, COEFF)
    def test_sqrt_basis_matches_product(self, d, a1, b1, a2, b2):
        x, y = qi(d, a1, b1), qi(d, a2, b2)
        x1, x2 = x.to_sqrt_basis()
        y1, y2 = y.to_sqrt_basis()
        z1, z2 = (x * y).to_sqrt_basis()
        assert z1 == x1 * y1 - d * x2 * y2
        assert z2 == x1 * y2 + x2 * y1

    def test_omega_square(self):
        for d in [1, 2, 3, 7, 11, 15]:
            w = quad_omega(d)
            s = quad_sqrt(d)
            assert s * s == qi(d, -d, 0)
            if d % 4 == 3:
                assert w * w == w - qi(d, (1 + d) // 4, 0)

    def test_bad_d(self):
        with pytest.raises(NotSquareFree):
            QuadInt(4, 1, 0)
        with pytest.raises(NotSquareFree):
            QuadInt(12, 1, 0)
        with pytest.raises(NotSquareFree):
            QuadInt(0, 1, 0)


class TestIdealLattice:
    def test_principal_examples(self):
        # 1 + sqrt(-2) generates the lattice (3, 1, 1)
        ideal = ideal_from_generators(2, [qi(2, 1, 1)])
        assert (ideal.n, ideal.k, ideal.l) == (3, 1, 1)
        # 1 + 3 sqrt(-2) generates (19, 13, 1)
        ideal = ideal_from_generators(2, [qi(2, 1, 3)])
        assert (ideal.n, ideal.k, ideal.l) == (19, 13, 1)

    def test_from_triple_flip(self):
        # table convention (19, 6, -1) flips to the canonical (19, 13, 1)
        ideal = QuadIdeal.from_triple(2, 19, 6, -1)
        assert (ideal.n, ideal.k, ideal.l) == (19, 13, 1)

    def test_reduce_examples(self):
        ideal = QuadIdeal(2, 3, 1, 1)
        assert reduce_mod_ideal(qi(2, 4, 0), ideal) == qi(2, 1, 0)
        assert reduce_mod_ideal(qi(2, 0, 1), ideal) == qi(2, 2, 0)

    @given(SMALL_D, COEFF, COEFF, COEFF, COEFF)
    def test_reduce_is_congruent_and_canonical(self, d, a1, b1, a2, b2):
        x = qi(d, a1, b1)
        g = qi(d, a2, b2)
        if g.is_zero():
            g = qi(d, 2, 1)
        ideal = ideal_from_generators(d, [g])
        r = reduce_mod_ideal(x, ideal)
        assert ideal.contains(x - r)
        # representative lies in the half-open fundamental parallelogram
        t = Fraction(r.b, ideal.l)
        s = Fraction(r.a - t * ideal.k, ideal.n)
        assert 0 <= s < 1 and 0 <= t < 1
        # reduction is idempotent and respects congruence
        assert reduce_mod_ideal(r, ideal) == r
        y = x + ideal.generators()[0] * 5 - ideal.generators()[1] * 3
        assert reduce_mod_ideal(y, ideal) == r

    def test_norm_is_lattice_index(self):
        for d in [1, 2, 3, 5, 15]:
            for g in [qi(d, 2, 1), qi(d, 3, 0), qi(d, 1, 2)]:
                ideal = ideal_from_generators(d, [g])
                assert ideal.norm() == g.norm()

    def test_zero_ideal(self):
        with pytest.raises(ZeroIdeal):
            ideal_from_generators(5, [qi(5, 0, 0)])

    def test_nonprincipal_generators(self):
        ideal = ideal_from_generators(5, [qi(5, 2, 0), qi(5, 1, 1)])
        assert ideal.norm() == 2
        assert ideal.contains(qi(5, 2, 0)) and ideal.contains(qi(5, 1, 1))


class TestFactorization:
    def test_split_ramified_inert(self):
        # d=1: 2 ramifies, 5 splits, 3 is inert
        two = ideal_from_generators(1, [qi(1, 2, 0)])
        fac = factor_ideal(two)
        assert len(fac) == 1 and fac[0][1] == 2 and fac[0][2] == 2
        five = ideal_from_generators(1, [qi(1, 5, 0)])
        fac = factor_ideal(five)
        assert [f[1] for f in fac] == [5, 5] and [f[2] for f in fac] == [1, 1]
        three = ideal_from_generators(1, [qi(1, 3, 0)])
        fac = factor_ideal(three)
        assert len(fac) == 1 and fac[0][1] == 9 and fac[0][2] == 1

    @given(SMALL_D, COEFF, COEFF)
    @settings(max_examples=60)
    def test_product_of_primes_reconstructs(self, d, a, b):
        g = qi(d, a, b)
        if g.is_zero():
            g = qi(d, 3, 1)
        ideal = ideal_from_generators(d, [g])
        fac = factor_ideal(ideal)
        assert ideal.norm() == 1 or fac
        total = 1
        for _, pn, e in fac:
            total *= pn ** e
        assert total == ideal.norm()

    def test_psl_order_examples(self):
        assert psl_order(ideal_from_generators(2, [qi(2, 2, 0)])) == 48
        assert psl_order(ideal_from_generators(2, [qi(2, 1, 1)])) == 12
        assert psl_order(ideal_from_generators(2, [qi(2, 3, 0)])) == 288
        assert psl_order(ideal_from_generators(2, [qi(2, 1, 3)])) == 3420

    def test_psl_order_more(self):
        # norm two ideals always give order 6
        assert psl_order(ideal_from_generators(15, [qi(15, 2, 0), qi(15, 0, 1)])) == 6
        assert psl_order(ideal_from_generators(7, [qi(7, 0, 1)])) == 6
        assert psl_order(ideal_from_generators(1, [qi(1, 1, 1)])) == 6
        assert psl_order(ideal_from_generators(1, [qi(1, 3, 3)])) == 2160
        assert psl_order(ideal_from_generators(1, [qi(1, 3, 0)])) == 360
        assert psl_order(ideal_from_generators(11, [qi(11, 1, 1)])) == 60
        assert psl_order(ideal_from_generators(15, [qi(15, 0, 1)])) == 24
        assert psl_order(ideal_from_generators(31, [quad_sqrt(31)])) == 14880
        assert psl_order(ideal_from_generators(47, [qi(47, 5, 0)])) == 7800
        # index of a congruence cover inside a larger one
        top = psl_order(ideal_from_generators(5, [qi(5, 4, 2)]))
        bottom = psl_order(ideal_from_generators(5, [qi(5, 2, 0)]))
        assert top == 15552 and bottom == 48 and top // bottom == 324


class TestProjMatrix:
    def test_sign_canonical(self):
        d = 2
        m = ProjMatrix(qi(d, -1, 0), qi(d, -1, 0), qi(d, 0, 0), qi(d, -1, 0))
        assert m.a == qi(d, 1, 0)

    def test_inverse(self):
        data = bianchi_data(2)
        for m in data.generator_matrices:
            assert (m * m.inv()).is_identity()

    def test_det_checked(self):
        with pytest.raises(ValueError):
            ProjMatrix(qi(1, 2, 0), qi(1, 0, 0), qi(1, 0, 0), qi(1, 1, 0))

    def test_pow(self):
        t = bianchi_data(2).matrices["t"]
        assert (t ** 5).b == qi(2, 5, 0)
        assert (t ** -3).b == qi(2, -3, 0)


class TestGeneratorData:
    @pytest.mark.parametrize("d", SUPPORTED_D)
    def test_relators_hold_in_matrices(self, d):
        data = bianchi_data(d)
        for rel in data.presentation.relators:
            assert data.evaluate(rel).is_identity(), (d, rel)

    @pytest.mark.parametrize("d", SUPPORTED_D)
    def test_peripherals_are_parabolic(self, d):
        data = bianchi_data(d)
        for p1, p2 in data.peripheral_matrices():
            for m in (p1, p2):
                tr = m.a + m.d
                assert tr == qi(d, 2, 0) or tr == qi(d, -2, 0)
            # commuting parabolics fixing a common point
            assert (p1 * p2) == (p2 * p1)


class TestEnumerate:
    @pytest.mark.parametrize("d,gens,order", [
        (2, [qi(2, 1, 1)], 12),
        (1, [qi(1, 1, 1)], 6),
        (3, [qi(3, -1, 2)], 12),
        (15, [qi(15, 2, 0), qi(15, 0, 1)], 6),
    ])
    def test_small_groups(self, d, gens, order):
        ideal = ideal_from_generators(d, gens)
        group = enumerate_psl(ideal, bianchi_data(d).generator_matrices)
        assert group.order == order == psl_order(ideal)

    def test_residue_keys_consistent(self):
        ideal = ideal_from_generators(2, [qi(2, 1, 1)])
        data = bianchi_data(2)
        rng = random.Random(7)
        gens = data.generator_matrices
        t = data.matrices["t"]
        kernel = t ** ideal.n  # congruent to the identity mod I
        for _ in range(50):
            m = ProjMatrix.identity(2)
            for _ in range(rng.randrange(1, 8)):
                g = rng.choice(gens)
                m = m * (g if rng.random() < 0.5 else g.inv())
            assert proj_canonicalize(m, ideal) == proj_canonicalize(m * kernel, ideal)
            neg = ProjMatrix(-m.a, -m.b, -m.c, -m.d)
            assert proj_canonicalize(m, ideal) == proj_canonicalize(neg, ideal)


class TestIdealEnumeration:
    def test_counts_and_norms(self):
        for d in [1, 2, 3, 7, 11]:
            seen = set()
            for ideal in ideals_up_to_norm(d, 13):
                assert 2 <= ideal.norm() <= 13
                assert ideal not in seen
                seen.add(ideal)
                assert ideal._is_ideal()

    def test_class_number_one_all_principal(self):
        # every ideal of small norm in O_2 is generated by a single element
        for ideal in ideals_up_to_norm(2, 13):
            found = False
            for a in range(-6, 7):
                for b in range(-4, 5):
                    x = qi(2, a, b)
                    if x.is_zero():
                        continue
                    if x.norm() == ideal.norm() and ideal.contains(x):
                        found = True
            assert found, ideal


def test_peripheral_triple_basis_change():
    # for d = 3 the parabolic u translates by w^2 = w - 1
    ideal = ideal_from_generators(3, [qi(3, -1, 2)])  # sqrt(-3)
    n, k, l = peripheral_triple(ideal)
    d3 = bianchi_data(3)
    t, u = d3.matrices["t"], d3.matrices["u"]
    p = (t ** k) * (u ** l)
    assert ideal.contains(p.b)
    assert ideal.contains((t ** n).b)
