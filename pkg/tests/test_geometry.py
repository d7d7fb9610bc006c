"""Exact hyperbolic geometry: the Lorentz representation, bisector
half-spaces, and certified Dirichlet domains."""

import random
from fractions import Fraction

import pytest

from congfund.errors import DegenerateBisector
from congfund.geometry.domain import BarycentricDomain
from congfund.geometry.lorentz import (
    BASE_VECTOR,
    HalfSpacePoint,
    QuadRat,
    RatMatrix,
    base_point,
    bisector_halfspace,
    halfspace_action,
    klein_coords,
    lorentz_apply,
    lorentz_mul,
    minkowski_product,
    psl_to_lorentz,
    rat_matrix_from_proj,
)
from congfund.geometry.volume import class_number, orbifold_covolume_oracle
from congfund.presentations import SUPPORTED_D, bianchi_data

CERTIFIED_D = (1, 2, 3, 5, 7, 11, 15)


def random_elements(d, rng, count, length=6):
    data = bianchi_data(d)
    gens = list(data.generator_matrices)
    gens += [g.inv() for g in gens]
    out = []
    for _ in range(count):
        m = gens[rng.randrange(len(gens))]
        for _ in range(rng.randint(0, length - 1)):
            m = m * gens[rng.randrange(len(gens))]
        out.append(m)
    return out


class TestLorentzRepresentation:
    def test_form_preserved_on_random_words(self):
        rng = random.Random(1)
        for d in SUPPORTED_D:
            q = (1, -1, -1, -d)
            for m in random_elements(d, rng, 1000):
                lam = psl_to_lorentz(m)
                for i in range(4):
                    for j in range(4):
                        got = sum(q[k] * lam[k][i] * lam[k][j]
                                  for k in range(4))
                        assert got == (q[i] if i == j else 0)

    def test_homomorphism_on_random_pairs(self):
        rng = random.Random(2)
        for d in SUPPORTED_D:
            elems = random_elements(d, rng, 40)
            for _ in range(40):
                m = elems[rng.randrange(len(elems))]
                n = elems[rng.randrange(len(elems))]
                assert psl_to_lorentz(m * n) == lorentz_mul(
                    psl_to_lorentz(m), psl_to_lorentz(n))

    def test_consistent_with_halfspace_action(self):
        rng = random.Random(3)
        for d in (1, 7, 15):
            for m in random_elements(d, rng, 50):
                p = halfspace_action(m, base_point(d))
                v = lorentz_apply(psl_to_lorentz(m), BASE_VECTOR)
                x, y, z = klein_coords(p)
                assert (v[1] / v[0], v[2] / v[0], v[3] / v[0]) == (x, y, z)


class TestHalfSpaceAction:
    def test_parabolic_translation(self):
        m = RatMatrix(QuadRat.of(1, 1), QuadRat.of(1, 1),
                      QuadRat.of(1, 0), QuadRat.of(1, 1))
        p = halfspace_action(m, base_point(1))
        assert p.z == QuadRat.of(1, 1) and p.tsq == Fraction(1)

    def test_known_image(self):
        m = RatMatrix(QuadRat.of(1, 1), QuadRat.of(1, 1),
                      QuadRat.of(1, 1), QuadRat.of(1, 2))
        p = halfspace_action(m, base_point(1))
        assert p.z == QuadRat.of(1, Fraction(3, 5))
        assert p.tsq == Fraction(1, 25)

    def test_inversion_fixes_base_point(self):
        m = RatMatrix(QuadRat.of(1, 0), QuadRat.of(1, -1),
                      QuadRat.of(1, 1), QuadRat.of(1, 0))
        p = halfspace_action(m, base_point(1))
        assert p.z.is_zero() and p.tsq == Fraction(1)


class TestBisectors:
    def test_degenerate_for_stabilizing_element(self):
        m = RatMatrix(QuadRat.of(1, 0), QuadRat.of(1, -1),
                      QuadRat.of(1, 1), QuadRat.of(1, 0))
        with pytest.raises(DegenerateBisector):
            bisector_halfspace(m)

    def test_translation_bisector(self):
        m = RatMatrix(QuadRat.of(2, 1), QuadRat.of(2, 2),
                      QuadRat.of(2, 0), QuadRat.of(2, 1))
        hs, _ = bisector_halfspace(m)
        # separates the base point from its translate j + 2
        assert hs.eval_at((Fraction(0), Fraction(0), Fraction(0))) < 0
        v = lorentz_apply(psl_to_lorentz(m), BASE_VECTOR)
        image = (v[1] / v[0], v[2] / v[0], v[3] / v[0])
        assert hs.eval_at(image) > 0

    def test_base_point_always_inside(self):
        rng = random.Random(4)
        for d in (2, 11):
            for m in random_elements(d, rng, 30):
                try:
                    hs, _ = bisector_halfspace(rat_matrix_from_proj(m))
                except DegenerateBisector:
                    continue
                origin = (Fraction(0), Fraction(0), Fraction(0))
                assert hs.eval_at(origin) <= 0


class TestDirichletDomains:
    def test_cusp_count_is_class_number(self, get_domain):
        for d in CERTIFIED_D:
            assert get_domain(d).num_cusps == class_number(d)

    def test_covolume_matches_oracle(self, get_domain):
        for d in CERTIFIED_D:
            oracle = orbifold_covolume_oracle(d)
            assert abs(get_domain(d).covolume - oracle) < 1e-6

    def test_d1_covolume_value(self, get_domain):
        assert abs(get_domain(1).covolume - 0.305322) < 1e-6

    def test_pairing_is_involution(self, get_domain):
        for d in CERTIFIED_D:
            dom = get_domain(d)
            for i, j in enumerate(dom.mates):
                assert dom.mates[j] == i

    def test_barycentric_export_round_trip(self, get_domain, tmp_path):
        dom = get_domain(2)
        bary = dom.barycentric_export()
        path = tmp_path / "bary.json"
        bary.save(path)
        back = BarycentricDomain.load(path)
        assert back.to_json_dict() == bary.to_json_dict()

    def test_export_mates_pair_flags(self, get_domain):
        bary = get_domain(3).barycentric_export()
        for i, s in enumerate(bary.simplices):
            assert bary.simplices[s.mate].mate == i
