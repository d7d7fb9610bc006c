"""Coset enumeration, subgroup rewriting, peripheral lattices and the
link-certificate checks."""

import copy
import json

import pytest

from congfund.errors import (
    BudgetExceeded,
    OrderMismatch,
    UnsupportedD,
    ValidationError,
)
from congfund.errors import Test1Failed as CertTest1Failed
from congfund.errors import Test2Failed as CertTest2Failed
from congfund.errors import Test3Failed as CertTest3Failed
from congfund.homology import AbelianGroup
from congfund.fpgroups import (
    LinkCertificate,
    abelian_invariants,
    build_BI,
    bundled_certificates,
    expand_certificate,
    find_peripheral_triple,
    reidemeister_schreier,
    todd_coxeter,
    validate_peripheral_triple,
    verify_link,
    verify_link2,
)
from congfund.literals import parse_ideal
from congfund.presentations import bianchi_data
from congfund.ring import psl_order
from congfund.words import Presentation


class TestToddCoxeter:
    def test_cyclic_groups(self):
        for n in range(1, 12):
            pres = Presentation.from_strings(["x"], ["x^%d" % n])
            table = todd_coxeter(pres)
            assert table.index == n
            table.verify(pres.relators)

    def test_index_of_subgroup(self):
        pres = Presentation.from_strings(["x"], ["x^6"])
        table = todd_coxeter(pres, subgroup=[pres.word("x^2")])
        assert table.index == 2
        table.verify(pres.relators, [pres.word("x^2")])

    def test_symmetric_group_s3(self):
        pres = Presentation.from_strings(
            ["a", "b"], ["a^2", "b^2", "(a*b)^3"])
        table = todd_coxeter(pres)
        assert table.index == 6
        table.verify(pres.relators)

    def test_quaternion_group(self):
        pres = Presentation.from_strings(
            ["a", "b"], ["a^4", "a^2*b^-2", "b^-1*a*b*a"])
        table = todd_coxeter(pres)
        assert table.index == 8
        table.verify(pres.relators)

    def test_trivializing_relators(self):
        pres = Presentation.from_strings(
            ["a", "b"], ["a^2*b^-3", "a*b*a^-1*b^-1", "a*b^-1"])
        assert todd_coxeter(pres).index == 1

    def test_budget_exceeded_on_infinite_group(self):
        pres = Presentation.from_strings(["a", "b"], [])
        with pytest.raises(BudgetExceeded):
            todd_coxeter(pres, budget=500)

    def test_deterministic(self):
        pres = Presentation.from_strings(
            ["a", "b"], ["a^3", "b^3", "(a*b)^2"])
        t1 = todd_coxeter(pres)
        t2 = todd_coxeter(pres)
        assert t1.rows == t2.rows


class TestAbelianInvariants:
    def test_free_abelian(self):
        pres = Presentation.from_strings(["a", "b"], ["a*b*a^-1*b^-1"])
        assert abelian_invariants(pres) == AbelianGroup(2, ())

    def test_z6(self):
        pres = Presentation.from_strings(["x"], ["x^6"])
        assert abelian_invariants(pres) == AbelianGroup(0, (6,))

    def test_mixed(self):
        pres = Presentation.from_strings(
            ["a", "b", "c"], ["a^2", "b^4*a^2"])
        assert abelian_invariants(pres) == AbelianGroup(1, (2, 4))


class TestReidemeisterSchreier:
    def test_index_n_in_z_is_z(self):
        pres = Presentation.from_strings(["x"], [])
        for n in range(1, 11):
            table = todd_coxeter(
                Presentation.from_strings(["x"], ["x^%d" % n]))
            sub = reidemeister_schreier(pres, table)
            assert abelian_invariants(sub) == AbelianGroup(1, ())

    def test_commutator_subgroup_of_s3(self):
        pres = Presentation.from_strings(
            ["a", "b"], ["a^2", "b^2", "(a*b)^3"])
        table = todd_coxeter(pres, subgroup=[pres.word("a*b")])
        assert table.index == 2
        sub = reidemeister_schreier(pres, table)
        assert todd_coxeter(sub).index == 3

    def test_rewrite_round_trip(self):
        pres = Presentation.from_strings(["x"], [])
        table = todd_coxeter(Presentation.from_strings(["x"], ["x^3"]))
        from congfund.fpgroups import SchreierSystem

        system = SchreierSystem(pres, table)
        assert system.rewrite(pres.word("x^3"))
        with pytest.raises(ValueError):
            system.rewrite(pres.word("x"))


class TestPeripheralTriples:
    def test_find_matches_validate(self):
        cases = [
            (2, ["1+s"]),
            (7, ["w"]),
            (11, ["1+w"]),
            (15, ["2", "w"]),
            (23, ["6", "3-w"]),
        ]
        for d, gens in cases:
            ideal = parse_ideal(d, gens)
            data = bianchi_data(d)
            for cusp in range(data.num_cusps):
                triple = find_peripheral_triple(d, ideal, cusp)
                assert validate_peripheral_triple(d, ideal, cusp, triple)

    def test_validate_rejects_wrong_triples(self):
        ideal = parse_ideal(2, ["1+s"])
        assert validate_peripheral_triple(2, ideal, 0, (3, 1, 1))
        assert not validate_peripheral_triple(2, ideal, 0, (6, 1, 1))
        assert not validate_peripheral_triple(2, ideal, 0, (3, 0, 1))
        assert not validate_peripheral_triple(2, ideal, 0, (3, 1, 0))

    def test_negative_l_normalized(self):
        ideal = parse_ideal(2, ["1+s"])
        assert validate_peripheral_triple(2, ideal, 0, (3, -1, -1))


class TestBuildBI:
    def test_d5_order_twice_psl(self):
        table = todd_coxeter(build_BI(5, (2, 1, 1)))
        assert table.index == 12
        assert psl_order(parse_ideal(5, ["2", "1+s"])) == 6

    def test_d7_order_three_times_psl(self):
        table = todd_coxeter(build_BI(7, (3, 0, 3)))
        assert table.index == 1080
        assert psl_order(parse_ideal(7, ["3"])) == 360

    def test_d23_order_four_times_psl(self):
        triples = [(6, -2, 1), (6, 1, 1), (3, 0, 2)]
        table = todd_coxeter(build_BI(23, triples))
        assert table.index == 288
        assert psl_order(parse_ideal(23, ["6", "3-w"])) == 72

    def test_equals_psl_for_link_ideal(self):
        table = todd_coxeter(build_BI(2, [(3, 1, 1)]))
        assert table.index == psl_order(parse_ideal(2, ["1+s"])) == 12


CERT_VERDICTS = {
    "d2_4link": "4-Link",
    "d15_6link": "6-Link",
    "d11_12link": "12-Link",
    "d15_12link": "12-Link",
    "d7_3link": "3-Link",
}


class TestCertificates:
    def test_bundled_certificates_verify(self):
        certs = bundled_certificates()
        assert set(certs) == set(CERT_VERDICTS)
        for name, cert in certs.items():
            assert verify_link(cert) == CERT_VERDICTS[name]

    def test_wrong_expected_order_fails_test1(self):
        cert = bundled_certificates()["d2_4link"]
        bad = copy.deepcopy(cert)
        bad.expected_order += 1
        with pytest.raises(CertTest1Failed):
            verify_link(bad)

    def test_wrong_triple_rejected(self):
        cert = bundled_certificates()["d2_4link"]
        bad = copy.deepcopy(cert)
        bad.triples = [(6, 1, 1)]
        with pytest.raises(ValidationError):
            verify_link(bad)

    def test_dropped_filling_fails(self):
        cert = bundled_certificates()["d2_4link"]
        bad = copy.deepcopy(cert)
        bad.fillings = [cert.fillings[0][:-1]]
        with pytest.raises((CertTest2Failed, CertTest3Failed)):
            verify_link(bad)

    def test_duplicated_cusp_fails_test3(self):
        cert = bundled_certificates()["d2_4link"]
        bad = copy.deepcopy(cert)
        entries = list(cert.fillings[0])
        entries[-1] = entries[0]
        bad.fillings = [entries]
        with pytest.raises(CertTest3Failed):
            verify_link(bad)

    def test_expand_matches_explicit_list(self):
        cert = bundled_certificates()["d15_6link"]
        fillings = expand_certificate(cert)
        data = bianchi_data(15)
        gs = [data.presentation.word(t)
              for t in ("Id", "t*a", "(t*a)^2")]
        assert fillings[0] == [
            (gs[0], (1, 0)), (gs[1], (0, 1)), (gs[2], (0, 1))]
        assert fillings[1] == [
            (gs[0], (1, 0)), (gs[1], (1, 0)), (gs[2], (0, 1))]

    def test_symmetry_expansion_counts(self):
        cert = bundled_certificates()["d11_12link"]
        fillings = expand_certificate(cert)
        assert len(fillings[0]) == 12
        cert = bundled_certificates()["d15_12link"]
        fillings = expand_certificate(cert)
        assert sum(len(v) for v in fillings) == 12


class TestVerifyLink2:
    def test_d2_symmetric_filling(self):
        assert verify_link2(2, [(1, 1)], 12) == 12

    def test_unsupported_d(self):
        with pytest.raises(UnsupportedD):
            verify_link2(1, [(1, 1)], 48)

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatch):
            verify_link2(2, [(1, 1)], 13)
