"""Sparse Smith normal form against a gcd-of-minors oracle, and the
first-homology pipeline on small complexes."""

import math
import random
from itertools import combinations

import pytest

from congfund.homology import (
    AbelianGroup,
    SparseIntMatrix,
    boundary_matrices,
    cover_obstruction,
    h1_with_quotient,
    smith_normal_form,
)


def minors_gcd_divisors(dense):
    """Elementary divisors via determinantal divisors: d_k is the gcd of
    all k x k minors, and the k-th elementary divisor is d_k / d_{k-1}.
    Exact integer arithmetic throughout; only viable for tiny matrices.
    """
    nr = len(dense)
    nc = len(dense[0]) if nr else 0

    def minor_det(rows, cols):
        sub = [[dense[r][c] for c in cols] for r in rows]
        k = len(rows)
        if k == 1:
            return sub[0][0]
        total = 0
        for j in range(k):
            if sub[0][j]:
                rest = [row[:j] + row[j + 1:] for row in sub[1:]]
                sign = -1 if j % 2 else 1
                total += sign * sub[0][j] * _det(rest)
        return total

    def _det(m):
        k = len(m)
        if k == 1:
            return m[0][0]
        total = 0
        for j in range(k):
            if m[0][j]:
                rest = [row[:j] + row[j + 1:] for row in m[1:]]
                total += (-1 if j % 2 else 1) * m[0][j] * _det(rest)
        return total

    divisors = []
    prev = 1
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rows in combinations(range(nr), k):
            for cols in combinations(range(nc), k):
                g = math.gcd(g, minor_det(rows, cols))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        divisors.append(g // prev)
        prev = g
    return len(divisors), tuple(x for x in divisors if x > 1)


class TestSmithNormalForm:
    def test_identity(self):
        mat = SparseIntMatrix.from_dense([[1, 0], [0, 1]])
        assert smith_normal_form(mat) == (2, ())

    def test_known_divisors(self):
        mat = SparseIntMatrix.from_dense([[2, 4], [6, 8]])
        assert smith_normal_form(mat) == (2, (2, 4))

    def test_zero_matrix(self):
        assert smith_normal_form(SparseIntMatrix(3, 4)) == (0, ())

    def test_single_large_entry(self):
        mat = SparseIntMatrix(1, 1)
        mat.add(0, 0, 360)
        assert smith_normal_form(mat) == (1, (360,))

    def test_random_matrices_match_minors_oracle(self):
        rng = random.Random(20260826)
        for trial in range(200):
            nr = rng.randint(1, 5)
            nc = rng.randint(1, 5)
            dense = [[rng.randint(-6, 6) if rng.random() < 0.7 else 0
                      for _ in range(nc)] for _ in range(nr)]
            mat = SparseIntMatrix.from_dense(dense)
            assert smith_normal_form(mat) == minors_gcd_divisors(dense), \
                "trial %d: %r" % (trial, dense)


class TestAbelianGroup:
    def test_canonical_form_string(self):
        assert str(AbelianGroup(2, (2, 6))) == "Z^2 + Z/2 + Z/6"
        assert str(AbelianGroup(0, ())) == "0"
        assert str(AbelianGroup(1, ())) == "Z"

    def test_order(self):
        assert AbelianGroup(0, (2, 6)).order == 12
        assert AbelianGroup(1, ()).order is None
        assert AbelianGroup(0, ()).order == 1

    def test_divisor_chain_enforced(self):
        with pytest.raises(ValueError):
            AbelianGroup(0, (4, 6))


class TestCoverObstruction:
    def test_infinite_quotient_excludes(self):
        data = {"quotient_order": None, "degree": 324}
        assert cover_obstruction("principal-cover", data) == "excluded"

    def test_large_quotient_excludes(self):
        data = {"quotient_order": 400, "degree": 324}
        assert cover_obstruction("principal-cover", data) == "excluded"

    def test_small_quotient_inconclusive(self):
        data = {"quotient_order": 12, "degree": 324}
        assert cover_obstruction("principal-cover", data) == "inconclusive"
