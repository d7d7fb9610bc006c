"""Barycentric coarsening and edge collapse: size accounting, homology
invariance, and removal of finite vertices."""

import random

import pytest

from congfund.errors import NotBarycentric
from congfund.homology import h1_with_quotient
from congfund.simplify import coarsen_barycentric, collapse_edges
from congfund.triangulation import Triangulation


def bfs_reorder(tri, start):
    """Relabel tetrahedra by BFS order from the given start."""
    order = [start]
    seen = {start}
    for t in order:
        for g in tri.glue[t]:
            if g and g[0] not in seen:
                seen.add(g[0])
                order.append(g[0])
    new_of = {old: new for new, old in enumerate(order)}
    glue = [None] * tri.size
    ideal = [None] * tri.size
    for old, new in new_of.items():
        glue[new] = [(new_of[g[0]], g[1]) for g in tri.glue[old]]
        ideal[new] = list(tri.ideal[old])
    return Triangulation(tri.d, glue, ideal)


class TestCoarsen:
    def test_quarter_size(self, cover_2):
        coarse = coarsen_barycentric(cover_2)
        assert coarse.size * 4 == cover_2.size
        coarse.check_complete()

    def test_h1_preserved(self, cover_2):
        coarse = coarsen_barycentric(cover_2)
        assert h1_with_quotient(coarse) == h1_with_quotient(cover_2)

    def test_rejects_non_barycentric(self, cover_2):
        coarse = coarsen_barycentric(cover_2)
        with pytest.raises(NotBarycentric):
            coarsen_barycentric(coarse)


class TestCollapse:
    def test_removes_finite_vertices(self, cover_2):
        coarse = coarsen_barycentric(cover_2)
        small = collapse_edges(coarse, check_locality=True)
        small.check_complete()
        assert small.size < coarse.size
        cells = small.cells()
        for members in cells["v"].values():
            assert any(small.vertex_is_ideal(s) for s in members), \
                "finite vertex survived"

    def test_h1_preserved(self, cover_2):
        coarse = coarsen_barycentric(cover_2)
        small = collapse_edges(coarse)
        assert h1_with_quotient(small) == h1_with_quotient(coarse)

    def test_end_to_end_homology(self, cover_2):
        small = collapse_edges(coarsen_barycentric(cover_2))
        quotient, h1, cusps = h1_with_quotient(small)
        assert quotient.is_trivial
        assert str(h1) == "Z^4"
        assert cusps == 4

    def test_bfs_reorder_invariance(self, cover_2):
        coarse = coarsen_barycentric(cover_2)
        base = h1_with_quotient(coarse)
        rng = random.Random(7)
        for _ in range(3):
            re = bfs_reorder(coarse, rng.randrange(coarse.size))
            assert h1_with_quotient(re) == base
            assert h1_with_quotient(collapse_edges(re)) == base
