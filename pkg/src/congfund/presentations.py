"""Bundled presentations, generator matrices and peripheral systems for
the groups PSL(2, O_d).

Matrices are given over the integral basis {1, w}; entries below are
(a, b) pairs meaning a + b*w.  For d = 3 the parabolic generator u
translates by w^2 = w - 1 rather than w.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedD
from .ring import ProjMatrix, QuadInt
from .words import Presentation, parse_word

SUPPORTED_D = (1, 2, 3, 5, 6, 7, 11, 15, 19, 23, 31, 39, 47, 71)

_T = ((1, 0), (1, 0), (0, 0), (1, 0))
_U = ((1, 0), (0, 1), (0, 0), (1, 0))
_U3 = ((1, 0), (-1, 1), (0, 0), (1, 0))
_A = ((0, 0), (-1, 0), (1, 0), (0, 0))

_DATA = {
    1: dict(
        gens=["a", "l", "t", "u"],
        relators=["a^2", "l^2", "(t*l)^2", "(u*l)^2", "(a*l)^2",
                  "(t*a)^3", "(u*a*l)^3", "[t,u]"],
        matrices=dict(
            a=_A, t=_T, u=_U,
            l=((0, -1), (0, 0), (0, 0), (0, 1)),
        ),
        peripheral=[("t", "u")],
        cusp_stabilizer=["l", "t", "u"],
    ),
    2: dict(
        gens=["a", "t", "u"],
        relators=["a^2", "(t*a)^3", "(a*u^-1*a*u)^2", "[t,u]"],
        matrices=dict(a=_A, t=_T, u=_U),
        peripheral=[("t", "u")],
    ),
    3: dict(
        gens=["a", "l", "t", "u"],
        relators=["l^3", "a^2", "(a*l)^2", "(t*a)^3", "(u*a*l)^3",
                  "l^-1*t*l*u*t", "l^-1*u*l*t^-1", "[t,u]"],
        matrices=dict(
            a=_A, t=_T, u=_U3,
            l=((0, -1), (0, 0), (0, 0), (-1, 1)),
        ),
        peripheral=[("t", "u")],
        cusp_stabilizer=["l", "t", "u"],
    ),
    5: dict(
        gens=["a", "t", "u", "b", "c"],
        relators=["a^2", "b^2", "(t*a)^3", "(a*b)^2", "(a*u*b*u^-1)^2",
                  "a*c*a*t*c^-1*t^-1", "u*b*u^-1*c*b*t*c^-1*t^-1", "[t,u]"],
        matrices=dict(
            a=_A, t=_T, u=_U,
            b=((0, -1), (2, 0), (2, 0), (0, 1)),
            c=((-4, -1), (0, -2), (0, 2), (-4, 1)),
        ),
        peripheral=[("t", "u"), ("t*b", "t*u^-1*c*t^-1")],
    ),
    6: dict(
        gens=["a", "t", "u", "b", "c"],
        relators=["a^2", "b^2", "(t*a)^3", "(a*t*b)^3", "(a*t*u*b*u^-1)^3",
                  "t^-1*c*t*u*b*u^-1*c^-1*b^-1", "[t,u]", "[a,c]"],
        matrices=dict(
            a=_A, t=_T, u=_U,
            b=((-1, -1), (2, -1), (2, 0), (1, 1)),
            c=((5, 0), (0, -2), (0, 2), (5, 0)),
        ),
        peripheral=[("t", "u"), ("t*b", "u^-1*c^-1")],
    ),
    7: dict(
        gens=["a", "t", "u"],
        relators=["a^2", "(t*a)^3", "(a*t*u^-1*a*u)^2", "[t,u]"],
        matrices=dict(a=_A, t=_T, u=_U),
        peripheral=[("t", "u")],
    ),
    11: dict(
        gens=["a", "t", "u"],
        relators=["a^2", "(t*a)^3", "(a*t*u^-1*a*u)^3", "[t,u]"],
        matrices=dict(a=_A, t=_T, u=_U),
        peripheral=[("t", "u")],
    ),
    15: dict(
        gens=["a", "t", "u", "c"],
        relators=["a^2", "(t*a)^3", "u*c*u*a*t*u^-1*c^-1*u^-1*a^-1*t^-1",
                  "[t,u]", "[a,c]"],
        matrices=dict(
            a=_A, t=_T, u=_U,
            c=((4, 0), (1, -2), (-1, 2), (4, 0)),
        ),
        peripheral=[("t", "u"), ("u*c*a", "c^-1*a*u^-1*c^-1*u^-1*t*a")],
    ),
    19: dict(
        gens=["a", "b", "t", "u"],
        relators=["a^2", "(t*a)^3", "b^3", "(b*t^-1)^3", "(a*b)^2",
                  "(a*t^-1*u*b*u^-1)^2", "[t,u]"],
        matrices=dict(
            a=_A, t=_T, u=_U,
            b=((1, -1), (2, 0), (2, 0), (0, 1)),
        ),
        peripheral=[("t", "u")],
    ),
    23: dict(
        gens=["g1", "g2", "g3", "g4", "g5"],
        relators=[
            "g3^3", "(g3*g2)^2",
            "g5*g2^-1*g3^-1*g5^-1*g1^-1*g2^-1*g3^-1*g1",
            "g4^-1*g5*g3*g2*g5^-1*g2*g4*g3",
            "[g1,g2]", "[g4,g5]",
        ],
        matrices=dict(
            g1=((1, 0), (-1, 1), (0, 0), (1, 0)),
            g2=_T,
            g3=((0, 0), (1, 0), (-1, 0), (1, 0)),
            g4=((3, 1), (-4, 1), (-2, 1), (-1, -1)),
            g5=((5, -1), (1, 2), (2, 1), (-3, 1)),
        ),
        peripheral=[("g2", "g1"), ("g4", "g5"),
                    ("g4*g3*g2", "g2^-1*g5*g3*g2")],
    ),
    31: dict(
        gens=["g1", "g2", "g3", "g4", "g5"],
        relators=[
            "g2^3", "(g2*g1^-1)^2",
            "g4*g1^-1*g3^-1*g2*g3*g4^-1*g2*g4*g3^-1*g1^-1*g2*g3*g4^-1*g2",
            "g5*g3^-1*g2*g3*g4^-1*g2*g1^-1*g5^-1*g2^-1*g4*g3^-1*g2^-1*g3*g1",
            "g2*g3*g4^-1*g2*g1^-1*g4*g3^-1*g2*g3*g4^-1*g1*g2^-1*g4*g3^-1",
            "[g1,g3]", "[g4,g5]",
        ],
        matrices=dict(
            g1=((1, 0), (-1, 0), (0, 0), (1, 0)),
            g2=((0, 0), (1, 0), (-1, 0), (1, 0)),
            g3=_U,
            g4=((3, 0), (-2, 2), (0, 1), (-5, 0)),
            g5=((3, -2), (7, 1), (4, 0), (-1, 2)),
        ),
        peripheral=[("g1", "g3"), ("g4", "g5"),
                    ("g1*g5", "g3^-1*g2*g3*g4^-1*g2*g5")],
    ),
    39: dict(
        gens=["g1", "g2", "g3", "g4", "g5", "g6", "g7"],
        relators=[
            "g3^3", "(g3*g5)^2", "(g1^-1*g3^-1)^2", "(g5^-1*g1)^3",
            "(g7*g5^-1*g7^-1*g1)^3",
            "g5^-1*g1*g6^-1*g4^-1*g5*g4*g1^-1*g6",
            "g4^-1*g5*g4*g2^-1*g7*g5^-1*g7^-1*g2",
            "g6*g1^-1*g5*g6^-1*g4^-1*g5*g4*g1^-1*g4^-1*g5*g4*g1^-1",
            "[g2,g1]", "[g3^-1,g7^-1]", "[g4,g6]",
        ],
        matrices=dict(
            g1=_T,
            g2=_U,
            g3=((0, 0), (1, 0), (-1, 0), (1, 0)),
            g4=((-3, -1), (7, -2), (2, -1), (5, 1)),
            g5=((3, -1), (2, 1), (3, 0), (-1, 1)),
            g6=((7, -1), (2, 3), (2, 1), (-5, 1)),
            g7=((6, -1), (-1, 2), (1, -2), (5, 1)),
        ),
        peripheral=[("g1", "g2"), ("g4", "g6"),
                    ("g5^-1*g6", "g4*g1^-1*g6"), ("g5", "g4*g2^-1*g7")],
    ),
    47: dict(
        gens=["g1", "g2", "g3", "g4", "g5", "g6", "g7"],
        relators=[
            "g1^3", "(g2^-1*g1)^2",
            "g2^-1*g1*g6*g1^-1*g2*g6^-1",
            "g6*g2^-1*g4^-1*g5*g3^-1*g6^-1*g4*g2*g3*g5^-1",
            "g7^-1*g2^-1*g5^-1*g4*g1*g4^-1*g2*g7*g4*g1^-1*g4^-1*g5",
            "g3*g5^-1*g4*g1*g4^-1*g2*g5*g3^-1*g2^-1*g4^-1*g1^-1*g4",
            "g5^-1*g4*g1*g4^-1*g7^-1*g2^-1*g4*g1^-1*g4^-1*g5*g3^-1*g2*g3*g7",
            "[g5,g7]", "[g3,g2]",
        ],
        matrices=dict(
            g1=((-1, 0), (1, 0), (-1, 0), (0, 0)),
            g2=_T,
            g3=((1, 0), (-1, 1), (0, 0), (1, 0)),
            g4=((-2, 1), (5, 0), (-3, 0), (1, 1)),
            g5=((5, 0), (-3, 3), (0, 1), (-7, 0)),
            g6=((-4, 1), (3, 1), (-3, -1), (-4, 1)),
            g7=((1, -2), (11, 1), (4, 0), (-3, 2)),
        ),
        peripheral=[("g2", "g3"), ("g5", "g7"),
                    ("g2*g7", "g4*g1^-1*g4^-1*g5"),
                    ("g6*g2^-1*g4^-1", "g5*g3^-1*g2^-1*g4^-1"),
                    ("g6^-1*g1^-1*g4", "g3*g5^-1*g4*g1")],
    ),
    71: dict(
        gens=["g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8", "g9"],
        relators=[
            "g8^3", "(g8*g7^-1)^2",
            "g1^-1*g3*g7*g3^-1*g1*g7^-1",
            "g6*g3*g6^-1*g7*g9^-1*g3^-1*g9*g7^-1",
            "g7^-1*g6*g3*g6^-1*g5^-1*g2*g7*g5*g6*g3^-1*g6^-1*g2^-1",
            "g8*g7^-1*g1*g5*g6*g3^-1*g1*g5*g7*g8^-1*g5^-1*g1^-1*g3*g6^-1*g5^-1*g1^-1",
            "g4^-1*g7^-1*g5^-1*g2*g1^-1*g3*g7*g9*g4*g1*g7^-1*g2^-1*g5*g7*g9^-1*g3^-1",
            "g5*g8*g7^-1*g5^-1*g1^-1*g7*g9*g6*g1*g5*g8*g7^-1*g5^-1*g1^-1*g3*g6^-1*g9^-1*g7^-1*g3^-1*g1",
            "g2*g6*g1*g5*g7*g8^-1*g5^-1*g1^-1*g3*g6^-1*g7*g8^-1*g5^-1*g2^-1*g5*g7*g8^-1*g5^-1*g1^-1*g7*g8^-1*g1*g5*g6*g3^-1*g6^-1",
            "[g8^-1,g4]",
        ],
        matrices=dict(
            g1=((-5, 0), (5, -3), (-1, 1), (-10, -1)),
            g2=((-3, 2), (-17, -1), (-4, 0), (1, -2)),
            g3=((5, 0), (0, -2), (1, -1), (-7, 0)),
            g4=((-5, 0), (2, 1), (-2, -1), (-3, 1)),
            g5=((-6, -3), (13, -2), (5, -1), (4, 1)),
            g6=((-1, 2), (12, 0), (-6, 0), (-1, 2)),
            g7=((1, 0), (-1, 0), (0, 0), (1, 0)),
            g8=((0, 0), (-1, 0), (1, 0), (-1, 0)),
            g9=((1, 1), (-7, 0), (3, 0), (-2, 1)),
        ),
        peripheral=[
            ("g7", "g1^-1*g3"),
            ("g2", "g6*g1*g5*g7*g8^-1*g5^-1*g1^-1*g3*g6^-1*g7*g8^-1*g5^-1"),
            ("g3", "g6^-1*g7*g9^-1"),
            ("g7*g2", "g6*g3*g6^-1*g5^-1*g7^-1"),
            ("g7*g9*g6", "g3^-1*g1*g5*g8*g7^-1*g5^-1*g1^-1"),
            ("g3*g9*g4", "g4^-1*g7^-1*g5^-1*g2*g7*g1^-1"),
            ("g4*g1*g7^-1*g2^-1*g5*g7*g9^-1*g3^-1*g8^-1*g4^-1",
             "g6*g3^-1*g1*g5*g8*g7^-1*g5^-1*g1^-1*g6^-1*g9^-1*g8^-1*g4^-1"),
        ],
    ),
}


@dataclass
class BianchiData:
    """Presentation, matrices and peripheral data for one PSL(2, O_d)."""

    d: int
    presentation: Presentation
    matrices: dict
    peripheral_words: list  # list of (word, word) pairs, one per cusp class
    cusp_stabilizer_words: list  # generators of the full cusp stabilizer

    @property
    def generator_matrices(self):
        return [self.matrices[name] for name in self.presentation.generators]

    def evaluate(self, word):
        """Matrix of a word in the generators."""
        m = ProjMatrix.identity(self.d)
        for x in word:
            g = self.matrices[self.presentation.generators[abs(x) - 1]]
            m = m * (g if x > 0 else g.inv())
        return m

    def peripheral_matrices(self):
        return [(self.evaluate(p1), self.evaluate(p2))
                for p1, p2 in self.peripheral_words]

    @property
    def num_cusps(self):
        return len(self.peripheral_words)


def bianchi_data(d):
    """Bundled data for PSL(2, O_d); raises UnsupportedD otherwise."""
    if d not in _DATA:
        raise UnsupportedD("no bundled presentation for d = %r" % (d,))
    spec = _DATA[d]
    gens = spec["gens"]
    pres = Presentation.from_strings(gens, spec["relators"])
    mats = {}
    for name, rows in spec["matrices"].items():
        (aa, ab), (ba, bb), (ca, cb), (da, db) = rows
        mats[name] = ProjMatrix(
            QuadInt(d, aa, ab), QuadInt(d, ba, bb),
            QuadInt(d, ca, cb), QuadInt(d, da, db))
    peripheral = [(parse_word(p1, gens), parse_word(p2, gens))
                  for p1, p2 in spec["peripheral"]]
    if "cusp_stabilizer" in spec:
        stab = [parse_word(s, gens) for s in spec["cusp_stabilizer"]]
    else:
        stab = [peripheral[0][0], peripheral[0][1]]
    return BianchiData(d, pres, mats, peripheral, stab)
