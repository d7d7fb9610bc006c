"""Parser for ring element literals such as "1+s", "2*w" or "3+3*s".

The letter s stands for sqrt(-d) and w for the integral generator of
O_d (w = (1+sqrt(-d))/2 when d = 3 mod 4, else w = s).
"""

from __future__ import annotations

import re

from .errors import UsageError
from .ring import QuadInt, ideal_from_generators, quad_omega, quad_sqrt

_TOKEN = re.compile(r"\s*(\d+|[swSW+\-*/()])")


def _tokenize(text):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UsageError("bad character in literal %r" % text[pos:])
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, d, tokens):
        self.d = d
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise UsageError("unexpected end of literal")
        self.pos += 1
        return tok

    def expr(self):
        if self.peek() == "-":
            self.take()
            out = -self.term()
        else:
            out = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.atom()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                out = out * self.atom()
            elif tok == "/":
                self.take()
                den = self.atom()
                if den.b or den.a == 0:
                    raise UsageError("can only divide by a nonzero integer")
                if out.a % den.a or out.b % den.a:
                    raise UsageError(
                        "division does not stay in the ring of integers")
                out = QuadInt(out.d, out.a // den.a, out.b // den.a)
            elif tok is not None and tok not in "+-)":
                # juxtaposition such as "3s"
                out = out * self.atom()
            else:
                return out

    def atom(self):
        tok = self.take()
        if tok == "(":
            out = self.expr()
            if self.take() != ")":
                raise UsageError("unbalanced parenthesis in literal")
            return out
        if tok in ("s", "S"):
            return quad_sqrt(self.d)
        if tok in ("w", "W"):
            return quad_omega(self.d)
        if tok.isdigit():
            return QuadInt(self.d, int(tok), 0)
        raise UsageError("unexpected token %r in literal" % tok)


def parse_quadint(d, text):
    """Parse a ring element literal over O_d."""
    parser = _Parser(d, _tokenize(text))
    out = parser.expr()
    if parser.pos != len(parser.tokens):
        raise UsageError("trailing input in literal %r" % text)
    return out


def parse_ideal(d, texts):
    """Ideal generated by the parsed literals."""
    if isinstance(texts, str):
        texts = [t for t in texts.split(",") if t.strip()]
    gens = [parse_quadint(d, t) for t in texts]
    if not gens:
        raise UsageError("ideal needs at least one generator")
    return ideal_from_generators(d, gens)
