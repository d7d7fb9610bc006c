"""Words in finitely generated groups and a small word-expression parser.

A word is a tuple of nonzero signed integers; +i / -i stand for the
(1-based) generator i and its inverse.  The expression grammar is

    word   := factor (("*") factor)*
    factor := gen ("^" int)? | "(" word ")" ("^" int)? | "[" word "," word "]"

with [x, y] = x^-1 y^-1 x y.  The literals "1" and "Id" denote the empty
word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import MalformedShorthand


def free_reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_inverse(w):
    return tuple(-x for x in reversed(w))


def word_power(w, e):
    if e < 0:
        w, e = word_inverse(w), -e
    return free_reduce(w * e)


def word_mul(*ws):
    out = []
    for w in ws:
        out.extend(w)
    return free_reduce(out)


def commutator(x, y):
    return word_mul(word_inverse(x), word_inverse(y), x, y)


_TOKEN = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*|-?\d+|[*^()\[\],])")


def _tokenize(text):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MalformedShorthand("bad token at %r" % text[pos:])
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, gen_index):
        self.tokens = tokens
        self.pos = 0
        self.gen_index = gen_index

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise MalformedShorthand("unexpected end of word")
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            raise MalformedShorthand("expected %r, got %r" % (tok, got))

    def parse_word(self, stop=()):
        parts = [self.parse_factor()]
        while True:
            tok = self.peek()
            if tok is None or tok in stop:
                break
            if tok == "*":
                self.take()
                tok = self.peek()
            parts.append(self.parse_factor())
        return word_mul(*parts)

    def parse_factor(self):
        tok = self.take()
        if tok == "(":
            w = self.parse_word(stop=(")",))
            self.expect(")")
            return self._maybe_pow(w)
        if tok == "[":
            x = self.parse_word(stop=(",",))
            self.expect(",")
            y = self.parse_word(stop=("]",))
            self.expect("]")
            return self._maybe_pow(commutator(x, y))
        if tok in ("1", "Id"):
            return ()
        if tok in self.gen_index:
            return self._maybe_pow((self.gen_index[tok],))
        raise MalformedShorthand("unknown generator %r" % tok)

    def _maybe_pow(self, w):
        if self.peek() == "^":
            self.take()
            e = self.take()
            try:
                e = int(e)
            except ValueError:
                raise MalformedShorthand("bad exponent %r" % e)
            return word_power(w, e)
        return w


def parse_word(text, generators):
    """Parse a word expression over the named generators."""
    gen_index = {name: i + 1 for i, name in enumerate(generators)}
    text = text.strip()
    if not text:
        return ()
    parser = _Parser(_tokenize(text), gen_index)
    w = parser.parse_word()
    if parser.pos != len(parser.tokens):
        raise MalformedShorthand("trailing input in %r" % text)
    return w


def word_str(w, generators):
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        x = w[i]
        j = i
        while j < len(w) and w[j] == x:
            j += 1
        name = generators[abs(x) - 1]
        e = (j - i) * (1 if x > 0 else -1)
        parts.append(name if e == 1 else "%s^%d" % (name, e))
        i = j
    return "*".join(parts)


@dataclass
class Presentation:
    """A finite presentation: generator names and relator words."""

    generators: list
    relators: list = field(default_factory=list)

    @classmethod
    def from_strings(cls, generators, relator_strings):
        rels = [parse_word(s, generators) for s in relator_strings]
        return cls(list(generators), [r for r in rels if r])

    def word(self, text):
        return parse_word(text, self.generators)

    def with_relators(self, extra):
        return Presentation(list(self.generators), list(self.relators) + list(extra))

    def __str__(self):
        rels = ", ".join(word_str(r, self.generators) for r in self.relators)
        return "<%s | %s>" % (", ".join(self.generators), rels)
