"""Free-group words, finite presentations and their text format.

A presentation is written as ``< x, y | x^3, y^3, (x*y)^2 >``.  Relators may be
equations ``u = v`` (stored as ``u*v^-1``; a chain ``a = b = c`` gives one
relator per adjacent pair), ``a^b`` with ``b`` a word is the conjugate
``b^-1*a*b``, and ``#`` starts a comment.  An identifier that is not a
generator name is split greedily into generator names, so ``xy`` reads as
``x*y`` when ``x`` and ``y`` are generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Sequence

Letter = tuple[int, int]


def reduce_letters(letters) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; letters are ``(generator index, +1 or -1)``."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((int(g), int(s)) for g, s in self.letters)
        for g, s in letters:
            if g < 0 or s not in (1, -1):
                raise ValueError(f"bad letter {(g, s)}")
        object.__setattr__(self, "letters", reduce_letters(letters))

    @classmethod
    def gen(cls, i: int, power: int = 1) -> "Word":
        s = 1 if power > 0 else -1
        return cls(((i, s),) * abs(power))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def conjugate(self, by: "Word") -> "Word":
        """``by^-1 * self * by``."""
        return by.inverse() * self * by

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        parts = []
        i = 0
        L = self.letters
        while i < len(L):
            j = i
            while j < len(L) and L[j] == L[i]:
                j += 1
            g, s = L[i]
            n = (j - i) * s
            parts.append(names[g] if n == 1 else f"{names[g]}^{n}")
            i = j
        return "*".join(parts)


def reduce(w: Word) -> Word:
    """Free reduction; words are kept reduced on construction so this is a copy."""
    return Word(w.letters)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        rels = tuple(r for r in self.relators if len(r))
        for r in rels:
            if r.max_generator() >= len(gens):
                raise ValueError("relator uses a generator outside the alphabet")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def __str__(self):
        rels = ", ".join(r.format(self.generators) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"

    def word(self, text: str) -> Word:
        """Parse a single word over this presentation's generators."""
        return parse_word(text, self.generators)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+|\#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<int>[+-]?[0-9]+)"
    r"|(?P<op>[<>|,()^*=])"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        val = m.group()
        if kind != "ws":
            tokens.append((kind, val, line, m.start() - line_start + 1))
        for k, ch in enumerate(val):
            if ch == "\n":
                line += 1
                line_start = m.start() + k + 1
        pos = m.end()
    tokens.append(("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, generators: Sequence[str] | None = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.names: list[str] = list(generators) if generators is not None else []
        self.index = {n: k for k, n in enumerate(self.names)}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val: str):
        kind, v, line, col = self.take()
        if v != val or kind == "end" and val:
            shown = v if kind != "end" else "end of input"
            raise ParseError(f"expected {val!r}, found {shown!r}", line, col)

    def fail(self, message: str, tok=None):
        _, _, line, col = tok or self.peek()
        raise ParseError(message, line, col)

    def presentation(self) -> Presentation:
        self.expect("<")
        while True:
            tok = self.take()
            if tok[0] != "ident":
                self.fail("expected a generator name", tok)
            if tok[1] in self.index:
                self.fail(f"duplicate generator {tok[1]!r}", tok)
            self.index[tok[1]] = len(self.names)
            self.names.append(tok[1])
            if self.peek()[1] == ",":
                self.take()
                continue
            break
        self.expect("|")
        rels: list[Word] = []
        if self.peek()[1] != ">":
            while True:
                rels.extend(self.relation())
                if self.peek()[1] == ",":
                    self.take()
                    continue
                break
        self.expect(">")
        if self.peek()[0] != "end":
            self.fail("trailing input after '>'")
        return Presentation(tuple(self.names), tuple(rels))

    def relation(self) -> list[Word]:
        sides = [self.word()]
        while self.peek()[1] == "=":
            self.take()
            sides.append(self.word())
        if len(sides) == 1:
            return sides
        return [a * b.inverse() for a, b in zip(sides, sides[1:])]

    def word(self) -> Word:
        w = self.factor()
        while True:
            tok = self.peek()
            if tok[1] == "*":
                self.take()
                w = w * self.factor()
            elif tok[0] == "ident" or tok[1] == "(":
                w = w * self.factor()
            else:
                return w

    def factor(self) -> Word:
        tok = self.take()
        if tok[0] == "ident":
            w = self.ident(tok)
        elif tok[1] == "(":
            w = self.word()
            self.expect(")")
        else:
            shown = tok[1] if tok[0] != "end" else "end of input"
            self.fail(f"expected a generator or '(', found {shown!r}", tok)
        while self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] == "int":
                n = int(tok[1])
                if n == 0:
                    self.fail("zero exponent", tok)
                w = w ** n
            elif tok[1] == "(":
                by = self.word()
                self.expect(")")
                w = w.conjugate(by)
            elif tok[0] == "ident":
                w = w.conjugate(self.ident(tok))
            else:
                self.fail("expected an exponent or a conjugating word", tok)
        return w

    def ident(self, tok) -> Word:
        name = tok[1]
        if name in self.index:
            return Word.gen(self.index[name])
        # greedy split of juxtaposed generator names, longest match first
        letters = []
        rest = name
        while rest:
            for n in sorted(self.names, key=len, reverse=True):
                if rest.startswith(n):
                    letters.append((self.index[n], 1))
                    rest = rest[len(n):]
                    break
            else:
                self.fail(f"unknown generator {name!r}", tok)
        return Word(tuple(letters))


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).presentation()


def parse_word(text: str, generators: Sequence[str]) -> Word:
    p = _Parser(text, generators)
    if p.peek()[0] == "end":
        return Word()
    if p.peek()[1] == "1" and p.toks[p.i + 1][0] == "end":
        return Word()
    w = p.word()
    if p.peek()[0] != "end":
        p.fail("trailing input after word")
    return w


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


def _default_inverse(x):
    if hasattr(x, "inverse"):
        return x.inverse()
    return x ** -1


def evaluate(
    w: Word,
    images: Sequence,
    mul: Callable | None = None,
    inv: Callable | None = None,
    identity=None,
):
    """Multiply out ``w`` with generator ``i`` replaced by ``images[i]``.

    ``mul`` and ``inv`` default to ``*`` and ``.inverse()``; pass them (and
    ``identity``) for objects like numpy matrices.
    """
    mul = mul or (lambda a, b: a * b)
    inv = inv or _default_inverse
    if w.max_generator() >= len(images):
        raise ValueError("word uses more generators than images supplied")
    inverses: dict[int, object] = {}
    acc = identity
    for g, s in w.letters:
        x = images[g]
        if s < 0:
            if g not in inverses:
                inverses[g] = inv(x)
            x = inverses[g]
        acc = x if acc is None else mul(acc, x)
    if acc is None:
        if not images:
            raise ValueError("cannot form the identity without images")
        acc = mul(images[0], inv(images[0]))
    return acc


@dataclass(frozen=True)
class HomomorphismCheck:
    ok: bool
    failing_index: int | None = None
    failing_relator: str | None = None

    def __bool__(self):
        return self.ok


def _default_is_identity(x) -> bool:
    if hasattr(x, "is_identity"):
        return x.is_identity()
    raise TypeError("pass is_identity for this element type")


def check_homomorphism(
    P: Presentation,
    images: Sequence,
    mul: Callable | None = None,
    inv: Callable | None = None,
    identity=None,
    is_identity: Callable | None = None,
) -> HomomorphismCheck:
    """Do the images satisfy every relator of ``P``?"""
    if len(images) != P.ngens:
        raise ValueError(f"{P.ngens} generators but {len(images)} images")
    is_identity = is_identity or _default_is_identity
    for k, r in enumerate(P.relators):
        if not is_identity(evaluate(r, images, mul, inv, identity)):
            return HomomorphismCheck(False, k, r.format(P.generators))
    return HomomorphismCheck(True)
