"""Free group words, elements of F_n x Z^m, and the textual element syntax.

A word is stored as a tuple of signed generator indices: ``i`` stands for
the i-th generator and ``-i`` for its inverse.  Every constructor returns a
freely reduced word.

>>> w = parse_word("a b^-2 a")
>>> w.letters
(1, -2, -2, 1)
>>> format_word(w * ~w)
'1'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Ambient",
    "Word",
    "FtaElement",
    "ParseError",
    "reduce",
    "multiply",
    "invert",
    "power",
    "cyclic_decompose",
    "abelianize",
    "parse_word",
    "parse_element",
    "format_word",
    "format_vector",
    "format_element",
]


class ParseError(ValueError):
    """Raised on malformed element text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Ambient:
    free_rank: int
    abelian_rank: int = 0

    def __post_init__(self):
        if self.free_rank < 1:
            raise ValueError("free rank must be at least 1")
        if self.abelian_rank < 0:
            raise ValueError("abelian rank must be nonnegative")

    def __str__(self):
        if self.abelian_rank:
            return f"F{self.free_rank} x Z^{self.abelian_rank}"
        return f"F{self.free_rank}"


def _reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("zero is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word in a free group."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        object.__setattr__(self, "letters", _reduce_letters(letters))

    @classmethod
    def _trusted(cls, letters: tuple[int, ...]) -> "Word":
        w = object.__new__(cls)
        object.__setattr__(w, "letters", letters)
        return w

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __lt__(self, other: "Word"):
        return shortlex_key(self) < shortlex_key(other)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        return power(self, k)

    def __repr__(self):
        return f"Word({format_word(self)!r})"

    def __str__(self):
        return format_word(self)

    @property
    def max_letter(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def conjugate(self, v: "Word") -> "Word":
        """Return ``v^-1 self v``."""
        return multiply(invert(v), multiply(self, v))


IDENTITY = Word._trusted(())


def letter_key(x: int) -> tuple[int, bool]:
    """Letter order a < a^-1 < b < b^-1 < ..."""
    return (abs(x), x < 0)


def shortlex_key(w: Word) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w.letters))


def reduce(letters: Iterable[int], rank: int | None = None) -> Word:
    letters = tuple(letters)
    if rank is not None:
        for x in letters:
            if not 1 <= abs(x) <= rank:
                raise ValueError(f"letter {x} out of range for rank {rank}")
    return Word(letters)


def multiply(u: Word, v: Word) -> Word:
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return Word._trusted(a[: len(a) - i] + b[i:])


def invert(u: Word) -> Word:
    return Word._trusted(tuple(-x for x in reversed(u.letters)))


def power(u: Word, k: int) -> Word:
    if k < 0:
        u, k = invert(u), -k
    if k == 0 or not u:
        return IDENTITY
    v, core = cyclic_decompose(u)
    return Word._trusted(invert(v).letters + core.letters * k + v.letters)


def cyclic_decompose(w: Word) -> tuple[Word, Word]:
    """Split ``w = v^-1 c v`` with ``c`` cyclically reduced, no cancellation."""
    s = w.letters
    i = 0
    while i < len(s) - 1 - i and s[i] == -s[len(s) - 1 - i]:
        i += 1
    v = Word._trusted(s[len(s) - i :])
    return v, Word._trusted(s[i : len(s) - i])


def abelianize(w: Word, rank: int) -> tuple[int, ...]:
    vec = [0] * rank
    for x in w.letters:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(vec)


@dataclass(frozen=True)
class FtaElement:
    """An element ``u t^a`` of F_n x Z^m (free part first, vector on the right)."""

    free_part: Word
    abelian_part: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "abelian_part", tuple(int(c) for c in self.abelian_part))

    def __mul__(self, other: "FtaElement") -> "FtaElement":
        return FtaElement(
            multiply(self.free_part, other.free_part),
            tuple(x + y for x, y in zip(self.abelian_part, other.abelian_part)),
        )

    def __invert__(self) -> "FtaElement":
        return FtaElement(invert(self.free_part), tuple(-x for x in self.abelian_part))

    def __pow__(self, k: int) -> "FtaElement":
        return FtaElement(power(self.free_part, k), tuple(k * x for x in self.abelian_part))

    def __str__(self):
        return format_element(self)

    @classmethod
    def identity(cls, m: int) -> "FtaElement":
        return cls(IDENTITY, (0,) * m)

    @classmethod
    def vector(cls, vec: Sequence[int]) -> "FtaElement":
        return cls(IDENTITY, tuple(vec))


# --- text syntax -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x)(\d+)|([a-z]))(?:\s*\^\s*(-?)\s*(\d+))?")
_VECTOR = re.compile(r"\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*$")


def _generator_name(i: int, rank: int | None) -> str:
    if rank is not None and rank > 26:
        return f"x{i}"
    return chr(ord("a") + i - 1) if i <= 26 else f"x{i}"


def parse_word(text: str, rank: int | None = None, offset: int = 0) -> Word:
    """Parse the word part of an element; ``rank`` bounds generator indices."""
    stripped = text.strip()
    if stripped == "1":
        return IDENTITY
    letters: list[int] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", offset + start)
        if match.group(1):
            index = int(match.group(2))
        else:
            index = ord(match.group(3)) - ord("a") + 1
        if index < 1 or (rank is not None and index > rank):
            raise ParseError(f"generator index {index} out of range", offset + match.start())
        exponent = int(match.group(5)) if match.group(5) is not None else 1
        if match.group(4):
            exponent = -exponent
        letter = index if exponent > 0 else -index
        letters.extend([letter] * abs(exponent))
        pos = match.end()
    return Word(letters)


def parse_element(text: str, ambient: Ambient) -> FtaElement:
    """Parse ``word ('|' vector)?`` into an element of the ambient group.

    >>> parse_element("a^2 | (3,-1)", Ambient(2, 2))
    FtaElement(free_part=Word('a^2'), abelian_part=(3, -1))
    """
    word_text, bar, vec_text = text.partition("|")
    if not word_text.strip() and bar:
        word = IDENTITY
    else:
        word = parse_word(word_text, ambient.free_rank)
    m = ambient.abelian_rank
    if not bar:
        return FtaElement(word, (0,) * m)
    match = _VECTOR.match(vec_text)
    if match is None:
        raise ParseError("malformed vector", len(word_text) + 1)
    vec = tuple(int(c) for c in match.group(1).split(","))
    if len(vec) != m:
        raise ParseError(f"vector has length {len(vec)}, expected {m}", len(word_text) + 1)
    return FtaElement(word, vec)


def format_word(w: Word, rank: int | None = None) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    s = w.letters
    while i < len(s):
        j = i
        while j < len(s) and s[j] == s[i]:
            j += 1
        name = _generator_name(abs(s[i]), rank)
        exp = (j - i) * (1 if s[i] > 0 else -1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(parts)


def format_vector(vec: Sequence[int]) -> str:
    return "(" + ",".join(str(int(c)) for c in vec) + ")"


def format_element(g: FtaElement, rank: int | None = None) -> str:
    word = format_word(g.free_part, rank)
    if not g.abelian_part:
        return word
    return f"{word} | {format_vector(g.abelian_part)}"
