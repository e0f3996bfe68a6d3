"""Alphabets and freely reduced words.

A letter is stored as a signed integer code: generator ``i`` (0-based) is
``i + 1`` and its formal inverse is ``-(i + 1)``.  Words are reduced on
construction, so two words are equal exactly when their codes are equal.
"""
from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Alphabet",
    "Word",
    "WordSyntaxError",
    "AlphabetMismatch",
    "reduce",
    "concat",
    "inverse",
    "cyclic_reduce",
    "primitive_root",
    "parse_word",
    "format_word",
    "iter_reduced_words",
    "letter_key",
]


class WordSyntaxError(ValueError):
    """Malformed word text or unknown generator name."""

    def __init__(self, message: str, text: str = "", column: int | None = None, line: int | None = None):
        self.text = text
        self.column = column
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class AlphabetMismatch(ValueError):
    pass


_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


class Alphabet:
    """An ordered list of distinct generator names."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        symbols = tuple(symbols)
        for s in symbols:
            if not isinstance(s, str) or not s:
                raise ValueError(f"generator names must be non-empty strings, got {s!r}")
            if not _NAME_RE.match(s):
                raise ValueError(f"invalid generator name {s!r}")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"generator names must be distinct: {symbols}")
        self.symbols = symbols
        self._index = {s: i for i, s in enumerate(symbols)}

    @classmethod
    def fresh(cls, size: int, prefix: str = "u") -> "Alphabet":
        return cls(f"{prefix}{i}" for i in range(1, size + 1))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.symbols)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise WordSyntaxError(f"unknown generator {name!r}") from None

    @property
    def compact(self) -> bool:
        """True when every generator is a single lowercase ASCII letter."""
        return all(len(s) == 1 and "a" <= s <= "z" for s in self.symbols)

    def generator(self, i: int) -> "Word":
        return Word._raw(self, (i + 1,))

    def generators(self) -> list["Word"]:
        return [self.generator(i) for i in range(len(self))]

    def identity(self) -> "Word":
        return Word._raw(self, ())

    def word(self, text: str) -> "Word":
        return parse_word(self, text)


def _free_reduce(codes: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for c in codes:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def _mul(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    # both inputs reduced
    k = 0
    n = min(len(u), len(v))
    while k < n and u[-1 - k] == -v[k]:
        k += 1
    if k == 0:
        return u + v
    return u[: len(u) - k] + v[k:]


def _inv(u: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-c for c in reversed(u))


class Word:
    """A freely reduced word over an :class:`Alphabet`.

    ``Word(alphabet, codes)`` reduces ``codes``; arithmetic uses ``*``,
    ``**`` and ``~`` (inverse).
    """

    __slots__ = ("alphabet", "codes")

    def __init__(self, alphabet: Alphabet, codes: Iterable[int] = ()):
        n = len(alphabet)
        codes = tuple(codes)
        for c in codes:
            if not isinstance(c, int) or c == 0 or abs(c) > n:
                raise WordSyntaxError(f"letter code {c!r} is not valid for {alphabet!r}")
        self.alphabet = alphabet
        self.codes = _free_reduce(codes)

    @classmethod
    def _raw(cls, alphabet: Alphabet, codes: tuple[int, ...]) -> "Word":
        w = object.__new__(cls)
        w.alphabet = alphabet
        w.codes = codes
        return w

    @property
    def letters(self) -> tuple[tuple[int, int], ...]:
        """The word as (generator index, sign) pairs."""
        return tuple((abs(c) - 1, 1 if c > 0 else -1) for c in self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __bool__(self) -> bool:
        return bool(self.codes)

    def is_identity(self) -> bool:
        return not self.codes

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.codes == other.codes and self.alphabet == other.alphabet

    def __hash__(self) -> int:
        return hash(self.codes)

    def __lt__(self, other: "Word") -> bool:
        return shortlex_key(self.codes) < shortlex_key(other.codes)

    def _check(self, other: "Word") -> None:
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"{self.alphabet!r} vs {other.alphabet!r}")

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word._raw(self.alphabet, _mul(self.codes, other.codes))

    def __invert__(self) -> "Word":
        return Word._raw(self.alphabet, _inv(self.codes))

    def inverse(self) -> "Word":
        return ~self

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return (~self) ** (-n)
        core, conj = cyclic_reduce(self)
        return Word._raw(self.alphabet, _mul(_mul(conj.codes, core.codes * n), _inv(conj.codes)))

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def letter_key(c: int) -> int:
    """Position of a letter code in the fixed order a, a^-1, b, b^-1, ..."""
    return 2 * (abs(c) - 1) + (c < 0)


def shortlex_key(codes: Sequence[int]) -> tuple:
    return (len(codes), tuple(letter_key(c) for c in codes))


def reduce(alphabet: Alphabet, raw: Iterable) -> Word:
    """Build a reduced word from raw letters.

    Each letter may be a signed code, a ``(name_or_index, sign)`` pair, or a
    generator name (meaning sign ``+1``).
    """
    codes = []
    for item in raw:
        if isinstance(item, int):
            codes.append(item)
            continue
        if isinstance(item, str):
            gen, sign = item, 1
        else:
            gen, sign = item
        if sign not in (1, -1):
            raise WordSyntaxError(f"sign must be +1 or -1, got {sign!r}")
        i = alphabet.index(gen) if isinstance(gen, str) else gen
        if not 0 <= i < len(alphabet):
            raise WordSyntaxError(f"generator index {i} out of range")
        codes.append(sign * (i + 1))
    return Word(alphabet, codes)


def concat(u: Word, v: Word) -> Word:
    return u * v


def inverse(w: Word) -> Word:
    return ~w


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w = conjugator * core * conjugator^-1``."""
    c = w.codes
    k = 0
    while 2 * k + 1 < len(c) and c[k] == -c[-1 - k]:
        k += 1
    core = c[k: len(c) - k]
    return Word._raw(w.alphabet, core), Word._raw(w.alphabet, c[:k])


def primitive_root(w: Word) -> tuple[Word, int]:
    """Return ``(root, n)`` with ``w = root**n``, ``n >= 0`` and root not a proper power."""
    if w.is_identity():
        return w, 0
    core, conj = cyclic_reduce(w)
    c = core.codes
    n = len(c)
    for p in range(1, n + 1):
        if n % p == 0 and c[:p] * (n // p) == c:
            piece = c[:p]
            break
    root = _mul(_mul(conj.codes, piece), _inv(conj.codes))
    return Word._raw(w.alphabet, root), n // p


# -- text syntax ----------------------------------------------------------

_TOKEN_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?")


def parse_word(alphabet: Alphabet, text: str) -> Word:
    """Parse ``text`` into a word over ``alphabet``.

    Compact alphabets (single lowercase letters) use one character per
    letter with uppercase for inverses, e.g. ``"abA"``.  Other alphabets use
    whitespace- or ``*``-separated tokens ``name`` / ``name^k``.  ``"1"`` and
    the empty string denote the identity.
    """
    stripped = text.strip()
    if stripped in ("", "1"):
        return alphabet.identity()
    if alphabet.compact:
        return _parse_compact(alphabet, text)
    return _parse_extended(alphabet, text)


def _parse_compact(alphabet: Alphabet, text: str) -> Word:
    codes = []
    for col, ch in enumerate(text, start=1):
        if ch.isspace():
            continue
        if not ("a" <= ch.lower() <= "z"):
            raise WordSyntaxError(f"unexpected character {ch!r}", text, col)
        name = ch.lower()
        if name not in alphabet:
            raise WordSyntaxError(f"unknown generator {name!r}", text, col)
        i = alphabet.index(name) + 1
        codes.append(-i if ch.isupper() else i)
    return Word(alphabet, codes)


def _parse_extended(alphabet: Alphabet, text: str) -> Word:
    codes = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace() or ch in "*.":
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {ch!r}", text, pos + 1)
        name, exp = m.group(1), m.group(2)
        if name not in alphabet:
            raise WordSyntaxError(f"unknown generator {name!r}", text, pos + 1)
        k = int(exp) if exp is not None else 1
        i = alphabet.index(name) + 1
        codes.extend([i if k > 0 else -i] * abs(k))
        pos = m.end()
    return Word(alphabet, codes)


def format_word(w: Word) -> str:
    if w.is_identity():
        return "1"
    names = w.alphabet.symbols
    if w.alphabet.compact:
        return "".join(names[c - 1] if c > 0 else names[-c - 1].upper() for c in w.codes)
    return " ".join(names[c - 1] if c > 0 else f"{names[-c - 1]}^-1" for c in w.codes)


def iter_reduced_words(alphabet: Alphabet, max_len: int) -> Iterator[Word]:
    """All reduced words of length <= max_len in shortlex order."""
    letters = sorted(
        [c for i in range(1, len(alphabet) + 1) for c in (i, -i)], key=letter_key
    )
    level: list[tuple[int, ...]] = [()]
    yield Word._raw(alphabet, ())
    for _ in range(max_len):
        nxt = []
        for w in level:
            last = w[-1] if w else 0
            for c in letters:
                if c != -last:
                    nxt.append(w + (c,))
        for w in nxt:
            yield Word._raw(alphabet, w)
        level = nxt
