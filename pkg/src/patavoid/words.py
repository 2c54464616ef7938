"""Finite words over small indexed alphabets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels

MAX_ALPHABET = 10


@dataclass(frozen=True)
class Alphabet:
    """Letters ``0 .. size-1``, rendered as the digits ``'0' .. '9'``."""

    size: int

    def __post_init__(self):
        if not 1 <= self.size <= MAX_ALPHABET:
            raise ValueError(f"alphabet size must be in 1..{MAX_ALPHABET}, got {self.size}")

    def render(self, letter: int) -> str:
        if not 0 <= letter < self.size:
            raise ValueError(f"letter {letter} outside alphabet of size {self.size}")
        return chr(48 + letter)

    def parse(self, ch: str) -> int:
        letter = ord(ch) - 48
        if len(ch) != 1 or not 0 <= letter < self.size:
            raise ValueError(f"{ch!r} is not a letter of the {self.size}-letter alphabet")
        return letter

    @property
    def letters(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class Word:
    """An immutable finite word.

    Letters are kept as a ``bytes`` object holding one letter index per byte,
    which gives cheap hashing, slicing and substring search.
    """

    letters: bytes
    alphabet: Alphabet

    def __post_init__(self):
        if self.letters and max(self.letters) >= self.alphabet.size:
            raise ValueError(f"word uses letters outside alphabet of size {self.alphabet.size}")

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> "Word":
        """Read a digit string. ``k`` defaults to ``max(2, largest letter + 1)``."""
        if any(not ("0" <= ch <= "9") for ch in text):
            raise ValueError(f"word literal must be a digit string, got {text!r}")
        raw = bytes(ord(ch) - 48 for ch in text)
        if k is None:
            k = max(2, max(raw, default=0) + 1)
        return cls(raw, Alphabet(k))

    @classmethod
    def of(cls, letters: Iterable[int], k: int) -> "Word":
        return cls(bytes(letters), Alphabet(k))

    def __str__(self) -> str:
        return "".join(chr(48 + a) for a in self.letters)

    def __repr__(self) -> str:
        return f"Word('{self}', k={self.alphabet.size})"

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item], self.alphabet)
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        _same_alphabet(self, other)
        return Word(self.letters + other.letters, self.alphabet)

    def __lt__(self, other: "Word") -> bool:
        return self.letters < other.letters

    @property
    def k(self) -> int:
        return self.alphabet.size

    def array(self) -> np.ndarray:
        return np.frombuffer(self.letters, dtype=np.int8).copy()

    def pack(self) -> int:
        """Two bits per letter, first letter in the most significant slot."""
        if self.k > 4:
            raise ValueError("packed form needs an alphabet of size <= 4")
        value = 0
        for a in self.letters:
            value = (value << 2) | a
        return value

    @classmethod
    def unpack(cls, value: int, n: int, k: int) -> "Word":
        out = bytearray(n)
        for i in range(n - 1, -1, -1):
            out[i] = value & 3
            value >>= 2
        return cls(bytes(out), Alphabet(k))


def as_word(w, k: int | None = None) -> Word:
    if isinstance(w, Word):
        return w
    return Word.parse(w, k)


def _same_alphabet(w: Word, u: Word) -> None:
    if w.alphabet != u.alphabet:
        raise ValueError(f"alphabet mismatch: {w.k} vs {u.k}")


@dataclass(frozen=True)
class SquareHit:
    position: int
    period: int

    def holds_in(self, w: Word) -> bool:
        p, i = self.period, self.position
        return (p >= 1 and i >= 0 and i + 2 * p <= len(w)
                and w.letters[i:i + p] == w.letters[i + p:i + 2 * p])


def factors(w: Word, n: int) -> set[Word]:
    """Distinct length-``n`` factors of ``w``."""
    if n < 1:
        raise ValueError("factor length must be >= 1")
    raw = w.letters
    return {Word(raw[i:i + n], w.alphabet) for i in range(len(raw) - n + 1)}


def contains_factor(w: Word, u: Word) -> bool:
    if len(u) < 1:
        raise ValueError("the factor must be non-empty")
    _same_alphabet(w, u)
    return u.letters in w.letters


def reverse_word(w: Word) -> Word:
    return Word(w.letters[::-1], w.alphabet)


def permute_letters(w: Word, perm: Sequence[int]) -> Word:
    """Apply the letter bijection ``a -> perm[a]``."""
    if sorted(perm) != list(range(w.k)):
        raise ValueError(f"{list(perm)} is not a permutation of the alphabet")
    table = bytes(perm) + bytes(256 - len(perm))
    return Word(w.letters.translate(table), w.alphabet)


SWAP01 = (1, 0)


def complement(w: Word) -> Word:
    """Exchange 0 and 1 in a binary word."""
    return permute_letters(w, SWAP01)


def find_square(w: Word, tmin: int = 1, tmax: int | None = None) -> SquareHit | None:
    """Some square ``uu`` with ``tmin <= |u| <= tmax`` (smallest period first)."""
    if tmax is None:
        tmax = len(w) // 2
    if not 1 <= tmin:
        raise ValueError("tmin must be >= 1")
    if tmax < tmin:
        return None
    pos, per = _kernels.find_square_scan(w.array(), tmin, tmax)
    if per == 0:
        return None
    return SquareHit(int(pos), int(per))


def is_square_free(w: Word) -> bool:
    return find_square(w) is None


def enumerate_square_free(k: int, n: int) -> list[Word]:
    """All square-free words of length ``n`` over ``k`` letters, in lexicographic order."""
    alphabet = Alphabet(k)
    if n == 0:
        return [Word(b"", alphabet)]
    out: list[Word] = []
    buf = bytearray(n)

    def grow(depth: int) -> None:
        for a in range(k):
            buf[depth] = a
            m = depth + 1
            if any(buf[m - 2 * p:m - p] == buf[m - p:m] for p in range(1, m // 2 + 1)):
                continue
            if m == n:
                out.append(Word(bytes(buf), alphabet))
            else:
                grow(m)

    grow(0)
    return out


def all_words(k: int, n: int) -> Iterator[Word]:
    alphabet = Alphabet(k)
    for tup in itertools.product(range(k), repeat=n):
        yield Word(bytes(tup), alphabet)
