"""Morphisms, fixed points, and factor sets of images of square-free words."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

from .words import Alphabet, Word, as_word, enumerate_square_free, factors, is_square_free

BUILTIN_FIXED = ("b2", "b3", "b4", "b5")
_LINE = re.compile(r"(\d)\s*->\s*(\d+)")


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    """Non-erasing map from the letters ``0 .. k-1`` to non-empty words."""

    images: tuple[bytes, ...]
    codomain: Alphabet
    name: str = ""

    def __post_init__(self):
        if not self.images:
            raise MorphismError("a morphism needs at least one letter")
        if any(len(img) == 0 for img in self.images):
            raise MorphismError("images must be non-empty")
        if max(max(img) for img in self.images) >= self.codomain.size:
            raise MorphismError("image letter outside the codomain")

    @classmethod
    def from_images(cls, images: Sequence[str], k: int | None = None, name: str = "") -> "Morphism":
        raw = tuple(bytes(ord(ch) - 48 for ch in img) for img in images)
        if k is None:
            k = max(2, max(max(r, default=0) for r in raw) + 1)
        return cls(raw, Alphabet(k), name)

    @classmethod
    def parse(cls, text: str, name: str = "") -> "Morphism":
        """Read ``d -> w`` lines; blank lines and ``#`` comments are skipped."""
        table: dict[int, str] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            m = _LINE.fullmatch(line)
            if not m:
                raise MorphismError(f"line {lineno}: expected 'd -> w', got {line!r}")
            d = int(m.group(1))
            if d in table:
                raise MorphismError(f"line {lineno}: letter {d} defined twice")
            table[d] = m.group(2)
        if sorted(table) != list(range(len(table))):
            raise MorphismError("letters must be 0..k-1 without gaps")
        return cls.from_images([table[d] for d in range(len(table))], name=name)

    def __str__(self) -> str:
        return "\n".join(f"{d} -> {self.image_text(d)}" for d in range(self.domain_size))

    def image_text(self, d: int) -> str:
        return "".join(chr(48 + a) for a in self.images[d])

    @property
    def domain_size(self) -> int:
        return len(self.images)

    @property
    def width(self) -> int | None:
        """Common image length, or None when the morphism is not uniform."""
        lens = {len(img) for img in self.images}
        return lens.pop() if len(lens) == 1 else None

    @property
    def min_image_length(self) -> int:
        return min(map(len, self.images))

    def apply(self, w: Word | str) -> Word:
        w = as_word(w, self.domain_size if isinstance(w, str) else None)
        if w.letters and max(w.letters) >= self.domain_size:
            raise MorphismError(f"letter outside the domain of {self.name or 'the morphism'}")
        return Word(b"".join(self.images[a] for a in w.letters), self.codomain)

    __call__ = apply

    def complement(self) -> "Morphism":
        """Binary morphism with 0 and 1 exchanged in every image."""
        if self.codomain.size != 2:
            raise MorphismError("complement needs a binary codomain")
        table = bytes([1, 0]) + bytes(254)
        return Morphism(tuple(img.translate(table) for img in self.images), self.codomain,
                        self.name + "bar")


def _data_dir():
    return resources.files("patavoid") / "data" / "morphisms"


def catalog_names() -> list[str]:
    return sorted(p.name[:-4] for p in _data_dir().iterdir() if p.name.endswith(".txt"))


def load_morphism(ref: str | Path) -> Morphism:
    """Load by catalog name (``g_y``) or by path; unknown paths fall back to the
    catalog entry with the same file name."""
    path = Path(ref)
    if path.suffix == ".txt" and path.is_file():
        return Morphism.parse(path.read_text(), name=path.stem)
    entry = _data_dir() / f"{path.stem}.txt"
    if not entry.is_file():
        raise MorphismError(f"no morphism file {ref!r} and no catalog entry {path.stem!r}")
    return Morphism.parse(entry.read_text(), name=path.stem)


# -- morphic words --------------------------------------------------------------

@dataclass(frozen=True)
class MorphicWordSpec:
    """Fixed point of ``fixed`` starting with ``seed``, optionally mapped by ``outer``."""

    fixed: Morphism
    seed: int = 0
    outer: Morphism | None = None

    def __post_init__(self):
        img = self.fixed.images[self.seed]
        if len(img) < 2 or img[0] != self.seed:
            raise MorphismError(f"{self.fixed.name or 'morphism'} is not prolongable on {self.seed}")
        if self.fixed.codomain.size > self.fixed.domain_size:
            raise MorphismError("fixed-point morphism must map the alphabet into itself")
        if self.outer is not None and self.outer.domain_size < self.fixed.domain_size:
            raise MorphismError("outer morphism does not cover the inner alphabet")

    @classmethod
    def parse(cls, text: str) -> "MorphicWordSpec":
        """``b3``, ``g_y(b3)`` or ``name(fixed)`` with catalog morphism names."""
        m = re.fullmatch(r"\s*([\w.-]+)\s*(?:\(\s*([\w.-]+)\s*\))?\s*", text)
        if not m:
            raise MorphismError(f"bad morphic word spec {text!r}")
        if m.group(2) is None:
            return cls(load_morphism(m.group(1)))
        return cls(load_morphism(m.group(2)), 0, load_morphism(m.group(1)))

    @property
    def name(self) -> str:
        inner = self.fixed.name or "fixed"
        return f"{self.outer.name}({inner})" if self.outer is not None else inner

    @property
    def codomain_size(self) -> int:
        return (self.outer or self.fixed).codomain.size

    def prefix(self, n: int) -> Word:
        return fixed_point_prefix(self, n)


def _fixed_prefix(g: Morphism, seed: int, n: int) -> bytes:
    w = bytes([seed])
    while len(w) < n:
        nxt = b"".join(g.images[a] for a in w[: n])
        if len(nxt) <= len(w):  # pragma: no cover - prolongable images grow
            raise MorphismError("fixed-point iteration stalled")
        w = nxt
    return w[:n]


def fixed_point_prefix(spec: MorphicWordSpec | str, n: int) -> Word:
    """Length-``n`` prefix of the morphic word described by ``spec``."""
    if isinstance(spec, str):
        spec = MorphicWordSpec.parse(spec)
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.outer is None:
        return Word(_fixed_prefix(spec.fixed, spec.seed, n), Alphabet(spec.fixed.domain_size))
    outer = spec.outer
    inner_len = n // outer.min_image_length + 1
    inner = _fixed_prefix(spec.fixed, spec.seed, inner_len)
    return Word(b"".join(outer.images[a] for a in inner)[:n], outer.codomain)


def stable_factor_set(spec: MorphicWordSpec | str, n: int, *, start: int | None = None,
                      max_len: int = 1 << 22) -> tuple[set[Word], Word]:
    """Length-``n`` factors of the morphic word, read off a prefix long enough
    that doubling it twice adds nothing. Returns ``(factors, prefix)``."""
    if isinstance(spec, str):
        spec = MorphicWordSpec.parse(spec)
    length = start or max(64, 16 * n)
    prev = None
    stable = 0
    while length <= max_len:
        w = spec.prefix(length)
        facs = factors(w, n)
        if prev is not None and facs == prev:
            stable += 1
            if stable == 2:
                return facs, w
        else:
            stable = 0
        prev = facs
        length *= 2
    raise MorphismError(f"factor set of {spec.name} at length {n} did not stabilize "
                        f"below prefix length {max_len}")


# -- synchronization and square-free pre-images --------------------------------

@dataclass(frozen=True)
class SyncViolation:
    a: int
    b: int
    c: int
    offset: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def is_synchronizing(g: Morphism) -> tuple[bool, SyncViolation | None]:
    """``g(a)`` occurs in ``g(bc)`` only as a prefix or a suffix, for all letters."""
    k = g.domain_size
    for a in range(k):
        ga = g.images[a]
        for b in range(k):
            for c in range(k):
                gbc = g.images[b] + g.images[c]
                pos = gbc.find(ga, 1)
                while pos != -1:
                    if pos != len(g.images[b]) and pos + len(ga) != len(gbc):
                        return False, SyncViolation(a, b, c, pos)
                    pos = gbc.find(ga, pos + 1)
    return True, None


@lru_cache(maxsize=64)
def sqf_pre_images(span: int, k: int = 3) -> tuple[Word, ...]:
    """Square-free words of length ``span`` together with every shorter
    square-free word that admits no square-free one-letter extension."""
    out = list(enumerate_square_free(k, span))
    alphabet = Alphabet(k)
    for n in range(1, span):
        for w in enumerate_square_free(k, n):
            stuck = not any(is_square_free(Word(bytes([a]) + w.letters, alphabet))
                            or is_square_free(Word(w.letters + bytes([a]), alphabet))
                            for a in range(k))
            if stuck:
                out.append(w)
    return tuple(out)


def adequate_span(g: Morphism, n: int) -> int:
    """Pre-image length whose images contain every length-``n`` factor of any sqf-g-image."""
    return math.ceil(n / g.min_image_length) + 2


def sqf_images(g: Morphism, span: int) -> list[Word]:
    if g.domain_size != 3:
        raise MorphismError("sqf-g-images need a ternary domain")
    return [g.apply(u) for u in sqf_pre_images(span)]


def sqf_image_factors(g: Morphism, span: int, n: int) -> set[Word]:
    """Length-``n`` factors of the images of square-free ternary words of length ``span``."""
    if span < adequate_span(g, n):
        raise MorphismError(f"span {span} too small for factors of length {n} "
                            f"(need {adequate_span(g, n)})")
    out: set[Word] = set()
    for img in sqf_images(g, span):
        out |= factors(img, n)
    return out

