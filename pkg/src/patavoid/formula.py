"""Patterns and formulas over the variables ``A``-``Z``.

A formula is a set of fragments written ``FRAG.FRAG...``. Formulas are kept
normalized: no fragment is a factor of another, and every variable occurs at
least twice overall. Fragments are stored sorted by (length, text).
"""
from __future__ import annotations

import itertools
import logging
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

_FRAGMENT = re.compile(r"[A-Z]+")
_FORMULA = re.compile(r"[A-Z]+(?:\.[A-Z]+)*")


class FormulaError(ValueError):
    """Malformed formula or pattern text, or a formula with an isolated variable."""


class TrivialPatternError(FormulaError):
    """Every variable of the pattern is isolated once reduced; nothing to avoid."""


def _order(fragments: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(fragments), key=lambda s: (len(s), s)))


@dataclass(frozen=True)
class Pattern:
    symbols: str

    def __post_init__(self):
        if not _FRAGMENT.fullmatch(self.symbols):
            raise FormulaError(f"pattern must be a non-empty word over A-Z, got {self.symbols!r}")

    def __str__(self) -> str:
        return self.symbols

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self.symbols)


@dataclass(frozen=True)
class Formula:
    fragments: tuple[str, ...]

    def __post_init__(self):
        if not self.fragments:
            raise FormulaError("a formula needs at least one fragment")
        if self.fragments != _order(self.fragments):
            raise FormulaError("fragments must be distinct and in canonical order; use normalize_formula")
        counts = Counter("".join(self.fragments))
        lonely = sorted(v for v, c in counts.items() if c == 1)
        if lonely:
            raise FormulaError(f"isolated variable(s) {','.join(lonely)} in {'.'.join(self.fragments)}")
        for a, b in itertools.permutations(self.fragments, 2):
            if a in b:
                raise FormulaError(f"fragment {a} is a factor of {b}; use normalize_formula")

    def __str__(self) -> str:
        return ".".join(self.fragments)

    def __repr__(self) -> str:
        return f"Formula('{self}')"

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(sorted(set("".join(self.fragments))))

    @property
    def max_fragment_length(self) -> int:
        return max(map(len, self.fragments))

    def occurrences(self) -> Counter:
        return Counter("".join(self.fragments))


def _drop_factors(fragments: Sequence[str]) -> list[str]:
    frags = list(_order(fragments))
    kept = [f for f in frags if not any(f != g and f in g for g in frags)]
    dropped = [f for f in frags if f not in kept]
    if dropped:
        log.info("dropped fragment(s) %s: factor of another fragment", ",".join(dropped))
    return kept


def normalize_formula(fragments: Iterable[str]) -> Formula:
    """Remove duplicate fragments and fragments that are factors of others."""
    frags = list(fragments)
    if not frags:
        raise FormulaError("empty fragment list")
    for f in frags:
        if not _FRAGMENT.fullmatch(f):
            raise FormulaError(f"bad fragment {f!r}")
    return Formula(tuple(_drop_factors(frags)))


def parse_formula(text: str) -> Formula:
    """Parse ``FRAGMENT('.'FRAGMENT)*`` with ``FRAGMENT = [A-Z]+``, no whitespace."""
    if not isinstance(text, str) or not _FORMULA.fullmatch(text):
        raise FormulaError(f"not a formula literal: {text!r}")
    return normalize_formula(text.split("."))


def as_formula(f) -> Formula:
    return f if isinstance(f, Formula) else parse_formula(f)


def _split_isolated(blocks: Sequence[str]) -> list[str]:
    counts = Counter("".join(blocks))
    out: list[str] = []
    for block in blocks:
        cur = ""
        for v in block:
            if counts[v] == 1:
                if cur:
                    out.append(cur)
                cur = ""
            else:
                cur += v
        if cur:
            out.append(cur)
    return out


def pattern_to_formula(p: Pattern | str) -> Formula:
    """Replace isolated variables by dots and normalize.

    Dropping a fragment can isolate a variable again, so the two steps repeat
    until nothing changes. Raises :class:`TrivialPatternError` when no
    fragment survives.
    """
    if not isinstance(p, Pattern):
        p = Pattern(p)
    blocks = [p.symbols]
    while True:
        split = _split_isolated(blocks)
        if not split:
            raise TrivialPatternError(f"every variable of {p} ends up isolated")
        kept = _drop_factors(split)
        if kept == blocks:
            return Formula(tuple(kept))
        blocks = kept


def reverse_formula(f: Formula) -> Formula:
    return normalize_formula(frag[::-1] for frag in f.fragments)


def rename(f: Formula, mapping: dict[str, str]) -> Formula:
    if len(set(mapping.values())) != len(mapping):
        raise FormulaError("renaming must be injective")
    return normalize_formula("".join(mapping[v] for v in frag) for frag in f.fragments)


def _key(f: Formula) -> tuple:
    return tuple((len(s), s) for s in f.fragments)


def canonical_form(f: Formula) -> Formula:
    """Least formula, in canonical fragment order, over all renamings onto A, B, C, ..."""
    vs = f.variables
    targets = [chr(65 + i) for i in range(len(vs))]
    best = None
    for perm in itertools.permutations(targets):
        g = rename(f, dict(zip(vs, perm)))
        if best is None or _key(g) < _key(best):
            best = g
    return best


def up_to_symmetry(f: Formula) -> Formula:
    """Representative of ``f`` under renaming and reversal."""
    a, b = canonical_form(f), canonical_form(reverse_formula(f))
    return a if _key(a) <= _key(b) else b


def same_up_to_renaming(f: Formula, g: Formula) -> bool:
    return canonical_form(f) == canonical_form(g)


def is_self_reverse(f: Formula) -> bool:
    return same_up_to_renaming(f, reverse_formula(f))


def is_doubled(p: Pattern | str) -> bool:
    symbols = p.symbols if isinstance(p, Pattern) else Pattern(p).symbols
    return all(c >= 2 for c in Counter(symbols).values())


def square_factors(fragment: str) -> set[str]:
    out = set()
    n = len(fragment)
    for i in range(n):
        for half in range(1, (n - i) // 2 + 1):
            u = fragment[i:i + half]
            if fragment[i + half:i + 2 * half] == u:
                out.add(u + u)
    return out


def is_easy(f: Formula) -> bool:
    """Every variable lies inside some square factor of some fragment."""
    covered = set()
    for frag in f.fragments:
        for sq in square_factors(frag):
            covered.update(sq)
    return covered >= set(f.variables)


def important_fragment(f: Formula, var: str = "B") -> tuple[str, str, str]:
    """Split the fragment holding ``var`` twice as ``R M R`` with ``M`` free of ``var``.

    Returns ``(fragment, R, M)`` with the longest such ``R``. Raises when no
    single fragment fits that shape.
    """
    candidates = [frag for frag in f.fragments if frag.count(var) >= 2]
    if len(candidates) != 1:
        raise FormulaError(f"{f} has {len(candidates)} fragments repeating {var}")
    frag = candidates[0]
    for r in range((len(frag) - 1) // 2, 0, -1):
        head, mid = frag[:r], frag[r:len(frag) - r]
        if head == frag[-r:] and mid and var not in mid:
            return frag, head, mid
    raise FormulaError(f"fragment {frag} is not of the form R M R")
