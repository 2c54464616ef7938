"""Occurrences of formulas in words, incremental checks, divisibility."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from ._kernels import BIG, SEP
from .formula import Formula, as_formula
from .words import Word, as_word


@dataclass(frozen=True)
class Occurrence:
    """A non-erasing assignment ``variable -> word``."""

    assignment: Mapping[str, Word]

    def image(self, fragment: str) -> bytes:
        return b"".join(self.assignment[v].letters for v in fragment)

    def to_json(self) -> dict[str, str]:
        return {v: str(self.assignment[v]) for v in sorted(self.assignment)}

    def __str__(self) -> str:
        return ", ".join(f"{v}={w}" for v, w in sorted(self.assignment.items()))


def validate(occ: Occurrence, texts: Word | Sequence[Word], f: Formula) -> bool:
    """Independent check: images non-empty and every fragment image is a factor."""
    if isinstance(texts, Word):
        texts = [texts]
    if set(occ.assignment) != set(f.variables):
        return False
    if any(len(img) == 0 for img in occ.assignment.values()):
        return False
    raws = [t.letters for t in texts]
    return all(any(occ.image(frag) in raw for raw in raws) for frag in f.fragments)


# -- plans -----------------------------------------------------------------

def _score(frag: str, known: set[str], caps: Mapping[str, int]) -> tuple:
    seen = set(known)
    checks = 0
    for v in frag:
        if v in seen:
            checks += caps.get(v, BIG)
        seen.add(v)
    return (checks, len(frag))


def fragment_order(fragments: Sequence[str], caps: Mapping[str, int] | None = None,
                   first: int | None = None) -> list[int]:
    """Greedy fragment order: most (cap-weighted) repeated-variable checks first."""
    caps = caps or {}
    todo = list(range(len(fragments)))
    order: list[int] = []
    known: set[str] = set()
    if first is not None:
        order.append(first)
        todo.remove(first)
        known.update(fragments[first])
    while todo:
        best = max(todo, key=lambda j: (_score(fragments[j], known, caps), -j))
        order.append(best)
        todo.remove(best)
        known.update(fragments[best])
    return order


@dataclass(frozen=True)
class Plan:
    syms: np.ndarray
    fstart: np.ndarray
    flen: np.ndarray
    nv: int


def build_plan(fragments: Sequence[str], variables: Sequence[str], order: Sequence[int]) -> Plan:
    index = {v: i for i, v in enumerate(variables)}
    syms, fstart, flen = [], [], []
    for j in order:
        fstart.append(len(syms))
        flen.append(len(fragments[j]))
        syms.extend(index[v] for v in fragments[j])
    return Plan(np.array(syms, np.int64), np.array(fstart, np.int64),
                np.array(flen, np.int64), len(variables))


@dataclass(frozen=True)
class PlanTable:
    """Padded 2-D stack of plans, the layout the incremental kernel reads."""

    syms: np.ndarray
    fstart: np.ndarray
    flen: np.ndarray
    nfrag: np.ndarray
    nv: np.ndarray

    @classmethod
    def stack(cls, plans: Sequence[Plan]) -> "PlanTable":
        s = max((len(p.syms) for p in plans), default=1)
        fr = max((len(p.fstart) for p in plans), default=1)
        syms = np.zeros((len(plans), s), np.int64)
        fstart = np.zeros((len(plans), fr), np.int64)
        flen = np.zeros((len(plans), fr), np.int64)
        for r, p in enumerate(plans):
            syms[r, :len(p.syms)] = p.syms
            fstart[r, :len(p.fstart)] = p.fstart
            flen[r, :len(p.flen)] = p.flen
        nfrag = np.array([len(p.fstart) for p in plans], np.int64)
        nv = np.array([p.nv for p in plans], np.int64)
        return cls(syms, fstart, flen, nfrag, nv)

    def arrays(self) -> tuple:
        return self.syms, self.fstart, self.flen, self.nfrag, self.nv


@lru_cache(maxsize=512)
def pinned_plans(f: Formula) -> tuple[Plan, ...]:
    """One plan per fragment, that fragment pinned to the end of the word."""
    vs = f.variables
    return tuple(build_plan(f.fragments, vs, fragment_order(f.fragments, first=j))
                 for j in range(len(f.fragments)))


def _pack(texts: Sequence[Word]) -> np.ndarray:
    parts = []
    for i, t in enumerate(texts):
        if i:
            parts.append(np.array([SEP], np.int8))
        parts.append(t.array())
    if not parts:
        return np.zeros(0, np.int8)
    return np.concatenate(parts)


class Matcher:
    """Occurrence search of one formula inside a fixed collection of texts.

    Texts are packed into one array separated by ``SEP``; a fragment image
    never straddles two texts. ``caps`` bounds image lengths per variable.
    """

    def __init__(self, texts: Word | Sequence[Word], f: Formula,
                 caps: Mapping[str, int] | None = None,
                 floors: Mapping[str, int] | None = None):
        if isinstance(texts, Word):
            texts = [texts]
        self.texts = list(texts)
        self.formula = f
        self.variables = f.variables
        self.w = _pack(self.texts)
        self.segend = _kernels.segment_ends(self.w)
        caps = dict(caps or {})
        floors = dict(floors or {})
        longest = max((len(t) for t in self.texts), default=0)
        self.lmax = np.array([min(caps.get(v, longest), longest) for v in self.variables], np.int64)
        self.lmin = np.array([max(1, floors.get(v, 1)) for v in self.variables], np.int64)
        order = fragment_order(f.fragments, {v: int(c) for v, c in zip(self.variables, self.lmax)})
        self.plan = build_plan(f.fragments, self.variables, order)
        nv = len(self.variables)
        self._vstart = np.zeros(nv, np.int64)
        self._vlen = np.zeros(nv, np.int64)

    def _run(self, lmin, lmax, fixed, vstart, vlen) -> bool:
        p = self.plan
        return bool(_kernels.match_exists(self.w, self.segend, p.syms, p.fstart, p.flen, p.nv,
                                          lmin, lmax, fixed, vstart, vlen))

    # above this many cells, matches of one fragment are collected and
    # deduplicated before the remaining fragments are looked at
    TWO_PHASE = 4096

    def exists(self) -> bool:
        nv = len(self.variables)
        if len(self.w) == 0 or (self.lmax < self.lmin).any():
            return False
        free = np.zeros(nv, np.bool_)
        if len(self.w) <= self.TWO_PHASE or len(self.formula.fragments) == 1:
            return self._run(self.lmin, self.lmax, free, self._vstart, self._vlen)
        return self._two_phase()

    def _seed_rows(self, frag: str) -> np.ndarray:
        nv = len(self.variables)
        p = build_plan([frag], self.variables, [0])
        cap = 1 << 14
        while True:
            out = np.zeros((cap, 2 * nv), np.int64)
            n = _kernels.match_all(self.w, self.segend, p.syms, p.fstart, p.flen, p.nv,
                                   self.lmin, self.lmax, np.zeros(nv, np.bool_), out)
            if n < cap:
                return out[:n]
            cap *= 4

    def _two_phase(self) -> bool:
        nv = len(self.variables)
        frags = self.formula.fragments
        order = fragment_order(frags, {v: int(c) for v, c in zip(self.variables, self.lmax)})
        seed = max(order, key=lambda j: (len(set(frags[j])), -order.index(j)))
        idx = [self.variables.index(v) for v in sorted(set(frags[seed]))]
        covers = len(idx) == nv
        raw = self.w.tobytes()  # SEP is 0xFF and never occurs inside an image
        rest = [frags[j] for j in order if j != seed]
        seen: set[tuple] = set()
        fixed = np.zeros(nv, np.bool_)
        fixed[idx] = True
        for row in self._seed_rows(frags[seed]):
            imgs = {v: raw[row[v]:row[v] + row[nv + v]] for v in idx}
            key = tuple(imgs[v] for v in idx)
            if key in seen:
                continue
            seen.add(key)
            if covers:
                names = dict(zip(self.variables, (imgs[v] for v in range(nv))))
                if all(b"".join(names[x] for x in fr) in raw for fr in rest):
                    self._vstart[:] = row[:nv]
                    self._vlen[:] = row[nv:]
                    return True
            else:
                vs, vl = row[:nv].copy(), row[nv:].copy()
                if self._run(self.lmin, self.lmax, fixed, vs, vl):
                    self._vstart[:] = vs
                    self._vlen[:] = vl
                    return True
        return False

    def any_witness(self) -> Occurrence | None:
        if not self.exists():
            return None
        return self._decode(self._vstart, self._vlen)

    def _decode(self, vstart, vlen) -> Occurrence:
        alphabet = max((t.alphabet for t in self.texts), key=lambda a: a.size)
        raw = self.w.tobytes()
        return Occurrence({v: Word(raw[s:s + n], alphabet)
                           for v, s, n in zip(self.variables, vstart, vlen)})

    def least_witness(self) -> Occurrence | None:
        """Witness whose images are shortlex-least, variable by variable (A, then B, ...)."""
        if not self.exists():
            return None
        nv = len(self.variables)
        fixed = np.zeros(nv, np.bool_)
        vstart = np.zeros(nv, np.int64)
        vlen = np.zeros(nv, np.int64)
        raw = self.w.tobytes()
        for v in range(nv):
            found = False
            for ln in range(int(self.lmin[v]), int(self.lmax[v]) + 1):
                starts: dict[bytes, int] = {}
                for i in range(len(raw) - ln + 1):
                    if self.segend[i] - i >= ln and self.w[i] != SEP:
                        starts.setdefault(raw[i:i + ln], i)
                for img in sorted(starts):
                    fixed[v] = True
                    vstart[v], vlen[v] = starts[img], ln
                    s2, l2 = vstart.copy(), vlen.copy()
                    if self._run(self.lmin, self.lmax, fixed, s2, l2):
                        found = True
                        break
                if found:
                    break
            if not found:  # pragma: no cover - exists() said otherwise
                raise RuntimeError("witness search lost an occurrence")
        return self._decode(vstart, vlen)


def find_occurrence(w: Word | str, f: Formula | str, canonical: bool = True) -> Occurrence | None:
    """An occurrence of ``f`` in ``w``, or None.

    With ``canonical`` the witness is the shortlex-least assignment taken
    variable by variable in the order A, B, ...; otherwise whichever the
    search meets first.
    """
    w, f = as_word(w), as_formula(f)
    if len(w) < 1:
        raise ValueError("the word must be non-empty")
    m = Matcher(w, f)
    return m.least_witness() if canonical else m.any_witness()


def avoids(w: Word | str, f: Formula | str) -> bool:
    w, f = as_word(w), as_formula(f)
    if len(w) == 0:
        return True
    return not Matcher(w, f).exists()


class StaleContextError(ValueError):
    """An incremental context was used with a word it was not built for."""


@dataclass(frozen=True)
class ExtensionContext:
    """Incremental state for one formula: the word it describes and its plans."""

    word: Word
    formula: Formula

    @classmethod
    def start(cls, w: Word, f: Formula) -> "ExtensionContext":
        return cls(w, f)


def avoids_extension(w: Word | str, a: int, f: Formula | str,
                     context: ExtensionContext | None = None) -> tuple[bool, ExtensionContext]:
    """Whether ``w + a`` avoids ``f``, assuming ``w`` already does.

    Only occurrences whose some fragment image ends at the new last letter
    are searched. The returned context describes ``w + a``.
    """
    w, f = as_word(w), as_formula(f)
    if context is None:
        context = ExtensionContext.start(w, f)
    elif context.word != w or context.formula != f:
        raise StaleContextError("context was built for a different word or formula")
    ext = Word(w.letters + bytes([a]), w.alphabet)
    arr = ext.array()
    table = PlanTable.stack(pinned_plans(f))
    nv = len(f.variables)
    ok = _kernels.extension_ok(
        arr, len(arr), np.full(len(arr), BIG, np.int64), *table.arrays(),
        np.ones(nv, np.int64), np.full(nv, BIG, np.int64), np.zeros(nv, np.bool_),
        np.zeros(nv, np.int64), np.zeros(nv, np.int64),
        np.zeros(0, np.int8), np.zeros(1, np.int64), 0, 0,
        np.zeros(0, np.int8), np.zeros(0, np.int64))
    return bool(ok), ExtensionContext(ext, f)


def _formula_text(f: Formula) -> tuple[list[Word], dict[str, int]]:
    index = {v: i for i, v in enumerate(f.variables)}
    k = max(2, len(index))
    texts = [Word.of([index[v] for v in frag], k) for frag in f.fragments]
    return texts, index


def divisibility_witness(f: Formula | str, f_small: Formula | str) -> dict[str, str] | None:
    """Morphism from the variables of ``f_small`` to words over those of ``f``."""
    f, f_small = as_formula(f), as_formula(f_small)
    if len(f.variables) > 10:
        raise ValueError("formulas with more than 10 variables are not supported")
    texts, index = _formula_text(f)
    back = {i: v for v, i in index.items()}
    occ = Matcher(texts, f_small, caps={v: f.max_fragment_length for v in f_small.variables}).least_witness()
    if occ is None:
        return None
    return {v: "".join(back[a] for a in img.letters) for v, img in occ.assignment.items()}


def is_divisible_by(f: Formula | str, f_small: Formula | str) -> bool:
    """True iff some non-erasing morphism maps every fragment of ``f_small`` into a fragment of ``f``."""
    f, f_small = as_formula(f), as_formula(f_small)
    texts, _ = _formula_text(f)
    return Matcher(texts, f_small, caps={v: f.max_fragment_length for v in f_small.variables}).exists()
