"""Backtracking over words avoiding formulas, factors and squares."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from ._kernels import BIG
from .formula import Formula, as_formula
from .occurrence import PlanTable, pinned_plans
from .words import Alphabet, Word, as_word, factors, permute_letters

# Totals count the non-empty avoiding words of every length.
# Checked against the AAB.BBAA row (1428), and it fits all eight rows.
CONVENTION = "nonempty"
DEFAULT_LIMIT = 200
DEFAULT_NODE_BUDGET = 10**9
DEFAULT_SPLIT_DEPTH = 12


class BudgetExhausted(RuntimeError):
    pass


class NotAvoidableError(ValueError):
    """The constraints admit no word of some length below the probe limit."""


@dataclass(frozen=True)
class ConstraintSet:
    """Everything a word has to avoid.

    ``square_floor=t`` forbids squares of period >= t (capped by
    ``square_ceiling`` when given). ``marked_squares`` holds pairs
    ``(letter, p)`` forbidding ``letter·YY`` with ``|Y| >= p``.
    """

    formulas: tuple[Formula, ...] = ()
    forbidden_factors: tuple[Word, ...] = ()
    square_floor: int | None = None
    square_ceiling: int | None = None
    marked_squares: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not (self.formulas or self.forbidden_factors or self.square_floor
                or self.marked_squares):
            raise ValueError("empty constraint set")
        if self.square_floor is not None and self.square_floor < 1:
            raise ValueError("square_floor must be >= 1")
        if any(len(u) == 0 for u in self.forbidden_factors):
            raise ValueError("forbidden factors must be non-empty")

    @classmethod
    def build(cls, formulas: Iterable = (), forbid: Iterable = (), sq: int | None = None,
              sq_max: int | None = None, marked: Iterable[tuple[int, int]] = ()) -> "ConstraintSet":
        return cls(tuple(as_formula(f) for f in formulas),
                   tuple(as_word(u) for u in forbid), sq, sq_max, tuple(marked))

    def describe(self) -> str:
        parts = [str(f) for f in self.formulas]
        parts += [str(u) for u in self.forbidden_factors]
        if self.square_floor:
            hi = f"..{self.square_ceiling}" if self.square_ceiling else ""
            parts.append(f"SQ_{self.square_floor}{hi}")
        parts += [f"{a}YY(|Y|>={p})" for a, p in self.marked_squares]
        return "{" + ", ".join(parts) + "}"

    def letter_symmetric(self, k: int) -> bool:
        """Invariant under every permutation of the k letters."""
        if self.marked_squares:
            return False
        raw = {u.letters for u in self.forbidden_factors}
        if any(max(u, default=0) >= k for u in raw):
            return False
        gens = [tuple([1, 0] + list(range(2, k))), tuple(list(range(1, k)) + [0])]
        for g in gens:
            table = bytes(g) + bytes(256 - k)
            if {u.translate(table) for u in raw} != raw:
                return False
        return True

    def admits(self, w: Word) -> bool:
        """Direct check of a whole word (slow path, used as an oracle)."""
        from .occurrence import avoids
        from .words import find_square
        if any(u.letters in w.letters for u in self.forbidden_factors):
            return False
        if self.square_floor:
            hi = self.square_ceiling or len(w)
            if find_square(w, self.square_floor, hi) is not None:
                return False
        raw = w.letters
        for a, p in self.marked_squares:
            for per in range(p, (len(raw) - 1) // 2 + 1):
                for i in range(1, len(raw) - 2 * per + 1):
                    if raw[i - 1] == a and raw[i:i + per] == raw[i + per:i + 2 * per]:
                        return False
        return all(avoids(w, f) for f in self.formulas) if len(w) else True

    def _compiled(self):
        plans = [p for f in self.formulas for p in pinned_plans(f)]
        table = PlanTable.stack(plans) if plans else PlanTable(
            np.zeros((0, 1), np.int64), np.zeros((0, 1), np.int64), np.zeros((0, 1), np.int64),
            np.zeros(0, np.int64), np.zeros(0, np.int64))
        forb = np.concatenate([u.array() for u in self.forbidden_factors]) \
            if self.forbidden_factors else np.zeros(0, np.int8)
        foff = np.cumsum([0] + [len(u) for u in self.forbidden_factors]).astype(np.int64)
        sqlo = self.square_floor or 0
        sqhi = self.square_ceiling or BIG
        mletter = np.array([a for a, _ in self.marked_squares], np.int8)
        mmin = np.array([p for _, p in self.marked_squares], np.int64)
        return (*table.arrays(), forb, foff, sqlo, sqhi, mletter, mmin)


def as_constraints(c) -> ConstraintSet:
    if isinstance(c, ConstraintSet):
        return c
    if isinstance(c, (Formula, str)):
        return ConstraintSet((as_formula(c),))
    return ConstraintSet.build(formulas=c)


@dataclass
class AvoidanceTable:
    constraints: ConstraintSet
    k: int
    limit: int
    counts: dict[int, int]
    max_length: int | None
    exhausted: bool
    witness_longest: Word
    status: str = "complete"
    nodes: int = 0
    convention: str = CONVENTION

    @property
    def total(self) -> int:
        t = sum(c for n, c in self.counts.items() if n >= 1)
        return t + 1 if self.convention == "with-empty" else t

    def to_json(self) -> dict:
        return {
            "formula": self.constraints.describe(),
            "alphabet": self.k,
            "limit": self.limit,
            "counts": {str(n): c for n, c in sorted(self.counts.items())},
            "max_length": self.max_length,
            "exhausted": self.exhausted,
            "total": self.total,
            "convention": self.convention,
            "status": self.status,
            "nodes": self.nodes,
            "witness_longest": str(self.witness_longest),
        }


def _run(cc, k, limit, prefix, first_fixed, budget, collect_len=0, capacity=1):
    counts = np.zeros(limit + 2, np.int64)
    best = np.zeros(limit + 1, np.int8)
    while True:
        out = np.zeros((capacity, max(collect_len, 1)), np.int8)
        status, nodes, nout, bestlen = _kernels.dfs(
            k, limit, prefix, first_fixed, *cc, budget, counts, best,
            collect_len, out)
        if status != 1:
            return status, nodes, counts, best[:bestlen].copy(), out[:nout]
        capacity = int(nout) * 2
        counts[:] = 0


def enumerate_avoiders(c, k: int = 2, limit: int = DEFAULT_LIMIT, *,
                       node_budget: int = DEFAULT_NODE_BUDGET, threads: int = 1,
                       split_depth: int = DEFAULT_SPLIT_DEPTH,
                       symmetry: bool = True) -> AvoidanceTable:
    """Count the words over ``k`` letters satisfying ``c``, by length, up to ``limit``."""
    c = as_constraints(c)
    if k < 2 or limit < 1:
        raise ValueError("need k >= 2 and limit >= 1")
    cc = c._compiled()
    sym = symmetry and c.letter_symmetric(k)
    mult = k if sym else 1
    empty = np.zeros(0, np.int8)

    if threads <= 1 or split_depth >= limit:
        status, nodes, counts, best, _ = _run(cc, k, limit, empty, sym, node_budget)
    else:
        status, nodes, counts, best, prefixes = _run(
            cc, k, split_depth, empty, sym, node_budget, collect_len=split_depth, capacity=4096)
        counts = np.concatenate([counts, np.zeros(limit - split_depth, np.int64)])
        if status == 0 and len(prefixes):
            remaining = max(node_budget - nodes, 0)

            def job(pref):
                return _run(cc, k, limit, np.ascontiguousarray(pref), sym, remaining)

            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(job, prefixes))
            for st, nd, cnt, bst, _ in results:
                nodes += nd
                counts += cnt
                if st == 2:
                    status = 2
                if len(bst) > len(best) or (len(bst) == len(best) and bst.tobytes() < best.tobytes()):
                    best = bst
            if nodes > node_budget:
                status = 2

    counts = counts * mult
    table = {n: int(counts[n]) for n in range(1, limit + 1) if counts[n] > 0}
    witness = Word(best.tobytes(), Alphabet(k))
    if status == 2:
        return AvoidanceTable(c, k, limit, table, None, False, witness, "budget exhausted", int(nodes))
    top = max(table, default=0)
    exhausted = top < limit
    return AvoidanceTable(c, k, limit, table, top if exhausted else None, exhausted,
                          witness, "complete" if exhausted else "limit reached", int(nodes))


def max_avoiding_length(c, k: int = 2, limit: int = DEFAULT_LIMIT, **kw) -> int | None:
    t = enumerate_avoiders(c, k, limit, **kw)
    if t.status == "budget exhausted":
        raise BudgetExhausted(f"node budget exhausted for {t.constraints.describe()}")
    return t.max_length


def admissible_words(c, k: int, n: int, *, node_budget: int = DEFAULT_NODE_BUDGET) -> list[Word]:
    """All words of length ``n`` satisfying ``c``, in lexicographic order."""
    c = as_constraints(c)
    if n == 0:
        return [Word.of([], k)]
    status, _, _, _, out = _run(c._compiled(), k, n, np.zeros(0, np.int8), False, node_budget,
                                collect_len=n, capacity=1024)
    if status == 2:
        raise BudgetExhausted("node budget exhausted")
    alphabet = Alphabet(k)
    return [Word(row.tobytes(), alphabet) for row in out]


# -- growth ------------------------------------------------------------------

@dataclass
class GrowthVerdict:
    label: str
    counts: list[int]
    ratio: float
    diff_growth: float
    window: int
    thresholds: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"label": self.label, "counts": self.counts, "mean_ratio": self.ratio,
                "diff_growth": self.diff_growth, "window": self.window,
                "thresholds": self.thresholds}


def growth_statistics(counts: Sequence[int], window: int = 10) -> tuple[float, float]:
    """Geometric mean ratio over the last ``window`` steps, and the growth of first differences.

    The second number is mean(last half of differences) / mean(first half),
    with the denominator floored at 1.
    """
    tail = list(counts[-(window + 1):])
    if len(tail) < window + 1 or min(tail) <= 0:
        raise ValueError(f"need {window + 1} positive counts")
    ratio = math.exp(sum(math.log(b / a) for a, b in zip(tail, tail[1:])) / window)
    diffs = [b - a for a, b in zip(tail, tail[1:])]
    h = window // 2
    first = sum(diffs[:h]) / h
    last = sum(diffs[-h:]) / h
    return ratio, last / max(first, 1.0)


def classify_growth(f, k: int = 2, limit: int = 30, *, window: int = 10,
                    ratio_threshold: float = 1.02, diff_bound: float = 2.0,
                    node_budget: int = DEFAULT_NODE_BUDGET) -> GrowthVerdict:
    """Polynomial / exponential / inconclusive label from counts up to ``limit``.

    Polynomial when the first differences stay bounded over the window
    (their late mean is at most ``diff_bound`` times their early mean);
    otherwise exponential when the mean ratio reaches ``ratio_threshold``.
    """
    t = enumerate_avoiders(f, k, limit, node_budget=node_budget)
    if t.status == "budget exhausted":
        raise BudgetExhausted("node budget exhausted")
    if t.exhausted:
        raise NotAvoidableError(f"{t.constraints.describe()} is not avoidable at k={k} "
                                f"(max length {t.max_length})")
    counts = [t.counts[n] for n in range(1, limit + 1)]
    ratio, dg = growth_statistics(counts, window)
    if dg <= diff_bound:
        label = "polynomial"
    elif ratio >= ratio_threshold:
        label = "exponential"
    else:
        label = "inconclusive"
    return GrowthVerdict(label, counts, ratio, dg, window,
                         {"ratio": ratio_threshold, "diff_bound": diff_bound})


# -- extendability and essential avoidance -----------------------------------

def extendable_words(c, k: int, n: int, m: int, *,
                     node_budget: int = DEFAULT_NODE_BUDGET) -> set[Word]:
    """Length-``n`` words ``u`` with some ``x u y`` admissible, ``|x| = |y| = m``."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    words = admissible_words(c, k, n + 2 * m, node_budget=node_budget)
    return {w[m:m + n] for w in words}


@dataclass
class EssentialReport:
    passed: bool
    n: int
    m: int
    generators_admissible: dict[str, bool]
    missing_from_generators: list[str]
    extra_in_generators: list[str]
    extendable_count: int
    generator_factor_count: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def essential_avoidance_check(generators: Sequence, c, n: int = 20, m: int = 20, *,
                              k: int | None = None, probe: int | None = None,
                              node_budget: int = DEFAULT_NODE_BUDGET) -> EssentialReport:
    """Bounded check that ``generators`` essentially avoid ``c``.

    Passes when (a) a long prefix of each generator satisfies ``c`` and (b) the
    length-``n`` words extendable by ``m`` letters on both sides are exactly
    the length-``n`` factors of the generators.
    """
    from .morphic import MorphicWordSpec, stable_factor_set

    c = as_constraints(c)
    specs = [g if isinstance(g, MorphicWordSpec) else MorphicWordSpec.parse(g) for g in generators]
    if k is None:
        k = max(s.codomain_size for s in specs)
    alphabet = Alphabet(k)
    admissible: dict[str, bool] = {}
    union: set[Word] = set()
    for s in specs:
        facs, prefix = stable_factor_set(s, n)
        union |= {Word(u.letters, alphabet) for u in facs}
        probe_len = probe or max(len(prefix), n + 2 * m)
        admissible[s.name] = c.admits(Word(s.prefix(probe_len).letters, alphabet))
    ext = {Word(u.letters, alphabet) for u in extendable_words(c, k, n, m, node_budget=node_budget)}
    missing = sorted(str(u) for u in ext - union)
    extra = sorted(str(u) for u in union - ext)
    ok = all(admissible.values()) and not missing and not extra
    return EssentialReport(ok, n, m, admissible, missing, extra, len(ext), len(union))


def complement_closed(words: Iterable[Word]) -> bool:
    ws = set(words)
    return all(permute_letters(w, (1, 0) + tuple(range(2, w.k))) in ws for w in ws)


__all__ = [
    "CONVENTION", "ConstraintSet", "AvoidanceTable", "GrowthVerdict", "EssentialReport",
    "enumerate_avoiders", "max_avoiding_length", "admissible_words", "classify_growth",
    "growth_statistics", "extendable_words", "essential_avoidance_check", "factors",
]
