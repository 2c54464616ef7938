"""Certificates that a uniform morphism's sqf-images avoid a formula and large squares.

The square part checks synchronization and a bounded window of periods; the
remaining periods are excluded by the synchronization argument. The formula
part bounds every variable lying in a square by ``t - 1``. For a variable in
no square (the *tough* variable) it also bounds that variable's images,
then either rules out long images by a congruence argument or checks the
repeated fragment against square-free contexts ``a X b X c``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .formula import Formula, as_formula, is_easy, is_self_reverse, reverse_formula, square_factors
from .morphic import (Morphism, MorphismError, adequate_span, is_synchronizing, load_morphism,
                      sqf_images)
from .occurrence import Matcher, validate
from .words import Word, enumerate_square_free, find_square, is_square_free

DEFAULT_X_BOUND = 8

CERTIFIED = "certified"
REFUTED = "refuted"
BOUNDED = "bounded-only"


@dataclass
class Check:
    name: str
    passed: bool
    bound: dict = field(default_factory=dict)
    counterexample: str | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "bound": self.bound}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Certificate:
    morphism: str
    constraints: str
    checks: list[Check]
    verdict: str

    def to_json(self) -> dict:
        return {"morphism": self.morphism, "constraints": self.constraints,
                "verdict": self.verdict, "checks": [c.to_json() for c in self.checks]}

    @property
    def ok(self) -> bool:
        return self.verdict != REFUTED and all(c.passed for c in self.checks)


def _combine(checks: Sequence[Check], tentative: bool = False) -> str:
    if any(not c.passed and c.counterexample is not None for c in checks):
        return REFUTED
    if any(not c.passed for c in checks) or tentative:
        return BOUNDED
    return CERTIFIED


def _uniform_width(g: Morphism) -> int:
    q = g.width
    if q is None:
        raise MorphismError(f"{g.name or 'morphism'} is not uniform")
    if g.domain_size != 3:
        raise MorphismError("certification needs a ternary domain")
    return q


# -- squares ----------------------------------------------------------------

def _square_checks(g: Morphism, t: int) -> list[Check]:
    q = _uniform_width(g)
    checks = []
    sync, bad = is_synchronizing(g)
    checks.append(Check("synchronizing", sync, {"triples": 27},
                        None if sync else str(bad.to_json())))
    hi = 2 * q - 2
    span = adequate_span(g, 2 * hi)
    hit = None
    if t <= hi:
        for img in sqf_images(g, span):
            sq = find_square(img, t, hi)
            if sq is not None:
                hit = str(img[sq.position:sq.position + 2 * sq.period])
                break
    checks.append(Check("squares_window", hit is None,
                        {"periods": [t, hi], "span": span}, hit))
    hit = None
    for abc in enumerate_square_free(3, 3):
        img = g.apply(abc)
        if find_square(img, q, q) is not None:
            hit = str(img)
            break
    checks.append(Check("period_q_in_abc", hit is None, {"period": q}, hit))
    return checks


@lru_cache(maxsize=256)
def _verify_squares_cached(g: Morphism, t: int) -> Certificate:
    checks = _square_checks(g, t)
    return Certificate(g.name, f"SQ_{t}", checks, _combine(checks))


def verify_squares(g: Morphism | str, t: int) -> Certificate:
    """Certify that every sqf-g-image avoids squares of period >= ``t``."""
    if isinstance(g, str):
        g = load_morphism(g)
    if t < 1:
        raise ValueError("t must be >= 1")
    return _verify_squares_cached(g, t)


# -- formulas -----------------------------------------------------------------

def _in_square(f: Formula) -> set[str]:
    covered = set()
    for frag in f.fragments:
        for sq in square_factors(frag):
            covered.update(sq)
    return covered


def _texts_for(g: Morphism, caps: dict[str, int], f: Formula) -> tuple[list[Word], int]:
    longest = max(sum(caps[v] for v in frag) for frag in f.fragments)
    span = adequate_span(g, longest)
    return sqf_images(g, span), span


def _single_text_witness(texts: Sequence[Word], f: Formula, caps, floors) -> str | None:
    for text in texts:
        occ = Matcher(text, f, caps, floors).any_witness()
        if occ is not None and validate(occ, text, f):
            return f"{text} with {occ}"
    return None


def _bounded_check(name: str, g: Morphism, f: Formula, caps: dict[str, int],
                   floors: dict[str, int] | None = None) -> Check:
    texts, span = _texts_for(g, caps, f)
    bound = {"caps": caps, "span": span}
    if floors:
        bound["floors"] = floors
    if not Matcher(texts, f, caps, floors).exists():
        return Check(name, True, bound)
    witness = _single_text_witness(texts, f, caps, floors)
    note = "" if witness else "fragments matched only across different pre-images"
    return Check(name, False, bound, witness, note)


def _pair_constraints(frag: str, tough: str) -> list[tuple[int, int]]:
    """For two occurrences of the tough variable in ``frag``, the counts
    (short, tough) of the variables from the first one up to the second."""
    pos = [i for i, v in enumerate(frag) if v == tough]
    out = []
    for i, j in itertools.combinations(pos, 2):
        between = frag[i:j]
        out.append((len(between) - between.count(tough), between.count(tough)))
    return out


def congruence_discharges(f: Formula, tough: str, q: int, t: int) -> bool:
    """True when no |short| < t and no residue of |tough| mod q satisfy all the
    congruences forced by repeated tough-variable images."""
    cons = [c for frag in f.fragments for c in _pair_constraints(frag, tough)]
    if not cons:
        return False
    for a in range(1, t):
        for r in range(q):
            if all((na * a + nb * r) % q == 0 for na, nb in cons):
                return False
    return True


def _repeat_split(f: Formula, tough: str) -> tuple[str, str, str]:
    frags = [frag for frag in f.fragments if frag.count(tough) >= 2]
    if len(frags) != 1:
        raise MorphismError(f"{f}: {len(frags)} fragments repeat {tough}")
    frag = frags[0]
    for r in range((len(frag) - 1) // 2, 0, -1):
        head, mid = frag[:r], frag[r:len(frag) - r]
        if head == frag[-r:] and tough in head and tough not in mid:
            return frag, head, mid
    raise MorphismError(f"fragment {frag} is not of the form R M R")


def _match_lengths(s: bytes, p: int, frag: str, lens: dict[str, int]) -> dict[str, bytes] | None:
    """Images read off ``s`` at ``p`` when ``frag`` matches there with these lengths."""
    seen: dict[str, bytes] = {}
    for v in frag:
        n = lens[v]
        img = s[p:p + n]
        if len(img) < n or seen.setdefault(v, img) != img:
            return None
        p += n
    return seen


class _ImageFactors:
    """Membership of words in the factor set of sqf-g-images, by length."""

    def __init__(self, g: Morphism):
        self.g = g
        self._texts: dict[int, list[bytes]] = {}

    def __contains__(self, u: bytes) -> bool:
        span = adequate_span(self.g, len(u))
        if span not in self._texts:
            self._texts[span] = [w.letters for w in sqf_images(self.g, span)]
        return any(u in text for text in self._texts[span])


def _contexts(x_len: int, b_max: int = 3):
    """Square-free words ``a? X b X c?`` with ``|X| = x_len``, ``1 <= |b| <= b_max``."""
    for x in enumerate_square_free(3, x_len):
        for bl in range(1, b_max + 1):
            for b in itertools.product(range(3), repeat=bl):
                core = x.letters + bytes(b) + x.letters
                if not is_square_free(Word(core, x.alphabet)):
                    continue
                for a in (None, 0, 1, 2):
                    left = core if a is None else bytes([a]) + core
                    if a is not None and not is_square_free(Word(left, x.alphabet)):
                        continue
                    for c in (None, 0, 1, 2):
                        u = left if c is None else left + bytes([c])
                        if c is not None and not is_square_free(Word(u, x.alphabet)):
                            continue
                        yield u, a is not None, x, bytes(b), a, c


def reduction_check(g: Morphism, f: Formula, tough: str, short: str, t: int,
                    x_bound: int = DEFAULT_X_BOUND) -> Check:
    """Long tough-variable images force the repeated fragment ``R M R`` into a
    context ``a X b X c``; search those contexts up to ``|X| = x_bound``."""
    q = _uniform_width(g)
    frag, head, mid = _repeat_split(f, tough)
    n_short = head.count(short) + mid.count(short)
    n_tough = head.count(tough)
    others = [fr for fr in f.fragments if fr != frag]
    image_factors = _ImageFactors(g)
    images = g.images
    signatures: dict[int, set] = {}
    hits = 0
    example = None
    for x_len in range(1, x_bound + 1):
        sig = signatures.setdefault(x_len, set())
        for u, has_a, x, b, a, c in _contexts(x_len):
            sig.add((a, x.letters[0], x.letters[-1], b, c, x_len % n_tough))
            s = b"".join(images[letter] for letter in u)
            xs = q if has_a else 0
            dist = (x_len + len(b)) * q
            for la in range(1, t):
                rem = dist - n_short * la
                if rem <= 0 or rem % n_tough:
                    continue
                lb = rem // n_tough
                if lb < 2 * q - 1:
                    continue
                lens = {short: la, tough: lb}
                for p in range(max(0, xs - q + 1), xs + 1):
                    h = _match_lengths(s, p, frag, lens)
                    if h is None:
                        continue
                    if all(b"".join(h[v] for v in fr) in image_factors for fr in others):
                        hits += 1
                        if example is None:
                            example = f"{bytes(c + 48 for c in u).decode()} at {p} with {lens}"
    # saturated: the last two lengths bring no context signature not seen earlier
    early = set().union(*(signatures[n] for n in range(2, x_bound - 1)))
    saturated = x_bound >= 5 and all(signatures[n] <= early for n in (x_bound - 1, x_bound))
    bound = {"x_bound": x_bound, "b_max": 3, "fragment": frag}
    note = "signature set saturated" if saturated else "signature set still growing at x_bound"
    if hits:
        return Check("reduction", False, bound, None, f"occurrence through the repeated fragment: {example}")
    chk = Check("reduction", True, bound, None, note)
    chk.bound["saturated"] = saturated
    return chk


def verify_formula(g: Morphism | str, f: Formula | str, t: int, *,
                   x_bound: int = DEFAULT_X_BOUND) -> Certificate:
    """Certify that sqf-g-images avoid ``f`` given that they avoid SQ_t."""
    if isinstance(g, str):
        g = load_morphism(g)
    f = as_formula(f)
    q = _uniform_width(g)
    if len(f.variables) > 2:
        raise MorphismError("only unary and binary formulas are supported")
    covered = _in_square(f)
    if not covered:
        raise MorphismError(f"{f} has no square; not handled")
    if is_easy(f):
        m = t - 1
        checks = [_bounded_check("easy", g, f, {v: m for v in f.variables})]
        return Certificate(g.name, str(f), checks, _combine(checks))
    (tough,) = [v for v in f.variables if v not in covered]
    (short,) = [v for v in f.variables if v in covered]
    if t > q:
        raise MorphismError(f"t={t} exceeds q={q}; tough certification refused")
    checks = [_bounded_check("tough_short", g, f, {short: t - 1, tough: 2 * q - 2})]
    if congruence_discharges(f, tough, q, t):
        checks.append(Check("congruence", True, {"q": q, "t": t}))
        return Certificate(g.name, str(f), checks, _combine(checks))
    checks.append(Check("congruence", False, {"q": q, "t": t}, None,
                        "not discharged; falling back to the reduction"))
    red = reduction_check(g, f, tough, short, t, x_bound)
    checks = [checks[0], red]
    return Certificate(g.name, str(f), checks,
                       _combine(checks, tentative=not red.bound.get("saturated", False)))


# -- claims -------------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    morphism: str
    formula: Formula
    t: int
    reverse: bool


def load_claims() -> list[Claim]:
    text = (resources.files("patavoid") / "data" / "claims.txt").read_text()
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].split()
        if not line:
            continue
        name, f, t, rev = line
        out.append(Claim(name, as_formula(f), int(t), rev == "yes"))
    return out


@dataclass
class ClaimResult:
    claim: Claim
    squares: Certificate
    formulas: list[Certificate]

    @property
    def verdict(self) -> str:
        all_checks = self.squares.checks + [c for cert in self.formulas for c in cert.checks]
        verdicts = [self.squares.verdict] + [c.verdict for c in self.formulas]
        if REFUTED in verdicts:
            return REFUTED
        if BOUNDED in verdicts or not all(c.passed for c in all_checks):
            return BOUNDED
        return CERTIFIED

    def to_json(self) -> dict:
        return {"morphism": self.claim.morphism, "formula": str(self.claim.formula),
                "t": self.claim.t, "reverse": self.claim.reverse, "verdict": self.verdict,
                "squares": self.squares.to_json(),
                "formulas": [c.to_json() for c in self.formulas]}


def verify_claim(g: Morphism | str, f: Formula | str, t: int, reverse: bool = False, *,
                 x_bound: int = DEFAULT_X_BOUND) -> ClaimResult:
    """Squares first; the formula checks rely on SQ_t being avoided."""
    if isinstance(g, str):
        g = load_morphism(g)
    f = as_formula(f)
    sq = verify_squares(g, t)
    targets = [f]
    if reverse and not is_self_reverse(f):
        targets.append(reverse_formula(f))
    certs = [verify_formula(g, h, t, x_bound=x_bound) for h in targets]
    return ClaimResult(Claim(g.name, f, t, reverse), sq, certs)


__all__ = ["Check", "Certificate", "verify_squares", "verify_formula", "verify_claim",
           "load_claims", "congruence_discharges", "reduction_check"]
