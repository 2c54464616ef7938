"""Built-in binary formulas with their avoidability index and growth label."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .formula import Formula, parse_formula

GROWTH = ("polynomial", "exponential")


@dataclass(frozen=True)
class CatalogEntry:
    formula: Formula
    avoidability_index: int
    growth: str
    source: str

    def __post_init__(self):
        if self.avoidability_index not in (2, 3):
            raise ValueError("catalog entries have avoidability index 2 or 3")
        if self.growth not in GROWTH:
            raise ValueError(f"unknown growth label {self.growth!r}")
        if self.avoidability_index == 3 and self.growth != "exponential":
            raise ValueError("index-3 entries are labelled exponential only")

    def to_json(self) -> dict:
        return {"formula": str(self.formula), "lambda": self.avoidability_index,
                "growth": self.growth, "list": self.source}


@lru_cache(maxsize=1)
def formulas() -> tuple[CatalogEntry, ...]:
    text = (resources.files("patavoid") / "data" / "formulas.txt").read_text()
    out = []
    for line in text.splitlines():
        parts = line.split("#", 1)[0].split()
        if parts:
            f, lam, growth, source = parts
            out.append(CatalogEntry(parse_formula(f), int(lam), growth, source))
    return tuple(out)


def by_source(source: str) -> list[CatalogEntry]:
    return [e for e in formulas() if e.source == source]


# (formula as printed, maximal length, number of avoiding words)
FIGURE1 = (
    ("AAB.BBAA", 22, 1428),
    ("AAB.ABA.ABB.BBA.BAB.BAA", 23, 810),
    ("AAB.BBAB", 23, 1662),
    ("AABA.BAAB", 26, 2124),
    ("AAB.ABBA", 30, 1684),
    ("AAB.BABAA", 42, 71002),
    ("AAB.BABB", 69, 9252),
    ("ABA.ABBA", 90, 31572),
)
